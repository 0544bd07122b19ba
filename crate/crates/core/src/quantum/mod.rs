//! Finite-dimensional state and operator algebra.
//!
//! Joint basis indices are zero-based and row-major over `dims`: for dims
//! `[d0, d1, ..., dk]` the basis state `|i0 i1 ... ik>` sits at
//! `((i0 * d1 + i1) * d2 + i2) ...`. Subsystem 0 is the most significant
//! digit.

mod measurement;
mod operator;
mod state;

pub use measurement::{
    born_weight, local_commutator_norm, marginal_distribution, project_and_renormalize,
    CommutatorNorm, LocalOperator,
};
pub use operator::{pauli_x, pauli_y, pauli_z, spin_projectors, LinearOperator, Projector};
pub use state::{normalize, singlet, tensor_product, StateVector};

pub use num_complex::Complex64 as C64;

/// Product of subsystem dimensions, or an error if any factor is zero or
/// the list is empty.
pub(crate) fn total_dim(dims: &[usize]) -> crate::Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(crate::Error::Dimension(format!(
            "subsystem dimensions must be nonempty and positive, got {dims:?}"
        )));
    }
    Ok(dims.iter().product())
}
