use nalgebra::DMatrix;

use super::operator::max_entry;
use super::{LinearOperator, Projector, StateVector, C64};
use crate::tolerance::{ACCUMULATED, ALGEBRAIC, NULL_OUTCOME};
use crate::{Error, Result};

/// `<s|P|s>` for a normalized state.
///
/// Values that stray outside `[0, 1]` by no more than the algebraic tolerance
/// are clamped; anything further out means the state was not normalized.
pub fn born_weight(s: &StateVector, p: &Projector) -> Result<f64> {
    let z = p.as_operator().expectation(s)?;
    if z.im.abs() > ALGEBRAIC {
        return Err(Error::Internal(format!("Born weight has imaginary part {:e}", z.im)));
    }
    let w = z.re;
    if !(-ALGEBRAIC..=1.0 + ALGEBRAIC).contains(&w) {
        return Err(Error::Input(format!(
            "Born weight {w} outside [0, 1]; is the state normalized?"
        )));
    }
    Ok(w.clamp(0.0, 1.0))
}

/// `P|s> / ‖P|s>‖`.
pub fn project_and_renormalize(s: &StateVector, p: &Projector) -> Result<StateVector> {
    let projected = p.as_operator().apply(s)?;
    let w = projected.norm_sqr();
    if w <= NULL_OUTCOME {
        return Err(Error::NullOutcome(w));
    }
    Ok(projected.scaled(1.0 / w.sqrt()))
}

/// Reduced density matrix of one subsystem, traced over all others.
pub(crate) fn reduced_density(s: &StateVector, subsystem: usize) -> Result<DMatrix<C64>> {
    let dims = s.dims();
    if subsystem >= dims.len() {
        return Err(Error::Dimension(format!(
            "subsystem {subsystem} out of range for {dims:?}"
        )));
    }
    let d = dims[subsystem];
    let left: usize = dims[..subsystem].iter().product();
    let right: usize = dims[subsystem + 1..].iter().product();
    let a = s.amplitudes();
    let mut rho = DMatrix::<C64>::zeros(d, d);
    for l in 0..left {
        for r in 0..right {
            for i in 0..d {
                let ai = a[(l * d + i) * right + r];
                for j in 0..d {
                    let aj = a[(l * d + j) * right + r];
                    rho[(i, j)] += ai * aj.conj();
                }
            }
        }
    }
    Ok(rho)
}

/// Outcome probabilities of a local projector family on one subsystem.
///
/// `basis` holds operators on that subsystem alone (dims `[d]`) and must sum
/// to the identity.
pub fn marginal_distribution(
    s: &StateVector,
    subsystem: usize,
    basis: &[Projector],
) -> Result<Vec<f64>> {
    let rho = reduced_density(s, subsystem)?;
    let d = rho.nrows();
    let mut sum = DMatrix::<C64>::zeros(d, d);
    for p in basis {
        if p.dims() != [d] {
            return Err(Error::Dimension(format!(
                "basis projector on {:?} for subsystem of dimension {d}",
                p.dims()
            )));
        }
        sum += p.as_operator().matrix();
    }
    let defect = max_entry(&(sum - DMatrix::identity(d, d)));
    if defect > ALGEBRAIC {
        return Err(Error::Completeness(defect));
    }
    let probs: Vec<f64> = basis
        .iter()
        .map(|p| (p.as_operator().matrix() * &rho).trace().re.max(0.0))
        .collect();
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > ACCUMULATED {
        return Err(Error::Input(format!(
            "marginal sums to {total}; is the state normalized?"
        )));
    }
    Ok(probs)
}

/// Operator acting on a single tensor factor.
#[derive(Debug, Clone)]
pub struct LocalOperator {
    pub subsystem: usize,
    pub op: LinearOperator,
}

impl LocalOperator {
    pub fn new(subsystem: usize, op: LinearOperator) -> Self {
        Self { subsystem, op }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorNorm {
    /// Max entry magnitude of the embedded commutator.
    pub value: f64,
    /// Both operators act on the same tensor factor, so no commutation is implied.
    pub same_site: bool,
}

/// Max-entry magnitude of `[A ⊗ I, I ⊗ B]` on the joint space `dims`.
pub fn local_commutator_norm(
    a: &LocalOperator,
    b: &LocalOperator,
    dims: &[usize],
) -> Result<CommutatorNorm> {
    let ea = a.op.embed(a.subsystem, dims)?;
    let eb = b.op.embed(b.subsystem, dims)?;
    Ok(CommutatorNorm {
        value: ea.commutator(&eb)?.max_entry(),
        same_site: a.subsystem == b.subsystem,
    })
}
