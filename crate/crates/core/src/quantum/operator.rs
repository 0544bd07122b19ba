use nalgebra::{DMatrix, DVector};

use super::{total_dim, StateVector, C64};
use crate::tolerance::ALGEBRAIC;
use crate::{Error, Result};

/// Dense complex operator on the joint space of `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    dims: Vec<usize>,
    matrix: DMatrix<C64>,
    hermitian: bool,
}

impl LinearOperator {
    pub fn new(dims: &[usize], matrix: DMatrix<C64>) -> Result<Self> {
        let n = total_dim(dims)?;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "dims {dims:?} need a {n}x{n} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Input("operator entries must be finite".into()));
        }
        Ok(Self {
            dims: dims.to_vec(),
            matrix,
            hermitian: false,
        })
    }

    /// Builds an operator and asserts hermiticity within the algebraic tolerance.
    pub fn hermitian(dims: &[usize], matrix: DMatrix<C64>) -> Result<Self> {
        let mut op = Self::new(dims, matrix)?;
        let defect = op.hermiticity_defect();
        if defect > ALGEBRAIC {
            return Err(Error::Input(format!(
                "operator claimed hermitian but max|M - M^dag| = {defect:e}"
            )));
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn from_real(dims: &[usize], rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            C64::new(rows[i].get(j).copied().unwrap_or(f64::NAN), 0.0)
        });
        Self::new(dims, matrix)
    }

    pub fn identity(dims: &[usize]) -> Result<Self> {
        let n = total_dim(dims)?;
        Ok(Self {
            dims: dims.to_vec(),
            matrix: DMatrix::identity(n, n),
            hermitian: true,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn hermiticity_defect(&self) -> f64 {
        max_entry(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Embeds a single-subsystem operator as `I ⊗ .. ⊗ self ⊗ .. ⊗ I`.
    pub fn embed(&self, subsystem: usize, dims: &[usize]) -> Result<Self> {
        total_dim(dims)?;
        if subsystem >= dims.len() || self.dims != [dims[subsystem]] {
            return Err(Error::Dimension(format!(
                "cannot embed operator on {:?} at subsystem {subsystem} of {dims:?}",
                self.dims
            )));
        }
        let left: usize = dims[..subsystem].iter().product();
        let right: usize = dims[subsystem + 1..].iter().product();
        let matrix = DMatrix::<C64>::identity(left, left)
            .kronecker(&self.matrix)
            .kronecker(&DMatrix::<C64>::identity(right, right));
        Ok(Self {
            dims: dims.to_vec(),
            matrix,
            hermitian: self.hermitian,
        })
    }

    /// `M |s>`, unnormalized.
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        self.check_dims(s.dims())?;
        let out: DVector<C64> = &self.matrix * s.amplitudes();
        Ok(StateVector::from_parts(self.dims.clone(), out))
    }

    /// `<s|M|s>`.
    pub fn expectation(&self, s: &StateVector) -> Result<C64> {
        self.check_dims(s.dims())?;
        Ok(s.amplitudes().dotc(&(&self.matrix * s.amplitudes())))
    }

    pub fn compose(&self, other: &LinearOperator) -> Result<Self> {
        self.check_dims(&other.dims)?;
        Ok(Self {
            dims: self.dims.clone(),
            matrix: &self.matrix * &other.matrix,
            hermitian: false,
        })
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &LinearOperator) -> Result<Self> {
        self.check_dims(&other.dims)?;
        Ok(Self {
            dims: self.dims.clone(),
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
            hermitian: false,
        })
    }

    pub fn max_entry(&self) -> f64 {
        max_entry(&self.matrix)
    }

    pub(crate) fn check_dims(&self, dims: &[usize]) -> Result<()> {
        if self.dims != dims {
            return Err(Error::Dimension(format!(
                "operator on {:?} applied to {dims:?}",
                self.dims
            )));
        }
        Ok(())
    }
}

pub(crate) fn max_entry(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian idempotent operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector(LinearOperator);

impl Projector {
    pub fn new(op: LinearOperator) -> Result<Self> {
        let defect = op.hermiticity_defect();
        if defect > ALGEBRAIC {
            return Err(Error::Input(format!("projector not hermitian ({defect:e})")));
        }
        let idem = max_entry(&(op.matrix() * op.matrix() - op.matrix()));
        if idem > ALGEBRAIC {
            return Err(Error::Input(format!("projector not idempotent ({idem:e})")));
        }
        Ok(Self(LinearOperator {
            hermitian: true,
            ..op
        }))
    }

    /// `|v><v|` for the normalized direction of `v`.
    pub fn rank_one(v: &StateVector) -> Result<Self> {
        let v = v.normalize()?;
        let a = v.amplitudes();
        let matrix = a * a.adjoint();
        Self::new(LinearOperator::new(v.dims(), matrix)?)
    }

    /// Projector onto the joint basis states listed in `indices`.
    pub fn diagonal(dims: &[usize], indices: &[usize]) -> Result<Self> {
        let n = total_dim(dims)?;
        let mut m = DMatrix::<C64>::zeros(n, n);
        for &i in indices {
            if i >= n {
                return Err(Error::Dimension(format!("basis index {i} out of range {n}")));
            }
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        Self::new(LinearOperator::new(dims, m)?)
    }

    pub fn identity(dims: &[usize]) -> Result<Self> {
        Ok(Self(LinearOperator::identity(dims)?))
    }

    /// `I − P`.
    pub fn complement(&self) -> Self {
        let n = self.0.matrix.nrows();
        Self(LinearOperator {
            dims: self.0.dims.clone(),
            matrix: DMatrix::identity(n, n) - &self.0.matrix,
            hermitian: true,
        })
    }

    pub fn embed(&self, subsystem: usize, dims: &[usize]) -> Result<Self> {
        Ok(Self(self.0.embed(subsystem, dims)?))
    }

    /// `P ⊗ Q` on the concatenated dims.
    pub fn tensor(&self, other: &Projector) -> Self {
        Self(LinearOperator {
            dims: self.0.dims.iter().chain(&other.0.dims).copied().collect(),
            matrix: self.0.matrix.kronecker(&other.0.matrix),
            hermitian: true,
        })
    }

    /// Max entry of `P·Q`; zero for orthogonal projectors.
    pub fn overlap(&self, other: &Projector) -> Result<f64> {
        Ok(self.0.compose(&other.0)?.max_entry())
    }

    pub fn dims(&self) -> &[usize] {
        self.0.dims()
    }

    pub fn as_operator(&self) -> &LinearOperator {
        &self.0
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> LinearOperator {
    let m = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    LinearOperator::hermitian(&[2], m).expect("static")
}

pub fn pauli_y() -> LinearOperator {
    let m = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    LinearOperator::hermitian(&[2], m).expect("static")
}

pub fn pauli_z() -> LinearOperator {
    let m = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    LinearOperator::hermitian(&[2], m).expect("static")
}

/// Outcome projectors `[P+, P-]` for spin along `(sin θ, 0, cos θ)` on one qubit.
pub fn spin_projectors(theta: f64) -> [Projector; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let up = StateVector::from_real(&[2], &[c, s]).expect("static");
    let down = StateVector::from_real(&[2], &[-s, c]).expect("static");
    [
        Projector::rank_one(&up).expect("unit vector"),
        Projector::rank_one(&down).expect("unit vector"),
    ]
}
