use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{GridHamiltonian, TwoParticleSystem};
use crate::quantum::{LinearOperator, StateVector, C64};
use crate::{Error, Result};

/// Largest joint dimension propagated by exact eigendecomposition.
pub const SPECTRAL_MAX_DIM: usize = 1024;

/// Time-evolution operator factory.
#[derive(Debug, Clone)]
pub enum Propagator {
    /// `exp(-iHt) = U diag(exp(-iEt)) U^†` from a Hermitian eigendecomposition.
    Spectral {
        dims: Vec<usize>,
        vectors: DMatrix<C64>,
        energies: DVector<f64>,
    },
    /// Strang splitting `e^{-iV dt/2} e^{-iT dt} e^{-iV dt/2}`. Each kinetic
    /// factor is exponentiated exactly in the discrete sine basis, which
    /// diagonalizes the fixed-boundary three-point Laplacian.
    SplitStep {
        n: usize,
        sine_basis: DMatrix<f64>,
        kinetic1: Vec<f64>,
        kinetic2: Vec<f64>,
        potential: Vec<f64>,
    },
}

impl Propagator {
    pub fn spectral(h: &LinearOperator) -> Result<Self> {
        let defect = h.hermiticity_defect();
        if defect > crate::tolerance::ALGEBRAIC {
            return Err(Error::Input(format!("Hamiltonian not hermitian ({defect:e})")));
        }
        let eig = SymmetricEigen::new(h.matrix().clone());
        Ok(Self::Spectral {
            dims: h.dims().to_vec(),
            vectors: eig.eigenvectors,
            energies: eig.eigenvalues,
        })
    }

    pub fn split_step(sys: &TwoParticleSystem) -> Self {
        let n = sys.grid.n;
        let dx2 = sys.grid.dx * sys.grid.dx;
        let norm = (2.0 / (n + 1) as f64).sqrt();
        let sine_basis = DMatrix::from_fn(n, n, |j, k| {
            norm * (std::f64::consts::PI * ((j + 1) * (k + 1)) as f64 / (n + 1) as f64).sin()
        });
        let levels = |m: f64| -> Vec<f64> {
            (0..n)
                .map(|k| {
                    let c = (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
                    (1.0 - c) / (m * dx2)
                })
                .collect()
        };
        Self::SplitStep {
            n,
            sine_basis,
            kinetic1: levels(sys.m1),
            kinetic2: levels(sys.m2),
            potential: GridHamiltonian::new(sys).potential_diagonal().to_vec(),
        }
    }

    /// Spectral for joint dimensions up to [`SPECTRAL_MAX_DIM`], split-step beyond.
    pub fn for_system(sys: &TwoParticleSystem) -> Result<Self> {
        if sys.grid.n * sys.grid.n <= SPECTRAL_MAX_DIM {
            Self::spectral(&GridHamiltonian::new(sys).to_dense()?)
        } else {
            Ok(Self::split_step(sys))
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        match self {
            Self::Spectral { dims, .. } => dims.clone(),
            Self::SplitStep { n, .. } => vec![*n, *n],
        }
    }

    pub fn fixed_step(&self, dt: f64) -> Result<FixedStep> {
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::Input(format!("time step must be nonnegative, got {dt}")));
        }
        Ok(match self {
            Self::Spectral {
                dims,
                vectors,
                energies,
            } => {
                let phased = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |i, k| {
                    vectors[(i, k)] * C64::from_polar(1.0, -energies[k] * dt)
                });
                FixedStep::Dense {
                    dims: dims.clone(),
                    evolution: phased * vectors.adjoint(),
                }
            }
            Self::SplitStep {
                n,
                sine_basis,
                kinetic1,
                kinetic2,
                potential,
            } => FixedStep::Split {
                n: *n,
                half_potential: potential
                    .iter()
                    .map(|v| C64::from_polar(1.0, -v * dt / 2.0))
                    .collect(),
                kinetic1: kinetic_factor(sine_basis, kinetic1, dt),
                kinetic2_t: kinetic_factor(sine_basis, kinetic2, dt).transpose(),
            },
        })
    }

    pub fn step(&self, s: &StateVector, dt: f64) -> Result<StateVector> {
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::Input(format!("time step must be nonnegative, got {dt}")));
        }
        if s.dims() != self.dims() {
            return Err(Error::Dimension(format!(
                "state on {:?} for propagator on {:?}",
                s.dims(),
                self.dims()
            )));
        }
        if dt == 0.0 {
            return Ok(s.clone());
        }
        let out = match self {
            Self::Spectral {
                vectors, energies, ..
            } => {
                let mut coeffs = vectors.adjoint() * s.amplitudes();
                for (c, e) in coeffs.iter_mut().zip(energies.iter()) {
                    *c *= C64::from_polar(1.0, -e * dt);
                }
                vectors * coeffs
            }
            Self::SplitStep { .. } => return self.fixed_step(dt)?.apply(s),
        };
        StateVector::new(s.dims(), out.iter().copied().collect())
    }
}

/// A propagator specialized to one time step, for repeated application.
#[derive(Debug, Clone)]
pub enum FixedStep {
    Dense {
        dims: Vec<usize>,
        evolution: DMatrix<C64>,
    },
    Split {
        n: usize,
        half_potential: Vec<C64>,
        kinetic1: DMatrix<C64>,
        kinetic2_t: DMatrix<C64>,
    },
}

impl FixedStep {
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        let out = match self {
            Self::Dense { dims, evolution } => {
                if s.dims() != dims.as_slice() {
                    return Err(Error::Dimension(format!("state on {:?} for {dims:?}", s.dims())));
                }
                evolution * s.amplitudes()
            }
            Self::Split {
                n,
                half_potential,
                kinetic1,
                kinetic2_t,
            } => {
                let n = *n;
                if s.dims() != [n, n] {
                    return Err(Error::Dimension(format!("state on {:?} for [{n}, {n}]", s.dims())));
                }
                // Row i of `psi` is particle-1 index i.
                let psi = DMatrix::from_fn(n, n, |i, j| {
                    s.amplitudes()[i * n + j] * half_potential[i * n + j]
                });
                let psi = kinetic1 * psi * kinetic2_t;
                DVector::from_fn(n * n, |idx, _| psi[(idx / n, idx % n)] * half_potential[idx])
            }
        };
        StateVector::new(s.dims(), out.iter().copied().collect())
    }
}

fn kinetic_factor(sine_basis: &DMatrix<f64>, levels: &[f64], dt: f64) -> DMatrix<C64> {
    let n = levels.len();
    let s = sine_basis.map(|x| C64::new(x, 0.0));
    let phases = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::from_polar(1.0, -levels[i] * dt)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    &s * phases * &s
}

/// One step of `exp(-i h dt)` applied to `s`. Rebuilds the eigendecomposition
/// on every call; hold a [`Propagator`] to evolve repeatedly.
pub fn unitary_step(s: &StateVector, h: &LinearOperator, dt: f64) -> Result<StateVector> {
    h.check_dims(s.dims())?;
    Propagator::spectral(h)?.step(s, dt)
}
