use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::TwoParticleSystem;
use crate::quantum::{LinearOperator, StateVector, C64};
use crate::{Error, Result};

/// Matrix-free form of `H = T1 + T2 + V` with three-point kinetic stencils.
/// Joint index is `i1 * n + i2`.
#[derive(Debug, Clone)]
pub struct GridHamiltonian {
    n: usize,
    c1: f64,
    c2: f64,
    diagonal_potential: Vec<f64>,
}

impl GridHamiltonian {
    pub fn new(sys: &TwoParticleSystem) -> Self {
        let n = sys.grid.n;
        let dx2 = sys.grid.dx * sys.grid.dx;
        let mut diagonal_potential = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                diagonal_potential.push(sys.potential_at(i, j));
            }
        }
        Self {
            n,
            c1: 1.0 / (2.0 * sys.m1 * dx2),
            c2: 1.0 / (2.0 * sys.m2 * dx2),
            diagonal_potential,
        }
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    fn kinetic_into<T>(&self, psi: &[T], out: &mut [T])
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        let n = self.n;
        let at = |i: isize, j: isize| -> Option<T> {
            (i >= 0 && j >= 0 && (i as usize) < n && (j as usize) < n)
                .then(|| psi[i as usize * n + j as usize])
        };
        for i in 0..n {
            for j in 0..n {
                let c = psi[i * n + j];
                let (ii, jj) = (i as isize, j as isize);
                let mut lap1 = c * 2.0;
                let mut lap2 = c * 2.0;
                if let Some(x) = at(ii - 1, jj) {
                    lap1 = lap1 - x;
                }
                if let Some(x) = at(ii + 1, jj) {
                    lap1 = lap1 - x;
                }
                if let Some(x) = at(ii, jj - 1) {
                    lap2 = lap2 - x;
                }
                if let Some(x) = at(ii, jj + 1) {
                    lap2 = lap2 - x;
                }
                out[i * n + j] = lap1 * self.c1 + lap2 * self.c2;
            }
        }
    }

    pub fn apply_kinetic(&self, psi: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        self.kinetic_into(psi, &mut out);
        out
    }

    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let mut out = self.apply_kinetic(psi);
        for ((o, p), v) in out.iter_mut().zip(psi).zip(&self.diagonal_potential) {
            *o += p * v;
        }
        out
    }

    pub fn apply_real(&self, psi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; psi.len()];
        self.kinetic_into(psi, &mut out);
        for ((o, p), v) in out.iter_mut().zip(psi).zip(&self.diagonal_potential) {
            *o += p * v;
        }
        out
    }

    pub fn potential_diagonal(&self) -> &[f64] {
        &self.diagonal_potential
    }

    /// `<psi|H|psi>`, real part.
    pub fn expectation(&self, s: &StateVector) -> Result<f64> {
        self.check(s)?;
        let a = s.amplitudes().as_slice();
        let h = self.apply(a);
        Ok(a.iter().zip(&h).map(|(x, y)| (x.conj() * y).re).sum())
    }

    fn check(&self, s: &StateVector) -> Result<()> {
        if s.dims() != [self.n, self.n] {
            return Err(Error::Dimension(format!(
                "state on {:?} for a {n}x{n} grid",
                s.dims(),
                n = self.n
            )));
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Result<LinearOperator> {
        let dim = self.dim();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        let mut e = vec![0.0; dim];
        for col in 0..dim {
            e[col] = 1.0;
            for (row, v) in self.apply_real(&e).into_iter().enumerate() {
                if v != 0.0 {
                    m[(row, col)] = C64::new(v, 0.0);
                }
            }
            e[col] = 0.0;
        }
        LinearOperator::hermitian(&[self.n, self.n], m)
    }
}

/// Dense `H = T1 + T2 + V` on the joint grid.
pub fn build_hamiltonian(sys: &TwoParticleSystem) -> Result<LinearOperator> {
    GridHamiltonian::new(sys).to_dense()
}

/// Smallest eigenvalue by Lanczos with full reorthogonalization.
pub fn lowest_eigenvalue(h: &GridHamiltonian, iterations: usize) -> f64 {
    let dim = h.dim();
    let m = iterations.min(dim).max(1);
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(m);
    let mut alpha = Vec::with_capacity(m);
    let mut beta: Vec<f64> = Vec::with_capacity(m);
    let mut v = DVector::from_fn(dim, |i, _| 1.0 + 0.25 * (i as f64 * 0.7).sin());
    v /= v.norm();
    for k in 0..m {
        let mut w = DVector::from_vec(h.apply_real(v.as_slice()));
        let a = v.dot(&w);
        alpha.push(a);
        basis.push(v.clone());
        for q in &basis {
            let c = q.dot(&w);
            w -= q * c;
        }
        let b = w.norm();
        if k + 1 == m || b < 1e-12 {
            break;
        }
        beta.push(b);
        v = w / b;
    }
    let size = alpha.len();
    let t = DMatrix::from_fn(size, size, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    SymmetricEigen::new(t).eigenvalues.min()
}

fn check_dims(s: &StateVector, sys: &TwoParticleSystem) -> Result<()> {
    if s.dims() != sys.dims() {
        return Err(Error::Dimension(format!(
            "state on {:?} for system grid {:?}",
            s.dims(),
            sys.dims()
        )));
    }
    Ok(())
}

/// `<V>` for a normalized state.
pub fn interaction_expectation(s: &StateVector, sys: &TwoParticleSystem) -> Result<f64> {
    check_dims(s, sys)?;
    let n = sys.grid.n;
    let a = s.amplitudes();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += a[i * n + j].norm_sqr() * sys.potential_at(i, j);
        }
    }
    Ok(total)
}

/// `<T1 + T2>` for a normalized state.
pub fn kinetic_expectation(s: &StateVector, sys: &TwoParticleSystem) -> Result<f64> {
    check_dims(s, sys)?;
    let h = GridHamiltonian::new(sys);
    let a = s.amplitudes().as_slice();
    let t = h.apply_kinetic(a);
    Ok(a.iter().zip(&t).map(|(x, y)| (x.conj() * y).re).sum())
}

/// `(<p1>, <p2>)` from central differences.
pub fn momentum_expectation(s: &StateVector, sys: &TwoParticleSystem) -> Result<(f64, f64)> {
    check_dims(s, sys)?;
    let n = sys.grid.n;
    let a = s.amplitudes();
    let get = |i: usize, j: usize| a[i * n + j];
    let zero = C64::new(0.0, 0.0);
    let (mut p1, mut p2) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let c = get(i, j).conj();
            let d1 = if i + 1 < n { get(i + 1, j) } else { zero } - if i > 0 { get(i - 1, j) } else { zero };
            let d2 = if j + 1 < n { get(i, j + 1) } else { zero } - if j > 0 { get(i, j - 1) } else { zero };
            // p = -i d/dx
            p1 += (c * d1 * C64::new(0.0, -1.0)).re;
            p2 += (c * d2 * C64::new(0.0, -1.0)).re;
        }
    }
    let scale = 1.0 / (2.0 * sys.grid.dx);
    Ok((p1 * scale, p2 * scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::GridSpec;
    use std::f64::consts::PI;

    fn free(n: usize, dx: f64, m: f64) -> TwoParticleSystem {
        TwoParticleSystem::with_potential_fn(m, m, GridSpec::new(n, dx).unwrap(), |_| 0.0, 0.0, 0.0)
            .unwrap()
    }

    #[test]
    fn dense_is_hermitian() {
        let sys = TwoParticleSystem::with_potential_fn(
            1.0,
            3.0,
            GridSpec::new(10, 0.3).unwrap(),
            |d| (-d).exp(),
            0.0,
            0.0,
        )
        .unwrap();
        let h = build_hamiltonian(&sys).unwrap();
        assert!(h.is_hermitian());
        assert!(h.hermiticity_defect() <= 1e-12);
    }

    #[test]
    fn free_box_ground_energy() {
        // Two free particles: lowest level is twice the single-particle box
        // energy pi^2 / (2 m L^2).
        let (n, dx, m) = (64, 0.1, 1.0);
        let sys = free(n, dx, m);
        let l = sys.grid.length();
        let analytic = 2.0 * PI * PI / (2.0 * m * l * l);
        let e0 = lowest_eigenvalue(&GridHamiltonian::new(&sys), 120);
        assert!(((e0 - analytic) / analytic).abs() < 0.02, "{e0} vs {analytic}");
    }

    #[test]
    fn harmonic_relative_ground_energy() {
        // Narrow relative oscillator inside a wide box: E0 ~ box COM energy
        // pi^2 / (2 M L^2) + sqrt(k / mu) / 2.
        let (n, dx, m, k) = (64, 1.0, 1.0, 0.0032);
        let sys = TwoParticleSystem::with_potential_fn(
            m,
            m,
            GridSpec::new(n, dx).unwrap(),
            |d| 0.5 * k * d * d,
            0.0,
            0.0,
        )
        .unwrap();
        let mu = sys.reduced_mass();
        let l = sys.grid.length();
        let e0 = lowest_eigenvalue(&GridHamiltonian::new(&sys), 300);
        let com = PI * PI / (2.0 * sys.total_mass() * l * l);
        let relative = e0 - com;
        let analytic = 0.5 * (k / mu).sqrt();
        assert!(((relative - analytic) / analytic).abs() < 0.02, "{relative} vs {analytic}");
    }

    #[test]
    fn matrix_free_matches_dense() {
        let sys = TwoParticleSystem::with_potential_fn(
            1.0,
            2.0,
            GridSpec::new(8, 0.5).unwrap(),
            |d| d.cos(),
            0.0,
            0.0,
        )
        .unwrap();
        let h = GridHamiltonian::new(&sys);
        let dense = h.to_dense().unwrap();
        let psi: Vec<C64> = (0..64).map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let s = StateVector::new(&[8, 8], psi.clone()).unwrap();
        let a = h.apply(&psi);
        let b = dense.apply(&s).unwrap();
        for (x, y) in a.iter().zip(b.amplitudes().iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn delta_state_sees_its_separation() {
        let sys = TwoParticleSystem::with_potential_fn(
            1.0,
            1.0,
            GridSpec::new(16, 0.5).unwrap(),
            |d| 3.0 / (1.0 + d),
            0.0,
            0.0,
        )
        .unwrap();
        let s = StateVector::basis(&[16, 16], 2 * 16 + 7).unwrap();
        let v = interaction_expectation(&s, &sys).unwrap();
        assert!((v - 3.0 / (1.0 + 2.5)).abs() < 1e-15);
    }

    #[test]
    fn separated_packets_do_not_interact() {
        let sys = TwoParticleSystem::with_potential_fn(
            1.0,
            1.0,
            GridSpec::new(64, 1.0).unwrap(),
            |d| 5.0 * (-(d * d) / 2.0).exp(),
            0.0,
            0.0,
        )
        .unwrap();
        let s = crate::dynamics::wave_packet_pair(&sys, (10.0, 0.0, 2.0), (54.0, 0.0, 2.0)).unwrap();
        let v = interaction_expectation(&s, &sys).unwrap();
        assert!(v.abs() < 1e-6 * 5.0, "{v}");
    }

    #[test]
    fn overlapping_packets_match_quadrature() {
        // Oracle: <V> as ⟨ψ|diag(V)|ψ⟩ through the dense quantum-core operator.
        let sys = TwoParticleSystem::with_potential_fn(
            1.0,
            1.0,
            GridSpec::new(24, 0.5).unwrap(),
            |d| 0.5 * 0.8 * d * d,
            0.0,
            0.0,
        )
        .unwrap();
        let s = crate::dynamics::wave_packet_pair(&sys, (5.0, 0.4, 1.5), (7.0, -0.2, 1.0)).unwrap();
        let n = 24;
        let diag = DMatrix::from_fn(n * n, n * n, |r, c| {
            if r == c {
                C64::new(sys.potential_at(r / n, r % n), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let op = LinearOperator::new(&[n, n], diag).unwrap();
        let oracle = op.expectation(&s).unwrap().re;
        let v = interaction_expectation(&s, &sys).unwrap();
        assert!((v - oracle).abs() < 1e-10);
    }

    #[test]
    fn dims_mismatch() {
        let sys = free(8, 1.0, 1.0);
        let s = StateVector::basis(&[4, 4], 0).unwrap();
        assert!(matches!(interaction_expectation(&s, &sys), Err(Error::Dimension(_))));
    }
}
