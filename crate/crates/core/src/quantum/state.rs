use nalgebra::DVector;

use super::{total_dim, C64};
use crate::tolerance::{ALGEBRAIC, NORMALIZE_FLOOR};
use crate::{Error, Result};

/// Complex amplitude vector over a tensor-product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(dims: &[usize], amplitudes: Vec<C64>) -> Result<Self> {
        let n = total_dim(dims)?;
        if amplitudes.len() != n {
            return Err(Error::Dimension(format!(
                "dims {dims:?} need {n} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Input("amplitudes must be finite".into()));
        }
        Ok(Self {
            dims: dims.to_vec(),
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    pub fn from_real(dims: &[usize], amplitudes: &[f64]) -> Result<Self> {
        Self::new(dims, amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Basis state with a single unit amplitude at joint `index`.
    pub fn basis(dims: &[usize], index: usize) -> Result<Self> {
        let n = total_dim(dims)?;
        if index >= n {
            return Err(Error::Dimension(format!("basis index {index} out of range {n}")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); n];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self::new(dims, amplitudes)
    }

    pub(crate) fn from_parts(dims: Vec<usize>, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), amplitudes.len());
        Self { dims, amplitudes }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= ALGEBRAIC
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!(
                "inner product of {:?} with {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Squared magnitude of each amplitude.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn normalize(&self) -> Result<Self> {
        normalize(self)
    }

    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        tensor_product(self, other)
    }

    pub(crate) fn scaled(&self, factor: f64) -> Self {
        Self::from_parts(self.dims.clone(), self.amplitudes.map(|a| a * factor))
    }
}

pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Dimension("tensor product of an empty state".into()));
    }
    let mut amplitudes = Vec::with_capacity(a.len() * b.len());
    for x in a.amplitudes.iter() {
        for y in b.amplitudes.iter() {
            amplitudes.push(x * y);
        }
    }
    let dims = a.dims.iter().chain(&b.dims).copied().collect();
    Ok(StateVector::from_parts(dims, DVector::from_vec(amplitudes)))
}

pub fn normalize(s: &StateVector) -> Result<StateVector> {
    let n2 = s.norm_sqr();
    if !(n2 > NORMALIZE_FLOOR) {
        return Err(Error::Normalization(n2));
    }
    Ok(s.scaled(1.0 / n2.sqrt()))
}

/// Two-qubit singlet `(|01> - |10>)/sqrt(2)` on dims `[2, 2]`.
pub fn singlet() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_real(&[2, 2], &[0.0, h, -h, 0.0]).expect("static shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_tensor_lands_on_joint_index() {
        let zero = StateVector::basis(&[2], 0).unwrap();
        let one = StateVector::basis(&[2], 1).unwrap();
        let joint = tensor_product(&zero, &one).unwrap();
        assert_eq!(joint.dims(), &[2, 2]);
        let p = joint.probabilities();
        assert_eq!(p, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn tensor_dims_concatenate() {
        let a = StateVector::basis(&[2], 0).unwrap();
        let b = StateVector::basis(&[3], 2).unwrap();
        let ab = tensor_product(&a, &b).unwrap();
        assert_eq!(ab.dims(), &[2, 3]);
        assert_eq!(ab.len(), 6);
        assert_eq!(ab.probabilities()[2], 1.0);
    }

    #[test]
    fn unit_norms_multiply() {
        let a = StateVector::new(&[2], vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let b = StateVector::from_real(&[3], &[1.0, 2.0, 2.0]).unwrap().normalize().unwrap();
        let ab = tensor_product(&a, &b).unwrap();
        assert!((ab.norm_sqr() - 1.0).abs() <= ALGEBRAIC);
    }

    #[test]
    fn empty_dims_rejected() {
        assert!(matches!(StateVector::new(&[], vec![]), Err(Error::Dimension(_))));
        assert!(matches!(StateVector::new(&[0], vec![]), Err(Error::Dimension(_))));
        assert!(StateVector::new(&[2], vec![C64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn normalize_cases() {
        let s = StateVector::from_real(&[2], &[2.0, 0.0]).unwrap().normalize().unwrap();
        assert_eq!(s.probabilities(), vec![1.0, 0.0]);

        let already = singlet();
        let again = already.normalize().unwrap();
        for (x, y) in already.amplitudes().iter().zip(again.amplitudes().iter()) {
            assert!((x - y).norm() <= ALGEBRAIC);
        }

        let zero = StateVector::from_real(&[3], &[0.0; 3]).unwrap();
        assert!(matches!(zero.normalize(), Err(Error::Normalization(_))));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            StateVector::from_real(&[2], &[f64::NAN, 0.0]),
            Err(Error::Input(_))
        ));
    }
}
