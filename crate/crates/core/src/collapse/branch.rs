use crate::quantum::{born_weight, Projector, StateVector};
use crate::tolerance::ALGEBRAIC;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Interacting,
    Noninteracting,
}

/// Orthogonal split of a state into the branch touched by an interaction
/// and the rest. Frozen at decomposition time.
#[derive(Debug, Clone)]
pub struct BranchPair {
    pub interacting_label: String,
    pub noninteracting_label: String,
    interacting: Projector,
    noninteracting: Projector,
    w: f64,
}

impl BranchPair {
    /// Born weight of the interacting branch at decomposition time.
    pub fn weight(&self) -> f64 {
        self.w
    }

    pub fn projector(&self, branch: Branch) -> &Projector {
        match branch {
            Branch::Interacting => &self.interacting,
            Branch::Noninteracting => &self.noninteracting,
        }
    }

    pub fn label(&self, branch: Branch) -> &str {
        match branch {
            Branch::Interacting => &self.interacting_label,
            Branch::Noninteracting => &self.noninteracting_label,
        }
    }

    /// True when the interacting projector is the identity: nothing to decide.
    pub fn is_single_branch(&self) -> bool {
        self.noninteracting.as_operator().max_entry() <= ALGEBRAIC
    }

    pub fn with_labels(mut self, interacting: &str, noninteracting: &str) -> Self {
        self.interacting_label = interacting.to_string();
        self.noninteracting_label = noninteracting.to_string();
        self
    }

    /// The state after amplitude has been transferred until the interacting
    /// branch carries weight `w`; relative phases inside each branch are kept.
    pub fn state_at(&self, s: &StateVector, w: f64) -> Result<StateVector> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Input(format!("branch weight {w} outside [0, 1]")));
        }
        let a = self.interacting.as_operator().apply(s)?;
        let b = self.noninteracting.as_operator().apply(s)?;
        let scale = |target: f64, current: f64| {
            if current > 0.0 {
                (target / current).sqrt()
            } else {
                0.0
            }
        };
        let (fa, fb) = (scale(w, self.w), scale(1.0 - w, 1.0 - self.w));
        let amps = a.amplitudes().map(|z| z * fa) + b.amplitudes().map(|z| z * fb);
        StateVector::new(s.dims(), amps.iter().copied().collect())
    }
}

/// Non-idempotent projectors are rejected when the [`Projector`] is built.
pub fn branch_decompose(s: &StateVector, interacting: &Projector) -> Result<BranchPair> {
    let w = born_weight(s, interacting)?;
    Ok(BranchPair {
        interacting_label: "interacting".into(),
        noninteracting_label: "noninteracting".into(),
        noninteracting: interacting.complement(),
        interacting: interacting.clone(),
        w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{singlet, C64};

    #[test]
    fn identity_is_single_branch() {
        let s = singlet();
        let pair = branch_decompose(&s, &Projector::identity(&[2, 2]).unwrap()).unwrap();
        assert_eq!(pair.weight(), 1.0);
        assert!(pair.is_single_branch());
    }

    #[test]
    fn singlet_z_up_half() {
        let p = Projector::diagonal(&[2], &[0]).unwrap().embed(0, &[2, 2]).unwrap();
        let pair = branch_decompose(&singlet(), &p).unwrap();
        assert!((pair.weight() - 0.5).abs() < ALGEBRAIC);
        let overlap = pair
            .projector(Branch::Interacting)
            .overlap(pair.projector(Branch::Noninteracting))
            .unwrap();
        assert!(overlap <= ALGEBRAIC);
    }

    #[test]
    fn weight_matches_born_weight_on_random_states() {
        let mut g = crate::collapse::GlobalStream::new(99);
        for _ in 0..50 {
            let amps: Vec<C64> = (0..6)
                .map(|_| C64::new(g.draw_uniform() - 0.5, g.draw_uniform() - 0.5))
                .collect();
            let s = StateVector::new(&[2, 3], amps).unwrap().normalize().unwrap();
            let p = Projector::diagonal(&[2, 3], &[0, 4, 5]).unwrap();
            let pair = branch_decompose(&s, &p).unwrap();
            assert!((pair.weight() - born_weight(&s, &p).unwrap()).abs() <= ALGEBRAIC);
        }
    }

    #[test]
    fn state_at_moves_weight() {
        let p = Projector::diagonal(&[2], &[0]).unwrap();
        let s = StateVector::from_real(&[2], &[0.6, 0.8]).unwrap();
        let pair = branch_decompose(&s, &p).unwrap();
        let moved = pair.state_at(&s, 0.5).unwrap();
        assert!((born_weight(&moved, &p).unwrap() - 0.5).abs() < ALGEBRAIC);
        assert!((moved.norm_sqr() - 1.0).abs() < ALGEBRAIC);
    }
}
