//! Beam-splitter bookkeeping with discrete momentum labels, in units of the
//! photon momentum. Photon: transmitted `+1`, reflected `-1`. Apparatus
//! recoil: `0` or `+2`. Every branch of the entangled state carries total
//! `+1`, the value before the photon reaches the splitter.

use super::{ensemble, ExperimentReport};
use crate::collapse::{branch_decompose, run_collapse, CollapseParams, GlobalStream};
use crate::quantum::{Projector, StateVector};
use crate::tolerance::{NULL_OUTCOME, SIGMA_BAND};
use crate::{Error, Result};

pub const INITIAL_TOTAL: i64 = 1;
const PHOTON_MOMENTUM: [i64; 2] = [1, -1];
const RECOIL: [i64; 2] = [0, 2];
const REFLECTED: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preparation {
    /// Recoil correlated with the photon path.
    #[default]
    Entangled,
    /// Apparatus left at zero recoil in both branches.
    NonEntangled,
}

impl Preparation {
    fn state(self, reflectivity: f64) -> Result<StateVector> {
        let (t, r) = ((1.0 - reflectivity).sqrt(), reflectivity.sqrt());
        // Basis index = 2 * photon + apparatus.
        let amps = match self {
            Preparation::Entangled => [t, 0.0, 0.0, r],
            Preparation::NonEntangled => [t, 0.0, r, 0.0],
        };
        StateVector::from_real(&[2, 2], &amps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationResult {
    pub preparation: Preparation,
    pub reflectivity: f64,
    /// Total momentum after collapse, one entry per run.
    pub totals: Vec<i64>,
    /// Largest `|total - initial|` over runs.
    pub max_violation: i64,
    pub mean_total: f64,
    pub reflected: u64,
    pub reflected_frequency: f64,
    /// `3 sqrt(R (1 - R) / N)`.
    pub frequency_bound: f64,
}

impl ConservationResult {
    pub fn report(&self, seed: u64) -> ExperimentReport {
        let mut r = ExperimentReport::new("conservation", seed);
        r.set("entangled", if self.preparation == Preparation::Entangled { 1.0 } else { 0.0 });
        r.set("reflectivity", self.reflectivity);
        r.set("runs", self.totals.len() as f64);
        r.set("initial_total", INITIAL_TOTAL as f64);
        r.set("max_violation", self.max_violation as f64);
        r.set("mean_total", self.mean_total);
        r.set("reflected", self.reflected as f64);
        r.set("reflected_frequency", self.reflected_frequency);
        r.set("frequency_bound", self.frequency_bound);
        r
    }
}

/// Total momentum of a state supported on basis states sharing one total.
fn definite_total(s: &StateVector) -> Result<(i64, bool)> {
    let mut found: Option<(i64, bool)> = None;
    for (k, a) in s.amplitudes().iter().enumerate() {
        if a.norm_sqr() <= NULL_OUTCOME {
            continue;
        }
        let (photon, apparatus) = (k / 2, k % 2);
        let here = (PHOTON_MOMENTUM[photon] + RECOIL[apparatus], photon == REFLECTED);
        match found {
            None => found = Some(here),
            Some(prev) if prev == here => {}
            Some(_) => return Err(Error::Internal("collapsed state has no definite momentum".into())),
        }
    }
    found.ok_or_else(|| Error::Internal("collapsed state is empty".into()))
}

pub fn conservation_experiment(
    preparation: Preparation,
    n_runs: u64,
    reflectivity: f64,
    params: &CollapseParams,
    seed: u64,
) -> Result<ConservationResult> {
    if !(0.0..=1.0).contains(&reflectivity) {
        return Err(Error::Input(format!("reflectivity {reflectivity} outside [0, 1]")));
    }
    if n_runs == 0 {
        return Err(Error::InsufficientData("conservation needs at least one run".into()));
    }
    let state = preparation.state(reflectivity)?;
    let photon_reflected = Projector::diagonal(&[2], &[REFLECTED])?.embed(0, &[2, 2])?;
    let pair = branch_decompose(&state, &photon_reflected)?.with_labels("reflected", "transmitted");
    let outcomes = ensemble(n_runs, |r| {
        let mut stream = GlobalStream::substream(seed, r);
        let out = run_collapse(&state, &pair, params, &mut stream)?;
        definite_total(&out.state)
    })?;
    let totals: Vec<i64> = outcomes.iter().map(|o| o.0).collect();
    let reflected = outcomes.iter().filter(|o| o.1).count() as u64;
    let n = n_runs as f64;
    Ok(ConservationResult {
        preparation,
        reflectivity,
        max_violation: totals.iter().map(|t| (t - INITIAL_TOTAL).abs()).max().unwrap_or(0),
        mean_total: totals.iter().sum::<i64>() as f64 / n,
        totals,
        reflected,
        reflected_frequency: reflected as f64 / n,
        frequency_bound: SIGMA_BAND * (reflectivity * (1.0 - reflectivity) / n).sqrt(),
    })
}
