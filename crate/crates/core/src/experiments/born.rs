use super::{ensemble, ExperimentReport};
use crate::collapse::{resolve_weight, Branch, CollapseParams, GlobalStream};
use crate::tolerance::SIGMA_BAND;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BornRow {
    pub w0: f64,
    /// Fraction of runs won by the branch of initial weight `w0`.
    pub frequency: f64,
    /// `3 sqrt(w0 (1 - w0) / N)`.
    pub bound: f64,
    pub pass: bool,
}

/// Runs `n_runs` collapses from each initial weight. Row `i`, run `r` draws
/// from substream `(i << 32) | r`.
pub fn born_convergence_experiment(
    weights: &[f64],
    n_runs: u64,
    params: &CollapseParams,
    seed: u64,
) -> Result<Vec<BornRow>> {
    params.validate()?;
    if n_runs == 0 || n_runs > u32::MAX as u64 {
        return Err(Error::Input(format!("run count {n_runs} outside 1..=2^32-1")));
    }
    weights
        .iter()
        .enumerate()
        .map(|(i, &w0)| {
            if !(w0 > 0.0 && w0 < 1.0) {
                return Err(Error::Input(format!("initial weight {w0} outside (0, 1)")));
            }
            let wins = ensemble(n_runs, |r| {
                let mut stream = GlobalStream::substream(seed, ((i as u64) << 32) | r);
                resolve_weight(w0, params, &mut stream, None)
            })?
            .into_iter()
            .filter(|&b| b == Branch::Interacting)
            .count();
            let frequency = wins as f64 / n_runs as f64;
            let bound = SIGMA_BAND * (w0 * (1.0 - w0) / n_runs as f64).sqrt();
            Ok(BornRow { w0, frequency, bound, pass: (frequency - w0).abs() <= bound })
        })
        .collect()
}

pub fn born_report(rows: &[BornRow], seed: u64) -> ExperimentReport {
    let mut r = ExperimentReport::new("born", seed);
    for (i, row) in rows.iter().enumerate() {
        r.set(format!("row{i}.w0"), row.w0);
        r.set(format!("row{i}.frequency"), row.frequency);
        r.set(format!("row{i}.bound"), row.bound);
        r.set(format!("row{i}.pass"), if row.pass { 1.0 } else { 0.0 });
    }
    r.set("all_pass", if rows.iter().all(|r| r.pass) { 1.0 } else { 0.0 });
    r
}
