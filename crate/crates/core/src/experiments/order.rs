use super::trial::{run_trial, sequential_schedule, ReductionEngine, StatePreparation};
use super::{ensemble, ExperimentReport, Outcome};
use crate::collapse::{reorder_schedule, EventId, GlobalStream};
use crate::tolerance::SIGMA_BAND;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderConfig {
    pub preparation: StatePreparation,
    pub angle_a: f64,
    pub angle_b: f64,
}

impl Default for OrderConfig {
    fn default() -> Self {
        Self {
            preparation: StatePreparation::Singlet,
            angle_a: 0.0,
            angle_b: 0.0,
        }
    }
}

/// Joint outcome counts indexed `++, +-, -+, --`.
pub type JointCounts = [u64; 4];

#[derive(Debug, Clone, PartialEq)]
pub struct OrderInvariance {
    pub tvd: f64,
    /// `3 sqrt(k / N)` for `k = 4` outcome cells.
    pub threshold: f64,
    pub a_first: JointCounts,
    pub b_first: JointCounts,
    pub pass: bool,
}

impl OrderInvariance {
    pub fn report(&self, seed: u64) -> ExperimentReport {
        let mut r = ExperimentReport::new("order-invariance", seed);
        r.set("tvd", self.tvd);
        r.set("threshold", self.threshold);
        r.set("pass", if self.pass { 1.0 } else { 0.0 });
        for (name, counts) in [("a_first", &self.a_first), ("b_first", &self.b_first)] {
            for (cell, c) in ["pp", "pm", "mp", "mm"].iter().zip(counts) {
                r.set(format!("{name}.{cell}"), *c as f64);
            }
        }
        r
    }
}

const CELLS: usize = 4;

fn cell(a: Outcome, b: Outcome) -> usize {
    2 * a.index() + b.index()
}

/// Total variation distance between two count vectors of equal total.
pub fn total_variation(p: &JointCounts, q: &JointCounts) -> f64 {
    let (np, nq) = (p.iter().sum::<u64>() as f64, q.iter().sum::<u64>() as f64);
    0.5 * p.iter().zip(q).map(|(&x, &y)| (x as f64 / np - y as f64 / nq).abs()).sum::<f64>()
}

/// Runs the two-wing experiment `n_runs` times with A reduced first and
/// `n_runs` times with the reductions swapped on the foliation. Run `r` uses
/// substream `r` in both orderings.
pub fn order_invariance_test(
    config: &OrderConfig,
    engine: &dyn ReductionEngine,
    n_runs: u64,
    seed: u64,
) -> Result<OrderInvariance> {
    if n_runs == 0 {
        return Err(Error::InsufficientData("order test needs at least one run".into()));
    }
    let a_first = sequential_schedule(config.preparation, config.angle_a, config.angle_b)?;
    let b_first = reorder_schedule(&a_first, &[EventId(2), EventId(1)])?;
    let tally = |schedule| -> Result<JointCounts> {
        let outcomes = ensemble(n_runs, |r| {
            let mut stream = GlobalStream::substream(seed, r);
            run_trial(schedule, engine, &mut stream)
        })?;
        let mut counts = [0u64; CELLS];
        for (a, b) in outcomes {
            counts[cell(a, b)] += 1;
        }
        Ok(counts)
    };
    let a_counts = tally(&a_first)?;
    let b_counts = tally(&b_first)?;
    let tvd = total_variation(&a_counts, &b_counts);
    let threshold = SIGMA_BAND * (CELLS as f64 / n_runs as f64).sqrt();
    Ok(OrderInvariance {
        tvd,
        threshold,
        a_first: a_counts,
        b_first: b_counts,
        pass: tvd <= threshold,
    })
}
