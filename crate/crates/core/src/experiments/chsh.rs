use super::trial::{bell_schedule, run_trial, CollapseEngine, DirectBorn, ReductionEngine};
use super::{chsh_statistic, ensemble, no_signaling_check, ChshValue, CountTable, ExperimentReport, SettingsQuartet};
use crate::collapse::{CollapseParams, GlobalStream};
use crate::Result;

/// Which reduction rule decides the joint outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EngineKind {
    Collapse(CollapseParams),
    /// Direct Born sampling, for comparison against the engine.
    DirectBorn,
}

impl Default for EngineKind {
    fn default() -> Self {
        EngineKind::Collapse(CollapseParams::default())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChshRun {
    pub counts: CountTable,
    pub chsh: ChshValue,
    pub marginal_deviation: f64,
}

impl ChshRun {
    pub fn from_counts(counts: CountTable) -> Result<Self> {
        Ok(Self {
            chsh: chsh_statistic(&counts)?,
            marginal_deviation: no_signaling_check(&counts)?,
            counts,
        })
    }

    pub fn report(&self, experiment: &str, seed: u64) -> ExperimentReport {
        let mut r = ExperimentReport::new(experiment, seed);
        r.set_counts(&self.counts);
        fill_statistics(&mut r, &self.chsh, self.marginal_deviation);
        r
    }
}

/// Writes the statistics derived from a count table. The same routine serves
/// emission and the integrity check on reloaded reports.
pub(crate) fn fill_statistics(r: &mut ExperimentReport, v: &ChshValue, deviation: f64) {
    r.set("S", v.s);
    r.set("S_canonical", v.canonical);
    r.set("S_sigma", v.sigma);
    for ai in 0..2 {
        for bi in 0..2 {
            r.set(format!("E{ai}{bi}"), v.correlators[ai][bi]);
        }
    }
    r.set("marginal_deviation", deviation);
}

/// Singlet trials at each of the four setting pairs, `n_per_pair` each.
/// Run `r` belongs to pair `r / n_per_pair` and draws from substream `r`.
pub fn quantum_chsh_run(
    quartet: &SettingsQuartet,
    n_per_pair: u64,
    engine: &EngineKind,
    seed: u64,
) -> Result<ChshRun> {
    let schedules = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .map(|(ai, bi)| bell_schedule(quartet.a_setting(ai), quartet.b_setting(bi)));
    let schedules = schedules.into_iter().collect::<Result<Vec<_>>>()?;
    let collapse;
    let engine: &dyn ReductionEngine = match engine {
        EngineKind::Collapse(params) => {
            params.validate()?;
            collapse = CollapseEngine { params: *params };
            &collapse
        }
        EngineKind::DirectBorn => &DirectBorn,
    };
    let n = n_per_pair.max(1);
    let outcomes = ensemble(4 * n_per_pair, |r| {
        let pair = (r / n) as usize;
        let mut stream = GlobalStream::substream(seed, r);
        let (a, b) = run_trial(&schedules[pair], engine, &mut stream)?;
        Ok((pair, a, b))
    })?;
    let mut counts = CountTable::new(*quartet);
    for (pair, a, b) in outcomes {
        counts.record(pair / 2, pair % 2, a, b);
    }
    ChshRun::from_counts(counts)
}
