use super::config::RunConfig;
use crate::collapse::{physical_walk, resolve_weight, GlobalStream};
use crate::dynamics::{
    shift_magnitudes, simulate_scattering, simulate_scattering_with_table, PotentialTable, ScatteringConfig,
    ShiftMode,
};
use crate::experiments::{
    born_convergence_experiment, born_report, chsh_statistic, conservation_experiment, ensemble, lhv_run,
    order_invariance_test, quantum_chsh_run, randomized_models, BeamSplitterPreparation, BiasedSecondReduction,
    CollapseEngine, ConstantModel, CountTable, EngineKind, ExperimentReport, FairCoinModel, OrderConfig,
    ReductionEngine, SignCosineModel, StatePreparation,
};
use crate::tolerance::SIGMA_BAND;
use crate::{Error, Result};

/// Runs the configured experiment. Identical configs give identical reports
/// regardless of the worker count.
pub fn dispatch(config: &RunConfig) -> Result<ExperimentReport> {
    let seed = config.seed();
    let runs = config.runs();
    let params = config.collapse_params()?;
    let mut report = match config.experiment() {
        "born" => born_report(&born_convergence_experiment(&config.born_weights(), runs, &params, seed)?, seed),
        name @ ("chsh-quantum" | "nosignal") => {
            let engine = match config.str("chsh.engine") {
                "born" => EngineKind::DirectBorn,
                _ => EngineKind::Collapse(params),
            };
            let run = quantum_chsh_run(&config.quartet()?, runs, &engine, seed)?;
            let mut r = run.report(name, seed);
            // 3σ bound on one marginal difference between two independent
            // groups of `runs` trials with p = 1/2.
            r.set("marginal_bound", SIGMA_BAND * (0.5 / runs as f64).sqrt());
            r
        }
        "chsh-lhv" => lhv_report(config)?,
        "order-invariance" => {
            let preparation = match config.str("order.preparation") {
                "product" => StatePreparation::Product {
                    theta_a: config.real("order.theta_a"),
                    theta_b: config.real("order.theta_b"),
                },
                _ => StatePreparation::Singlet,
            };
            let order = OrderConfig {
                preparation,
                angle_a: config.real("order.angle_a"),
                angle_b: config.real("order.angle_b"),
            };
            let inner = CollapseEngine { params };
            let biased = BiasedSecondReduction { inner, bias: config.real("order.bias") };
            let engine: &dyn ReductionEngine = match config.str("order.engine") {
                "biased" => &biased,
                _ => &inner,
            };
            order_invariance_test(&order, engine, runs, seed)?.report(seed)
        }
        "conservation" => {
            let prep = match config.str("conservation.preparation") {
                "non-entangled" => BeamSplitterPreparation::NonEntangled,
                _ => BeamSplitterPreparation::Entangled,
            };
            conservation_experiment(prep, runs, config.real("conservation.reflectivity"), &params, seed)?.report(seed)
        }
        "collapse-trace" => trace_report(config)?,
        other => return Err(Error::UnknownExperiment(other.to_string())),
    };
    report.fingerprint = config.fingerprint().to_string();
    Ok(report)
}

fn lhv_report(config: &RunConfig) -> Result<ExperimentReport> {
    let (seed, runs) = (config.seed(), config.runs());
    let quartet = config.quartet()?;
    let tables: Vec<CountTable> = match config.str("lhv.model") {
        "sign-cosine" => vec![lhv_run(&SignCosineModel, &quartet, runs, seed)?],
        "constant" => vec![lhv_run(&ConstantModel { a: 1, b: 1 }, &quartet, runs, seed)?],
        "fair-coin" => vec![lhv_run(&FairCoinModel, &quartet, runs, seed)?],
        _ => {
            let models = randomized_models(config.int("lhv.models") as usize, seed);
            // Each model gets its own block of substreams.
            models
                .iter()
                .enumerate()
                .map(|(i, m)| lhv_run(m, &quartet, runs, seed.wrapping_add(i as u64 + 1)))
                .collect::<Result<_>>()?
        }
    };
    let mut r = ExperimentReport::new("chsh-lhv", seed);
    let mut worst: Option<(f64, usize)> = None;
    for (i, t) in tables.iter().enumerate() {
        let v = chsh_statistic(t)?;
        let excess = v.s - (2.0 + SIGMA_BAND * v.sigma);
        r.set(format!("model{i}.S"), v.s);
        r.set(format!("model{i}.S_sigma"), v.sigma);
        if worst.is_none_or(|(e, _)| excess > e) {
            worst = Some((excess, i));
        }
    }
    let (excess, i) = worst.ok_or_else(|| Error::config("lhv.models", "must be at least 1"))?;
    r.set("models", tables.len() as f64);
    r.set("max_excess", excess);
    r.set("worst_model", i as f64);
    r.set("pass", if excess <= 0.0 { 1.0 } else { 0.0 });
    r.set_counts(&tables[i]);
    Ok(r)
}

fn trace_report(config: &RunConfig) -> Result<ExperimentReport> {
    let (seed, runs) = (config.seed(), config.runs());
    let w0 = config.real("trace.w0");
    let mut r = ExperimentReport::new("collapse-trace", seed);
    if config.str("trace.mode") == "scattering" {
        let cfg = ScatteringConfig {
            barrier_ratio: config.real("trace.barrier_ratio"),
            ..ScatteringConfig::default()
        };
        let sim = match config.trace_potential() {
            Some(path) => simulate_scattering_with_table(&cfg, &PotentialTable::load(&path)?)?,
            None => simulate_scattering(&cfg)?,
        };
        let g = shift_magnitudes(&sim.trace, sim.e_total_rel, ShiftMode::Instantaneous)?;
        let deltas: Vec<f64> = sim.trace.due().iter().map(|d| g[d.sample]).collect();
        r.set("tau", sim.tau());
        r.set("e_cm", sim.e_cm);
        r.set("e_total_rel", sim.e_total_rel);
        r.set("peak_interaction", sim.peak_interaction);
        r.set("due_reductions", deltas.len() as f64);
        r.set("max_shift", deltas.iter().copied().fold(0.0, f64::max));
        let walks = ensemble(runs, |run| physical_walk(w0, &deltas, &mut GlobalStream::substream(seed, run)))?;
        r.set("resolved_runs", walks.iter().filter(|w| w.outcome.is_some()).count() as f64);
        for (run, w) in walks.iter().enumerate() {
            r.push_trajectory(run as u64, &w.trajectory);
        }
    } else {
        let params = config.collapse_params()?;
        let walks = ensemble(runs, |run| {
            let mut t = Vec::new();
            resolve_weight(w0, &params, &mut GlobalStream::substream(seed, run), Some(&mut t))?;
            Ok(t)
        })?;
        let won = walks.iter().filter(|t| t.last() == Some(&1.0)).count();
        r.set("w0", w0);
        r.set("interacting_wins", won as f64);
        r.set("mean_steps", walks.iter().map(|t| t.len() as f64 - 2.0).sum::<f64>() / runs as f64);
        for (run, t) in walks.iter().enumerate() {
            r.push_trajectory(run as u64, t);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> ExperimentReport {
        dispatch(&RunConfig::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn every_experiment_dispatches() {
        for name in super::super::config::EXPERIMENTS {
            let r = run(&format!("experiment = \"{name}\"\nseed = 4\nruns = 200\nlhv.models = 2\n"));
            assert_eq!(r.experiment, name);
            assert_eq!(r.fingerprint.len(), 64);
            assert!(!r.statistics.is_empty());
        }
    }

    #[test]
    fn same_config_same_report() {
        let text = "experiment = \"chsh-quantum\"\nseed = 4\nruns = 300\n";
        assert_eq!(run(text).to_json(), run(text).to_json());
    }

    #[test]
    fn conservation_mutant_through_config() {
        let r = run("experiment = \"conservation\"\nseed = 1\nruns = 500\nconservation.preparation = \"non-entangled\"\n");
        assert_eq!(r.get("max_violation"), Some(2.0));
    }
}
