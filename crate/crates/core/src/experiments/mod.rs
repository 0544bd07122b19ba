//! Experiments over the collapse engine. Each returns typed results plus an
//! [`ExperimentReport`] for serialization.
//!
//! Statistical pass bands are 3σ, binomial or multinomial as appropriate.
//! Every ensemble run `r` draws from its own substream `(seed, r)`, so
//! results do not depend on the number of worker threads.

mod born;
mod chsh;
mod conservation;
mod counts;
mod ensemble;
mod lhv;
mod order;
mod report;
mod trial;

pub use born::{born_convergence_experiment, born_report, BornRow};
pub use chsh::{quantum_chsh_run, ChshRun, EngineKind};
pub use conservation::{conservation_experiment, ConservationResult, Preparation as BeamSplitterPreparation, INITIAL_TOTAL};
pub use counts::{
    chsh_statistic, factorized_joint, no_signaling_check, ChshValue, CountTable, Outcome,
    SettingsQuartet,
};
pub use ensemble::ensemble;
pub use lhv::{
    lhv_run, randomized_models, ConstantModel, FairCoinModel, LhvModel, ParametricModel,
    SignCosineModel,
};
pub use order::{order_invariance_test, total_variation, JointCounts, OrderConfig, OrderInvariance};
pub use report::{format_real, quantize, CountRow, ExperimentReport, TrajectoryRow, COUNTS_HEADER, SCHEMA_VERSION, TRAJECTORY_HEADER};
pub use trial::{
    bell_schedule, run_trial, sequential_schedule, BiasedSecondReduction, CollapseEngine, DirectBorn,
    Party, ReductionEngine, StatePreparation, TrialEvent,
};
