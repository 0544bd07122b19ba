//! Desk-scale simulator of interaction-induced stochastic wave-function
//! collapse, with an experiment harness for Bell/CHSH correlations,
//! no-signaling, reduction-order undetectability, Born-rule emergence and
//! conservation bookkeeping.
//!
//! Module map:
//!
//! * [`quantum`]: dense state vectors, operators, projectors, Born weights.
//! * [`dynamics`]: two-particle grid Hamiltonians, propagation, and the
//!   interaction timing parameter that schedules reduction steps.
//! * [`collapse`]: branch decomposition, the weight martingale, the global
//!   stochastic stream and the foliation schedule it is consumed in.
//! * [`experiments`]: turnkey experiments producing [`experiments::ExperimentReport`]s.
//! * [`cli`]: configuration parsing, dispatch and report emission.

pub mod cli;
pub mod collapse;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod quantum;
pub mod tolerance;

pub use error::{Error, Result};
