//! Stochastic amplitude transfer between an interacting branch and its
//! complement, consumed from one global stream in foliation order.
//!
//! The transfer rule is a symmetric random walk of step `delta` on the
//! interacting branch's Born weight. Inside `(delta, 1 - delta)` each step
//! draws one fair bit; once the weight leaves that interval a single
//! Bernoulli(w) draw settles the outcome. Both pieces keep the expected
//! weight fixed, so by optional stopping the interacting branch wins with
//! probability equal to its initial weight.

mod branch;
mod foliation;
mod multiway;
mod stream;
mod walk;

pub use branch::{branch_decompose, Branch, BranchPair};
pub use foliation::{reorder_schedule, EventId, EventKind, EventRecord, FoliationSchedule};
pub use multiway::multiway_collapse;
pub use stream::GlobalStream;
pub use walk::{
    physical_walk, resolve_weight, run_collapse, stochastic_step, terminal_resolution,
    AbsorbRule, CollapseOutcome, CollapseParams, PhysicalWalk, WeightLattice,
};
