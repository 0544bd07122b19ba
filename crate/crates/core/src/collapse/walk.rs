use super::{Branch, BranchPair, GlobalStream};
use crate::quantum::{project_and_renormalize, StateVector};
use crate::tolerance::ACCUMULATED;
use crate::{Error, Result};

/// How a walk that has left `(delta, 1 - delta)` is settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AbsorbRule {
    /// One Bernoulli(w) draw. Keeps the win probability at exactly `w0`.
    #[default]
    ExactBernoulli,
    /// Snap to the nearer boundary. Biased by O(delta); kept for comparison.
    NearestBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseParams {
    /// Weight transferred per reduction step.
    pub delta: f64,
    /// Timing-parameter increment between reduction steps.
    pub tau_step: f64,
    pub absorb: AbsorbRule,
}

impl CollapseParams {
    pub const DEFAULT_DELTA: f64 = 0.01;
    pub const DEFAULT_TAU_STEP: f64 = 1.0 / 64.0;

    pub fn new(delta: f64) -> Result<Self> {
        let p = Self {
            delta,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(Error::Input(format!("delta {} not in (0, 0.5)", self.delta)));
        }
        if !(self.tau_step > 0.0 && self.tau_step.is_finite()) {
            return Err(Error::Input(format!("tau_step {} must be positive", self.tau_step)));
        }
        Ok(())
    }
}

impl Default for CollapseParams {
    fn default() -> Self {
        Self {
            delta: Self::DEFAULT_DELTA,
            tau_step: Self::DEFAULT_TAU_STEP,
            absorb: AbsorbRule::ExactBernoulli,
        }
    }
}

/// One interior transfer: `w ± delta` depending on the fair bit.
pub fn stochastic_step(w: f64, delta: f64, up: bool) -> Result<f64> {
    if !(w > delta && w < 1.0 - delta) {
        return Err(Error::Input(format!(
            "weight {w} outside ({delta}, {}); use terminal_resolution",
            1.0 - delta
        )));
    }
    Ok(if up { w + delta } else { w - delta })
}

/// Settles a boundary weight with a single uniform draw: interacting with
/// probability exactly `w`.
pub fn terminal_resolution(w: f64, stream: &mut GlobalStream) -> Result<Branch> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Input(format!("weight {w} outside [0, 1]")));
    }
    Ok(if stream.draw_uniform() < w {
        Branch::Interacting
    } else {
        Branch::Noninteracting
    })
}

/// Weight held as `w0 + offset * delta` with an integer offset, so the
/// martingale property of each step holds exactly in the offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightLattice {
    w0: f64,
    delta: f64,
    offset: i64,
}

impl WeightLattice {
    pub fn new(w0: f64, delta: f64) -> Self {
        Self { w0, delta, offset: 0 }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn weight(&self) -> f64 {
        self.w0 + self.offset as f64 * self.delta
    }

    pub fn is_interior(&self) -> bool {
        let w = self.weight();
        w > self.delta && w < 1.0 - self.delta
    }

    pub fn step(&mut self, up: bool) {
        self.offset += if up { 1 } else { -1 };
    }
}

/// Runs the weight walk from `w0` to resolution. When `trajectory` is given
/// it receives `w0`, every interior weight, and the final 0 or 1.
pub fn resolve_weight(
    w0: f64,
    params: &CollapseParams,
    stream: &mut GlobalStream,
    mut trajectory: Option<&mut Vec<f64>>,
) -> Result<Branch> {
    if !(0.0..=1.0).contains(&w0) {
        return Err(Error::Input(format!("initial weight {w0} outside [0, 1]")));
    }
    let mut record = |w: f64| {
        if let Some(t) = trajectory.as_deref_mut() {
            t.push(w);
        }
    };
    record(w0);
    let winner = if w0 == 0.0 {
        Branch::Noninteracting
    } else if w0 == 1.0 {
        Branch::Interacting
    } else {
        let mut lattice = WeightLattice::new(w0, params.delta);
        while lattice.is_interior() {
            lattice.step(stream.draw_bit());
            record(lattice.weight());
        }
        let w = lattice.weight().clamp(0.0, 1.0);
        match params.absorb {
            AbsorbRule::ExactBernoulli => terminal_resolution(w, stream)?,
            AbsorbRule::NearestBoundary if w >= 0.5 => Branch::Interacting,
            AbsorbRule::NearestBoundary => Branch::Noninteracting,
        }
    };
    record(match winner {
        Branch::Interacting => 1.0,
        Branch::Noninteracting => 0.0,
    });
    Ok(winner)
}

#[derive(Debug, Clone)]
pub struct CollapseOutcome {
    pub winner: Branch,
    pub label: String,
    /// The input state projected onto the whole winning branch.
    pub state: StateVector,
    pub trajectory: Vec<f64>,
    pub draws: u64,
}

/// Drives a branch pair to collapse and projects the full state onto the
/// winning branch, entangled partners included.
pub fn run_collapse(
    s: &StateVector,
    pair: &BranchPair,
    params: &CollapseParams,
    stream: &mut GlobalStream,
) -> Result<CollapseOutcome> {
    params.validate()?;
    if (s.norm_sqr() - 1.0).abs() > ACCUMULATED {
        return Err(Error::Input(format!("state norm^2 {} is not 1", s.norm_sqr())));
    }
    let start = stream.counter();
    let mut trajectory = Vec::new();
    let winner = resolve_weight(pair.weight(), params, stream, Some(&mut trajectory))?;
    let state = project_and_renormalize(s, pair.projector(winner)).map_err(|e| match e {
        Error::NullOutcome(w) => {
            Error::Internal(format!("branch of weight {w:e} won the collapse"))
        }
        other => other,
    })?;
    Ok(CollapseOutcome {
        winner,
        label: pair.label(winner).to_string(),
        state,
        trajectory,
        draws: stream.counter() - start,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalWalk {
    pub trajectory: Vec<f64>,
    /// Set once a step found the weight at a boundary and resolved it.
    pub outcome: Option<Branch>,
}

/// Walk with a per-step delta, e.g. shift magnitudes taken from an
/// interaction trace. Zero deltas are skipped without drawing. Usually
/// ends unresolved: physical shifts are tiny.
pub fn physical_walk(w0: f64, deltas: &[f64], stream: &mut GlobalStream) -> Result<PhysicalWalk> {
    if !(0.0..=1.0).contains(&w0) {
        return Err(Error::Input(format!("initial weight {w0} outside [0, 1]")));
    }
    let mut w = w0;
    let mut trajectory = vec![w];
    for &delta in deltas {
        if delta == 0.0 {
            continue;
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::Input(format!("delta {delta} not in (0, 0.5)")));
        }
        if w > delta && w < 1.0 - delta {
            w = stochastic_step(w, delta, stream.draw_bit())?;
            trajectory.push(w);
        } else {
            let outcome = terminal_resolution(w, stream)?;
            return Ok(PhysicalWalk {
                trajectory,
                outcome: Some(outcome),
            });
        }
    }
    Ok(PhysicalWalk {
        trajectory,
        outcome: None,
    })
}
