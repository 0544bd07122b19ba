use super::Outcome;
use crate::collapse::{
    branch_decompose, multiway_collapse, resolve_weight, terminal_resolution, Branch, CollapseParams,
    EventId, EventKind, EventRecord, FoliationSchedule, GlobalStream,
};
use crate::quantum::{born_weight, project_and_renormalize, singlet, spin_projectors, Projector, StateVector};
use crate::{Error, Result};

/// Decides which branch survives a reduction. Engines see only branch
/// weights; the trial projects the state onto the winner.
pub trait ReductionEngine: Sync {
    /// Binary reduction. `ordinal` counts reductions already completed in
    /// the current trial.
    fn reduce_pair(&self, w: f64, ordinal: usize, stream: &mut GlobalStream) -> Result<Branch>;

    /// Reduction over several branches; returns the winning index.
    fn reduce_multi(&self, weights: &[f64], stream: &mut GlobalStream) -> Result<usize>;
}

/// The weight-martingale engine.
#[derive(Debug, Clone, Copy, Default)]
pub struct CollapseEngine {
    pub params: CollapseParams,
}

impl ReductionEngine for CollapseEngine {
    fn reduce_pair(&self, w: f64, _: usize, stream: &mut GlobalStream) -> Result<Branch> {
        resolve_weight(w, &self.params, stream, None)
    }

    fn reduce_multi(&self, weights: &[f64], stream: &mut GlobalStream) -> Result<usize> {
        let branches: Vec<((), f64)> = weights.iter().map(|&w| ((), w)).collect();
        multiway_collapse(&branches, &self.params, stream)
    }
}

/// Born sampling with one uniform per reduction; oracle for the engine.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectBorn;

impl ReductionEngine for DirectBorn {
    fn reduce_pair(&self, w: f64, _: usize, stream: &mut GlobalStream) -> Result<Branch> {
        terminal_resolution(w, stream)
    }

    fn reduce_multi(&self, weights: &[f64], stream: &mut GlobalStream) -> Result<usize> {
        let u = stream.draw_uniform();
        let mut acc = 0.0;
        let last = weights.iter().rposition(|&w| w > 0.0).unwrap_or(0);
        for (i, &w) in weights.iter().enumerate() {
            acc += w;
            if w > 0.0 && (u < acc || i == last) {
                return Ok(i);
            }
        }
        Err(Error::Input("no branch carried weight".into()))
    }
}

/// Deliberately order-dependent engine: an undecided second reduction of a
/// trial is pushed toward its interacting branch by `bias`. Exists so the
/// order-invariance test can show it detects such an engine. Branches of
/// weight 0 or 1 are left alone so the bias never selects an empty branch.
#[derive(Debug, Clone, Copy)]
pub struct BiasedSecondReduction {
    pub inner: CollapseEngine,
    pub bias: f64,
}

impl ReductionEngine for BiasedSecondReduction {
    fn reduce_pair(&self, w: f64, ordinal: usize, stream: &mut GlobalStream) -> Result<Branch> {
        let w = if ordinal == 1 && w > 0.0 && w < 1.0 { (w + self.bias).clamp(0.0, 1.0) } else { w };
        self.inner.reduce_pair(w, ordinal, stream)
    }

    fn reduce_multi(&self, weights: &[f64], stream: &mut GlobalStream) -> Result<usize> {
        self.inner.reduce_multi(weights, stream)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub fn subsystem(self) -> usize {
        match self {
            Party::A => 0,
            Party::B => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StatePreparation {
    Singlet,
    /// Spin-up along `θa` for A and along `θb` for B, unentangled.
    Product { theta_a: f64, theta_b: f64 },
}

impl StatePreparation {
    pub fn state(&self) -> Result<StateVector> {
        match *self {
            StatePreparation::Singlet => Ok(singlet()),
            StatePreparation::Product { theta_a, theta_b } => {
                let up = |t: f64| StateVector::from_real(&[2], &[(t / 2.0).cos(), (t / 2.0).sin()]);
                up(theta_a)?.tensor(&up(theta_b)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrialEvent {
    Prepare(StatePreparation),
    /// Correlates party's apparatus with spin along `angle`. With `reduce`
    /// set the binary reduction follows immediately; otherwise the outcome
    /// waits for a [`TrialEvent::ReduceJoint`].
    Measure { party: Party, angle: f64, reduce: bool },
    /// Multiway reduction over the joint outcomes of all pending measurements,
    /// branches enumerated in foliation order of those measurements.
    ReduceJoint,
}

const SOURCE_SITE: u32 = 0;
const SITE_A: u32 = 1;
const SITE_B: u32 = 2;
/// Tag shared by the two wings' measurement events.
pub const WINGS_TAG: u32 = 1;

/// Singlet source, both wings measured simultaneously, then one joint
/// reduction over the four outcome branches.
pub fn bell_schedule(angle_a: f64, angle_b: f64) -> Result<FoliationSchedule<TrialEvent>> {
    let events = vec![
        EventRecord::new(0, 0.0, SOURCE_SITE, EventKind::Unitary, TrialEvent::Prepare(StatePreparation::Singlet)),
        EventRecord::new(
            1,
            1.0,
            SITE_A,
            EventKind::Measurement,
            TrialEvent::Measure { party: Party::A, angle: angle_a, reduce: false },
        )
        .spacelike(WINGS_TAG),
        EventRecord::new(
            2,
            1.0,
            SITE_B,
            EventKind::Measurement,
            TrialEvent::Measure { party: Party::B, angle: angle_b, reduce: false },
        )
        .spacelike(WINGS_TAG),
        EventRecord::new(3, 2.0, SOURCE_SITE, EventKind::Reduction, TrialEvent::ReduceJoint),
    ];
    FoliationSchedule::new(
        events,
        vec![
            (EventId(0), EventId(1)),
            (EventId(0), EventId(2)),
            (EventId(1), EventId(3)),
            (EventId(2), EventId(3)),
        ],
    )
}

/// Preparation followed by two spacelike measurements, A at `t = 1` and B at
/// `t = 2`, each reduced as soon as it happens. Event ids: 0 preparation,
/// 1 measurement A, 2 measurement B.
pub fn sequential_schedule(
    preparation: StatePreparation,
    angle_a: f64,
    angle_b: f64,
) -> Result<FoliationSchedule<TrialEvent>> {
    let events = vec![
        EventRecord::new(0, 0.0, SOURCE_SITE, EventKind::Unitary, TrialEvent::Prepare(preparation)),
        EventRecord::new(
            1,
            1.0,
            SITE_A,
            EventKind::Measurement,
            TrialEvent::Measure { party: Party::A, angle: angle_a, reduce: true },
        )
        .spacelike(WINGS_TAG),
        EventRecord::new(
            2,
            2.0,
            SITE_B,
            EventKind::Measurement,
            TrialEvent::Measure { party: Party::B, angle: angle_b, reduce: true },
        )
        .spacelike(WINGS_TAG),
    ];
    FoliationSchedule::new(events, vec![(EventId(0), EventId(1)), (EventId(0), EventId(2))])
}

fn plus_projector(party: Party, angle: f64) -> Result<Projector> {
    let [plus, _] = spin_projectors(angle);
    plus.embed(party.subsystem(), &[2, 2])
}

/// Executes one trial in foliation order and returns `(outcome A, outcome B)`.
pub fn run_trial(
    schedule: &FoliationSchedule<TrialEvent>,
    engine: &dyn ReductionEngine,
    stream: &mut GlobalStream,
) -> Result<(Outcome, Outcome)> {
    let mut state: Option<StateVector> = None;
    let mut pending: Vec<(Party, f64)> = Vec::new();
    let mut outcomes: [Option<Outcome>; 2] = [None, None];
    let mut reductions = 0usize;

    schedule.run(stream, |event, stream| {
        match event.payload {
            TrialEvent::Prepare(p) => state = Some(p.state()?),
            TrialEvent::Measure { party, angle, reduce } => {
                let s = state.as_ref().ok_or_else(|| Error::Causality("measurement before preparation".into()))?;
                if !reduce {
                    pending.push((party, angle));
                    return Ok(());
                }
                let pair = branch_decompose(s, &plus_projector(party, angle)?)?;
                let winner = engine.reduce_pair(pair.weight(), reductions, stream)?;
                reductions += 1;
                let next = project_and_renormalize(s, pair.projector(winner))
                    .map_err(|e| Error::Internal(format!("reduction picked an empty branch: {e}")))?;
                state = Some(next);
                outcomes[party.subsystem()] = Some(match winner {
                    Branch::Interacting => Outcome::Plus,
                    Branch::Noninteracting => Outcome::Minus,
                });
            }
            TrialEvent::ReduceJoint => {
                let s = state.as_ref().ok_or_else(|| Error::Causality("reduction before preparation".into()))?;
                let mut branches: Vec<(Vec<Outcome>, Projector)> = vec![(Vec::new(), Projector::identity(&[2, 2])?)];
                for &(party, angle) in &pending {
                    let [plus, minus] = spin_projectors(angle);
                    let plus = plus.embed(party.subsystem(), &[2, 2])?;
                    let minus = minus.embed(party.subsystem(), &[2, 2])?;
                    branches = branches
                        .into_iter()
                        .flat_map(|(labels, p)| {
                            [(Outcome::Plus, &plus), (Outcome::Minus, &minus)].map(|(o, q)| {
                                let mut l = labels.clone();
                                l.push(o);
                                let joint = p.as_operator().compose(q.as_operator()).and_then(Projector::new);
                                (l, joint)
                            })
                        })
                        .map(|(l, p)| p.map(|p| (l, p)))
                        .collect::<Result<_>>()?;
                }
                let weights = branches
                    .iter()
                    .map(|(_, p)| born_weight(s, p))
                    .collect::<Result<Vec<f64>>>()?;
                // Weights come from a complete family; fold rounding into the total.
                let total: f64 = weights.iter().sum();
                let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
                let k = engine.reduce_multi(&weights, stream)?;
                reductions += 1;
                let next = project_and_renormalize(s, &branches[k].1)
                    .map_err(|e| Error::Internal(format!("reduction picked an empty branch: {e}")))?;
                state = Some(next);
                for (&(party, _), &o) in pending.iter().zip(&branches[k].0) {
                    outcomes[party.subsystem()] = Some(o);
                }
                pending.clear();
            }
        }
        Ok(())
    })?;

    match outcomes {
        [Some(a), Some(b)] => Ok((a, b)),
        _ => Err(Error::Internal("trial ended with an unresolved measurement".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::reorder_schedule;

    #[test]
    fn equal_settings_always_anticorrelate() {
        let sched = bell_schedule(0.3, 0.3).unwrap();
        let seq = sequential_schedule(StatePreparation::Singlet, 0.3, 0.3).unwrap();
        for r in 0..200 {
            for s in [&sched, &seq] {
                let mut stream = GlobalStream::substream(1, r);
                let (a, b) = run_trial(s, &CollapseEngine::default(), &mut stream).unwrap();
                assert_eq!(a, b.flipped());
            }
        }
    }

    #[test]
    fn trial_is_deterministic() {
        let sched = bell_schedule(0.0, 1.0).unwrap();
        let run = |r| {
            let mut s = GlobalStream::substream(9, r);
            let o = run_trial(&sched, &CollapseEngine::default(), &mut s).unwrap();
            (o, s.counter())
        };
        for r in 0..50 {
            assert_eq!(run(r), run(r));
        }
    }

    #[test]
    fn direct_born_multi_respects_zero_weights() {
        let mut s = GlobalStream::new(3);
        for _ in 0..1000 {
            let k = DirectBorn.reduce_multi(&[0.0, 0.5, 0.0, 0.5], &mut s).unwrap();
            assert!(k == 1 || k == 3);
        }
    }

    #[test]
    fn reordered_schedule_runs_b_first() {
        let seq = sequential_schedule(StatePreparation::Singlet, 0.0, 0.0).unwrap();
        let swapped = reorder_schedule(&seq, &[EventId(2), EventId(1)]).unwrap();
        let first = &swapped.events()[1];
        assert!(matches!(first.payload, TrialEvent::Measure { party: Party::B, .. }));
    }
}
