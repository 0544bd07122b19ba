use std::collections::{HashMap, HashSet};

use super::GlobalStream;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Unitary,
    Reduction,
    Measurement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord<P> {
    pub id: EventId,
    /// Global time on the preferred foliation.
    pub t: f64,
    pub site: u32,
    pub kind: EventKind,
    /// Events sharing a tag are declared mutually spacelike and may be reordered.
    pub spacelike_tag: Option<u32>,
    pub payload: P,
}

impl<P> EventRecord<P> {
    pub fn new(id: usize, t: f64, site: u32, kind: EventKind, payload: P) -> Self {
        Self {
            id: EventId(id),
            t,
            site,
            kind,
            spacelike_tag: None,
            payload,
        }
    }

    pub fn spacelike(mut self, tag: u32) -> Self {
        self.spacelike_tag = Some(tag);
        self
    }
}

/// Globally time-ordered event list. Equal times are ordered by ascending
/// site; dependency edges `(before, after)` must agree with that order.
#[derive(Debug, Clone, PartialEq)]
pub struct FoliationSchedule<P> {
    events: Vec<EventRecord<P>>,
    dependencies: Vec<(EventId, EventId)>,
}

impl<P> FoliationSchedule<P> {
    pub fn new(mut events: Vec<EventRecord<P>>, dependencies: Vec<(EventId, EventId)>) -> Result<Self> {
        let mut ids = HashSet::new();
        for e in &events {
            if !e.t.is_finite() {
                return Err(Error::Input(format!("event {:?} has non-finite time", e.id)));
            }
            if !ids.insert(e.id) {
                return Err(Error::Input(format!("duplicate event id {:?}", e.id)));
            }
        }
        for (a, b) in &dependencies {
            if !ids.contains(a) || !ids.contains(b) {
                return Err(Error::Input(format!("dependency {a:?} -> {b:?} names an unknown event")));
            }
        }
        events.sort_by(|x, y| x.t.total_cmp(&y.t).then(x.site.cmp(&y.site)));
        let schedule = Self { events, dependencies };
        schedule.check_dependencies()?;
        Ok(schedule)
    }

    fn check_dependencies(&self) -> Result<()> {
        let pos: HashMap<EventId, usize> =
            self.events.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
        for (a, b) in &self.dependencies {
            if pos[a] >= pos[b] {
                return Err(Error::Causality(format!(
                    "{a:?} must precede {b:?} but is scheduled after it"
                )));
            }
        }
        Ok(())
    }

    pub fn events(&self) -> &[EventRecord<P>] {
        &self.events
    }

    pub fn dependencies(&self) -> &[(EventId, EventId)] {
        &self.dependencies
    }

    pub fn position(&self, id: EventId) -> Option<usize> {
        self.events.iter().position(|e| e.id == id)
    }

    /// Visits events in foliation order, announcing each to the stream first
    /// so that every draw is attributed to the event that consumed it.
    pub fn run<F>(&self, stream: &mut GlobalStream, mut handler: F) -> Result<()>
    where
        F: FnMut(&EventRecord<P>, &mut GlobalStream) -> Result<()>,
    {
        for (i, e) in self.events.iter().enumerate() {
            stream.enter_event(i)?;
            handler(e, stream)?;
        }
        Ok(())
    }
}

/// Reassigns the global times of a set of mutually spacelike events so they
/// occur in the order listed by `perm`. The set's time slots are reused, so
/// only their relative order changes.
pub fn reorder_schedule<P: Clone>(
    sched: &FoliationSchedule<P>,
    perm: &[EventId],
) -> Result<FoliationSchedule<P>> {
    let set: HashSet<EventId> = perm.iter().copied().collect();
    if set.len() != perm.len() {
        return Err(Error::Input("permutation lists an event twice".into()));
    }
    for (a, b) in &sched.dependencies {
        if set.contains(a) && set.contains(b) {
            return Err(Error::Causality(format!(
                "{a:?} and {b:?} are causally connected and cannot be reordered"
            )));
        }
    }
    let mut members = Vec::with_capacity(perm.len());
    for id in perm {
        let e = sched
            .events
            .iter()
            .find(|e| e.id == *id)
            .ok_or_else(|| Error::Input(format!("unknown event {id:?}")))?;
        members.push(e);
    }
    if let Some(first) = members.first() {
        let tag = first.spacelike_tag;
        if tag.is_none() || members.iter().any(|e| e.spacelike_tag != tag) {
            return Err(Error::Causality(
                "reordered events must share a spacelike tag".into(),
            ));
        }
    }
    let mut slots: Vec<f64> = members.iter().map(|e| e.t).collect();
    slots.sort_by(f64::total_cmp);
    if slots.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Input(
            "simultaneous events are ordered by site; give them distinct times to reorder".into(),
        ));
    }
    let new_time: HashMap<EventId, f64> = perm.iter().copied().zip(slots).collect();
    let events = sched
        .events
        .iter()
        .map(|e| {
            let mut e = e.clone();
            if let Some(&t) = new_time.get(&e.id) {
                e.t = t;
            }
            e
        })
        .collect();
    FoliationSchedule::new(events, sched.dependencies.clone())
}
