//! The DCES state machine. A state pairs a configuration `C` with a causal
//! state `cs` giving the outstanding causes of every event outside `C`.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::kernel::{classify_dces, Alphabet, Dces, Event, EventSet};

/// `cs`: outstanding causes per event. Entries of events inside the owning
/// configuration are always empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CausalState(pub Vec<EventSet>);

impl CausalState {
    pub fn get(&self, e: Event) -> EventSet {
        self.0[e]
    }

    /// `{e ↦ cs(e)}` for the events outside `config`, as `{d: {c}, ...}`.
    pub fn show(&self, ev: &Alphabet, config: EventSet) -> String {
        let parts: Vec<String> = (0..ev.len())
            .filter(|&e| !config.contains(e))
            .map(|e| format!("{}:{}", ev.name(e), ev.show_set(self.0[e])))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DcesState {
    pub config: EventSet,
    pub cs: CausalState,
}

impl DcesState {
    /// `(∅, cs_i)` with `cs_i(e) = ic(e)`.
    pub fn initial(d: &Dces) -> Self {
        DcesState {
            config: EventSet::EMPTY,
            cs: CausalState((0..d.events.len()).map(|e| d.causes.of(e)).collect()),
        }
    }

    /// Events outside the configuration with no outstanding cause.
    pub fn ready(&self, d: &Dces) -> EventSet {
        d.events
            .all()
            .difference(self.config)
            .iter()
            .filter(|&e| self.cs.get(e).is_empty())
            .collect()
    }

    pub fn show(&self, ev: &Alphabet) -> String {
        format!(
            "({}, {})",
            ev.show_set(self.config),
            self.cs.show(ev, self.config)
        )
    }
}

/// Fires the set `s` from `st`, if that is a step.
pub(crate) fn step(d: &Dces, st: &DcesState, s: EventSet) -> Option<DcesState> {
    let c = st.config;
    if s.intersects(c) || !s.is_subset(st.ready(d)) {
        return None;
    }
    let c2 = c.union(s);
    if !d.conflict.is_conflict_free(c2) {
        return None;
    }
    let n = d.events.len();
    let outside = d.events.all().difference(c2);
    for t in s.iter() {
        // Effective adders fired together with their target need the cause done.
        if !d.adds.causes_effectively_modified_by(s, t).is_subset(c) {
            return None;
        }
    }
    let mut cs = vec![EventSet::EMPTY; n];
    for t in outside.iter() {
        let mut next = EventSet::EMPTY;
        for cause in outside.iter() {
            let dropped = d.drops.of(cause, t).intersects(s);
            let added = d.adds.of(cause, t).intersects(s);
            if dropped && added {
                return None;
            }
            let had = st.cs.get(t).contains(cause);
            if (had && !dropped) || (!had && added) {
                next.insert(cause);
            }
        }
        cs[t] = next;
    }
    Some(DcesState {
        config: c2,
        cs: CausalState(cs),
    })
}

/// Every successor of `st`, including `st` itself through the empty step.
pub fn dces_steps(d: &Dces, st: &DcesState) -> Vec<DcesState> {
    st.ready(d)
        .subsets()
        .filter_map(|s| step(d, st, s))
        .collect()
}

/// Reachable states and the steps between them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StateGraph {
    pub root: Option<DcesState>,
    pub nodes: BTreeSet<DcesState>,
    pub edges: BTreeSet<(DcesState, DcesState)>,
}

pub fn dces_state_graph(d: &Dces) -> StateGraph {
    let root = DcesState::initial(d);
    let mut g = StateGraph {
        root: Some(root.clone()),
        ..StateGraph::default()
    };
    g.nodes.insert(root.clone());
    let mut queue = VecDeque::from([root]);
    while let Some(st) = queue.pop_front() {
        for next in dces_steps(d, &st) {
            if g.nodes.insert(next.clone()) {
                queue.push_back(next.clone());
            }
            g.edges.insert((st.clone(), next));
        }
    }
    g
}

/// Configurations reachable through single-event steps.
pub(crate) fn single_step_configurations(d: &Dces) -> BTreeSet<EventSet> {
    let root = DcesState::initial(d);
    let mut seen = BTreeSet::from([root.clone()]);
    let mut queue = VecDeque::from([root]);
    while let Some(st) = queue.pop_front() {
        for e in st.ready(d).iter() {
            if let Some(next) = step(d, &st, EventSet::singleton(e)) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.into_iter().map(|st| st.config).collect()
}

/// `cs(e) = (ic(e) ∪ ac(C,e)) ∖ (dc(C,e) ∪ C)` for a single-state DCES.
pub fn causal_state_closed_form(d: &Dces, config: EventSet) -> Result<CausalState> {
    if !classify_dces(d)?.is_ssdc {
        return Err(Error::NotSingleState);
    }
    let reachable = dces_state_graph(d)
        .nodes
        .iter()
        .any(|st| st.config == config);
    if !reachable {
        return Err(Error::Unreachable(d.events.show_set(config)));
    }
    Ok(closed_form_unchecked(d, config))
}

pub(crate) fn closed_form_unchecked(d: &Dces, config: EventSet) -> CausalState {
    let n = d.events.len();
    let mut cs = vec![EventSet::EMPTY; n];
    for e in d.events.all().difference(config).iter() {
        let grow = d
            .causes
            .of(e)
            .union(d.adds.causes_effectively_modified_by(config, e));
        let shrink = d.drops.causes_modified_by(config, e).union(config);
        cs[e] = grow.difference(shrink);
    }
    CausalState(cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_free_event() {
        let d = Dces::new("d", Alphabet::new(["x"]).unwrap());
        let g = dces_state_graph(&d);
        assert_eq!(g.nodes.len(), 2);
        // ∅→∅, ∅→{x}, {x}→{x}
        assert_eq!(g.edges.len(), 3);
    }

    #[test]
    fn adder_then_dropper_order_matters() {
        let mut d = Dces::new("delta", Alphabet::new(["a", "b", "c", "d"]).unwrap());
        d.drop("c", "b", "d").unwrap().add("c", "a", "d").unwrap();
        let (a, b, c, dd) = (0, 1, 2, 3);
        let s0 = DcesState::initial(&d);
        let s_a = step(&d, &s0, EventSet::singleton(a)).unwrap();
        assert_eq!(s_a.cs.get(dd), EventSet::singleton(c));
        let s_ab = step(&d, &s_a, EventSet::singleton(b)).unwrap();
        assert!(s_ab.cs.get(dd).is_empty());
        assert!(step(&d, &s_ab, EventSet::singleton(dd)).is_some());
        let s_b = step(&d, &s0, EventSet::singleton(b)).unwrap();
        let s_ba = step(&d, &s_b, EventSet::singleton(a)).unwrap();
        assert_eq!(s_ba.cs.get(dd), EventSet::singleton(c));
        assert!(step(&d, &s_ba, EventSet::singleton(dd)).is_none());
        // a and b fired together: both modifiers of (c, d) at once.
        assert!(step(&d, &s0, EventSet::from_bits(0b11)).is_none());
    }
}
