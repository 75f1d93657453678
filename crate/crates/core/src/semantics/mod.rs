//! Derived cause sets, traces, configurations, transition graphs, the DCES
//! state machine and poset semantics.

mod dces;
mod posets;

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

pub use dces::{
    causal_state_closed_form, dces_state_graph, dces_steps, CausalState, DcesState, StateGraph,
};
pub use posets::{posets, Poset, PosetFamily, PosetMode};

use crate::error::{Error, Result};
use crate::kernel::{Alphabet, Event, EventSet, Family, Rces, Structure};

/// A duplicate-free event sequence. Ordered by length, then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Trace(pub Vec<Event>);

impl Trace {
    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The underlying set `t̄`.
    pub fn set(&self) -> EventSet {
        self.0.iter().copied().collect()
    }

    pub fn names<'a>(&self, ev: &'a Alphabet) -> Vec<&'a str> {
        self.0.iter().map(|&e| ev.name(e)).collect()
    }

    /// Renders as concatenated names separated by spaces, `ε` when empty.
    pub fn show(&self, ev: &Alphabet) -> String {
        if self.0.is_empty() {
            "ε".to_string()
        } else {
            self.names(ev).join(" ")
        }
    }
}

impl Ord for Trace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Trace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type TraceSet = BTreeSet<Trace>;

/// Orders sets by size, then by their sorted member lists.
pub fn cmp_sets(a: EventSet, b: EventSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

/// `ic(e)`.
pub fn initial_causes(s: &Structure, e: Event) -> Result<EventSet> {
    check_event(s, e)?;
    match s {
        Structure::Ses(x) => Ok(x.causes.of(e)),
        Structure::Ges(x) => Ok(x.causes.of(e)),
        Structure::Dces(x) => Ok(x.causes.of(e)),
        _ => Err(Error::Unsupported {
            op: "initial causes",
            family: s.family(),
        }),
    }
}

/// `dc(H, e)`: causes of `e` dropped by some member of `H`.
pub fn dropped_causes(s: &Structure, h: EventSet, e: Event) -> Result<EventSet> {
    check_event(s, e)?;
    match s {
        Structure::Ses(x) => Ok(x.drops.causes_modified_by(h, e)),
        Structure::Dces(x) => Ok(x.drops.causes_modified_by(h, e)),
        Structure::Ges(_) => Ok(EventSet::EMPTY),
        _ => Err(Error::Unsupported {
            op: "dropped causes",
            family: s.family(),
        }),
    }
}

/// `ac(H, e)`: causes added to `e` by a member `a` of `H` with `a ∉ {e, c}`.
pub fn added_causes(s: &Structure, h: EventSet, e: Event) -> Result<EventSet> {
    check_event(s, e)?;
    match s {
        Structure::Ges(x) => Ok(x.adds.causes_effectively_modified_by(h, e)),
        Structure::Dces(x) => Ok(x.adds.causes_effectively_modified_by(h, e)),
        _ => Err(Error::Unsupported {
            op: "added causes",
            family: s.family(),
        }),
    }
}

fn check_event(s: &Structure, e: Event) -> Result<()> {
    if e < s.events().len() {
        Ok(())
    } else {
        Err(Error::UnknownEvent(format!("#{e}")))
    }
}

/// Events that may extend a trace whose underlying set is `p`. Defined for
/// every family whose trace condition depends on the prefix set only, which
/// is all of them but DCES.
pub(crate) fn enabled_after(s: &Structure, p: EventSet) -> EventSet {
    let all = s.events().all();
    let mut out = EventSet::EMPTY;
    for e in all.difference(p) {
        let ok = match s {
            Structure::Ses(x) => {
                !x.conflict.of(e).intersects(p.with(e))
                    && x.causes
                        .of(e)
                        .iter()
                        .all(|c| p.contains(c) || x.drops.of(c, e).intersects(p))
            }
            Structure::Ges(x) => {
                !x.conflict.of(e).intersects(p.with(e))
                    && x.causes.of(e).is_subset(p)
                    && x.adds.causes_effectively_modified_by(p, e).is_subset(p)
            }
            Structure::Des(x) => {
                !x.conflict.of(e).intersects(p.with(e)) && x.bundles.satisfied(p, e)
            }
            Structure::Bes(x) => {
                !x.conflict.of(e).intersects(p.with(e)) && x.bundles.satisfied(p, e)
            }
            Structure::Ebes(x) => !x.disabling.of(e).intersects(p) && x.bundles.satisfied(p, e),
            Structure::Rces(x) => rces_step(x, p, p.with(e)),
            Structure::Dces(_) => unreachable!("DCES traces depend on the causal state"),
        };
        if ok {
            out.insert(e);
        }
    }
    out
}

/// `X → Y` in an RCES: `X ⊆ Y` and every `Z` with `X ⊆ Z ⊆ Y` is enabled
/// by some `W ⊆ X`.
pub fn rces_step(r: &Rces, x: EventSet, y: EventSet) -> bool {
    x.is_subset(y)
        && y.difference(x)
            .subsets()
            .all(|d| r.enablings.enabled_from(x, x.union(d)))
}

/// All traces. The result is prefix-closed.
pub fn traces(s: &Structure) -> TraceSet {
    let mut out = TraceSet::new();
    match s {
        Structure::Dces(d) => {
            let mut stack = vec![(Vec::new(), DcesState::initial(d))];
            while let Some((seq, st)) = stack.pop() {
                for e in st.ready(d).iter() {
                    if let Some(next) = dces::step(d, &st, EventSet::singleton(e)) {
                        let mut seq2 = seq.clone();
                        seq2.push(e);
                        stack.push((seq2, next));
                    }
                }
                out.insert(Trace(seq));
            }
        }
        _ => {
            let mut stack = vec![(Vec::new(), EventSet::EMPTY)];
            while let Some((seq, p)) = stack.pop() {
                for e in enabled_after(s, p).iter() {
                    let mut seq2 = seq.clone();
                    seq2.push(e);
                    stack.push((seq2, p.with(e)));
                }
                out.insert(Trace(seq));
            }
        }
    }
    out
}

/// Trace-based or transition-based configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigMode {
    Trace,
    Step,
}

/// Configurations, ordered by [`cmp_sets`] when collected through
/// [`sorted_sets`].
pub fn configurations(s: &Structure, mode: ConfigMode) -> BTreeSet<EventSet> {
    match (mode, s) {
        (ConfigMode::Trace, Structure::Dces(d)) => dces::single_step_configurations(d),
        (ConfigMode::Trace, _) => trace_configurations(s),
        (ConfigMode::Step, _) => transition_graph(s).nodes,
    }
}

/// Sets reachable by single-event extensions, for set-determined families.
pub(crate) fn trace_configurations(s: &Structure) -> BTreeSet<EventSet> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([EventSet::EMPTY]);
    seen.insert(EventSet::EMPTY);
    while let Some(p) = queue.pop_front() {
        for e in enabled_after(s, p).iter() {
            let q = p.with(e);
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen
}

pub fn sorted_sets(sets: impl IntoIterator<Item = EventSet>) -> Vec<EventSet> {
    let mut v: Vec<_> = sets.into_iter().collect();
    v.sort_by(|a, b| cmp_sets(*a, *b));
    v.dedup();
    v
}

/// Reachable configurations and every step between them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransitionGraph {
    pub nodes: BTreeSet<EventSet>,
    pub edges: BTreeSet<(EventSet, EventSet)>,
}

/// `X → Y` for the families with a set-level step rule (SES, GES, RCES).
pub fn step(s: &Structure, x: EventSet, y: EventSet) -> Result<bool> {
    if !x.is_subset(y) {
        return Ok(false);
    }
    let fresh = y.difference(x);
    Ok(match s {
        Structure::Ses(v) => {
            v.conflict.is_conflict_free(y)
                && fresh.iter().all(|e| {
                    v.causes
                        .of(e)
                        .iter()
                        .all(|c| x.contains(c) || v.drops.of(c, e).intersects(x))
                })
        }
        Structure::Ges(v) => {
            v.conflict.is_conflict_free(y)
                && fresh.iter().all(|e| {
                    v.causes.of(e).is_subset(x)
                        && v.adds.causes_effectively_modified_by(x, e).is_subset(x)
                        && v.adds.causes_effectively_modified_by(fresh, e).is_subset(x)
                })
        }
        Structure::Rces(r) => rces_step(r, x, y),
        _ => {
            return Err(Error::Unsupported {
                op: "set-level steps",
                family: s.family(),
            })
        }
    })
}

/// The transition graph. SES, GES and RCES use their step rules, DCES the
/// projection of the state graph, and the bundle families single-event
/// extensions of traces.
pub fn transition_graph(s: &Structure) -> TransitionGraph {
    let mut g = TransitionGraph::default();
    match s {
        Structure::Dces(d) => {
            let sg = dces_state_graph(d);
            g.nodes = sg.nodes.iter().map(|n| n.config).collect();
            g.edges = sg.edges.iter().map(|(a, b)| (a.config, b.config)).collect();
        }
        Structure::Des(_) | Structure::Bes(_) | Structure::Ebes(_) => {
            g.nodes = trace_configurations(s);
            for &p in &g.nodes {
                for e in enabled_after(s, p).iter() {
                    g.edges.insert((p, p.with(e)));
                }
            }
        }
        _ => {
            let all = s.events().all();
            let mut queue = VecDeque::from([EventSet::EMPTY]);
            g.nodes.insert(EventSet::EMPTY);
            while let Some(x) = queue.pop_front() {
                for d in all.difference(x).subsets() {
                    let y = x.union(d);
                    if step(s, x, y).expect("set-level family") {
                        g.edges.insert((x, y));
                        if g.nodes.insert(y) {
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
    }
    g
}

/// Families with a trace semantics determined by the prefix set.
pub fn is_set_determined(f: Family) -> bool {
    f != Family::Dces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_structure;

    fn names(s: &Structure, ts: &TraceSet) -> BTreeSet<String> {
        ts.iter().map(|t| t.names(s.events()).concat()).collect()
    }

    #[test]
    fn sigma_xi_traces() {
        let s =
            parse_structure("structure s : SES\nevents a b c\ncause a -> b\ndrop [a -> b] by c\n")
                .unwrap();
        let got = names(&s, &traces(&s));
        let want: BTreeSet<String> = [
            "", "a", "c", "ab", "ac", "ca", "cb", "abc", "acb", "cab", "cba",
        ]
        .into_iter()
        .map(String::from)
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn relation_free_ses_has_full_lattice() {
        let s = parse_structure("structure s : SES\nevents e f\n").unwrap();
        let g = transition_graph(&s);
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.edges.len(), 9);
    }

    #[test]
    fn trace_order_is_shortlex() {
        assert!(Trace(vec![5]) < Trace(vec![0, 1]));
        assert!(Trace(vec![0, 2]) < Trace(vec![1, 0]));
    }
}
