//! Partial-order semantics.
//!
//! Trace-based modes pick, for every position `i` of a trace, a cause set `U`
//! among the events before `i`; the poset is the reflexive-transitive closure
//! of `u ≤ e_i` for `u ∈ U`. The candidate cause sets are the hitting sets of
//! a list of clauses: the bundles of `e_i` for a DES, and
//! `{x} ∪ droppers(x, e_i)` for each initial cause `x` of an SES, each
//! restricted to the prefix.
//!
//! The precedence mode gives one poset per configuration, ordered by the
//! structure's static precedence relation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{enabled_after, trace_configurations, transition_graph};
use crate::error::{Error, Result};
use crate::kernel::{classify_dces, Alphabet, Event, EventSet, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosetMode {
    Early,
    Liberal,
    Bsat,
    Minimal,
    Late,
    Precedence,
}

impl PosetMode {
    pub const ALL: [PosetMode; 6] = [
        PosetMode::Early,
        PosetMode::Liberal,
        PosetMode::Bsat,
        PosetMode::Minimal,
        PosetMode::Late,
        PosetMode::Precedence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosetMode::Early => "early",
            PosetMode::Liberal => "liberal",
            PosetMode::Bsat => "bsat",
            PosetMode::Minimal => "minimal",
            PosetMode::Late => "late",
            PosetMode::Precedence => "precedence",
        }
    }
}

impl fmt::Display for PosetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PosetMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown poset mode `{s}`")))
    }
}

/// A partial order stored as its reflexive-transitive closure:
/// `below[e] = {u | u ≤ e}` for `e` in the carrier, empty elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poset {
    pub carrier: EventSet,
    pub below: Vec<EventSet>,
}

pub type PosetFamily = BTreeSet<Poset>;

impl Poset {
    /// Closes `base[e] = {u | u < e}` reflexively and transitively.
    pub fn from_relation(carrier: EventSet, base: &[EventSet]) -> Self {
        let mut below: Vec<EventSet> = (0..base.len())
            .map(|e| {
                if carrier.contains(e) {
                    base[e].intersection(carrier).with(e)
                } else {
                    EventSet::EMPTY
                }
            })
            .collect();
        for k in carrier.iter() {
            for e in carrier.iter() {
                if below[e].contains(k) {
                    below[e] = below[e].union(below[k]);
                }
            }
        }
        Poset { carrier, below }
    }

    pub fn leq(&self, u: Event, e: Event) -> bool {
        self.below[e].contains(u)
    }

    /// Strict pairs `(u, e)` with `u < e`.
    pub fn strict_pairs(&self) -> Vec<(Event, Event)> {
        let mut out = Vec::new();
        for e in self.carrier.iter() {
            for u in self.below[e].without(e).iter() {
                out.push((u, e));
            }
        }
        out.sort();
        out
    }

    pub fn is_partial_order(&self) -> bool {
        let c = self.carrier;
        c.iter().all(|e| {
            self.below[e].contains(e)
                && self.below[e].is_subset(c)
                && self.below[e]
                    .iter()
                    .all(|u| self.below[u].is_subset(self.below[e]))
                && self.below[e]
                    .iter()
                    .all(|u| u == e || !self.below[u].contains(e))
        })
    }

    /// The same poset over another alphabet, through an index map.
    pub fn mapped(&self, map: &[Event], n: usize) -> Poset {
        let mut below = vec![EventSet::EMPTY; n];
        for e in self.carrier.iter() {
            below[map[e]] = crate::kernel::map_set(self.below[e], map);
        }
        Poset {
            carrier: crate::kernel::map_set(self.carrier, map),
            below,
        }
    }

    /// `{a,b,c | a<b, a<c}`.
    pub fn show(&self, ev: &Alphabet) -> String {
        let pairs: Vec<String> = self
            .strict_pairs()
            .into_iter()
            .map(|(u, e)| format!("{}<{}", ev.name(u), ev.name(e)))
            .collect();
        let carrier = ev.set_names(self.carrier).join(",");
        if pairs.is_empty() {
            format!("{{{carrier}}}")
        } else {
            format!("{{{carrier} | {}}}", pairs.join(", "))
        }
    }
}

/// The poset family of `s` under `mode`.
pub fn posets(s: &Structure, mode: PosetMode) -> Result<PosetFamily> {
    let unsupported = || Error::Unsupported {
        op: match mode {
            PosetMode::Early => "early posets",
            PosetMode::Liberal => "liberal posets",
            PosetMode::Bsat => "bundle-satisfaction posets",
            PosetMode::Minimal => "minimal posets",
            PosetMode::Late => "late posets",
            PosetMode::Precedence => "precedence posets",
        },
        family: s.family(),
    };
    match (mode, s) {
        (PosetMode::Precedence, Structure::Ebes(_) | Structure::Bes(_)) => {
            Ok(precedence_posets(s, &trace_configurations(s)))
        }
        (PosetMode::Precedence, Structure::Dces(d)) => {
            if !classify_dces(d)?.is_ebdc {
                return Err(Error::NotEbdc);
            }
            Ok(precedence_posets(s, &transition_graph(s).nodes))
        }
        (PosetMode::Precedence, _) => Err(unsupported()),
        (PosetMode::Bsat, Structure::Des(_)) => Ok(trace_posets(s, mode)),
        (PosetMode::Bsat, _) => Err(unsupported()),
        (_, Structure::Des(_) | Structure::Ses(_)) => Ok(trace_posets(s, mode)),
        _ => Err(unsupported()),
    }
}

fn precedence_posets(s: &Structure, configs: &BTreeSet<EventSet>) -> PosetFamily {
    let n = s.events().len();
    let base: Vec<EventSet> = (0..n)
        .map(|e| match s {
            Structure::Ebes(x) => {
                let bundled = x
                    .bundles
                    .of(e)
                    .iter()
                    .fold(EventSet::EMPTY, |a, b| a.union(*b));
                let disablers: EventSet = (0..n).filter(|&u| x.disabling.contains(u, e)).collect();
                bundled.union(disablers)
            }
            Structure::Bes(x) => x
                .bundles
                .of(e)
                .iter()
                .fold(EventSet::EMPTY, |a, b| a.union(*b)),
            Structure::Dces(d) => {
                let mut b = d.causes.of(e);
                for u in 0..n {
                    if d.adds.contains(u, e, u) {
                        b.insert(u);
                    }
                    b = b.union(d.drops.of(u, e));
                }
                b
            }
            _ => unreachable!("precedence is checked by the caller"),
        })
        .collect();
    configs
        .iter()
        .map(|&c| Poset::from_relation(c, &base))
        .collect()
}

/// Clauses the cause set of `e` must hit after the prefix `p`.
fn clauses(s: &Structure, p: EventSet, e: Event) -> Vec<EventSet> {
    match s {
        Structure::Des(d) => d.bundles.of(e).iter().map(|b| b.intersection(p)).collect(),
        Structure::Ses(x) => x
            .causes
            .of(e)
            .iter()
            .map(|c| x.drops.of(c, e).with(c).intersection(p))
            .collect(),
        _ => unreachable!("trace posets are defined for SES and DES"),
    }
}

fn hits_all(u: EventSet, clauses: &[EventSet]) -> bool {
    clauses.iter().all(|c| c.intersects(u))
}

/// Positions in descending order; the comparison key of early and late.
fn lateness(u: EventSet, pos: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = u.iter().map(|e| pos[e]).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Candidate cause sets under `mode`, given each prefix event's position.
pub(crate) fn cause_sets(mode: PosetMode, clauses: &[EventSet], pos: &[usize]) -> Vec<EventSet> {
    let universe = clauses.iter().fold(EventSet::EMPTY, |a, c| a.union(*c));
    if mode == PosetMode::Bsat {
        let mut images = BTreeSet::from([EventSet::EMPTY]);
        let mut distinct = clauses.to_vec();
        distinct.sort();
        distinct.dedup();
        for c in distinct {
            images = images
                .iter()
                .flat_map(|i| c.iter().map(move |x| i.with(x)))
                .collect();
        }
        return images.into_iter().collect();
    }
    let hitting: Vec<EventSet> = universe
        .subsets()
        .filter(|u| hits_all(*u, clauses))
        .collect();
    if mode == PosetMode::Liberal {
        return hitting;
    }
    let minimal: Vec<EventSet> = hitting
        .into_iter()
        .filter(|u| u.iter().all(|x| !hits_all(u.without(x), clauses)))
        .collect();
    match mode {
        PosetMode::Minimal => minimal,
        PosetMode::Late => minimal
            .into_iter()
            .max_by_key(|u| lateness(*u, pos))
            .into_iter()
            .collect(),
        PosetMode::Early => minimal
            .into_iter()
            .min_by_key(|u| lateness(*u, pos))
            .into_iter()
            .collect(),
        _ => unreachable!(),
    }
}

fn trace_posets(s: &Structure, mode: PosetMode) -> PosetFamily {
    let n = s.events().len();
    let mut out = PosetFamily::new();
    let root: BTreeSet<Vec<EventSet>> = BTreeSet::from([vec![EventSet::EMPTY; n]]);
    let mut stack = vec![(EventSet::EMPTY, vec![usize::MAX; n], root)];
    while let Some((p, pos, partials)) = stack.pop() {
        for below in &partials {
            out.insert(Poset {
                carrier: p,
                below: below.clone(),
            });
        }
        for e in enabled_after(s, p).iter() {
            let options = cause_sets(mode, &clauses(s, p, e), &pos);
            let mut next = BTreeSet::new();
            for below in &partials {
                for u in &options {
                    let mut b = below.clone();
                    b[e] = u
                        .iter()
                        .fold(EventSet::singleton(e), |a, x| a.union(below[x]));
                    next.insert(b);
                }
            }
            let mut pos2 = pos.clone();
            pos2[e] = p.len();
            stack.push((p.with(e), pos2, next));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_is_transitive() {
        let base = vec![
            EventSet::EMPTY,
            EventSet::singleton(0),
            EventSet::singleton(1),
        ];
        let p = Poset::from_relation(EventSet::full(3), &base);
        assert!(p.leq(0, 2));
        assert!(p.is_partial_order());
        assert_eq!(p.strict_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn early_and_late_pick_extremes() {
        // clauses {a,b} and {b,c}; a at position 0, b at 1, c at 2.
        let clauses = [EventSet::from_bits(0b011), EventSet::from_bits(0b110)];
        let pos = [0, 1, 2];
        let min = cause_sets(PosetMode::Minimal, &clauses, &pos);
        assert_eq!(min.len(), 2); // {b}, {a,c}
        assert_eq!(
            cause_sets(PosetMode::Early, &clauses, &pos),
            vec![EventSet::from_bits(0b010)]
        );
        assert_eq!(
            cause_sets(PosetMode::Late, &clauses, &pos),
            vec![EventSet::from_bits(0b101)]
        );
        assert_eq!(cause_sets(PosetMode::Liberal, &clauses, &pos).len(), 5);
        assert_eq!(cause_sets(PosetMode::Bsat, &clauses, &pos).len(), 4);
    }

    #[test]
    fn no_clauses_means_no_causes() {
        for m in [
            PosetMode::Early,
            PosetMode::Liberal,
            PosetMode::Bsat,
            PosetMode::Minimal,
            PosetMode::Late,
        ] {
            assert_eq!(cause_sets(m, &[], &[]), vec![EventSet::EMPTY]);
        }
    }
}
