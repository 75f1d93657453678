//! Equivalence checks with distinguishing witnesses.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::{Alphabet, EventSet, Structure};
use crate::semantics::{
    cmp_sets, configurations, dces_state_graph, posets, traces, transition_graph, ConfigMode,
    DcesState, Poset, PosetMode,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Trace,
    Config,
    Transition,
    State,
    Poset(PosetMode),
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Trace => f.write_str("trace"),
            Kind::Config => f.write_str("config"),
            Kind::Transition => f.write_str("transition"),
            Kind::State => f.write_str("state"),
            Kind::Poset(m) => write!(f, "poset:{m}"),
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    /// `trace`, `config`, `transition`, `state`, `poset` (early) or `poset:MODE`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace" => Ok(Kind::Trace),
            "config" => Ok(Kind::Config),
            "transition" => Ok(Kind::Transition),
            "state" => Ok(Kind::State),
            "poset" => Ok(Kind::Poset(PosetMode::Early)),
            _ => match s.strip_prefix("poset:") {
                Some(m) => Ok(Kind::Poset(m.parse()?)),
                None => Err(Error::Usage(format!("unknown equivalence kind `{s}`"))),
            },
        }
    }
}

/// A poset over event names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamedPoset {
    pub carrier: Vec<String>,
    /// Strict pairs `(u, e)` with `u < e`.
    pub order: Vec<(String, String)>,
}

impl NamedPoset {
    pub fn new(p: &Poset, ev: &Alphabet) -> Self {
        let mut order: Vec<(String, String)> = p
            .strict_pairs()
            .into_iter()
            .map(|(u, e)| (ev.name(u).to_string(), ev.name(e).to_string()))
            .collect();
        order.sort();
        let mut carrier: Vec<String> = ev
            .set_names(p.carrier)
            .into_iter()
            .map(String::from)
            .collect();
        carrier.sort();
        NamedPoset { carrier, order }
    }

    fn key(&self) -> (usize, usize, &Self) {
        (self.carrier.len(), self.order.len(), self)
    }
}

impl fmt::Display for NamedPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}", self.carrier.join(","))?;
        if !self.order.is_empty() {
            let pairs: Vec<String> = self.order.iter().map(|(u, e)| format!("{u}<{e}")).collect();
            write!(f, " | {}", pairs.join(", "))?;
        }
        f.write_str("}")
    }
}

/// The distinguishing item of a failed comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Trace(Vec<String>),
    Configuration(Vec<String>),
    Transition(Vec<String>, Vec<String>),
    /// A step between two DCES states, rendered as `(C, cs)`.
    StateTransition(String, String),
    Poset(NamedPoset),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |v: &[String]| format!("{{{}}}", v.join(","));
        match self {
            Item::Trace(t) if t.is_empty() => f.write_str("trace ε"),
            Item::Trace(t) => write!(f, "trace {}", t.join(" ")),
            Item::Configuration(c) => write!(f, "configuration {}", set(c)),
            Item::Transition(x, y) => write!(f, "transition {} -> {}", set(x), set(y)),
            Item::StateTransition(x, y) => write!(f, "state transition {x} -> {y}"),
            Item::Poset(p) => write!(f, "poset {p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub item: Item,
    /// True when the item belongs to the first structure only.
    pub in_first: bool,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = if self.in_first { "first" } else { "second" };
        write!(f, "{} only in the {side} structure", self.item)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub equal: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn from(witness: Option<Witness>) -> Self {
        Verdict {
            equal: witness.is_none(),
            witness,
        }
    }
}

/// The smallest element of the symmetric difference under `cmp`, and
/// whether it lies in `a`.
fn min_diff<T: Ord + Clone>(
    a: &BTreeSet<T>,
    b: &BTreeSet<T>,
    cmp: impl Fn(&T, &T) -> Ordering,
) -> Option<(T, bool)> {
    let left = a.difference(b).map(|x| (x, true));
    let right = b.difference(a).map(|x| (x, false));
    left.chain(right)
        .min_by(|x, y| cmp(x.0, y.0))
        .map(|(x, side)| (x.clone(), side))
}

fn names(ev: &Alphabet, s: EventSet) -> Vec<String> {
    ev.set_names(s).into_iter().map(String::from).collect()
}

fn cmp_pairs(a: &(EventSet, EventSet), b: &(EventSet, EventSet)) -> Ordering {
    (a.0.len() + a.1.len())
        .cmp(&(b.0.len() + b.1.len()))
        .then_with(|| cmp_sets(a.0, b.0))
        .then_with(|| cmp_sets(a.1, b.1))
}

fn cmp_states(a: &(DcesState, DcesState), b: &(DcesState, DcesState)) -> Ordering {
    cmp_pairs(&(a.0.config, a.1.config), &(b.0.config, b.1.config)).then_with(|| a.cmp(b))
}

/// Compares two structures under `kind`. All kinds but posets need the same
/// alphabet; posets are compared through event names.
pub fn equivalent(a: &Structure, b: &Structure, kind: Kind) -> Result<Verdict> {
    let ev = a.events();
    if !matches!(kind, Kind::Poset(_)) && ev != b.events() {
        return Err(Error::AlphabetMismatch);
    }
    let witness = match kind {
        Kind::Trace => min_diff(&traces(a), &traces(b), Ord::cmp).map(|(t, in_first)| Witness {
            item: Item::Trace(t.names(ev).into_iter().map(String::from).collect()),
            in_first,
        }),
        Kind::Config => min_diff(
            &configurations(a, ConfigMode::Trace),
            &configurations(b, ConfigMode::Trace),
            |x, y| cmp_sets(*x, *y),
        )
        .map(|(c, in_first)| Witness {
            item: Item::Configuration(names(ev, c)),
            in_first,
        }),
        Kind::Transition => {
            let (ga, gb) = (transition_graph(a), transition_graph(b));
            min_diff(&ga.edges, &gb.edges, cmp_pairs)
                .map(|((x, y), in_first)| Witness {
                    item: Item::Transition(names(ev, x), names(ev, y)),
                    in_first,
                })
                .or_else(|| {
                    min_diff(&ga.nodes, &gb.nodes, |x, y| cmp_sets(*x, *y)).map(|(c, in_first)| {
                        Witness {
                            item: Item::Configuration(names(ev, c)),
                            in_first,
                        }
                    })
                })
        }
        Kind::State => {
            let (Some(da), Some(db)) = (a.as_dces(), b.as_dces()) else {
                let family = if a.as_dces().is_none() {
                    a.family()
                } else {
                    b.family()
                };
                return Err(Error::Unsupported {
                    op: "state-transition equivalence",
                    family,
                });
            };
            let (ga, gb) = (dces_state_graph(da), dces_state_graph(db));
            min_diff(&ga.edges, &gb.edges, cmp_states).map(|((x, y), in_first)| Witness {
                item: Item::StateTransition(x.show(ev), y.show(ev)),
                in_first,
            })
        }
        Kind::Poset(mode) => {
            let named = |s: &Structure| -> Result<BTreeSet<NamedPoset>> {
                Ok(posets(s, mode)?
                    .iter()
                    .map(|p| NamedPoset::new(p, s.events()))
                    .collect())
            };
            let (pa, pb) = (named(a)?, named(b)?);
            min_diff(&pa, &pb, |x, y| x.key().cmp(&y.key())).map(|(p, in_first)| Witness {
                item: Item::Poset(p),
                in_first,
            })
        }
    };
    Ok(Verdict::from(witness))
}
