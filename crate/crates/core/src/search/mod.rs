//! Exhaustive search over all structures of a family on a fixed alphabet,
//! and the registry of checkable claims.
//!
//! The search space is a product of independent choice slots: one per
//! unordered pair for conflict, one per ordered pair for causes and their
//! modifiers or for disabling, one per target for bundles. A structure is
//! identified by its mixed-radix index, which makes enumeration
//! deterministic and splittable by index range.

mod claims;
mod enumerate;
mod matcher;
pub mod random;

use std::fmt;
use std::time::Duration;

pub use claims::{
    claim_ids, filter_soundness, strip_inert, verify_claims, ClaimConfig, ClaimReport, CLAIMS,
};
pub use enumerate::{enumerate, enumerate_range, space_size, Enumeration};
pub use matcher::{find_match, find_match_range, Matcher};

use crate::error::{Error, Result};
use crate::kernel::{Alphabet, Event, EventSet, Family, Structure};

/// A pruning constraint on the search space. Each one restricts the
/// choices of some slots; [`Constraint::admits`] states the same restriction
/// on a finished structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Conflict only between the listed pairs.
    ConflictWithin(Vec<(String, String)>),
    /// No initial causes for the listed events.
    NoCausesFor(Vec<String>),
    /// `ic(target) ⊆ allowed`, and non-empty when `nonempty` is set.
    CausesWithin {
        target: String,
        allowed: Vec<String>,
        nonempty: bool,
    },
    /// A listed adder of `target` may add only itself as a cause.
    AddsOnlyBySelf { target: String, adders: Vec<String> },
    /// No drop or add triple whose modifier is its own cause or target.
    SkipInertModifiers,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::ConflictWithin(pairs) if pairs.is_empty() => f.write_str("no conflict"),
            Constraint::ConflictWithin(pairs) => {
                let p: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}#{b}")).collect();
                write!(f, "conflict within {{{}}}", p.join(", "))
            }
            Constraint::NoCausesFor(es) => write!(f, "ic = {{}} for {}", es.join(", ")),
            Constraint::CausesWithin {
                target,
                allowed,
                nonempty,
            } => {
                write!(f, "ic({target}) within {{{}}}", allowed.join(","))?;
                if *nonempty {
                    f.write_str(", non-empty")?;
                }
                Ok(())
            }
            Constraint::AddsOnlyBySelf { target, adders } => {
                write!(f, "{} add only themselves to {target}", adders.join(", "))
            }
            Constraint::SkipInertModifiers => {
                f.write_str("no modifier equal to its cause or target")
            }
        }
    }
}

/// A constraint with the name of the argument that makes it sound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filter {
    pub constraint: Constraint,
    pub justification: &'static str,
}

/// Index-level form of a constraint.
#[derive(Clone, Debug)]
pub(crate) enum Resolved {
    ConflictWithin(Vec<(Event, Event)>),
    NoCausesFor(EventSet),
    CausesWithin {
        target: Event,
        allowed: EventSet,
        nonempty: bool,
    },
    AddsOnlyBySelf {
        target: Event,
        adders: EventSet,
    },
    SkipInertModifiers,
}

impl Constraint {
    pub(crate) fn resolve(&self, ev: &Alphabet) -> Result<Resolved> {
        let set = |names: &[String]| ev.set(names.iter().map(String::as_str));
        Ok(match self {
            Constraint::ConflictWithin(pairs) => Resolved::ConflictWithin(
                pairs
                    .iter()
                    .map(|(a, b)| Ok((ev.lookup(a)?, ev.lookup(b)?)))
                    .collect::<Result<_>>()?,
            ),
            Constraint::NoCausesFor(es) => Resolved::NoCausesFor(set(es)?),
            Constraint::CausesWithin {
                target,
                allowed,
                nonempty,
            } => Resolved::CausesWithin {
                target: ev.lookup(target)?,
                allowed: set(allowed)?,
                nonempty: *nonempty,
            },
            Constraint::AddsOnlyBySelf { target, adders } => Resolved::AddsOnlyBySelf {
                target: ev.lookup(target)?,
                adders: set(adders)?,
            },
            Constraint::SkipInertModifiers => Resolved::SkipInertModifiers,
        })
    }

    /// Whether `s` satisfies the constraint. Relations a family lacks are
    /// treated as empty.
    pub fn admits(&self, s: &Structure) -> Result<bool> {
        let r = self.resolve(s.events())?;
        Ok(r.admits(s))
    }
}

/// The parts of a structure the constraints talk about.
struct View<'a> {
    conflict: Option<&'a crate::kernel::Conflict>,
    causes: Option<&'a crate::kernel::Causes>,
    drops: Option<&'a crate::kernel::Modifiers>,
    adds: Option<&'a crate::kernel::Modifiers>,
}

fn view(s: &Structure) -> View<'_> {
    let none = View {
        conflict: None,
        causes: None,
        drops: None,
        adds: None,
    };
    match s {
        Structure::Ses(x) => View {
            conflict: Some(&x.conflict),
            causes: Some(&x.causes),
            drops: Some(&x.drops),
            ..none
        },
        Structure::Ges(x) => View {
            conflict: Some(&x.conflict),
            causes: Some(&x.causes),
            adds: Some(&x.adds),
            ..none
        },
        Structure::Dces(x) => View {
            conflict: Some(&x.conflict),
            causes: Some(&x.causes),
            drops: Some(&x.drops),
            adds: Some(&x.adds),
        },
        Structure::Des(x) => View {
            conflict: Some(&x.conflict),
            ..none
        },
        Structure::Bes(x) => View {
            conflict: Some(&x.conflict),
            ..none
        },
        Structure::Ebes(_) | Structure::Rces(_) => none,
    }
}

impl Resolved {
    pub(crate) fn admits(&self, s: &Structure) -> bool {
        let v = view(s);
        let ic = |t: Event| v.causes.map_or(EventSet::EMPTY, |c| c.of(t));
        match self {
            Resolved::ConflictWithin(pairs) => v.conflict.is_none_or(|c| {
                c.pairs().into_iter().all(|(a, b)| {
                    pairs
                        .iter()
                        .any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
                })
            }),
            Resolved::NoCausesFor(es) => es.iter().all(|t| ic(t).is_empty()),
            Resolved::CausesWithin {
                target,
                allowed,
                nonempty,
            } => {
                let c = ic(*target);
                c.is_subset(*allowed) && !(*nonempty && c.is_empty())
            }
            Resolved::AddsOnlyBySelf { target, adders } => v.adds.is_none_or(|a| {
                a.triples()
                    .into_iter()
                    .all(|(c, m, t)| t != *target || !adders.contains(m) || c == m)
            }),
            Resolved::SkipInertModifiers => [v.drops, v.adds]
                .into_iter()
                .flatten()
                .all(|r| r.triples().into_iter().all(|(c, m, t)| m != c && m != t)),
        }
    }
}

/// Limits of one search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_structures: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_structures: 10_000_000,
            max_time: Duration::from_secs(120),
        }
    }
}

/// What to search: a family, a fixed alphabet and the pruning filters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub family: Family,
    pub alphabet: Alphabet,
    pub filters: Vec<Filter>,
    pub budget: Budget,
}

impl SearchSpec {
    pub fn new(family: Family, alphabet: Alphabet) -> Result<Self> {
        if family == Family::Rces {
            return Err(Error::Unsupported {
                op: "enumeration",
                family,
            });
        }
        Ok(SearchSpec {
            family,
            alphabet,
            filters: Vec::new(),
            budget: Budget::default(),
        })
    }

    /// Adds a filter.
    pub fn filter(mut self, constraint: Constraint, justification: &'static str) -> Self {
        self.filters.push(Filter {
            constraint,
            justification,
        });
        self
    }

    pub fn budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// The same search with filter `i` removed.
    pub fn without_filter(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.filters.remove(i);
        s
    }

    pub(crate) fn resolved(&self) -> Result<Vec<Resolved>> {
        self.filters
            .iter()
            .map(|f| f.constraint.resolve(&self.alphabet))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// A structure equivalent to the target, confirmed by [`crate::equiv`].
    Found(Structure),
    /// The whole space was explored without a match.
    ExhaustedNone,
    /// The budget ran out after this many structures.
    BudgetExceeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: Status,
    /// Structures compared against the target.
    pub explored: u64,
    /// Size of the index space, before post-filtering.
    pub space: u128,
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Found(s) => write!(f, "found after {} structures:\n{s}", self.explored),
            Status::ExhaustedNone => write!(
                f,
                "no match among {} structures (index space {})",
                self.explored, self.space
            ),
            Status::BudgetExceeded(n) => write!(f, "budget exceeded after {n} structures"),
        }
    }
}

/// The alphabet `a, b, c, ...` of size `n` (at most 26).
pub fn letters(n: usize) -> Alphabet {
    assert!(n <= 26, "at most 26 letter events");
    Alphabet::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
        .expect("letters are distinct tokens")
}
