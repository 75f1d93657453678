use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;

use super::enumerate::{layout, range_of, size_of};
use super::{SearchOutcome, SearchSpec, Status};
use crate::equiv::{equivalent, Kind, NamedPoset};
use crate::error::{Error, Result};
use crate::kernel::{EventSet, Structure};
use crate::semantics::{
    cmp_sets, configurations, dces_state_graph, enabled_after, is_set_determined, posets, traces,
    transition_graph, ConfigMode, StateGraph, TraceSet, TransitionGraph,
};

/// Indices per work item.
const CHUNK: u128 = 1 << 12;

enum Repr {
    /// For set-determined candidates, the events that extend each reachable
    /// prefix set; `None` when the target's traces depend on more than the
    /// prefix set, so that no such candidate matches.
    Extensions {
        table: Option<Vec<(EventSet, EventSet)>>,
        traces: TraceSet,
    },
    Configs(BTreeSet<EventSet>),
    Graph(TransitionGraph),
    States(StateGraph),
    Posets(BTreeSet<NamedPoset>),
}

/// A target's semantics under one equivalence, precomputed for repeated
/// comparison.
pub struct Matcher {
    kind: Kind,
    repr: Repr,
}

fn extension_table(ts: &TraceSet) -> Option<Vec<(EventSet, EventSet)>> {
    let mut by_trace: BTreeMap<&[usize], EventSet> = BTreeMap::new();
    for t in ts {
        by_trace.entry(t.events()).or_default();
        if let Some((&last, init)) = t.events().split_last() {
            by_trace.entry(init).or_default().insert(last);
        }
    }
    let mut by_set: BTreeMap<EventSet, EventSet> = BTreeMap::new();
    for (t, ext) in by_trace {
        let p: EventSet = t.iter().copied().collect();
        if *by_set.entry(p).or_insert(ext) != ext {
            return None;
        }
    }
    let mut table: Vec<_> = by_set.into_iter().collect();
    table.sort_by(|a, b| cmp_sets(a.0, b.0));
    Some(table)
}

fn named(s: &Structure, mode: crate::semantics::PosetMode) -> Result<BTreeSet<NamedPoset>> {
    Ok(posets(s, mode)?
        .iter()
        .map(|p| NamedPoset::new(p, s.events()))
        .collect())
}

impl Matcher {
    pub fn new(target: &Structure, kind: Kind) -> Result<Self> {
        let repr = match kind {
            Kind::Trace => {
                let ts = traces(target);
                Repr::Extensions {
                    table: extension_table(&ts),
                    traces: ts,
                }
            }
            Kind::Config => Repr::Configs(configurations(target, ConfigMode::Trace)),
            Kind::Transition => Repr::Graph(transition_graph(target)),
            Kind::State => {
                let d = target.as_dces().ok_or(Error::Unsupported {
                    op: "state-transition equivalence",
                    family: target.family(),
                })?;
                Repr::States(dces_state_graph(d))
            }
            Kind::Poset(mode) => Repr::Posets(named(target, mode)?),
        };
        Ok(Matcher { kind, repr })
    }

    /// Whether `s` is `kind`-equivalent to the target. Alphabets are assumed
    /// equal for all kinds but posets.
    pub fn matches(&self, s: &Structure) -> Result<bool> {
        Ok(match &self.repr {
            Repr::Extensions { table, traces: ts } => {
                if is_set_determined(s.family()) {
                    match table {
                        Some(table) => table.iter().all(|&(p, ext)| enabled_after(s, p) == ext),
                        None => false,
                    }
                } else {
                    traces(s) == *ts
                }
            }
            Repr::Configs(c) => configurations(s, ConfigMode::Trace) == *c,
            Repr::Graph(g) => transition_graph(s) == *g,
            Repr::States(g) => {
                let d = s.as_dces().ok_or(Error::Unsupported {
                    op: "state-transition equivalence",
                    family: s.family(),
                })?;
                let h = dces_state_graph(d);
                h.nodes == g.nodes && h.edges == g.edges
            }
            Repr::Posets(p) => match self.kind {
                Kind::Poset(mode) => named(s, mode)? == *p,
                _ => unreachable!(),
            },
        })
    }
}

fn check_alphabet(spec: &SearchSpec, target: &Structure, kind: Kind) -> Result<()> {
    if !matches!(kind, Kind::Poset(_)) && spec.alphabet != *target.events() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Scans `start..end`; returns the structures compared and the first
/// confirmed match with its index.
fn scan(
    layout: &std::sync::Arc<super::enumerate::Layout>,
    matcher: &Matcher,
    target: &Structure,
    kind: Kind,
    start: u128,
    end: u128,
) -> Result<(u64, Option<(u128, Structure)>)> {
    let mut it = range_of(layout, start, end);
    let mut count = 0;
    while let Some((i, s)) = it.next_indexed() {
        count += 1;
        if matcher.matches(&s)? && equivalent(target, &s, kind)?.equal {
            return Ok((count, Some((i, s))));
        }
    }
    Ok((count, None))
}

/// [`find_match`] restricted to the index range `start..end`, without a
/// budget. Returns the structures compared and the first match.
pub fn find_match_range(
    spec: &SearchSpec,
    target: &Structure,
    kind: Kind,
    start: u128,
    end: u128,
) -> Result<(u64, Option<(u128, Structure)>)> {
    check_alphabet(spec, target, kind)?;
    let layout = layout(spec)?;
    let matcher = Matcher::new(target, kind)?;
    scan(&layout, &matcher, target, kind, start, end)
}

/// Searches the spec's space in index order for a structure equivalent to
/// `target`. Work is split into fixed chunks evaluated in parallel and merged
/// in index order, so the outcome and the count do not depend on the
/// number of threads.
pub fn find_match(spec: &SearchSpec, target: &Structure, kind: Kind) -> Result<SearchOutcome> {
    check_alphabet(spec, target, kind)?;
    let layout = layout(spec)?;
    let matcher = Matcher::new(target, kind)?;
    let size = size_of(&layout);
    let chunks_per_wave = (rayon::current_num_threads() as u128 * 4).max(16);
    let started = Instant::now();
    let mut explored = 0u64;
    let mut next = 0u128;
    while next < size {
        if explored >= spec.budget.max_structures || started.elapsed() > spec.budget.max_time {
            return Ok(SearchOutcome {
                status: Status::BudgetExceeded(explored),
                explored,
                space: size,
            });
        }
        let ranges: Vec<(u128, u128)> = (0..chunks_per_wave)
            .map(|i| next + i * CHUNK)
            .take_while(|&a| a < size)
            .map(|a| (a, (a + CHUNK).min(size)))
            .collect();
        next = ranges.last().map_or(size, |r| r.1);
        let results: Vec<_> = ranges
            .par_iter()
            .map(|&(a, b)| scan(&layout, &matcher, target, kind, a, b))
            .collect();
        for r in results {
            let (count, found) = r?;
            explored += count;
            if let Some((_, s)) = found {
                return Ok(SearchOutcome {
                    status: Status::Found(s),
                    explored,
                    space: size,
                });
            }
        }
    }
    Ok(SearchOutcome {
        status: Status::ExhaustedNone,
        explored,
        space: size,
    })
}
