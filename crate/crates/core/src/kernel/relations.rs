//! Relation storage shared by the structure families. Every relation is kept
//! as per-event bitsets so that semantic checks are word operations.

use std::collections::{BTreeMap, BTreeSet};

use super::event::{Event, EventSet};

/// Symmetric conflict `#`. A reflexive entry is representable so that
/// validation can report it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conflict {
    adj: Vec<EventSet>,
}

impl Conflict {
    pub fn new(n: usize) -> Self {
        Conflict {
            adj: vec![EventSet::EMPTY; n],
        }
    }

    pub fn insert(&mut self, a: Event, b: Event) {
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn contains(&self, a: Event, b: Event) -> bool {
        self.adj[a].contains(b)
    }

    /// Events in conflict with `e`.
    pub fn of(&self, e: Event) -> EventSet {
        self.adj[e]
    }

    pub fn is_empty(&self) -> bool {
        self.adj.iter().all(|s| s.is_empty())
    }

    pub fn is_conflict_free(&self, set: EventSet) -> bool {
        set.iter().all(|e| !self.adj[e].intersects(set))
    }

    /// Unordered pairs `(a, b)` with `a <= b`.
    pub fn pairs(&self) -> Vec<(Event, Event)> {
        let mut out = Vec::new();
        for (a, s) in self.adj.iter().enumerate() {
            for b in s.iter().filter(|&b| b >= a) {
                out.push((a, b));
            }
        }
        out
    }
}

/// Initial causality `→`, stored by target: `of(t)` is `ic(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Causes {
    by_target: Vec<EventSet>,
}

impl Causes {
    pub fn new(n: usize) -> Self {
        Causes {
            by_target: vec![EventSet::EMPTY; n],
        }
    }

    pub fn insert(&mut self, cause: Event, target: Event) {
        self.by_target[target].insert(cause);
    }

    pub fn contains(&self, cause: Event, target: Event) -> bool {
        self.by_target[target].contains(cause)
    }

    pub fn of(&self, target: Event) -> EventSet {
        self.by_target[target]
    }

    pub fn is_empty(&self) -> bool {
        self.by_target.iter().all(|s| s.is_empty())
    }

    /// `(cause, target)` pairs in (target, cause) order.
    pub fn pairs(&self) -> Vec<(Event, Event)> {
        let mut out: Vec<_> = self
            .by_target
            .iter()
            .enumerate()
            .flat_map(|(t, s)| s.iter().map(move |c| (c, t)))
            .collect();
        out.sort();
        out
    }
}

/// Causal modifiers: the droppers `▷` or adders `↗` of each causal pair.
/// A triple is stored as `(cause, modifier, target)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modifiers {
    n: usize,
    by_pair: Vec<EventSet>,
}

impl Modifiers {
    pub fn new(n: usize) -> Self {
        Modifiers {
            n,
            by_pair: vec![EventSet::EMPTY; n * n],
        }
    }

    pub fn insert(&mut self, cause: Event, modifier: Event, target: Event) {
        self.by_pair[cause * self.n + target].insert(modifier);
    }

    pub fn contains(&self, cause: Event, modifier: Event, target: Event) -> bool {
        self.by_pair[cause * self.n + target].contains(modifier)
    }

    /// Modifiers of the pair `cause → target`.
    pub fn of(&self, cause: Event, target: Event) -> EventSet {
        self.by_pair[cause * self.n + target]
    }

    pub fn set(&mut self, cause: Event, target: Event, mods: EventSet) {
        self.by_pair[cause * self.n + target] = mods;
    }

    pub fn is_empty(&self) -> bool {
        self.by_pair.iter().all(|s| s.is_empty())
    }

    /// Causes `c` of `target` that some member of `history` modifies.
    pub fn causes_modified_by(&self, history: EventSet, target: Event) -> EventSet {
        (0..self.n)
            .filter(|&c| self.by_pair[c * self.n + target].intersects(history))
            .collect()
    }

    /// Like [`Self::causes_modified_by`] but ignoring modifiers equal to the
    /// cause or the target.
    pub fn causes_effectively_modified_by(&self, history: EventSet, target: Event) -> EventSet {
        (0..self.n)
            .filter(|&c| {
                self.by_pair[c * self.n + target]
                    .without(c)
                    .without(target)
                    .intersects(history)
            })
            .collect()
    }

    /// `(cause, modifier, target)` triples, sorted.
    pub fn triples(&self) -> Vec<(Event, Event, Event)> {
        let mut out = Vec::new();
        for c in 0..self.n {
            for t in 0..self.n {
                for m in self.by_pair[c * self.n + t].iter() {
                    out.push((c, m, t));
                }
            }
        }
        out.sort();
        out
    }
}

/// Bundles `X ↦ e`, stored by target as a sorted duplicate-free list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bundles {
    by_target: Vec<Vec<EventSet>>,
}

impl Bundles {
    pub fn new(n: usize) -> Self {
        Bundles {
            by_target: vec![Vec::new(); n],
        }
    }

    pub fn insert(&mut self, members: EventSet, target: Event) {
        let list = &mut self.by_target[target];
        if let Err(pos) = list.binary_search(&members) {
            list.insert(pos, members);
        }
    }

    pub fn of(&self, target: Event) -> &[EventSet] {
        &self.by_target[target]
    }

    pub fn set(&mut self, target: Event, mut bundles: Vec<EventSet>) {
        bundles.sort();
        bundles.dedup();
        self.by_target[target] = bundles;
    }

    pub fn is_empty(&self) -> bool {
        self.by_target.iter().all(Vec::is_empty)
    }

    pub fn count(&self) -> usize {
        self.by_target.iter().map(Vec::len).sum()
    }

    /// `(members, target)` in target order, then member order.
    pub fn all(&self) -> Vec<(EventSet, Event)> {
        self.by_target
            .iter()
            .enumerate()
            .flat_map(|(t, bs)| bs.iter().map(move |&b| (b, t)))
            .collect()
    }

    /// True when every bundle pointing at `target` meets `history`.
    pub fn satisfied(&self, history: EventSet, target: Event) -> bool {
        self.by_target[target].iter().all(|b| b.intersects(history))
    }
}

/// Disabling `x ⇝ y`: once `y` occurred, `x` can no longer occur.
/// `of(x)` is the set of all `y` with `x ⇝ y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Disabling {
    by_source: Vec<EventSet>,
}

impl Disabling {
    pub fn new(n: usize) -> Self {
        Disabling {
            by_source: vec![EventSet::EMPTY; n],
        }
    }

    pub fn insert(&mut self, x: Event, y: Event) {
        self.by_source[x].insert(y);
    }

    pub fn contains(&self, x: Event, y: Event) -> bool {
        self.by_source[x].contains(y)
    }

    pub fn of(&self, x: Event) -> EventSet {
        self.by_source[x]
    }

    pub fn is_empty(&self) -> bool {
        self.by_source.iter().all(|s| s.is_empty())
    }

    pub fn pairs(&self) -> Vec<(Event, Event)> {
        self.by_source
            .iter()
            .enumerate()
            .flat_map(|(x, s)| s.iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn mutual(&self, x: Event, y: Event) -> bool {
        self.contains(x, y) && self.contains(y, x)
    }
}

/// Set-to-set enablings `W ⊢ Z`, also indexed by `Z`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Enablings {
    pairs: BTreeSet<(EventSet, EventSet)>,
    by_target: BTreeMap<EventSet, Vec<EventSet>>,
}

impl Enablings {
    pub fn new() -> Self {
        Enablings::default()
    }

    pub fn insert(&mut self, from: EventSet, to: EventSet) {
        if self.pairs.insert((from, to)) {
            let ws = self.by_target.entry(to).or_default();
            let pos = ws.binary_search(&from).unwrap_err();
            ws.insert(pos, from);
        }
    }

    pub fn contains(&self, from: EventSet, to: EventSet) -> bool {
        self.pairs.contains(&(from, to))
    }

    /// True when some `W ⊆ history` has `W ⊢ to`.
    pub fn enabled_from(&self, history: EventSet, to: EventSet) -> bool {
        self.by_target
            .get(&to)
            .is_some_and(|ws| ws.iter().any(|w| w.is_subset(history)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(EventSet, EventSet)> + '_ {
        self.pairs.iter()
    }
}
