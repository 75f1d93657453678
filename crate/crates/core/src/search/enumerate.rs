use std::sync::Arc;

use super::{Resolved, SearchSpec};
use crate::error::{Error, Result};
use crate::kernel::{Alphabet, Bundles, Event, EventSet, Family, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Key {
    Conflict(Event, Event),
    Disable(Event, Event),
    Pair { cause: Event, target: Event },
    Bundles(Event),
}

/// The causal choice for one ordered pair `(cause, target)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct PairChoice {
    cause: bool,
    drops: EventSet,
    adds: EventSet,
}

/// Raw codes per pair:
/// SES `0` = no cause, `1 + D` = cause dropped by `D`;
/// GES `cause_bit + 2·A`;
/// DCES `D < 2^n` = cause dropped by `D`, `2^n` = nothing,
/// above that a non-empty adder set with droppers.
fn pair_size(family: Family, n: usize) -> u64 {
    let p = 1u64 << n;
    match family {
        Family::Ses => 1 + p,
        Family::Ges => 2 * p,
        Family::Dces => p + 1 + (p - 1) * p,
        _ => unreachable!("only cause families have pair slots"),
    }
}

fn decode_pair(family: Family, n: usize, raw: u64) -> PairChoice {
    let p = 1u64 << n;
    let none = PairChoice {
        cause: false,
        drops: EventSet::EMPTY,
        adds: EventSet::EMPTY,
    };
    match family {
        Family::Ses if raw == 0 => none,
        Family::Ses => PairChoice {
            cause: true,
            drops: EventSet::from_bits(raw - 1),
            ..none
        },
        Family::Ges => PairChoice {
            cause: raw & 1 == 1,
            adds: EventSet::from_bits(raw >> 1),
            ..none
        },
        Family::Dces if raw < p => PairChoice {
            cause: true,
            drops: EventSet::from_bits(raw),
            ..none
        },
        Family::Dces if raw == p => none,
        Family::Dces => {
            let r = raw - p - 1;
            PairChoice {
                cause: false,
                drops: EventSet::from_bits(r % p),
                adds: EventSet::from_bits(r / p + 1),
            }
        }
        _ => unreachable!("only cause families have pair slots"),
    }
}

fn pair_allowed(r: &Resolved, cause: Event, target: Event, ch: PairChoice) -> bool {
    match r {
        Resolved::NoCausesFor(es) => !(ch.cause && es.contains(target)),
        Resolved::CausesWithin {
            target: t, allowed, ..
        } => target != *t || !ch.cause || allowed.contains(cause),
        Resolved::AddsOnlyBySelf { target: t, adders } => {
            target != *t
                || ch
                    .adds
                    .intersection(*adders)
                    .is_subset(EventSet::singleton(cause))
        }
        Resolved::SkipInertModifiers => {
            let inert = EventSet::singleton(cause).with(target);
            !ch.drops.intersects(inert) && !ch.adds.intersects(inert)
        }
        Resolved::ConflictWithin(_) => true,
    }
}

struct Slot {
    key: Key,
    /// Allowed raw codes, or `None` for all of `0..radix`.
    values: Option<Vec<u64>>,
    radix: u64,
}

/// The slot decomposition of a search space.
pub(crate) struct Layout {
    family: Family,
    alphabet: Alphabet,
    slots: Vec<Slot>,
    /// Non-empty subsets of `E ∖ {t}`, per target `t`; bit `i` of a bundle
    /// slot's code selects the `i`-th.
    bundle_choices: Vec<Vec<EventSet>>,
    /// Constraints that slots alone cannot express.
    post: Vec<Resolved>,
    size: u128,
}

impl Layout {
    pub(crate) fn new(spec: &SearchSpec) -> Result<Layout> {
        let family = spec.family;
        let ev = spec.alphabet.clone();
        let n = ev.len();
        let resolved = spec.resolved()?;
        let too_large = || Error::SearchSpace(format!("{family} on {n} events"));
        if n > 7 {
            return Err(too_large());
        }
        let mut slots = Vec::new();
        let conflict_allowed = |a: Event, b: Event| {
            resolved.iter().all(|r| match r {
                Resolved::ConflictWithin(ps) => ps
                    .iter()
                    .any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b)),
                _ => true,
            })
        };
        if matches!(
            family,
            Family::Ses | Family::Ges | Family::Dces | Family::Des | Family::Bes
        ) {
            for a in 0..n {
                for b in a + 1..n {
                    let values = if conflict_allowed(a, b) {
                        vec![0, 1]
                    } else {
                        vec![0]
                    };
                    slots.push(Slot {
                        key: Key::Conflict(a, b),
                        radix: values.len() as u64,
                        values: Some(values),
                    });
                }
            }
        }
        match family {
            Family::Ses | Family::Ges | Family::Dces => {
                for target in 0..n {
                    for cause in 0..n {
                        let values: Vec<u64> = (0..pair_size(family, n))
                            .filter(|&raw| {
                                let ch = decode_pair(family, n, raw);
                                resolved.iter().all(|r| pair_allowed(r, cause, target, ch))
                            })
                            .collect();
                        slots.push(Slot {
                            key: Key::Pair { cause, target },
                            radix: values.len() as u64,
                            values: Some(values),
                        });
                    }
                }
            }
            Family::Ebes => {
                for x in 0..n {
                    for y in (0..n).filter(|&y| y != x) {
                        slots.push(Slot {
                            key: Key::Disable(x, y),
                            values: None,
                            radix: 2,
                        });
                    }
                }
            }
            _ => {}
        }
        let mut bundle_choices = vec![Vec::new(); n];
        if matches!(family, Family::Des | Family::Bes | Family::Ebes) {
            for (t, choices) in bundle_choices.iter_mut().enumerate() {
                *choices = ev
                    .all()
                    .without(t)
                    .subsets()
                    .filter(|s| !s.is_empty())
                    .collect();
                slots.push(Slot {
                    key: Key::Bundles(t),
                    values: None,
                    radix: 1u64 << choices.len(),
                });
            }
        }
        let mut size: u128 = 1;
        for s in &slots {
            size = size.checked_mul(s.radix as u128).ok_or_else(too_large)?;
        }
        let post = resolved
            .into_iter()
            .filter(|r| matches!(r, Resolved::CausesWithin { nonempty: true, .. }))
            .collect();
        Ok(Layout {
            family,
            alphabet: ev,
            slots,
            bundle_choices,
            post,
            size,
        })
    }

    fn digits(&self, mut index: u128) -> Vec<u64> {
        self.slots
            .iter()
            .map(|s| {
                let d = (index % s.radix as u128) as u64;
                index /= s.radix as u128;
                d
            })
            .collect()
    }

    /// Advances an odometer; slot 0 is the fastest digit.
    fn advance(&self, digits: &mut [u64]) {
        for (d, s) in digits.iter_mut().zip(&self.slots) {
            *d += 1;
            if *d < s.radix {
                return;
            }
            *d = 0;
        }
    }

    fn build(&self, digits: &[u64]) -> Structure {
        let n = self.alphabet.len();
        let mut st = Structure::empty(self.family, "candidate", self.alphabet.clone());
        let mut bundles = Bundles::new(n);
        for (slot, &d) in self.slots.iter().zip(digits) {
            let raw = slot.values.as_ref().map_or(d, |v| v[d as usize]);
            match slot.key {
                Key::Conflict(a, b) if raw == 1 => match &mut st {
                    Structure::Ses(x) => x.conflict.insert(a, b),
                    Structure::Ges(x) => x.conflict.insert(a, b),
                    Structure::Dces(x) => x.conflict.insert(a, b),
                    Structure::Des(x) => x.conflict.insert(a, b),
                    Structure::Bes(x) => x.conflict.insert(a, b),
                    _ => unreachable!(),
                },
                Key::Conflict(..) => {}
                Key::Disable(x, y) if raw == 1 => {
                    if let Structure::Ebes(s) = &mut st {
                        s.disabling.insert(x, y);
                    }
                }
                Key::Disable(..) => {}
                Key::Pair { cause, target } => {
                    let ch = decode_pair(self.family, n, raw);
                    match &mut st {
                        Structure::Ses(x) => {
                            if ch.cause {
                                x.causes.insert(cause, target);
                                x.drops.set(cause, target, ch.drops);
                            }
                        }
                        Structure::Ges(x) => {
                            if ch.cause {
                                x.causes.insert(cause, target);
                            }
                            x.adds.set(cause, target, ch.adds);
                        }
                        Structure::Dces(x) => {
                            if ch.cause {
                                x.causes.insert(cause, target);
                            }
                            x.drops.set(cause, target, ch.drops);
                            x.adds.set(cause, target, ch.adds);
                        }
                        _ => unreachable!(),
                    }
                }
                Key::Bundles(t) => {
                    let list: Vec<EventSet> = EventSet::from_bits(raw)
                        .iter()
                        .map(|i| self.bundle_choices[t][i])
                        .collect();
                    bundles.set(t, list);
                }
            }
        }
        match &mut st {
            Structure::Des(x) => x.bundles = bundles,
            Structure::Bes(x) => x.bundles = bundles,
            Structure::Ebes(x) => x.bundles = bundles,
            _ => {}
        }
        st
    }

    /// Stability for BES and EBES, plus the constraints slots cannot express.
    fn keep(&self, s: &Structure) -> bool {
        let stable = match s {
            Structure::Bes(x) => x.bundles.all().into_iter().all(|(m, _)| {
                m.iter()
                    .all(|a| m.iter().all(|b| a == b || x.conflict.contains(a, b)))
            }),
            Structure::Ebes(x) => x.bundles.all().into_iter().all(|(m, _)| {
                m.iter()
                    .all(|a| m.iter().all(|b| a == b || x.disabling.mutual(a, b)))
            }),
            _ => true,
        };
        stable && self.post.iter().all(|r| r.admits(s))
    }
}

/// Number of slot combinations of the spec, before the stability and
/// non-emptiness post-filters.
pub fn space_size(spec: &SearchSpec) -> Result<u128> {
    Ok(Layout::new(spec)?.size)
}

/// A stream of structures in index order.
pub struct Enumeration {
    layout: Arc<Layout>,
    digits: Vec<u64>,
    next: u128,
    end: u128,
    limit: Option<u64>,
    emitted: u64,
    truncated: bool,
}

impl Enumeration {
    fn new(layout: Arc<Layout>, start: u128, end: u128, limit: Option<u64>) -> Self {
        let end = end.min(layout.size);
        let start = start.min(end);
        Enumeration {
            digits: layout.digits(start),
            layout,
            next: start,
            end,
            limit,
            emitted: 0,
            truncated: false,
        }
    }

    /// The next structure with its index.
    pub fn next_indexed(&mut self) -> Option<(u128, Structure)> {
        while self.next < self.end {
            if self.limit.is_some_and(|l| self.emitted >= l) {
                self.truncated = true;
                return None;
            }
            let index = self.next;
            let s = self.layout.build(&self.digits);
            self.layout.advance(&mut self.digits);
            self.next += 1;
            if self.layout.keep(&s) {
                self.emitted += 1;
                return Some((index, s));
            }
        }
        None
    }

    /// True when the structure budget stopped the stream early.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    pub fn space(&self) -> u128 {
        self.layout.size
    }
}

impl Iterator for Enumeration {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        self.next_indexed().map(|(_, s)| s)
    }
}

/// Every structure of the spec, each once, in index order; stops after the
/// budget's structure limit.
pub fn enumerate(spec: &SearchSpec) -> Result<Enumeration> {
    let layout = Arc::new(Layout::new(spec)?);
    let size = layout.size;
    Ok(Enumeration::new(
        layout,
        0,
        size,
        Some(spec.budget.max_structures),
    ))
}

/// The structures whose indices lie in `start..end`, without a budget.
pub fn enumerate_range(spec: &SearchSpec, start: u128, end: u128) -> Result<Enumeration> {
    Ok(Enumeration::new(
        Arc::new(Layout::new(spec)?),
        start,
        end,
        None,
    ))
}

pub(crate) fn layout(spec: &SearchSpec) -> Result<Arc<Layout>> {
    Ok(Arc::new(Layout::new(spec)?))
}

pub(crate) fn range_of(layout: &Arc<Layout>, start: u128, end: u128) -> Enumeration {
    Enumeration::new(layout.clone(), start, end, None)
}

pub(crate) fn size_of(layout: &Layout) -> u128 {
    layout.size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::validate;
    use crate::search::letters;

    #[test]
    fn empty_alphabet_has_one_structure() {
        for f in [
            Family::Ses,
            Family::Ges,
            Family::Dces,
            Family::Des,
            Family::Bes,
            Family::Ebes,
        ] {
            let spec = SearchSpec::new(f, letters(0)).unwrap();
            assert_eq!(enumerate(&spec).unwrap().count(), 1, "{f}");
        }
    }

    #[test]
    fn pair_codes_are_distinct_and_valid() {
        for f in [Family::Ses, Family::Ges, Family::Dces] {
            for n in 1..=3 {
                let mut seen = std::collections::BTreeSet::new();
                for raw in 0..pair_size(f, n) {
                    let c = decode_pair(f, n, raw);
                    assert!(seen.insert((c.cause, c.drops, c.adds)));
                    if f == Family::Dces {
                        assert!(!(c.cause && !c.adds.is_empty()));
                        assert!(c.drops.is_empty() || c.cause || !c.adds.is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn emitted_structures_validate() {
        for f in [
            Family::Ses,
            Family::Ges,
            Family::Dces,
            Family::Des,
            Family::Bes,
            Family::Ebes,
        ] {
            let spec = SearchSpec::new(f, letters(2)).unwrap();
            for s in enumerate(&spec).unwrap() {
                assert!(validate(&s).ok, "{s}");
            }
        }
    }
}
