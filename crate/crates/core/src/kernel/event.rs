use std::fmt;

use crate::error::Error;

/// Index of an event inside its structure's [`Alphabet`].
pub type Event = usize;

/// Largest alphabet a structure may carry; sets of events are single machine words.
pub const MAX_EVENTS: usize = 64;

/// The name of an event: a non-empty token over `[A-Za-z0-9_]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(String);

impl EventId {
    pub fn new(name: impl Into<String>) -> Result<Self, Error> {
        let name = name.into();
        if is_token(&name) {
            Ok(EventId(name))
        } else {
            Err(Error::InvalidEventName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// A set of events of one structure, as a bitset over event indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventSet(u64);

impl EventSet {
    pub const EMPTY: EventSet = EventSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        EventSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn singleton(e: Event) -> Self {
        EventSet(1 << e)
    }

    /// `{0, 1, .., n-1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            EventSet(u64::MAX)
        } else {
            EventSet((1u64 << n) - 1)
        }
    }

    pub const fn contains(self, e: Event) -> bool {
        self.0 & (1 << e) != 0
    }

    pub fn insert(&mut self, e: Event) {
        self.0 |= 1 << e;
    }

    pub fn remove(&mut self, e: Event) {
        self.0 &= !(1 << e);
    }

    pub const fn with(self, e: Event) -> Self {
        EventSet(self.0 | (1 << e))
    }

    pub const fn without(self, e: Event) -> Self {
        EventSet(self.0 & !(1 << e))
    }

    pub const fn union(self, other: Self) -> Self {
        EventSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        EventSet(self.0 & other.0)
    }

    pub const fn difference(self, other: Self) -> Self {
        EventSet(self.0 & !other.0)
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, starting with the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<Event> for EventSet {
    fn from_iter<I: IntoIterator<Item = Event>>(iter: I) -> Self {
        let mut s = EventSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl IntoIterator for EventSet {
    type Item = Event;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

/// Ascending iteration over the members of an [`EventSet`].
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = Event;

    fn next(&mut self) -> Option<Event> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = EventSet;

    fn next(&mut self) -> Option<EventSet> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.mask) & self.mask;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(EventSet(cur))
    }
}

/// The events of a structure, sorted by name. Index order is name order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<EventId>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut ids = names
            .into_iter()
            .map(|n| EventId::new(n))
            .collect::<Result<Vec<_>, _>>()?;
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEvent(w[0].to_string()));
        }
        if ids.len() > MAX_EVENTS {
            return Err(Error::AlphabetTooLarge(ids.len()));
        }
        Ok(Alphabet { names: ids })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn all(&self) -> EventSet {
        EventSet::full(self.len())
    }

    pub fn name(&self, e: Event) -> &str {
        self.names[e].as_str()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.names.iter().map(EventId::as_str)
    }

    pub fn ids(&self) -> &[EventId] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<Event> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn lookup(&self, name: &str) -> Result<Event, Error> {
        self.index(name)
            .ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    pub fn set<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<EventSet, Error> {
        names.into_iter().map(|n| self.lookup(n)).collect()
    }

    pub fn set_names(&self, s: EventSet) -> Vec<&str> {
        s.iter().map(|e| self.name(e)).collect()
    }

    /// Renders a set as `{a,b}`.
    pub fn show_set(&self, s: EventSet) -> String {
        format!("{{{}}}", self.set_names(s).join(","))
    }

    /// Maps every event of `self` to its index in `other`, if all names exist there.
    pub fn embedding_into(&self, other: &Alphabet) -> Option<Vec<Event>> {
        self.names.iter().map(|n| other.index(n.as_str())).collect()
    }
}

pub(crate) fn map_set(s: EventSet, map: &[Event]) -> EventSet {
    s.iter().map(|e| map[e]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_power_set() {
        let s = EventSet::from_bits(0b1011);
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|x| x.is_subset(s)));
        assert_eq!(EventSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn alphabet_sorts_and_rejects_duplicates() {
        let a = Alphabet::new(["c", "a", "b"]).unwrap();
        assert_eq!(a.names().collect::<Vec<_>>(), ["a", "b", "c"]);
        assert_eq!(a.index("b"), Some(1));
        assert!(matches!(
            Alphabet::new(["a", "a"]),
            Err(Error::DuplicateEvent(_))
        ));
        assert!(Alphabet::new(["a-b"]).is_err());
        assert!(Alphabet::new([""]).is_err());
    }

    #[test]
    fn show_set_uses_braces() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(a.show_set(EventSet::EMPTY), "{}");
        assert_eq!(a.show_set(a.all()), "{a,b}");
    }
}
