//! Seeded random generators of valid structures, for property checks.
//! Relations are drawn sparsely so that most events stay possible.

use rand::Rng;

use super::letters;
use crate::kernel::{Bes, Ebes};
use crate::kernel::{Dces, Des, EventSet, Family, Ges, Rces, Ses, Structure};

/// Inclusion probabilities of relation elements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Density {
    pub conflict: f64,
    pub cause: f64,
    pub modifier: f64,
    pub disabling: f64,
    /// Probability of each of up to two bundles per target.
    pub bundle: f64,
}

impl Default for Density {
    fn default() -> Self {
        Density {
            conflict: 0.15,
            cause: 0.3,
            modifier: 0.3,
            disabling: 0.2,
            bundle: 0.35,
        }
    }
}

fn subset(n: usize, p: f64, rng: &mut impl Rng) -> EventSet {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

fn nonempty_subset(within: EventSet, p: f64, rng: &mut impl Rng) -> Option<EventSet> {
    if within.is_empty() {
        return None;
    }
    let all: Vec<_> = within.iter().collect();
    let mut s: EventSet = all.iter().copied().filter(|_| rng.gen_bool(p)).collect();
    if s.is_empty() {
        s.insert(all[rng.gen_range(0..all.len())]);
    }
    Some(s)
}

pub fn random_ses(n: usize, d: &Density, rng: &mut impl Rng) -> Ses {
    let mut s = Ses::new("random", letters(n));
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(d.conflict) {
                s.conflict.insert(a, b);
            }
        }
    }
    for t in 0..n {
        for c in 0..n {
            if rng.gen_bool(d.cause) {
                s.causes.insert(c, t);
                s.drops.set(c, t, subset(n, d.modifier, rng));
            }
        }
    }
    s
}

pub fn random_ges(n: usize, d: &Density, rng: &mut impl Rng) -> Ges {
    let mut g = Ges::new("random", letters(n));
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(d.conflict) {
                g.conflict.insert(a, b);
            }
        }
    }
    for t in 0..n {
        for c in 0..n {
            if rng.gen_bool(d.cause) {
                g.causes.insert(c, t);
            }
            g.adds.set(c, t, subset(n, d.modifier / 2.0, rng));
        }
    }
    g
}

/// Any valid DCES: a pair is an initial cause, addable, or neither, and may
/// be dropped when it is one of the first two.
pub fn random_dces(n: usize, d: &Density, rng: &mut impl Rng) -> Dces {
    dces_with(n, d, rng, false)
}

/// A DCES where no pair is both addable and droppable.
pub fn random_ssdc(n: usize, d: &Density, rng: &mut impl Rng) -> Dces {
    dces_with(n, d, rng, true)
}

fn dces_with(n: usize, d: &Density, rng: &mut impl Rng, single_state: bool) -> Dces {
    let mut x = Dces::new("random", letters(n));
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(d.conflict) {
                x.conflict.insert(a, b);
            }
        }
    }
    for t in 0..n {
        for c in 0..n {
            let cause = rng.gen_bool(d.cause);
            let adds = if cause {
                EventSet::EMPTY
            } else {
                subset(n, d.modifier / 2.0, rng)
            };
            if cause {
                x.causes.insert(c, t);
            }
            x.adds.set(c, t, adds);
            if cause || (!adds.is_empty() && !single_state) {
                x.drops.set(c, t, subset(n, d.modifier / 2.0, rng));
            }
        }
    }
    x
}

/// An EBDC: adds only self-causes, drop groups pairwise conflicting.
pub fn random_ebdc(n: usize, d: &Density, rng: &mut impl Rng) -> Dces {
    let mut x = Dces::new("random", letters(n));
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(d.conflict) {
                x.conflict.insert(a, b);
            }
        }
    }
    for t in 0..n {
        for c in 0..n {
            if rng.gen_bool(d.cause) {
                x.causes.insert(c, t);
                let droppers = subset(n, d.modifier / 2.0, rng);
                x.drops.set(c, t, droppers);
                if !droppers.is_empty() {
                    let group: Vec<_> = droppers.with(c).iter().collect();
                    for (i, &u) in group.iter().enumerate() {
                        for &v in &group[i + 1..] {
                            x.conflict.insert(u, v);
                        }
                    }
                }
            }
        }
    }
    for c in 0..n {
        if !x.causes.contains(c, c) {
            let adders = subset(n, d.modifier / 3.0, rng).without(c);
            x.adds.set(c, c, adders);
        }
    }
    x
}

fn bundles_for(n: usize, d: &Density, rng: &mut impl Rng) -> Vec<(EventSet, usize)> {
    let mut out = Vec::new();
    for t in 0..n {
        for _ in 0..2 {
            if rng.gen_bool(d.bundle) {
                if let Some(b) = nonempty_subset(EventSet::full(n).without(t), 0.4, rng) {
                    out.push((b, t));
                }
            }
        }
    }
    out
}

pub fn random_des(n: usize, d: &Density, rng: &mut impl Rng) -> Des {
    let mut x = Des::new("random", letters(n));
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(d.conflict) {
                x.conflict.insert(a, b);
            }
        }
    }
    for (b, t) in bundles_for(n, d, rng) {
        x.bundles.insert(b, t);
    }
    x
}

/// Bundle members are made pairwise conflicting.
pub fn random_bes(n: usize, d: &Density, rng: &mut impl Rng) -> Bes {
    let des = random_des(n, d, rng);
    let mut x = Bes::new("random", des.events);
    x.conflict = des.conflict;
    for (b, t) in des.bundles.all() {
        for u in b.iter() {
            for v in b.iter().filter(|&v| v > u) {
                x.conflict.insert(u, v);
            }
        }
        x.bundles.insert(b, t);
    }
    x
}

/// Bundle members are made mutually disabling.
pub fn random_ebes(n: usize, d: &Density, rng: &mut impl Rng) -> Ebes {
    let mut x = Ebes::new("random", letters(n));
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            if rng.gen_bool(d.disabling) {
                x.disabling.insert(a, b);
            }
        }
    }
    for (b, t) in bundles_for(n, d, rng) {
        for u in b.iter() {
            for v in b.iter().filter(|&v| v != u) {
                x.disabling.insert(u, v);
            }
        }
        x.bundles.insert(b, t);
    }
    x
}

/// Random enablings, always including `∅ ⊢ ∅`.
pub fn random_rces(n: usize, rng: &mut impl Rng) -> Rces {
    let mut r = Rces::new("random", letters(n));
    r.enablings.insert(EventSet::EMPTY, EventSet::EMPTY);
    let all = EventSet::full(n);
    for w in all.subsets() {
        for z in all.subsets() {
            if rng.gen_bool(0.08) {
                r.enablings.insert(w, z);
            }
        }
    }
    r
}

/// A random valid structure of `family` on the events `a, b, ...`.
pub fn random_structure(family: Family, n: usize, rng: &mut impl Rng) -> Structure {
    let d = Density::default();
    match family {
        Family::Ses => random_ses(n, &d, rng).into(),
        Family::Ges => random_ges(n, &d, rng).into(),
        Family::Dces => random_dces(n, &d, rng).into(),
        Family::Des => random_des(n, &d, rng).into(),
        Family::Bes => random_bes(n, &d, rng).into(),
        Family::Ebes => random_ebes(n, &d, rng).into(),
        Family::Rces => random_rces(n, rng).into(),
    }
}

/// Toggles one relation element of an SES, keeping it valid: a conflict
/// pair, an initial cause (with its droppers) or one dropper.
pub fn mutate_ses(s: &Ses, rng: &mut impl Rng) -> Ses {
    let n = s.events.len();
    let mut m = s.clone();
    if n == 0 {
        return m;
    }
    let (c, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
    match rng.gen_range(0..3) {
        0 if c != t => {
            let mut k = crate::kernel::Conflict::new(n);
            for (a, b) in s.conflict.pairs() {
                if (a, b) != (c.min(t), c.max(t)) {
                    k.insert(a, b);
                }
            }
            if !s.conflict.contains(c, t) {
                k.insert(c, t);
            }
            m.conflict = k;
        }
        1 => {
            let mut k = crate::kernel::Causes::new(n);
            for (a, b) in s.causes.pairs() {
                if (a, b) != (c, t) {
                    k.insert(a, b);
                }
            }
            if s.causes.contains(c, t) {
                m.drops.set(c, t, EventSet::EMPTY);
            } else {
                k.insert(c, t);
            }
            m.causes = k;
        }
        _ => {
            if s.causes.contains(c, t) {
                let x = rng.gen_range(0..n);
                let cur = s.drops.of(c, t);
                m.drops.set(
                    c,
                    t,
                    if cur.contains(x) {
                        cur.without(x)
                    } else {
                        cur.with(x)
                    },
                );
            }
        }
    }
    m
}
