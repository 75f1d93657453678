//! Translations between the families.

use crate::error::{Error, Result};
use crate::kernel::{
    is_token, map_set, Alphabet, Bundles, Dces, Des, Event, EventSet, Family, Ges, Rces, Ses,
    Structure,
};
use crate::semantics::step;

/// Largest alphabet [`to_rces`] materializes.
pub const RCES_MAX_EVENTS: usize = 6;

/// Naming of the fresh events introduced for bundles. Bundles are numbered
/// by target, then by sorted members; the `i`-th bundle gets `prefix` + `i`,
/// skipping names already taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreshNamePolicy {
    pub prefix: String,
}

impl Default for FreshNamePolicy {
    fn default() -> Self {
        FreshNamePolicy {
            prefix: "_x".to_string(),
        }
    }
}

impl FreshNamePolicy {
    pub fn new(prefix: impl Into<String>) -> Result<Self> {
        let prefix = prefix.into();
        if !is_token(&prefix) {
            return Err(Error::InvalidEventName(prefix));
        }
        Ok(FreshNamePolicy { prefix })
    }

    fn names(&self, taken: &Alphabet, count: usize) -> Vec<String> {
        let mut out = Vec::with_capacity(count);
        let mut i = 1;
        while out.len() < count {
            let name = format!("{}{i}", self.prefix);
            if taken.index(&name).is_none() {
                out.push(name);
            }
            i += 1;
        }
        out
    }
}

/// The RCES whose enablings are `{X ⊢ Z | ∃Y. X → Y ∧ Z ⊆ Y}`, over every
/// set `X` of events.
pub fn to_rces(s: &Structure) -> Result<Rces> {
    if !matches!(s.family(), Family::Ses | Family::Ges) {
        return Err(Error::Unsupported {
            op: "translation to RCES",
            family: s.family(),
        });
    }
    let ev = s.events();
    if ev.len() > RCES_MAX_EVENTS {
        return Err(Error::TooLarge(s.name().to_string(), RCES_MAX_EVENTS));
    }
    let all = ev.all();
    let mut steps = Vec::new();
    for x in all.subsets() {
        for d in all.difference(x).subsets() {
            let y = x.union(d);
            if step(s, x, y)? {
                steps.push((x, y));
            }
        }
    }
    check_premises(s, &steps)?;
    let mut r = Rces::new(format!("rces_{}", s.name()), ev.clone());
    for (x, y) in steps {
        for z in y.subsets() {
            r.enablings.insert(x, z);
        }
    }
    Ok(r)
}

/// Steps only grow, and every step interpolates.
fn check_premises(s: &Structure, steps: &[(EventSet, EventSet)]) -> Result<()> {
    let ev = s.events();
    for &(x, y) in steps {
        if !x.is_subset(y) {
            return Err(Error::Premise(format!(
                "step {} -> {} shrinks",
                ev.show_set(x),
                ev.show_set(y)
            )));
        }
        for d1 in y.difference(x).subsets() {
            let x1 = x.union(d1);
            for d2 in y.difference(x1).subsets() {
                let y1 = x1.union(d2);
                if !step(s, x1, y1)? {
                    return Err(Error::Premise(format!(
                        "step {} -> {} does not interpolate through {} -> {}",
                        ev.show_set(x),
                        ev.show_set(y),
                        ev.show_set(x1),
                        ev.show_set(y1)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// One bundle `({x} ∪ droppers(x, y)) ↦ y` per initial cause `x → y`.
///
/// The target is left out of its own bundle, where it could never help.
/// An initial self-cause without other droppers would leave an empty
/// bundle and is rejected.
pub fn ses_to_des(s: &Ses) -> Result<Des> {
    let mut d = Des::new(format!("des_{}", s.name), s.events.clone());
    d.conflict = s.conflict.clone();
    for (x, y) in s.causes.pairs() {
        let bundle = s.drops.of(x, y).with(x).without(y);
        if bundle.is_empty() {
            return Err(Error::Premise(format!(
                "self-cause {} of {} has no other dropper and no bundle form",
                s.events.name(x),
                s.events.name(y)
            )));
        }
        d.bundles.insert(bundle, y);
    }
    Ok(d)
}

/// The events of `ev` plus one fresh event per bundle; returns the new
/// alphabet, the index map from `ev` into it, and the fresh event of each
/// bundle in policy order.
fn with_fresh(
    ev: &Alphabet,
    bundles: &Bundles,
    policy: &FreshNamePolicy,
) -> (Alphabet, Vec<Event>, Vec<(Event, EventSet, Event)>) {
    let list = bundles.all();
    let fresh = policy.names(ev, list.len());
    let alphabet = Alphabet::new(ev.names().map(str::to_string).chain(fresh.iter().cloned()))
        .expect("fresh names are distinct tokens");
    let map = ev.embedding_into(&alphabet).expect("old events are kept");
    let assigned = list
        .into_iter()
        .zip(&fresh)
        .map(|((members, target), name)| {
            (
                alphabet.index(name).expect("fresh event exists"),
                map_set(members, &map),
                map[target],
            )
        })
        .collect();
    (alphabet, map, assigned)
}

/// One fresh, impossible event `x_i` per bundle `X_i ↦ e`, with
/// `x_i → e`, `x_i → x_i`, and every member of `X_i` dropping `x_i` from `e`.
pub fn des_to_ses(d: &Des, policy: &FreshNamePolicy) -> Ses {
    let (alphabet, map, assigned) = with_fresh(&d.events, &d.bundles, policy);
    let mut s = Ses::new(format!("ses_{}", d.name), alphabet);
    for (a, b) in d.conflict.pairs() {
        s.conflict.insert(map[a], map[b]);
    }
    for (x, members, target) in assigned {
        s.causes.insert(x, target);
        s.causes.insert(x, x);
        for m in members.iter() {
            s.drops.insert(x, m, target);
        }
    }
    s
}

fn embed_ses(s: &Ses) -> Dces {
    let mut d = Dces::new(format!("emb_{}", s.name), s.events.clone());
    d.conflict = s.conflict.clone();
    d.causes = s.causes.clone();
    d.drops = s.drops.clone();
    d
}

/// Add triples whose cause is already initial are left out: they never
/// change a GES's behaviour and a DCES does not admit them.
fn embed_ges(g: &Ges) -> Dces {
    let mut d = Dces::new(format!("emb_{}", g.name), g.events.clone());
    d.conflict = g.conflict.clone();
    d.causes = g.causes.clone();
    for (c, a, t) in g.adds.triples() {
        if !g.causes.contains(c, t) {
            d.adds.insert(c, a, t);
        }
    }
    d
}

/// The DCES with the same relations as an SES or GES.
pub fn embed(s: &Structure) -> Result<Dces> {
    match s {
        Structure::Ses(x) => Ok(embed_ses(x)),
        Structure::Ges(x) => Ok(embed_ges(x)),
        _ => Err(Error::Unsupported {
            op: "embedding into DCES",
            family: s.family(),
        }),
    }
}

/// Bundles become fresh droppable causes as in [`des_to_ses`]; mutual
/// disabling becomes conflict, one-sided disabling `e ⇝ e'` the self-cause
/// `e` added to `e` by `e'`.
pub fn ebes_to_dces(x: &crate::kernel::Ebes, policy: &FreshNamePolicy) -> Dces {
    let (alphabet, map, assigned) = with_fresh(&x.events, &x.bundles, policy);
    let mut d = Dces::new(format!("dces_{}", x.name), alphabet);
    for (a, b) in x.disabling.pairs() {
        let (ma, mb) = (map[a], map[b]);
        if x.disabling.contains(b, a) {
            d.conflict.insert(ma, mb);
        } else {
            d.adds.insert(ma, mb, ma);
        }
    }
    for (xi, members, target) in assigned {
        d.causes.insert(xi, target);
        d.causes.insert(xi, xi);
        for m in members.iter() {
            d.drops.insert(xi, m, target);
            d.conflict.insert(xi, m);
        }
    }
    d
}

/// Dispatches to the translation from `s`'s family to `to`.
pub fn translate(s: &Structure, to: Family, policy: &FreshNamePolicy) -> Result<Structure> {
    match (s, to) {
        (Structure::Ses(_) | Structure::Ges(_), Family::Rces) => to_rces(s).map(Structure::Rces),
        (Structure::Ses(x), Family::Des) => ses_to_des(x).map(Structure::Des),
        (Structure::Des(x), Family::Ses) => Ok(Structure::Ses(des_to_ses(x, policy))),
        (Structure::Ses(_) | Structure::Ges(_), Family::Dces) => embed(s).map(Structure::Dces),
        (Structure::Ebes(x), Family::Dces) => Ok(Structure::Dces(ebes_to_dces(x, policy))),
        _ => Err(Error::NoTranslation {
            from: s.family(),
            to,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{classify_dces, parse_structure, validate};

    #[test]
    fn singleton_rces() {
        let s = parse_structure("structure s : SES\nevents e\n").unwrap();
        let r = to_rces(&s).unwrap();
        let (e, z) = (EventSet::singleton(0), EventSet::EMPTY);
        for (w, t) in [(z, z), (z, e), (e, e), (e, z)] {
            assert!(r.enablings.contains(w, t));
        }
    }

    #[test]
    fn sigma_xi_to_des_has_one_bundle() {
        let s =
            parse_structure("structure s : SES\nevents a b c\ncause a -> b\ndrop [a -> b] by c\n")
                .unwrap();
        let d = ses_to_des(s.as_ses().unwrap()).unwrap();
        assert_eq!(d.bundles.all(), vec![(EventSet::from_bits(0b101), 1)]);
    }

    #[test]
    fn fresh_names_skip_existing() {
        let d = parse_structure(
            "structure d : DES\nevents _x1 a b\nbundle {a} -> b\nbundle {_x1} -> b\n",
        )
        .unwrap();
        let s = des_to_ses(d.as_des().unwrap(), &FreshNamePolicy::default());
        let names: Vec<_> = s.events.names().collect();
        assert_eq!(names, ["_x1", "_x2", "_x3", "a", "b"]);
        assert!(validate(&s.into()).ok);
    }

    #[test]
    fn ebes_translation_is_ebdc() {
        let x = parse_structure(
            "structure x : EBES\nevents a b c d\ndisabling a ~> b\ndisabling b ~> a\ndisabling c ~> d\nbundle {c} -> a\nbundle {a, b} -> c\n",
        )
        .unwrap();
        let d = ebes_to_dces(x.as_ebes().unwrap(), &FreshNamePolicy::default());
        assert!(validate(&Structure::Dces(d.clone())).ok);
        assert!(classify_dces(&d).unwrap().is_ebdc);
        let ix = |n: &str| d.events.index(n).unwrap();
        assert!(d.conflict.contains(ix("a"), ix("b")));
        assert!(d.adds.contains(ix("c"), ix("d"), ix("c")));
        // _x1 belongs to the bundle of a, _x2 to the bundle of c.
        assert!(d.drops.contains(ix("_x1"), ix("c"), ix("a")));
        assert!(d.drops.contains(ix("_x2"), ix("a"), ix("c")));
        assert!(d.drops.contains(ix("_x2"), ix("b"), ix("c")));
    }
}
