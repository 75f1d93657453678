use std::fmt;

use super::{Alphabet, Bundles, Conflict, Dces, Event, EventSet, Structure};
use crate::error::{Error, Result};

/// One violated invariant. `clause` and `elements` identify the offending
/// clause in file syntax terms (`conflict`, `[a, a]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    pub rule: &'static str,
    pub clause: &'static str,
    pub elements: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} {})",
            self.rule,
            self.clause,
            self.elements.join(" ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from(violations: Vec<Violation>) -> Self {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn into_result(self) -> Result<()> {
        if self.ok {
            Ok(())
        } else {
            Err(Error::Invalid {
                line: None,
                violations: self.violations,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubclassFlags {
    pub is_ssdc: bool,
    pub is_ebdc: bool,
}

fn names(ev: &Alphabet, es: &[Event]) -> Vec<String> {
    es.iter().map(|&e| ev.name(e).to_string()).collect()
}

fn check_conflict(ev: &Alphabet, c: &Conflict, out: &mut Vec<Violation>) {
    for e in 0..ev.len() {
        if c.contains(e, e) {
            out.push(Violation {
                rule: "irreflexive",
                clause: "conflict",
                elements: names(ev, &[e, e]),
            });
        }
    }
}

fn bundle_elems(ev: &Alphabet, members: EventSet, target: Event) -> Vec<String> {
    vec![ev.show_set(members), ev.name(target).to_string()]
}

fn check_bundles(ev: &Alphabet, b: &Bundles, out: &mut Vec<Violation>) {
    for (members, t) in b.all() {
        if members.is_empty() {
            out.push(Violation {
                rule: "empty-bundle",
                clause: "bundle",
                elements: bundle_elems(ev, members, t),
            });
        }
        if members.contains(t) {
            out.push(Violation {
                rule: "target-in-bundle",
                clause: "bundle",
                elements: bundle_elems(ev, members, t),
            });
        }
    }
}

/// Bundles whose members are not pairwise related by `related`.
fn check_stability(
    ev: &Alphabet,
    b: &Bundles,
    related: impl Fn(Event, Event) -> bool,
    out: &mut Vec<Violation>,
) {
    for (members, t) in b.all() {
        let stable = members
            .iter()
            .all(|x| members.iter().filter(|&y| y > x).all(|y| related(x, y)));
        if !stable {
            out.push(Violation {
                rule: "stability",
                clause: "bundle",
                elements: bundle_elems(ev, members, t),
            });
        }
    }
}

/// Every violated invariant of the structure's family.
pub fn validate(s: &Structure) -> ValidationReport {
    let mut out = Vec::new();
    match s {
        Structure::Ses(s) => {
            check_conflict(&s.events, &s.conflict, &mut out);
            for (c, d, t) in s.drops.triples() {
                if !s.causes.contains(c, t) {
                    out.push(Violation {
                        rule: "drop-without-cause",
                        clause: "drop",
                        elements: names(&s.events, &[c, t, d]),
                    });
                }
            }
        }
        Structure::Ges(s) => check_conflict(&s.events, &s.conflict, &mut out),
        Structure::Dces(s) => {
            check_conflict(&s.events, &s.conflict, &mut out);
            for (c, d, t) in s.drops.triples() {
                if !s.causes.contains(c, t) && s.adds.of(c, t).is_empty() {
                    out.push(Violation {
                        rule: "drop-not-initial-or-addable",
                        clause: "drop",
                        elements: names(&s.events, &[c, t, d]),
                    });
                }
            }
            for (c, a, t) in s.adds.triples() {
                if s.causes.contains(c, t) {
                    out.push(Violation {
                        rule: "add-already-initial",
                        clause: "add",
                        elements: names(&s.events, &[c, t, a]),
                    });
                }
            }
        }
        Structure::Des(s) => {
            check_conflict(&s.events, &s.conflict, &mut out);
            check_bundles(&s.events, &s.bundles, &mut out);
        }
        Structure::Bes(s) => {
            check_conflict(&s.events, &s.conflict, &mut out);
            check_bundles(&s.events, &s.bundles, &mut out);
            check_stability(
                &s.events,
                &s.bundles,
                |x, y| s.conflict.contains(x, y),
                &mut out,
            );
        }
        Structure::Ebes(s) => {
            for e in 0..s.events.len() {
                if s.disabling.contains(e, e) {
                    out.push(Violation {
                        rule: "irreflexive-disabling",
                        clause: "disabling",
                        elements: names(&s.events, &[e, e]),
                    });
                }
            }
            check_bundles(&s.events, &s.bundles, &mut out);
            check_stability(
                &s.events,
                &s.bundles,
                |x, y| s.disabling.mutual(x, y),
                &mut out,
            );
        }
        Structure::Rces(_) => {}
    }
    ValidationReport::from(out)
}

/// SSDC and EBDC membership of a valid DCES.
pub fn classify_dces(d: &Dces) -> Result<SubclassFlags> {
    validate(&Structure::Dces(d.clone())).into_result()?;
    let n = d.events.len();
    let mut is_ssdc = true;
    let mut self_adds = true;
    let mut drop_groups_conflict = true;
    for c in 0..n {
        for t in 0..n {
            let droppers = d.drops.of(c, t);
            let adders = d.adds.of(c, t);
            if !droppers.is_empty() && !adders.is_empty() {
                is_ssdc = false;
            }
            if !adders.is_empty() && c != t {
                self_adds = false;
            }
            if !droppers.is_empty() {
                let group = droppers.with(c);
                let pairwise = group.iter().all(|x| {
                    group
                        .iter()
                        .filter(|&y| y != x)
                        .all(|y| d.conflict.contains(x, y))
                });
                if !pairwise {
                    drop_groups_conflict = false;
                }
            }
        }
    }
    Ok(SubclassFlags {
        is_ssdc,
        is_ebdc: is_ssdc && self_adds && drop_groups_conflict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Alphabet, Ebes, Ses};

    #[test]
    fn reflexive_conflict_is_reported() {
        let mut s = Ses::new("s", Alphabet::new(["a"]).unwrap());
        s.conflict("a", "a").unwrap();
        let r = validate(&s.into());
        assert!(!r.ok);
        assert_eq!(r.violations[0].rule, "irreflexive");
    }

    #[test]
    fn unstable_ebes_bundle_is_reported() {
        let mut x = Ebes::new("x", Alphabet::new(["a", "b", "c"]).unwrap());
        x.bundle(&["a", "b"], "c").unwrap();
        let r = validate(&x.clone().into());
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].rule, "stability");
        x.disable("a", "b").unwrap();
        assert!(!validate(&x.clone().into()).ok);
        x.disable("b", "a").unwrap();
        assert!(validate(&x.into()).ok);
    }

    #[test]
    fn relation_free_dces_is_ebdc() {
        let d = Dces::new("d", Alphabet::new(["x", "y"]).unwrap());
        assert_eq!(
            classify_dces(&d).unwrap(),
            SubclassFlags {
                is_ssdc: true,
                is_ebdc: true
            }
        );
    }

    #[test]
    fn drop_and_add_on_one_pair_is_not_ssdc() {
        let mut d = Dces::new("d", Alphabet::new(["a", "b", "c", "d"]).unwrap());
        d.drop("c", "b", "d").unwrap().add("c", "a", "d").unwrap();
        let f = classify_dces(&d).unwrap();
        assert!(!f.is_ssdc && !f.is_ebdc);
    }
}
