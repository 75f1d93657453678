//! Named example structures shipped with the crate, each with the facts it
//! is known to satisfy.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kernel::{classify_dces, parse_structure, Alphabet, EventSet, Structure};
use crate::semantics::{
    configurations, dces_state_graph, rces_step, traces, ConfigMode, DcesState,
};
use crate::translate;

/// A machine-checkable property of an example. Traces are written as
/// strings of one-letter event names; sets as lists of names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpectedFact {
    /// The trace set is exactly this list.
    Traces(&'static [&'static str]),
    HasTrace(&'static str),
    LacksTrace(&'static str),
    /// The configuration set is exactly this list.
    Configurations(ConfigMode, &'static [&'static [&'static str]]),
    HasConfiguration(ConfigMode, &'static [&'static str]),
    /// A set-level step `from → to` is present or absent.
    Step {
        from: &'static [&'static str],
        to: &'static [&'static str],
        present: bool,
    },
    /// In a DCES, after firing `path` one event at a time, firing `fire`
    /// is possible or not.
    StepAfterPath {
        path: &'static [&'static str],
        fire: &'static [&'static str],
        present: bool,
    },
    /// DCES classification.
    Subclass {
        ssdc: bool,
        ebdc: bool,
    },
    /// The EBES translation has the same precedence posets.
    PosetEqualToDcesTranslation,
}

#[derive(Clone, Debug)]
pub struct ExampleEntry {
    pub name: &'static str,
    pub structure: Structure,
    pub provenance: &'static str,
    pub source: &'static str,
    pub expected_facts: Vec<ExpectedFact>,
}

struct Raw {
    name: &'static str,
    text: &'static str,
    provenance: &'static str,
    facts: &'static [ExpectedFact],
}

use ExpectedFact::*;

const CATALOG: &[Raw] = &[
    Raw {
        name: "sigma_xi",
        text: include_str!("../../../corpus/sigma_xi.est"),
        provenance: "SES modelling disjunctive causality; counterexample for EBES expressiveness",
        facts: &[Traces(&[
            "", "a", "c", "ab", "ac", "ca", "cb", "abc", "acb", "cab", "cba",
        ])],
    },
    Raw {
        name: "xi_sigma",
        text: include_str!("../../../corpus/xi_sigma.est"),
        provenance:
            "EBES with a single asymmetric disabling; counterexample for SES expressiveness",
        facts: &[Traces(&["", "e", "f", "ef"])],
    },
    Raw {
        name: "beta_gamma",
        text: include_str!("../../../corpus/beta_gamma.est"),
        provenance: "BES whose configurations no GES has",
        facts: &[Configurations(
            ConfigMode::Trace,
            &[&[], &["a"], &["b"], &["a", "c"], &["b", "c"]],
        )],
    },
    Raw {
        name: "gamma_xi",
        text: include_str!("../../../corpus/gamma_xi.est"),
        provenance: "GES whose traces no EBES has",
        facts: &[
            HasTrace("a"),
            HasTrace("c"),
            HasTrace("ca"),
            HasTrace("bac"),
            LacksTrace("ac"),
        ],
    },
    Raw {
        name: "gamma_sigma",
        text: include_str!("../../../corpus/gamma_sigma.est"),
        provenance: "GES whose traces no SES has",
        facts: &[Traces(&["", "a", "b", "ab"])],
    },
    Raw {
        name: "rho_sigma",
        text: include_str!("../../../corpus/rho_sigma.est"),
        provenance: "RCES with no transition-equivalent SES; the empty enabling is added",
        facts: &[
            Configurations(ConfigMode::Step, &[&[], &["e"], &["f"], &["e", "f"]]),
            Step {
                from: &["f"],
                to: &["e", "f"],
                present: true,
            },
            Step {
                from: &["e"],
                to: &["e", "f"],
                present: false,
            },
        ],
    },
    Raw {
        name: "rho_gamma",
        text: include_str!("../../../corpus/rho_gamma.est"),
        provenance:
            "RCES with no transition-equivalent GES or DCES; reconstructed from its constraints",
        facts: &[
            HasConfiguration(ConfigMode::Step, &["a"]),
            HasConfiguration(ConfigMode::Step, &["b"]),
            HasConfiguration(ConfigMode::Step, &["c"]),
            HasConfiguration(ConfigMode::Step, &["a", "c"]),
            HasConfiguration(ConfigMode::Step, &["b", "c"]),
            HasConfiguration(ConfigMode::Step, &["a", "b"]),
            HasConfiguration(ConfigMode::Step, &["a", "b", "c"]),
            Step {
                from: &["a", "b"],
                to: &["a", "b", "c"],
                present: false,
            },
        ],
    },
    Raw {
        name: "lemma1_delta",
        text: include_str!("../../../corpus/lemma1_delta.est"),
        provenance: "DCES whose causal state depends on the order of adder and dropper",
        facts: &[
            Subclass {
                ssdc: false,
                ebdc: false,
            },
            StepAfterPath {
                path: &["a", "b"],
                fire: &["d"],
                present: true,
            },
            StepAfterPath {
                path: &["b", "a"],
                fire: &["d"],
                present: false,
            },
        ],
    },
    Raw {
        name: "lemma1_delta_prime",
        text: include_str!("../../../corpus/lemma1_delta_prime.est"),
        provenance: "relation-free DCES on the events of lemma1_delta",
        facts: &[
            Subclass {
                ssdc: true,
                ebdc: true,
            },
            StepAfterPath {
                path: &["b", "a"],
                fire: &["d"],
                present: true,
            },
        ],
    },
    Raw {
        name: "lemma6_des",
        text: include_str!("../../../corpus/lemma6_des.est"),
        provenance: "DES with no trace-equivalent SES on the same events",
        facts: &[
            HasTrace("abce"),
            LacksTrace("abe"),
            HasConfiguration(ConfigMode::Trace, &["a", "b", "d", "e"]),
        ],
    },
    Raw {
        name: "fig2_ebes",
        text: include_str!("../../../corpus/fig2_ebes.est"),
        provenance: "EBES translated to a poset-equivalent DCES; relations read from a figure",
        facts: &[
            PosetEqualToDcesTranslation,
            HasTrace("bc"),
            LacksTrace("bca"),
        ],
    },
];

/// Names of all examples, in catalog order.
pub fn example_names() -> Vec<&'static str> {
    CATALOG.iter().map(|r| r.name).collect()
}

pub fn load_example(name: &str) -> Result<ExampleEntry> {
    let raw = CATALOG
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::UnknownExample(name.to_string()))?;
    Ok(ExampleEntry {
        name: raw.name,
        structure: parse_structure(raw.text)?,
        provenance: raw.provenance,
        source: raw.text,
        expected_facts: raw.facts.to_vec(),
    })
}

fn trace_of(ev: &Alphabet, s: &str) -> Result<Vec<usize>> {
    s.chars().map(|c| ev.lookup(&c.to_string())).collect()
}

fn set_of(ev: &Alphabet, names: &[&str]) -> Result<EventSet> {
    ev.set(names.iter().copied())
}

/// Evaluates one fact; `Err` explains a mismatch or an inapplicable fact.
pub fn check_fact(s: &Structure, fact: &ExpectedFact) -> std::result::Result<(), String> {
    let ev = s.events();
    let e = |x: Error| x.to_string();
    match fact {
        Traces(want) => {
            let want: BTreeSet<Vec<usize>> = want
                .iter()
                .map(|t| trace_of(ev, t))
                .collect::<Result<_>>()
                .map_err(e)?;
            let got: BTreeSet<Vec<usize>> = traces(s).into_iter().map(|t| t.0).collect();
            if got == want {
                Ok(())
            } else {
                Err(format!(
                    "trace set differs: {} traces, expected {}",
                    got.len(),
                    want.len()
                ))
            }
        }
        HasTrace(t) | LacksTrace(t) => {
            let t = trace_of(ev, t).map_err(e)?;
            let has = traces(s).iter().any(|x| x.0 == t);
            match (fact, has) {
                (HasTrace(_), true) | (LacksTrace(_), false) => Ok(()),
                _ => Err(format!("unexpected trace membership: {has}")),
            }
        }
        Configurations(mode, want) => {
            let want: BTreeSet<EventSet> = want
                .iter()
                .map(|c| set_of(ev, c))
                .collect::<Result<_>>()
                .map_err(e)?;
            let got = configurations(s, *mode);
            if got == want {
                Ok(())
            } else {
                Err(format!(
                    "configurations differ: got {:?}",
                    got.iter().map(|c| ev.show_set(*c)).collect::<Vec<_>>()
                ))
            }
        }
        HasConfiguration(mode, c) => {
            let c = set_of(ev, c).map_err(e)?;
            if configurations(s, *mode).contains(&c) {
                Ok(())
            } else {
                Err(format!("{} is not a configuration", ev.show_set(c)))
            }
        }
        Step { from, to, present } => {
            let (x, y) = (set_of(ev, from).map_err(e)?, set_of(ev, to).map_err(e)?);
            let r = s.as_rces().ok_or("set-level step facts are for RCES")?;
            if rces_step(r, x, y) == *present {
                Ok(())
            } else {
                Err(format!(
                    "step {} -> {} present: {}",
                    ev.show_set(x),
                    ev.show_set(y),
                    !present
                ))
            }
        }
        StepAfterPath {
            path,
            fire,
            present,
        } => {
            let d = s.as_dces().ok_or("path facts are for DCES")?;
            let mut st = DcesState::initial(d);
            for name in path.iter() {
                let x = ev.lookup(name).map_err(e)?;
                st = crate::semantics::dces_steps(d, &st)
                    .into_iter()
                    .find(|n| n.config == st.config.with(x))
                    .ok_or_else(|| format!("path event {name} cannot fire"))?;
            }
            let target = st.config.union(set_of(ev, fire).map_err(e)?);
            let graph = dces_state_graph(d);
            let found = graph
                .edges
                .iter()
                .any(|(a, b)| *a == st && b.config == target);
            if found == *present {
                Ok(())
            } else {
                Err(format!("step to {} present: {found}", ev.show_set(target)))
            }
        }
        Subclass { ssdc, ebdc } => {
            let d = s.as_dces().ok_or("classification facts are for DCES")?;
            let f = classify_dces(d).map_err(e)?;
            if f.is_ssdc == *ssdc && f.is_ebdc == *ebdc {
                Ok(())
            } else {
                Err(format!("classified as {f:?}"))
            }
        }
        PosetEqualToDcesTranslation => {
            let x = s.as_ebes().ok_or("translation facts are for EBES")?;
            let d = translate::ebes_to_dces(x, &translate::FreshNamePolicy::default());
            let v = crate::equiv::equivalent(
                s,
                &Structure::Dces(d),
                crate::equiv::Kind::Poset(crate::semantics::PosetMode::Precedence),
            )
            .map_err(e)?;
            if v.equal {
                Ok(())
            } else {
                Err(format!("posets differ: {:?}", v.witness))
            }
        }
    }
}

/// Every fact of every example, as `(example, fact, outcome)`.
pub fn check_all() -> Vec<(&'static str, String, std::result::Result<(), String>)> {
    let mut out = Vec::new();
    for raw in CATALOG {
        match load_example(raw.name) {
            Ok(entry) => {
                for f in &entry.expected_facts {
                    out.push((raw.name, format!("{f:?}"), check_fact(&entry.structure, f)));
                }
            }
            Err(err) => out.push((raw.name, "load".to_string(), Err(err.to_string()))),
        }
    }
    out
}
