//! Registry of checkable statements. Nonexistence claims run exhaustive
//! searches; universal claims run seeded random instances.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::random::{
    mutate_ses, random_des, random_ebdc, random_ebes, random_ges, random_ses, random_ssdc, Density,
};
use super::{find_match, Budget, Constraint, SearchSpec, Status};
use crate::corpus::{check_all, check_fact, load_example, ExpectedFact};
use crate::equiv::{equivalent, Kind};
use crate::error::{Error, Result};
use crate::kernel::{Dces, EventSet, Family, Structure};
use crate::semantics::{
    added_causes, configurations, dces_state_graph, dropped_causes, initial_causes, posets, traces,
    transition_graph, ConfigMode, Poset, PosetMode,
};
use crate::translate::{des_to_ses, ebes_to_dces, embed, ses_to_des, to_rces, FreshNamePolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClaimConfig {
    pub budget: Budget,
    pub seed: u64,
    /// Random instances per universal claim.
    pub instances: usize,
}

impl Default for ClaimConfig {
    fn default() -> Self {
        ClaimConfig {
            budget: Budget::default(),
            seed: 0x5eed,
            instances: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimReport {
    pub id: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub evidence: Vec<String>,
}

pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    run: fn(&ClaimConfig) -> Result<Check>,
}

#[derive(Default)]
struct Check {
    passed: bool,
    evidence: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            passed: true,
            evidence: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, line: impl Into<String>) {
        let line = line.into();
        self.evidence
            .push(if ok { line } else { format!("FAILED: {line}") });
        self.passed &= ok;
    }
}

pub static CLAIMS: &[Claim] = &[
    Claim {
        id: "lem1",
        statement: "lemma1_delta and lemma1_delta_prime are transition-equal but not state-equal",
        run: lem1,
    },
    Claim {
        id: "lem6",
        statement: "no SES on {a,b,c,d,e} has the traces of lemma6_des",
        run: lem6,
    },
    Claim {
        id: "thm3-ses-side",
        statement: "no EBES on {a,b,c} has the traces of sigma_xi",
        run: thm3_ses_side,
    },
    Claim {
        id: "thm3-ebes-side",
        statement: "no SES on {e,f} has the traces of xi_sigma",
        run: thm3_ebes_side,
    },
    Claim {
        id: "lem9",
        statement: "no SES on {e,f} is transition-equal to rho_sigma",
        run: lem9,
    },
    Claim {
        id: "lem11",
        statement: "no GES on {a,b,c} has the configurations of beta_gamma",
        run: lem11,
    },
    Claim {
        id: "lem12",
        statement: "no EBES on {a,b,c} has the traces of gamma_xi",
        run: lem12,
    },
    Claim {
        id: "lem13",
        statement: "no SES on {a,b} has the traces of gamma_sigma",
        run: lem13,
    },
    Claim {
        id: "lem15",
        statement: "no GES on {a,b,c} is transition-equal to rho_gamma",
        run: lem15,
    },
    Claim {
        id: "lem22",
        statement: "no DCES on {a,b,c} is transition-equal to rho_gamma",
        run: lem22,
    },
    Claim {
        id: "lem28",
        statement: "no EBES on {a,b,c} has the configurations of the embedding of sigma_xi",
        run: lem28,
    },
    Claim {
        id: "thm2-roundtrip",
        statement: "for SES pairs, trace, early-poset and transition equality coincide",
        run: thm2,
    },
    Claim {
        id: "thm11",
        statement: "ses_to_des preserves traces, configurations and early posets",
        run: thm11,
    },
    Claim {
        id: "thm12",
        statement: "des_to_ses preserves traces, configurations and early posets",
        run: thm12,
    },
    Claim {
        id: "thm13",
        statement: "both SES/DES translations preserve liberal, minimal and late posets",
        run: thm13,
    },
    Claim {
        id: "thm14",
        statement: "the steps of an EBDC are determined by its precedence posets",
        run: thm14,
    },
    Claim {
        id: "lem16",
        statement: "single-state DCES causal states follow the closed form",
        run: lem16,
    },
    Claim {
        id: "lem21",
        statement: "embedding an SES or GES into DCES preserves the transition graph",
        run: lem21,
    },
    Claim {
        id: "lem26",
        statement: "an EBES and its DCES translation have the same configurations",
        run: lem26,
    },
    Claim {
        id: "lem27",
        statement: "an EBES and its DCES translation have the same precedence posets",
        run: lem27,
    },
    Claim {
        id: "lem2",
        statement: "to_rces preserves the transition graph of SES and GES",
        run: lem2,
    },
    Claim {
        id: "lem3",
        statement: "SES trace and step configurations coincide",
        run: lem3,
    },
    Claim {
        id: "lem10",
        statement: "GES trace and step configurations coincide",
        run: lem10,
    },
    Claim {
        id: "lem23",
        statement:
            "in an EBDC, e below e' in a poset means e occurs strictly before e' on every path",
        run: lem23,
    },
    Claim {
        id: "lem24",
        statement: "EBDC precedence posets are partial orders",
        run: lem24,
    },
    Claim {
        id: "corpus",
        statement: "every corpus example satisfies its recorded facts",
        run: corpus,
    },
];

pub fn claim_ids() -> Vec<&'static str> {
    CLAIMS.iter().map(|c| c.id).collect()
}

/// Runs the given claims in order. Unknown ids are rejected before anything
/// runs.
pub fn verify_claims(ids: &[&str], cfg: &ClaimConfig) -> Result<Vec<ClaimReport>> {
    let claims: Vec<&Claim> = ids
        .iter()
        .map(|id| {
            CLAIMS
                .iter()
                .find(|c| c.id == *id)
                .ok_or_else(|| Error::UnknownClaim(id.to_string()))
        })
        .collect::<Result<_>>()?;
    claims
        .into_iter()
        .map(|c| {
            let check = (c.run)(cfg)?;
            Ok(ClaimReport {
                id: c.id,
                statement: c.statement,
                passed: check.passed,
                evidence: check.evidence,
            })
        })
        .collect()
}

fn example(name: &str) -> Result<Structure> {
    Ok(load_example(name)?.structure)
}

// Nonexistence searches.

/// Checks what a filter's argument assumes about the target. Returns a
/// description of the premise, or `None` when the filter is justified by a
/// separate search.
fn premise(
    c: &Constraint,
    justification: &str,
    target: &Structure,
) -> Result<Option<(bool, String)>> {
    let ev = target.events();
    let configs = configurations(target, ConfigMode::Step);
    Ok(match (c, justification) {
        (Constraint::ConflictWithin(allowed), "static-conflict") => {
            let allowed: Vec<(usize, usize)> = allowed
                .iter()
                .map(|(a, b)| Ok((ev.lookup(a)?, ev.lookup(b)?)))
                .collect::<Result<_>>()?;
            let mut ok = true;
            for a in 0..ev.len() {
                for b in a + 1..ev.len() {
                    let listed = allowed.iter().any(|&p| p == (a, b) || p == (b, a));
                    let pair = EventSet::singleton(a).with(b);
                    ok &= listed || configs.iter().any(|c| pair.is_subset(*c));
                }
            }
            Some((
                ok,
                "every excluded conflict pair occurs in one configuration".into(),
            ))
        }
        (Constraint::NoCausesFor(es), "first-events") => {
            let mut ok = true;
            for e in es {
                ok &= configs.contains(&EventSet::singleton(ev.lookup(e)?));
            }
            Some((
                ok,
                format!("{{{}}} are single-event configurations", es.join(",")),
            ))
        }
        (
            Constraint::CausesWithin {
                target: t,
                allowed,
                nonempty,
            },
            "needed-cause",
        ) => {
            let t = ev.lookup(t)?;
            let allowed = ev.set(allowed.iter().map(String::as_str))?;
            let mut ok = !*nonempty || !configs.contains(&EventSet::singleton(t));
            for x in ev.all().difference(allowed).iter() {
                ok &= configs
                    .iter()
                    .any(|c| c.contains(t) && (x == t || !c.contains(x)));
            }
            Some((
                ok,
                format!(
                    "{} needs a cause, and only allowed events can be one",
                    ev.name(t)
                ),
            ))
        }
        (Constraint::AddsOnlyBySelf { target: t, adders }, "self-adds-only") => {
            let t = ev.lookup(t)?;
            let g = transition_graph(target);
            let mut ok = true;
            for m in adders {
                let m = ev.lookup(m)?;
                let x = EventSet::singleton(m);
                ok &= g.edges.contains(&(x, x.with(t)));
            }
            Some((
                ok,
                "each adder alone steps to itself plus the target".into(),
            ))
        }
        (Constraint::SkipInertModifiers, "inert-modifiers") => None,
        (_, "complement-search") => None,
        _ => Some((
            false,
            format!("no premise check for `{justification}` on {c}"),
        )),
    })
}

/// A structure without drop and add triples whose modifier is the cause or
/// the target.
pub fn strip_inert(s: &Structure) -> Structure {
    let mut s = s.clone();
    let strip = |m: &mut crate::kernel::Modifiers, n: usize| {
        for c in 0..n {
            for t in 0..n {
                let mods = m.of(c, t).without(c).without(t);
                m.set(c, t, mods);
            }
        }
    };
    let n = s.events().len();
    match &mut s {
        Structure::Ses(x) => strip(&mut x.drops, n),
        Structure::Ges(x) => strip(&mut x.adds, n),
        Structure::Dces(x) => {
            strip(&mut x.drops, n);
            strip(&mut x.adds, n);
            // A drop may have been valid only through an inert add.
            for c in 0..n {
                for t in 0..n {
                    if !x.causes.contains(c, t) && x.adds.of(c, t).is_empty() {
                        x.drops.set(c, t, EventSet::EMPTY);
                    }
                }
            }
        }
        _ => {}
    }
    s
}

/// Samples random structures of `family` and checks that removing inert
/// modifiers changes nothing observable under `kind`.
fn inert_invisible(
    family: Family,
    kind: Kind,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    for _ in 0..samples {
        let n = rng.gen_range(1..=4);
        let s = super::random::random_structure(family, n, rng);
        let stripped = strip_inert(&s);
        if !equivalent(&s, &stripped, kind)?.equal {
            return Ok(false);
        }
        if family == Family::Dces {
            let d = s.as_dces().expect("generated a DCES");
            let e = stripped.as_dces().expect("stripping keeps the family");
            // Causal states must agree too, not just their projection.
            if dces_state_graph(d).edges != dces_state_graph(e).edges {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Draws structures from the space without filter `i` that violate it, and
/// checks that none of them matches the target.
pub fn filter_soundness(
    spec: &SearchSpec,
    i: usize,
    target: &Structure,
    kind: Kind,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(usize, bool)> {
    let wider = spec.without_filter(i);
    let size = super::space_size(&wider)?;
    let constraint = &spec.filters[i].constraint;
    let mut checked = 0;
    let mut attempts = 0;
    while checked < samples && attempts < samples * 50 {
        attempts += 1;
        let index = rng.gen_range(0..size);
        let Some(s) = super::enumerate_range(&wider, index, index + 1)?.next() else {
            continue;
        };
        if constraint.admits(&s)? {
            continue;
        }
        checked += 1;
        if equivalent(target, &s, kind)?.equal {
            return Ok((checked, false));
        }
    }
    Ok((checked, true))
}

fn search_claim(
    spec: SearchSpec,
    target: &Structure,
    kind: Kind,
    cfg: &ClaimConfig,
) -> Result<Check> {
    let mut check = Check::new();
    let spec = spec.budget(cfg.budget);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (i, f) in spec.filters.iter().enumerate() {
        if let Some((ok, what)) = premise(&f.constraint, f.justification, target)? {
            check.require(
                ok,
                format!("filter `{}` [{}]: {what}", f.constraint, f.justification),
            );
        }
        if f.justification == "inert-modifiers" {
            let ok = inert_invisible(spec.family, kind, 100, &mut rng)?;
            check.require(
                ok,
                format!(
                    "filter `{}`: 100 sampled {} unchanged without inert triples",
                    f.constraint, spec.family
                ),
            );
        }
        let (n, ok) = filter_soundness(&spec, i, target, kind, 50, &mut rng)?;
        check.require(
            ok,
            format!(
                "filter `{}`: {n} excluded samples fail to match",
                f.constraint
            ),
        );
    }
    let out = find_match(&spec, target, kind)?;
    check.require(
        out.status == Status::ExhaustedNone,
        format!(
            "{} {} search against {}: {out}",
            spec.family,
            kind,
            target.name()
        ),
    );
    Ok(check)
}

fn lem1(_: &ClaimConfig) -> Result<Check> {
    let mut check = Check::new();
    let d = example("lemma1_delta")?;
    let p = example("lemma1_delta_prime")?;
    let t = equivalent(&d, &p, Kind::Transition)?;
    check.require(
        t.equal,
        match &t.witness {
            None => "transition-equal".to_string(),
            Some(w) => format!("transition-equal: {w}"),
        },
    );
    let s = equivalent(&d, &p, Kind::State)?;
    check.require(
        !s.equal,
        match &s.witness {
            Some(w) => format!("state-unequal: {w}"),
            None => "state-unequal".to_string(),
        },
    );
    for (path, present) in [(&["a", "b"], true), (&["b", "a"], false)] {
        let fact = ExpectedFact::StepAfterPath {
            path,
            fire: &["d"],
            present,
        };
        let r = check_fact(&d, &fact);
        check.require(
            r.is_ok(),
            format!(
                "after {}, the d step is {}{}",
                path.join("·"),
                if present { "present" } else { "absent" },
                r.err().map(|e| format!(" ({e})")).unwrap_or_default()
            ),
        );
    }
    Ok(check)
}

fn lem6(cfg: &ClaimConfig) -> Result<Check> {
    let target = example("lemma6_des")?;
    let ev = target.events().clone();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let spec = SearchSpec::new(Family::Ses, ev.clone())?
        .filter(Constraint::ConflictWithin(vec![]), "static-conflict")
        .filter(
            Constraint::NoCausesFor(s(&["a", "b", "c", "d"])),
            "first-events",
        )
        .filter(
            Constraint::CausesWithin {
                target: "e".into(),
                allowed: s(&["a", "b", "c", "d"]),
                nonempty: false,
            },
            "complement-search",
        );
    let mut check = search_claim(spec, &target, Kind::Trace, cfg)?;
    // The structures the last filter excludes all have `e → e`; up to inert
    // droppers they lie in this space.
    let rest = SearchSpec::new(Family::Ses, ev)?
        .filter(Constraint::ConflictWithin(vec![]), "static-conflict")
        .filter(
            Constraint::NoCausesFor(s(&["a", "b", "c", "d"])),
            "first-events",
        )
        .filter(Constraint::SkipInertModifiers, "inert-modifiers");
    let more = search_claim(rest, &target, Kind::Trace, cfg)?;
    check.passed &= more.passed;
    check.evidence.extend(
        more.evidence
            .into_iter()
            .map(|l| format!("complement: {l}")),
    );
    Ok(check)
}

fn plain(family: Family, target: &str, kind: Kind, cfg: &ClaimConfig) -> Result<Check> {
    let t = example(target)?;
    search_claim(SearchSpec::new(family, t.events().clone())?, &t, kind, cfg)
}

fn thm3_ses_side(cfg: &ClaimConfig) -> Result<Check> {
    plain(Family::Ebes, "sigma_xi", Kind::Trace, cfg)
}

fn thm3_ebes_side(cfg: &ClaimConfig) -> Result<Check> {
    plain(Family::Ses, "xi_sigma", Kind::Trace, cfg)
}

fn lem9(cfg: &ClaimConfig) -> Result<Check> {
    plain(Family::Ses, "rho_sigma", Kind::Transition, cfg)
}

fn lem12(cfg: &ClaimConfig) -> Result<Check> {
    plain(Family::Ebes, "gamma_xi", Kind::Trace, cfg)
}

fn lem13(cfg: &ClaimConfig) -> Result<Check> {
    plain(Family::Ses, "gamma_sigma", Kind::Trace, cfg)
}

fn lem28(cfg: &ClaimConfig) -> Result<Check> {
    let mut t = Structure::Dces(embed(&example("sigma_xi")?)?);
    t.set_name("emb_sigma_xi");
    search_claim(
        SearchSpec::new(Family::Ebes, t.events().clone())?,
        &t,
        Kind::Config,
        cfg,
    )
}

fn lem11(cfg: &ClaimConfig) -> Result<Check> {
    let t = example("beta_gamma")?;
    let spec = SearchSpec::new(Family::Ges, t.events().clone())?
        .filter(
            Constraint::ConflictWithin(vec![("a".into(), "b".into())]),
            "static-conflict",
        )
        .filter(
            Constraint::NoCausesFor(vec!["a".into(), "b".into()]),
            "first-events",
        )
        .filter(
            Constraint::CausesWithin {
                target: "c".into(),
                allowed: vec!["a".into(), "b".into()],
                nonempty: true,
            },
            "needed-cause",
        )
        .filter(Constraint::SkipInertModifiers, "inert-modifiers");
    search_claim(spec, &t, Kind::Config, cfg)
}

fn rho_gamma_spec(family: Family, t: &Structure) -> Result<SearchSpec> {
    let abc = || vec!["a".to_string(), "b".to_string(), "c".to_string()];
    Ok(SearchSpec::new(family, t.events().clone())?
        .filter(Constraint::ConflictWithin(vec![]), "static-conflict")
        .filter(Constraint::NoCausesFor(abc()), "first-events")
        .filter(Constraint::SkipInertModifiers, "inert-modifiers"))
}

fn lem15(cfg: &ClaimConfig) -> Result<Check> {
    let t = example("rho_gamma")?;
    search_claim(rho_gamma_spec(Family::Ges, &t)?, &t, Kind::Transition, cfg)
}

fn lem22(cfg: &ClaimConfig) -> Result<Check> {
    let t = example("rho_gamma")?;
    search_claim(rho_gamma_spec(Family::Dces, &t)?, &t, Kind::Transition, cfg)
}

// Universal claims over random instances.

fn rng(cfg: &ClaimConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Runs `f` on `cfg.instances` instances; stops at the first failure and
/// reports it.
fn for_instances(
    cfg: &ClaimConfig,
    salt: u64,
    what: &str,
    mut f: impl FnMut(&mut ChaCha8Rng) -> Result<std::result::Result<(), String>>,
) -> Result<Check> {
    let mut r = rng(cfg, salt);
    let mut check = Check::new();
    for i in 0..cfg.instances {
        if let Err(msg) = f(&mut r)? {
            check.require(false, format!("{what}: instance {i}: {msg}"));
            return Ok(check);
        }
    }
    check.require(true, format!("{what}: {} random instances", cfg.instances));
    Ok(check)
}

fn size(r: &mut ChaCha8Rng) -> usize {
    r.gen_range(1..=5)
}

fn trace_names(s: &Structure) -> BTreeSet<Vec<String>> {
    traces(s)
        .iter()
        .map(|t| t.names(s.events()).into_iter().map(String::from).collect())
        .collect()
}

fn config_names(s: &Structure, mode: ConfigMode) -> BTreeSet<Vec<String>> {
    configurations(s, mode)
        .into_iter()
        .map(|c| {
            s.events()
                .set_names(c)
                .into_iter()
                .map(String::from)
                .collect()
        })
        .collect()
}

fn same_posets(
    a: &Structure,
    b: &Structure,
    mode: PosetMode,
) -> Result<std::result::Result<(), String>> {
    let v = equivalent(a, b, Kind::Poset(mode))?;
    Ok(match v.witness {
        None => Ok(()),
        Some(w) => Err(format!("{mode} posets differ: {w}\n{a}\n{b}")),
    })
}

fn thm2(cfg: &ClaimConfig) -> Result<Check> {
    let mut equal = 0;
    let mut check = for_instances(cfg, 2, "trace ⟺ early poset ⟺ transition", |r| {
        let d = Density::default();
        let n = r.gen_range(1..=5);
        let a = random_ses(n, &d, r);
        let mut b = mutate_ses(&a, r);
        if r.gen_bool(0.3) {
            b = mutate_ses(&b, r);
        }
        let (a, b) = (Structure::Ses(a), Structure::Ses(b));
        let t = equivalent(&a, &b, Kind::Trace)?.equal;
        let p = equivalent(&a, &b, Kind::Poset(PosetMode::Early))?.equal;
        let g = equivalent(&a, &b, Kind::Transition)?.equal;
        equal += t as usize;
        Ok(if t == p && p == g {
            Ok(())
        } else {
            Err(format!("trace {t}, poset {p}, transition {g}\n{a}\n{b}"))
        })
    })?;
    check.evidence.push(format!(
        "{equal} trace-equal and {} trace-unequal pairs",
        cfg.instances - equal
    ));
    Ok(check)
}

/// A random SES that ses_to_des accepts.
fn translatable_ses(r: &mut ChaCha8Rng) -> crate::kernel::Ses {
    loop {
        let s = random_ses(size(r), &Density::default(), r);
        if ses_to_des(&s).is_ok() {
            return s;
        }
    }
}

fn thm11(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 11, "ses_to_des", |r| {
        let s = translatable_ses(r);
        let d = Structure::Des(ses_to_des(&s)?);
        let s = Structure::Ses(s);
        if traces(&s) != traces(&d) {
            return Ok(Err(format!("traces differ\n{s}")));
        }
        if configurations(&s, ConfigMode::Trace) != configurations(&d, ConfigMode::Trace) {
            return Ok(Err(format!("configurations differ\n{s}")));
        }
        same_posets(&s, &d, PosetMode::Early)
    })
}

fn thm12(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 12, "des_to_ses", |r| {
        let d = random_des(size(r), &Density::default(), r);
        let s = Structure::Ses(des_to_ses(&d, &FreshNamePolicy::default()));
        let d = Structure::Des(d);
        if trace_names(&s) != trace_names(&d) {
            return Ok(Err(format!("traces differ\n{d}")));
        }
        if config_names(&s, ConfigMode::Trace) != config_names(&d, ConfigMode::Trace) {
            return Ok(Err(format!("configurations differ\n{d}")));
        }
        same_posets(&s, &d, PosetMode::Early)
    })
}

fn thm13(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 13, "liberal, minimal, late", |r| {
        let s = translatable_ses(r);
        let d = Structure::Des(ses_to_des(&s)?);
        let s = Structure::Ses(s);
        let d2 = random_des(size(r), &Density::default(), r);
        let s2 = Structure::Ses(des_to_ses(&d2, &FreshNamePolicy::default()));
        let d2 = Structure::Des(d2);
        for mode in [PosetMode::Liberal, PosetMode::Minimal, PosetMode::Late] {
            for (a, b) in [(&s, &d), (&d2, &s2)] {
                if let Err(e) = same_posets(a, b, mode)? {
                    return Ok(Err(e));
                }
            }
        }
        Ok(Ok(()))
    })
}

/// The precedence poset of each reachable configuration of an EBDC.
fn poset_by_config(d: &Dces) -> Result<BTreeMap<EventSet, Poset>> {
    Ok(posets(&Structure::Dces(d.clone()), PosetMode::Precedence)?
        .into_iter()
        .map(|p| (p.carrier, p))
        .collect())
}

fn thm14(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 14, "steps from posets", |r| {
        let d = random_ebdc(size(r), &Density::default(), r);
        let by_config = poset_by_config(&d)?;
        let g = dces_state_graph(&d);
        for st in &g.nodes {
            for (&c2, p) in by_config.range(st.config..) {
                if !st.config.is_subset(c2) {
                    continue;
                }
                let step = g.edges.iter().any(|(a, b)| a == st && b.config == c2);
                let allowed = c2.iter().all(|e| {
                    c2.iter()
                        .all(|u| u == e || !p.leq(u, e) || st.config.contains(u))
                });
                if step != allowed {
                    let ev = &d.events;
                    return Ok(Err(format!(
                        "{} -> {}: step {step}, poset condition {allowed}\n{}",
                        st.show(ev),
                        ev.show_set(c2),
                        Structure::Dces(d.clone())
                    )));
                }
            }
        }
        Ok(Ok(()))
    })
}

fn lem16(cfg: &ClaimConfig) -> Result<Check> {
    let mut check = for_instances(cfg, 16, "closed form on single-state DCES", |r| {
        let d = random_ssdc(size(r), &Density::default(), r);
        for st in dces_state_graph(&d).nodes {
            let want = crate::semantics::causal_state_closed_form(&d, st.config)?;
            if want != st.cs {
                return Ok(Err(format!(
                    "state {} vs closed form {}\n{}",
                    st.show(&d.events),
                    want.show(&d.events, st.config),
                    Structure::Dces(d.clone())
                )));
            }
        }
        Ok(Ok(()))
    })?;
    // Special forms for embeddings of SES and GES.
    let more = for_instances(cfg, 19, "embedding closed forms", |r| {
        let n = size(r);
        let s: Structure = if r.gen_bool(0.5) {
            random_ses(n, &Density::default(), r).into()
        } else {
            random_ges(n, &Density::default(), r).into()
        };
        let d = embed(&s)?;
        for st in dces_state_graph(&d).nodes {
            for e in d.events.all().difference(st.config).iter() {
                let ic = initial_causes(&s, e)?;
                let want = match &s {
                    Structure::Ses(_) => {
                        ic.difference(dropped_causes(&s, st.config, e)?.union(st.config))
                    }
                    _ => ic
                        .union(added_causes(&s, st.config, e)?)
                        .difference(st.config),
                };
                if st.cs.get(e) != want {
                    return Ok(Err(format!(
                        "{} at {}\n{s}",
                        d.events.name(e),
                        st.show(&d.events)
                    )));
                }
            }
        }
        Ok(Ok(()))
    })?;
    check.passed &= more.passed;
    check.evidence.extend(more.evidence);
    Ok(check)
}

fn lem21(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 21, "embedding transition graphs", |r| {
        let n = size(r);
        let s: Structure = if r.gen_bool(0.5) {
            random_ses(n, &Density::default(), r).into()
        } else {
            random_ges(n, &Density::default(), r).into()
        };
        let d = Structure::Dces(embed(&s)?);
        let v = equivalent(&s, &d, Kind::Transition)?;
        Ok(match v.witness {
            None => Ok(()),
            Some(w) => Err(format!("{w}\n{s}")),
        })
    })
}

fn lem26(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 26, "EBES/DCES configurations", |r| {
        let x = random_ebes(size(r), &Density::default(), r);
        let d = Structure::Dces(ebes_to_dces(&x, &FreshNamePolicy::default()));
        let x = Structure::Ebes(x);
        let want = config_names(&x, ConfigMode::Trace);
        for mode in [ConfigMode::Trace, ConfigMode::Step] {
            if config_names(&d, mode) != want {
                return Ok(Err(format!("{mode:?} configurations differ\n{x}")));
            }
        }
        if trace_names(&d) != trace_names(&x) {
            return Ok(Err(format!("traces differ\n{x}")));
        }
        Ok(Ok(()))
    })
}

fn lem27(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 27, "EBES/DCES precedence posets", |r| {
        let x = random_ebes(size(r), &Density::default(), r);
        let d = Structure::Dces(ebes_to_dces(&x, &FreshNamePolicy::default()));
        same_posets(&Structure::Ebes(x), &d, PosetMode::Precedence)
    })
}

fn lem2(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 2, "to_rces transition graphs", |r| {
        let n = size(r);
        let s: Structure = if r.gen_bool(0.5) {
            random_ses(n, &Density::default(), r).into()
        } else {
            random_ges(n, &Density::default(), r).into()
        };
        let rc = Structure::Rces(to_rces(&s)?);
        let v = equivalent(&s, &rc, Kind::Transition)?;
        Ok(match v.witness {
            None => Ok(()),
            Some(w) => Err(format!("{w}\n{s}")),
        })
    })
}

fn config_coincidence(cfg: &ClaimConfig, family: Family, salt: u64) -> Result<Check> {
    for_instances(cfg, salt, "trace and step configurations", |r| {
        let n = r.gen_range(1..=5);
        let s = super::random::random_structure(family, n, r);
        Ok(
            if configurations(&s, ConfigMode::Trace) == configurations(&s, ConfigMode::Step) {
                Ok(())
            } else {
                Err(format!("{s}"))
            },
        )
    })
}

fn lem3(cfg: &ClaimConfig) -> Result<Check> {
    config_coincidence(cfg, Family::Ses, 3)
}

fn lem10(cfg: &ClaimConfig) -> Result<Check> {
    config_coincidence(cfg, Family::Ges, 10)
}

fn lem23(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 23, "poset order is occurrence order", |r| {
        let d = random_ebdc(size(r), &Density::default(), r);
        let by_config = poset_by_config(&d)?;
        let g = dces_state_graph(&d);
        // Configurations reachable from each state.
        let mut reach: BTreeMap<_, BTreeSet<EventSet>> = BTreeMap::new();
        for st in &g.nodes {
            let mut seen = BTreeSet::from([st.clone()]);
            let mut stack = vec![st.clone()];
            while let Some(x) = stack.pop() {
                for (a, b) in g.edges.iter().filter(|(a, _)| *a == x) {
                    let _ = a;
                    if seen.insert(b.clone()) {
                        stack.push(b.clone());
                    }
                }
            }
            reach.insert(st.clone(), seen.into_iter().map(|s| s.config).collect());
        }
        for (x, y) in &g.edges {
            let fresh = y.config.difference(x.config);
            for c in &reach[y] {
                let p = &by_config[c];
                for (e, e2) in p.strict_pairs() {
                    if fresh.contains(e2) && !x.config.contains(e) {
                        return Ok(Err(format!(
                            "{} < {} in {} but step {} -> {}",
                            d.events.name(e),
                            d.events.name(e2),
                            d.events.show_set(*c),
                            x.show(&d.events),
                            y.show(&d.events)
                        )));
                    }
                }
            }
        }
        Ok(Ok(()))
    })
}

fn lem24(cfg: &ClaimConfig) -> Result<Check> {
    for_instances(cfg, 24, "precedence posets are partial orders", |r| {
        let d = random_ebdc(size(r), &Density::default(), r);
        for p in poset_by_config(&d)?.values() {
            if !p.is_partial_order() {
                return Ok(Err(format!(
                    "{}\n{}",
                    p.show(&d.events),
                    Structure::Dces(d.clone())
                )));
            }
        }
        Ok(Ok(()))
    })
}

fn corpus(_: &ClaimConfig) -> Result<Check> {
    let mut check = Check::new();
    for (name, fact, outcome) in check_all() {
        match outcome {
            Ok(()) => check.require(true, format!("{name}: {fact}")),
            Err(e) => check.require(false, format!("{name}: {fact}: {e}")),
        }
    }
    Ok(check)
}
