use std::collections::BTreeSet;

use dynes::corpus::load_example;
use dynes::equiv::{equivalent, Kind};
use dynes::kernel::{validate, Alphabet, Bes, Dces, Des, Ebes, EventSet, Ges, Ses};
use dynes::search::{
    enumerate, enumerate_range, filter_soundness, find_match, find_match_range, letters,
    space_size, strip_inert, Budget, Constraint, SearchSpec, Status,
};
use dynes::translate::ses_to_des;
use dynes::{serialize, Family, Structure};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn key(s: &Structure) -> String {
    let mut s = s.clone();
    s.set_name("x");
    serialize(&s)
}

fn enumerated(family: Family, n: usize) -> Vec<String> {
    let spec = SearchSpec::new(family, letters(n)).unwrap();
    enumerate(&spec).unwrap().map(|s| key(&s)).collect()
}

fn pow(b: u128, e: u32) -> u128 {
    b.pow(e)
}

/// Counts derived by hand from the well-formedness rules: conflict is any
/// set of unordered pairs, and each ordered pair of events (or each target,
/// for bundles) makes an independent choice.
fn closed_form(family: Family, n: u32) -> Option<u128> {
    let conflict = pow(2, n * n.saturating_sub(1) / 2);
    let subsets = pow(2, n);
    Some(match family {
        // No cause, or a cause with any set of droppers.
        Family::Ses => conflict * pow(1 + subsets, n * n),
        // Cause or not, and any set of adders.
        Family::Ges => conflict * pow(2 * subsets, n * n),
        // A cause with droppers; or no cause and no adders; or no cause,
        // some adders and any droppers.
        Family::Dces => conflict * pow(subsets + 1 + (subsets - 1) * subsets, n * n),
        // Any set of non-empty bundles drawn from the other events.
        Family::Des => conflict * pow(pow(2, pow(2, n - 1) as u32 - 1), n),
        _ => return None,
    })
}

#[test]
fn closed_form_counts_match_space_size() {
    for n in 0..=3u32 {
        for f in [Family::Ses, Family::Ges, Family::Dces, Family::Des] {
            if n == 0 {
                continue;
            }
            let spec = SearchSpec::new(f, letters(n as usize)).unwrap();
            assert_eq!(
                space_size(&spec).unwrap(),
                closed_form(f, n).unwrap(),
                "{f} n={n}"
            );
        }
    }
    assert_eq!(closed_form(Family::Ses, 2), Some(1250));
    assert_eq!(closed_form(Family::Dces, 2), Some(167_042));
    assert_eq!(closed_form(Family::Des, 3), Some(4096));
}

/// All subsets of `0..n` as bit masks.
fn masks(n: usize) -> std::ops::Range<u64> {
    0..1u64 << n
}

fn set_of(bits: u64) -> EventSet {
    (0..64).filter(|i| bits >> i & 1 == 1).collect()
}

/// Every assignment of raw relations, kept when `validate` accepts it.
fn brute_force(family: Family, n: usize) -> BTreeSet<String> {
    let ev = letters(n);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let ordered: Vec<(usize, usize)> = (0..n).flat_map(|c| (0..n).map(move |t| (c, t))).collect();
    let triples: Vec<(usize, usize, usize)> = ordered
        .iter()
        .flat_map(|&(c, t)| (0..n).map(move |m| (c, m, t)))
        .collect();
    let mut out = BTreeSet::new();
    let mut keep = |s: Structure| {
        if validate(&s).ok {
            out.insert(key(&s));
        }
    };
    for k in masks(pairs.len()) {
        let conflict: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| k >> i & 1 == 1)
            .map(|(_, p)| *p)
            .collect();
        match family {
            Family::Ses | Family::Ges | Family::Dces => {
                for c in masks(ordered.len()) {
                    let causes: Vec<_> = ordered
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| c >> i & 1 == 1)
                        .map(|(_, p)| *p)
                        .collect();
                    let mods = |m: u64| -> Vec<(usize, usize, usize)> {
                        triples
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| m >> i & 1 == 1)
                            .map(|(_, t)| *t)
                            .collect()
                    };
                    let drop_range = if family == Family::Ges {
                        0..1
                    } else {
                        masks(triples.len())
                    };
                    let add_range = if family == Family::Ses {
                        0..1
                    } else {
                        masks(triples.len())
                    };
                    for d in drop_range {
                        for a in add_range.clone() {
                            keep(build(family, &ev, &conflict, &causes, &mods(d), &mods(a)));
                        }
                    }
                }
            }
            Family::Des | Family::Bes | Family::Ebes => {
                // Candidate bundles: non-empty subsets of events, any target.
                let bundles: Vec<(u64, usize)> = (0..n)
                    .flat_map(|t| (1..1u64 << n).map(move |b| (b, t)))
                    .collect();
                let dis_range = if family == Family::Ebes {
                    masks(ordered.len())
                } else {
                    0..1
                };
                for b in masks(bundles.len()) {
                    let chosen: Vec<_> = bundles
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| b >> i & 1 == 1)
                        .map(|(_, x)| *x)
                        .collect();
                    for dm in dis_range.clone() {
                        let dis: Vec<_> = ordered
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| dm >> i & 1 == 1)
                            .map(|(_, p)| *p)
                            .collect();
                        if family == Family::Ebes && k != 0 {
                            continue;
                        }
                        keep(build_bundles(family, &ev, &conflict, &chosen, &dis));
                    }
                }
            }
            Family::Rces => unreachable!(),
        }
    }
    out
}

fn build(
    family: Family,
    ev: &Alphabet,
    conflict: &[(usize, usize)],
    causes: &[(usize, usize)],
    drops: &[(usize, usize, usize)],
    adds: &[(usize, usize, usize)],
) -> Structure {
    match family {
        Family::Ses => {
            let mut s = Ses::new("x", ev.clone());
            conflict.iter().for_each(|&(a, b)| s.conflict.insert(a, b));
            causes.iter().for_each(|&(c, t)| s.causes.insert(c, t));
            drops.iter().for_each(|&(c, m, t)| s.drops.insert(c, m, t));
            s.into()
        }
        Family::Ges => {
            let mut s = Ges::new("x", ev.clone());
            conflict.iter().for_each(|&(a, b)| s.conflict.insert(a, b));
            causes.iter().for_each(|&(c, t)| s.causes.insert(c, t));
            adds.iter().for_each(|&(c, m, t)| s.adds.insert(c, m, t));
            s.into()
        }
        _ => {
            let mut s = Dces::new("x", ev.clone());
            conflict.iter().for_each(|&(a, b)| s.conflict.insert(a, b));
            causes.iter().for_each(|&(c, t)| s.causes.insert(c, t));
            drops.iter().for_each(|&(c, m, t)| s.drops.insert(c, m, t));
            adds.iter().for_each(|&(c, m, t)| s.adds.insert(c, m, t));
            s.into()
        }
    }
}

fn build_bundles(
    family: Family,
    ev: &Alphabet,
    conflict: &[(usize, usize)],
    bundles: &[(u64, usize)],
    disabling: &[(usize, usize)],
) -> Structure {
    match family {
        Family::Des => {
            let mut s = Des::new("x", ev.clone());
            conflict.iter().for_each(|&(a, b)| s.conflict.insert(a, b));
            bundles
                .iter()
                .for_each(|&(b, t)| s.bundles.insert(set_of(b), t));
            s.into()
        }
        Family::Bes => {
            let mut s = Bes::new("x", ev.clone());
            conflict.iter().for_each(|&(a, b)| s.conflict.insert(a, b));
            bundles
                .iter()
                .for_each(|&(b, t)| s.bundles.insert(set_of(b), t));
            s.into()
        }
        _ => {
            let mut s = Ebes::new("x", ev.clone());
            disabling
                .iter()
                .for_each(|&(a, b)| s.disabling.insert(a, b));
            bundles
                .iter()
                .for_each(|&(b, t)| s.bundles.insert(set_of(b), t));
            s.into()
        }
    }
}

#[test]
fn enumeration_equals_brute_force_on_small_alphabets() {
    for n in 0..=2 {
        for f in [
            Family::Ses,
            Family::Ges,
            Family::Dces,
            Family::Des,
            Family::Bes,
            Family::Ebes,
        ] {
            let got = enumerated(f, n);
            let distinct: BTreeSet<String> = got.iter().cloned().collect();
            assert_eq!(distinct.len(), got.len(), "{f} n={n}: duplicates");
            assert_eq!(distinct, brute_force(f, n), "{f} n={n}");
        }
    }
}

#[test]
fn post_filtered_counts() {
    let counts: Vec<(Family, usize, usize)> = [Family::Bes, Family::Ebes]
        .into_iter()
        .flat_map(|f| (1..=2).map(move |n| (f, n, enumerated(f, n).len())))
        .collect();
    assert_eq!(
        counts,
        vec![
            (Family::Bes, 1, 1),
            (Family::Bes, 2, 8),
            (Family::Ebes, 1, 1),
            (Family::Ebes, 2, 16),
        ]
    );
}

#[test]
fn enumeration_is_deterministic() {
    for f in [Family::Ses, Family::Dces, Family::Ebes] {
        assert_eq!(enumerated(f, 2), enumerated(f, 2));
    }
}

#[test]
fn ranges_partition_the_enumeration() {
    for f in [Family::Ses, Family::Ges, Family::Ebes, Family::Des] {
        let spec = SearchSpec::new(f, letters(2)).unwrap();
        let size = space_size(&spec).unwrap();
        let full: Vec<String> = enumerate(&spec).unwrap().map(|s| key(&s)).collect();
        for k in [1u128, 2, 3, 7] {
            let mut parts = Vec::new();
            for i in 0..k {
                let (a, b) = (size * i / k, size * (i + 1) / k);
                parts.extend(enumerate_range(&spec, a, b).unwrap().map(|s| key(&s)));
            }
            assert_eq!(parts, full, "{f} split into {k}");
        }
    }
}

#[test]
fn filters_restrict_exactly_the_admitted_structures() {
    let ev = letters(2);
    let cases = vec![
        (Family::Ses, Constraint::ConflictWithin(vec![])),
        (Family::Ges, Constraint::NoCausesFor(vec!["a".into()])),
        (
            Family::Dces,
            Constraint::CausesWithin {
                target: "b".into(),
                allowed: vec!["a".into()],
                nonempty: true,
            },
        ),
        (
            Family::Ges,
            Constraint::AddsOnlyBySelf {
                target: "b".into(),
                adders: vec!["a".into()],
            },
        ),
        (Family::Dces, Constraint::SkipInertModifiers),
        (Family::Ses, Constraint::SkipInertModifiers),
    ];
    for (f, c) in cases {
        let wide = SearchSpec::new(f, ev.clone()).unwrap();
        let narrow = wide.clone().filter(c.clone(), "test");
        let want: Vec<String> = enumerate(&wide)
            .unwrap()
            .filter(|s| c.admits(s).unwrap())
            .map(|s| key(&s))
            .collect();
        let got: Vec<String> = enumerate(&narrow).unwrap().map(|s| key(&s)).collect();
        assert_eq!(got, want, "{f} with {c}");
    }
}

#[test]
fn finds_a_known_match() {
    let sigma = load_example("sigma_xi").unwrap().structure;
    let des: Structure = ses_to_des(sigma.as_ses().unwrap()).unwrap().into();
    let spec = SearchSpec::new(Family::Des, sigma.events().clone()).unwrap();
    let out = find_match(&spec, &des, Kind::Trace).unwrap();
    match &out.status {
        Status::Found(s) => assert!(equivalent(&sigma, s, Kind::Trace).unwrap().equal),
        other => panic!("expected a match, got {other:?}"),
    }
    // The sequential range scan finds the same first match.
    let size = space_size(&spec).unwrap();
    let (_, hit) = find_match_range(&spec, &des, Kind::Trace, 0, size).unwrap();
    assert_eq!(
        hit.map(|(_, s)| key(&s)),
        match out.status {
            Status::Found(s) => Some(key(&s)),
            _ => None,
        }
    );
}

#[test]
fn every_ses_on_two_events_finds_itself() {
    let spec = SearchSpec::new(Family::Ses, letters(2)).unwrap();
    for (i, s) in enumerate(&spec).unwrap().enumerate().step_by(97) {
        let out = find_match(&spec, &s, Kind::Trace).unwrap();
        let Status::Found(m) = out.status else {
            panic!("structure {i} not found");
        };
        assert!(equivalent(&s, &m, Kind::Trace).unwrap().equal);
    }
}

#[test]
fn budget_stops_the_search() {
    let (spec, t) = lemma6_spec();
    let spec = spec.budget(Budget {
        max_structures: 10,
        ..Budget::default()
    });
    let out = find_match(&spec, &t, Kind::Trace).unwrap();
    assert!(matches!(out.status, Status::BudgetExceeded(n) if n >= 10));
}

#[test]
fn oversized_spaces_are_refused() {
    let t = load_example("lemma6_des").unwrap().structure;
    let spec = SearchSpec::new(Family::Ses, t.events().clone()).unwrap();
    assert!(matches!(
        space_size(&spec),
        Err(dynes::Error::SearchSpace(_))
    ));
}

#[test]
fn mismatched_alphabets_are_rejected() {
    let t = load_example("xi_sigma").unwrap().structure;
    let spec = SearchSpec::new(Family::Ses, letters(2)).unwrap();
    assert!(find_match(&spec, &t, Kind::Trace).is_err());
    assert!(SearchSpec::new(Family::Rces, letters(2)).is_err());
}

fn lemma6_spec() -> (SearchSpec, Structure) {
    let t = load_example("lemma6_des").unwrap().structure;
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let spec = SearchSpec::new(Family::Ses, t.events().clone())
        .unwrap()
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
    (spec, t)
}

#[test]
fn lemma6_pruning_is_sound_on_samples() {
    let (spec, t) = lemma6_spec();
    assert_eq!(space_size(&spec).unwrap(), 1_185_921);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..spec.filters.len() {
        let (checked, ok) = filter_soundness(&spec, i, &t, Kind::Trace, 300, &mut rng).unwrap();
        assert!(ok, "filter {i} excluded a match");
        assert_eq!(checked, 300, "filter {i}");
    }
}

#[test]
fn lemma6_self_caused_e_region_has_no_match() {
    // SES with e → e, modulo inert droppers.
    let (_, t) = lemma6_spec();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let spec = SearchSpec::new(Family::Ses, t.events().clone())
        .unwrap()
        .filter(Constraint::ConflictWithin(vec![]), "static-conflict")
        .filter(
            Constraint::NoCausesFor(s(&["a", "b", "c", "d"])),
            "first-events",
        )
        .filter(Constraint::SkipInertModifiers, "inert-modifiers");
    let e = t.events().lookup("e").unwrap();
    let mut self_caused = 0;
    for x in enumerate(&spec).unwrap() {
        if x.as_ses().unwrap().causes.contains(e, e) {
            self_caused += 1;
            assert!(!equivalent(&t, &x, Kind::Trace).unwrap().equal);
        }
    }
    // Droppers of (x, e) for x in a..d avoid x and e; those of (e, e) avoid e.
    assert_eq!(self_caused, 9u64.pow(4) * 16);
}

#[test]
fn inert_modifiers_do_not_change_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        for (f, kinds) in [
            (Family::Ses, vec![Kind::Trace, Kind::Transition]),
            (
                Family::Ges,
                vec![Kind::Trace, Kind::Config, Kind::Transition],
            ),
            (
                Family::Dces,
                vec![Kind::Trace, Kind::Transition, Kind::State],
            ),
        ] {
            let n = rand::Rng::gen_range(&mut rng, 1..=4);
            let s = dynes::search::random::random_structure(f, n, &mut rng);
            let stripped = strip_inert(&s);
            assert!(validate(&stripped).ok);
            assert!(Constraint::SkipInertModifiers.admits(&stripped).unwrap());
            for k in kinds {
                assert!(equivalent(&s, &stripped, k).unwrap().equal, "{k}\n{s}");
            }
        }
    }
}
