//! Invariants over seeded random structures.

use std::collections::BTreeSet;

use dynes::equiv::{equivalent, Kind, NamedPoset};
use dynes::kernel::{parse_structure, validate, EventSet};
use dynes::search::random::{
    mutate_ses, random_des, random_ebdc, random_ses, random_structure, Density,
};
use dynes::search::{enumerate, enumerate_range, letters, space_size, SearchSpec};
use dynes::semantics::{configurations, posets, traces, transition_graph, ConfigMode, PosetMode};
use dynes::translate::{des_to_ses, ses_to_des, FreshNamePolicy};
use dynes::{serialize, Family, Structure};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn structure(max_events: usize) -> impl Strategy<Value = Structure> {
    (family(), 0..=max_events, any::<u64>())
        .prop_map(|(f, n, seed)| random_structure(f, n, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn named(s: &Structure, mode: PosetMode) -> BTreeSet<NamedPoset> {
    posets(s, mode)
        .unwrap()
        .iter()
        .map(|p| NamedPoset::new(p, s.events()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialize_parse_round_trip(s in structure(5)) {
        prop_assert!(validate(&s).ok);
        let back = parse_structure(&serialize(&s)).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn traces_are_prefix_closed_and_duplicate_free(s in structure(4)) {
        let ts = traces(&s);
        for t in &ts {
            let e = t.events();
            prop_assert_eq!(t.set().len(), e.len());
            if let Some((_, init)) = e.split_last() {
                prop_assert!(ts.iter().any(|u| u.events() == init));
            }
        }
    }

    #[test]
    fn trace_configurations_are_trace_sets(s in structure(4)) {
        let from_traces: BTreeSet<EventSet> = traces(&s).iter().map(|t| t.set()).collect();
        prop_assert_eq!(configurations(&s, ConfigMode::Trace), from_traces);
    }

    #[test]
    fn transition_nodes_are_step_configurations(s in structure(4)) {
        let g = transition_graph(&s);
        prop_assert_eq!(&g.nodes, &configurations(&s, ConfigMode::Step));
        for (x, y) in &g.edges {
            prop_assert!(x.is_subset(*y));
            prop_assert!(g.nodes.contains(x) && g.nodes.contains(y));
        }
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric(a in structure(3), seed in any::<u64>()) {
        let b = random_structure(a.family(), a.events().len(), &mut rng(seed));
        for k in [Kind::Trace, Kind::Config, Kind::Transition] {
            prop_assert!(equivalent(&a, &a, k).unwrap().equal);
            let ab = equivalent(&a, &b, k).unwrap();
            let ba = equivalent(&b, &a, k).unwrap();
            prop_assert_eq!(ab.equal, ba.equal);
            if let (Some(x), Some(y)) = (ab.witness, ba.witness) {
                prop_assert_eq!(x.item, y.item);
                prop_assert_ne!(x.in_first, y.in_first);
            }
        }
    }

    #[test]
    fn posets_are_partial_orders(n in 0..=4usize, seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = Density::default();
        let cases: Vec<(Structure, Vec<PosetMode>)> = vec![
            (random_ses(n, &d, &mut r).into(),
             vec![PosetMode::Liberal, PosetMode::Minimal, PosetMode::Early, PosetMode::Late]),
            (random_des(n, &d, &mut r).into(),
             vec![PosetMode::Liberal, PosetMode::Minimal, PosetMode::Early, PosetMode::Late, PosetMode::Bsat]),
            (random_ebdc(n, &d, &mut r).into(), vec![PosetMode::Precedence]),
        ];
        for (s, modes) in cases {
            for m in modes {
                for p in posets(&s, m).unwrap().iter() {
                    prop_assert!(p.is_partial_order(), "{} {}", m, s);
                }
            }
        }
    }

    #[test]
    fn early_posets_are_minimal_and_minimal_are_liberal(n in 0..=4usize, seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = Density::default();
        let cases: [Structure; 2] = [random_ses(n, &d, &mut r).into(), random_des(n, &d, &mut r).into()];
        for s in cases {
            let (lib, min, ear) = (
                named(&s, PosetMode::Liberal),
                named(&s, PosetMode::Minimal),
                named(&s, PosetMode::Early),
            );
            prop_assert!(ear.is_subset(&min), "{}", s);
            prop_assert!(min.is_subset(&lib), "{}", s);
            let late = named(&s, PosetMode::Late);
            prop_assert!(late.is_subset(&lib), "{}", s);
        }
    }

    #[test]
    fn ses_des_round_trip_keeps_traces(n in 0..=4usize, seed in any::<u64>()) {
        let s = random_ses(n, &Density::default(), &mut rng(seed));
        if let Ok(d) = ses_to_des(&s) {
            let back: Structure = des_to_ses(&d, &FreshNamePolicy::default()).into();
            let s: Structure = s.into();
            let words = |x: &Structure| -> BTreeSet<String> {
                traces(x).iter().map(|t| t.names(x.events()).join(" ")).collect()
            };
            prop_assert_eq!(words(&s), words(&back));
        }
    }

    #[test]
    fn mutation_changes_at_most_one_element(n in 1..=4usize, seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_ses(n, &Density::default(), &mut r);
        let m = mutate_ses(&s, &mut r);
        let count = |x: &dynes::kernel::Ses| {
            x.conflict.pairs().len() + x.causes.pairs().len() + x.drops.triples().len()
        };
        let changed = count(&s).abs_diff(count(&m));
        prop_assert!(changed <= 1 + n, "{} elements differ", changed);
        prop_assert!(validate(&m.into()).ok);
    }

    #[test]
    fn range_of_one_index_is_that_element(f in family().prop_filter("enumerable", |f| *f != Family::Rces), i in any::<u64>()) {
        let spec = SearchSpec::new(f, letters(2)).unwrap();
        let size = space_size(&spec).unwrap();
        let i = i as u128 % size;
        let mut it = enumerate(&spec).unwrap();
        let mut by_index = None;
        while let Some((j, s)) = it.next_indexed() {
            if j == i {
                by_index = Some(s);
                break;
            }
            if j > i {
                break;
            }
        }
        let direct = enumerate_range(&spec, i, i + 1).unwrap().next();
        prop_assert_eq!(direct, by_index);
    }
}
