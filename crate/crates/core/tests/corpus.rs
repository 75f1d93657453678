use dynes::corpus::{check_all, example_names, load_example};
use dynes::kernel::{parse_structure, serialize};
use dynes::Error;

#[test]
fn every_fact_holds() {
    let failures: Vec<_> = check_all()
        .into_iter()
        .filter(|(_, _, r)| r.is_err())
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn every_example_validates_and_round_trips() {
    for name in example_names() {
        let entry = load_example(name).unwrap();
        assert_eq!(entry.structure.name(), name);
        assert!(entry.structure.validate().ok, "{name}");
        let again = parse_structure(&serialize(&entry.structure)).unwrap();
        assert_eq!(again, entry.structure, "{name}");
    }
}

#[test]
fn reconstructions_list_their_constraints() {
    for name in ["rho_gamma", "rho_sigma", "fig2_ebes"] {
        let src = load_example(name).unwrap().source;
        assert!(src.lines().any(|l| l.starts_with("# Constraint")), "{name}");
    }
}

#[test]
fn unknown_example() {
    assert!(matches!(
        load_example("nope"),
        Err(Error::UnknownExample(_))
    ));
}

#[test]
fn xi_sigma_structure() {
    let x = load_example("xi_sigma").unwrap().structure;
    let x = x.as_ebes().unwrap();
    assert_eq!(x.disabling.pairs(), vec![(0, 1)]);
    assert!(x.bundles.is_empty());
}
