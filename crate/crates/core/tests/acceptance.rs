//! One test per acceptance criterion. Each prints a single PASS or FAIL line
//! on stderr, outside the harness's output capture.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use dynes::corpus::{check_fact, load_example, ExpectedFact};
use dynes::equiv::{equivalent, Kind};
use dynes::search::{
    enumerate, enumerate_range, letters, space_size, verify_claims, ClaimConfig, ClaimReport,
    SearchSpec,
};
use dynes::semantics::{configurations, traces, ConfigMode};
use dynes::{serialize, Family, Structure};

fn report(n: u32, ok: bool, what: &str, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "acceptance criterion {n} {tag}: {what}{detail}");
}

fn finish(n: u32, what: &str, failures: Vec<String>, elapsed: Duration) {
    let detail = if failures.is_empty() {
        format!(" ({:.2?})", elapsed)
    } else {
        format!(" ({:.2?}): {}", elapsed, failures.join("; "))
    };
    report(n, failures.is_empty(), what, &detail);
    assert!(
        failures.is_empty(),
        "criterion {n}: {}",
        failures.join("\n")
    );
}

fn example(name: &str) -> Structure {
    load_example(name).unwrap().structure
}

fn trace_words(s: &Structure) -> BTreeSet<String> {
    traces(s)
        .iter()
        .map(|t| t.names(s.events()).concat())
        .collect()
}

fn words(v: &[&str]) -> BTreeSet<String> {
    v.iter().map(|w| w.to_string()).collect()
}

fn run_claims(ids: &[&str]) -> Vec<(ClaimReport, Duration)> {
    ids.iter()
        .map(|id| {
            let t = Instant::now();
            let r = verify_claims(&[id], &ClaimConfig::default())
                .unwrap()
                .remove(0);
            (r, t.elapsed())
        })
        .collect()
}

fn claim_failures(runs: &[(ClaimReport, Duration)], limit: Duration) -> Vec<String> {
    let mut out = Vec::new();
    for (r, t) in runs {
        if !r.passed {
            let why: Vec<&String> = r
                .evidence
                .iter()
                .filter(|l| l.starts_with("FAILED"))
                .collect();
            out.push(format!("{} failed: {why:?}", r.id));
        }
        if *t > limit {
            out.push(format!("{} took {t:.2?}", r.id));
        }
    }
    out
}

#[test]
fn criterion_1_corpus_facts() {
    let t = Instant::now();
    let mut f = Vec::new();
    let sigma = words(&[
        "", "a", "c", "ab", "ac", "ca", "cb", "abc", "acb", "cab", "cba",
    ]);
    if trace_words(&example("sigma_xi")) != sigma {
        f.push("traces(sigma_xi)".to_string());
    }
    if trace_words(&example("xi_sigma")) != words(&["", "e", "f", "ef"]) {
        f.push("traces(xi_sigma)".to_string());
    }
    if trace_words(&example("gamma_sigma")) != words(&["", "a", "b", "ab"]) {
        f.push("traces(gamma_sigma)".to_string());
    }
    let beta = example("beta_gamma");
    let configs: BTreeSet<String> = configurations(&beta, ConfigMode::Trace)
        .into_iter()
        .map(|c| beta.events().show_set(c))
        .collect();
    if configs != words(&["{}", "{a}", "{b}", "{a,c}", "{b,c}"]) {
        f.push(format!("configurations(beta_gamma) = {configs:?}"));
    }
    let gx = trace_words(&example("gamma_xi"));
    for w in ["a", "c", "ca", "bac"] {
        if !gx.contains(w) {
            f.push(format!("{w} missing from traces(gamma_xi)"));
        }
    }
    if gx.contains("ac") {
        f.push("ac in traces(gamma_xi)".into());
    }
    let elapsed = t.elapsed();
    if elapsed > Duration::from_secs(1) {
        f.push(format!("took {elapsed:.2?}"));
    }
    finish(1, "corpus traces and configurations", f, elapsed);
}

#[test]
fn criterion_2_lemma1() {
    let t = Instant::now();
    let mut f = Vec::new();
    let d = example("lemma1_delta");
    let p = example("lemma1_delta_prime");
    let tr = equivalent(&d, &p, Kind::Transition).unwrap();
    if let Some(w) = &tr.witness {
        f.push(format!("not transition-equal: {w}"));
    }
    if equivalent(&d, &p, Kind::State).unwrap().equal {
        f.push("state-equal".into());
    }
    for (path, present) in [(&["a", "b"], true), (&["b", "a"], false)] {
        let fact = ExpectedFact::StepAfterPath {
            path,
            fire: &["d"],
            present,
        };
        if let Err(e) = check_fact(&d, &fact) {
            f.push(format!("after {path:?}: {e}"));
        }
    }
    let elapsed = t.elapsed();
    if elapsed > Duration::from_secs(1) {
        f.push(format!("took {elapsed:.2?}"));
    }
    finish(2, "lemma1_delta vs lemma1_delta_prime", f, elapsed);
}

#[test]
fn criterion_3_lemma6_search() {
    let t = Instant::now();
    let runs = run_claims(&["lem6"]);
    let mut f = claim_failures(&runs, Duration::from_secs(60));
    let r = &runs[0].0;
    // Main search, plus the complement region of the last filter.
    for want in ["1185921 structures", "complement: SES trace search"] {
        if !r.evidence.iter().any(|l| l.contains(want)) {
            f.push(format!("no evidence line with `{want}`"));
        }
    }
    let filters_checked = r
        .evidence
        .iter()
        .filter(|l| l.contains("excluded samples fail to match") && !l.starts_with("complement"))
        .count();
    if filters_checked != 3 {
        f.push(format!("{filters_checked} of 3 pruning facts sampled"));
    }
    finish(3, "no SES trace-equal to lemma6_des", f, t.elapsed());
}

#[test]
fn criterion_4_thm3_both_directions() {
    let t = Instant::now();
    let runs = run_claims(&["thm3-ses-side", "thm3-ebes-side"]);
    let f = claim_failures(&runs, Duration::from_secs(30));
    finish(
        4,
        "no EBES for sigma_xi, no SES for xi_sigma",
        f,
        t.elapsed(),
    );
}

#[test]
fn criterion_5_nonexistence_lemmas() {
    let t = Instant::now();
    let runs = run_claims(&["lem11", "lem12", "lem13", "lem15", "lem22", "lem28", "lem9"]);
    let f = claim_failures(&runs, Duration::from_secs(120));
    finish(
        5,
        "lem11, lem12, lem13, lem15, lem22, lem28, lem9",
        f,
        t.elapsed(),
    );
}

#[test]
fn criterion_6_property_suites() {
    let t = Instant::now();
    let ids = [
        "lem3",
        "lem10",
        "thm11",
        "thm12",
        "thm13",
        "lem2",
        "lem21",
        "lem16",
        "lem23",
        "lem24",
        "thm14",
        "lem26",
        "lem27",
        "thm2-roundtrip",
    ];
    let runs = run_claims(&ids);
    let mut f = claim_failures(&runs, Duration::from_secs(60));
    for (r, _) in &runs {
        if !r
            .evidence
            .iter()
            .any(|l| l.contains("200 random instances"))
        {
            f.push(format!("{} did not run 200 instances", r.id));
        }
    }
    finish(
        6,
        "equivalence theorems on 200 random instances each",
        f,
        t.elapsed(),
    );
}

#[test]
fn criterion_7_enumerator_self_check() {
    let t = Instant::now();
    let mut f = Vec::new();
    // Closed forms: conflict subsets times per-pair (or per-target) choices.
    let expected = [
        (Family::Ses, 1, 3u128),
        (Family::Ses, 2, 2 * 5u128.pow(4)),
        (Family::Ges, 1, 4),
        (Family::Ges, 2, 2 * 8u128.pow(4)),
        (Family::Dces, 1, 5),
        (Family::Dces, 2, 2 * 17u128.pow(4)),
        (Family::Des, 1, 1),
        (Family::Des, 2, 2 * 2 * 2),
        (Family::Bes, 1, 1),
        (Family::Bes, 2, 8),
        (Family::Ebes, 1, 1),
        (Family::Ebes, 2, 16),
    ];
    let key = |s: &Structure| serialize(s);
    for (family, n, want) in expected {
        let spec = SearchSpec::new(family, letters(n)).unwrap();
        let all: Vec<String> = enumerate(&spec).unwrap().map(|s| key(&s)).collect();
        if all.len() as u128 != want {
            f.push(format!(
                "{family} on {n}: {} structures, expected {want}",
                all.len()
            ));
        }
        let again: Vec<String> = enumerate(&spec).unwrap().map(|s| key(&s)).collect();
        if again != all {
            f.push(format!("{family} on {n}: enumeration not deterministic"));
        }
        let size = space_size(&spec).unwrap();
        let mut parts: Vec<String> = Vec::new();
        for i in (0..5).rev() {
            let (a, b) = (size * i / 5, size * (i + 1) / 5);
            parts.extend(enumerate_range(&spec, a, b).unwrap().map(|s| key(&s)));
        }
        let (mut x, mut y) = (parts, all);
        x.sort();
        y.sort();
        if x != y {
            f.push(format!("{family} on {n}: range partition differs"));
        }
    }
    finish(
        7,
        "enumerator counts, determinism and partition",
        f,
        t.elapsed(),
    );
}
