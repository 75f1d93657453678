use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "corpus",
        &format!("{name}.est"),
    ]
    .iter()
    .collect();
    p.display().to_string()
}

fn dynes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn traces_json_lists_eleven_traces() {
    let o = dynes(&["traces", &corpus("sigma_xi"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["kind"], "traces");
    assert_eq!(v["structure"], "sigma_xi");
    let ts = v["result"].as_array().unwrap();
    assert_eq!(ts.len(), 11);
    assert_eq!(ts[0], serde_json::json!([]));
}

#[test]
fn json_is_key_sorted_and_stable() {
    let a = dynes(&["states", &corpus("lemma1_delta"), "--json"]);
    let b = dynes(&["states", &corpus("lemma1_delta"), "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let top: Vec<usize> = ["\"kind\"", "\"result\"", "\"structure\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(top.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn equiv_state_reports_a_witness_and_exits_3() {
    let o = dynes(&[
        "equiv",
        &corpus("lemma1_delta"),
        &corpus("lemma1_delta_prime"),
        "--kind",
        "state",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("state transition"));
}

#[test]
fn equiv_of_a_file_with_itself_exits_0() {
    let f = corpus("rho_gamma");
    let o = dynes(&["equiv", &f, &f, "--kind", "transition", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["equal"], true);
}

#[test]
fn verify_lem6_exits_0() {
    let o = dynes(&["verify", "--claim", "lem6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS lem6"));
}

#[test]
fn verify_rejects_unknown_claims() {
    let o = dynes(&["verify", "--claim", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown claim"));
}

#[test]
fn parse_errors_name_file_and_line() {
    let mut f = tempfile::Builder::new().suffix(".est").tempfile().unwrap();
    write!(f, "structure x : SES\nevents a b\ncause a -> q\n").unwrap();
    let path = f.path().display().to_string();
    let o = dynes(&["traces", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains(&format!("{path}:3:")), "{err}");
}

#[test]
fn invalid_structures_name_the_line() {
    let mut f = tempfile::Builder::new().suffix(".est").tempfile().unwrap();
    write!(
        f,
        "structure x : SES\nevents a b\nconflict a # b\ndrop [a -> b] by b\n"
    )
    .unwrap();
    let path = f.path().display().to_string();
    let o = dynes(&["validate", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains(&format!("{path}:4:")), "{err}");
}

#[test]
fn missing_files_and_wrong_families_exit_2() {
    assert_eq!(
        dynes(&["traces", "/nonexistent.est"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dynes(&["states", &corpus("sigma_xi")]).status.code(),
        Some(2)
    );
    assert_eq!(
        dynes(&["posets", &corpus("sigma_xi"), "--mode", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(dynes(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn dot_labels_nodes_with_configurations() {
    let o = dynes(&["transitions", &corpus("rho_gamma"), "--dot"]);
    let text = stdout(&o);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"{a}\" -> \"{a,c}\";"));
    assert!(!text.contains("\"{a,b}\" -> \"{a,b,c}\""));
    let s = stdout(&dynes(&["states", &corpus("lemma1_delta"), "--dot"]));
    assert!(s.contains("label=\"{a} {b:{}, c:{}, d:{c}}\""), "{s}");
}

#[test]
fn configs_and_posets() {
    let o = dynes(&["configs", &corpus("beta_gamma"), "--json"]);
    let want = serde_json::json!([[], ["a"], ["b"], ["a", "c"], ["b", "c"]]);
    assert_eq!(json(&o)["result"], want);
    let o = dynes(&[
        "posets",
        &corpus("fig2_ebes"),
        "--mode",
        "precedence",
        "--json",
    ]);
    assert_eq!(json(&o)["kind"], "posets:precedence");
}

#[test]
fn translate_output_parses_back() {
    let o = dynes(&["translate", &corpus("xi_sigma"), "--to", "dces"]);
    assert_eq!(o.status.code(), Some(0));
    let s = dynes::parse_structure(&stdout(&o)).unwrap();
    assert_eq!(s.family(), dynes::Family::Dces);
    let bad = dynes(&["translate", &corpus("xi_sigma"), "--to", "ses"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn search_reports_exhaustion() {
    let o = dynes(&["search", &corpus("xi_sigma"), "--family", "ses", "--json"]);
    let v = json(&o);
    assert_eq!(v["result"]["status"], "exhausted-none");
    assert_eq!(v["result"]["explored"], 1250);
    let o = dynes(&[
        "search",
        &corpus("gamma_sigma"),
        "--family",
        "ges",
        "--json",
    ]);
    assert_eq!(json(&o)["result"]["status"], "found");
    let o = dynes(&[
        "search",
        &corpus("sigma_xi"),
        "--family",
        "ses",
        "--max-seconds",
        "0",
        "--json",
    ]);
    assert_eq!(json(&o)["result"]["status"], "budget-exceeded");
}

#[test]
fn corpus_lists_and_prints_examples() {
    let o = dynes(&["corpus"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().count(),
        dynes::corpus::example_names().len()
    );
    let o = dynes(&["corpus", "rho_sigma"]);
    assert!(stdout(&o).contains("structure rho_sigma : RCES"));
}

#[test]
fn in_process_run_matches_the_binary() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let f = corpus("gamma_sigma");
    let code = dynes::cli::run(
        ["dynes", "traces", f.as_str(), "--json"],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(out, dynes(&["traces", &f, "--json"]).stdout);
}
