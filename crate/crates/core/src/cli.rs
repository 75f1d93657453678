//! The `dynes` command line. [`run`] takes the arguments and output streams
//! and returns the exit code: 0 on success, 2 on usage, parse or semantic
//! errors, 3 when `equiv` finds the structures different or `verify` sees a
//! failing claim.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::corpus::{check_fact, example_names, load_example};
use crate::equiv::{equivalent, Kind, NamedPoset};
use crate::error::{Error, Result};
use crate::kernel::{parse_structure, serialize, validate, Alphabet, EventSet, Family, Structure};
use crate::search::{self, Budget, ClaimConfig, SearchSpec, Status};
use crate::semantics::{
    configurations, dces_state_graph, posets, traces, transition_graph, ConfigMode, PosetMode,
};
use crate::translate::{translate, FreshNamePolicy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_DIFFERENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "dynes",
    version,
    about = "Event structures with dynamic causality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Emit key-sorted JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct Limits {
    /// Stop a search after this many structures.
    #[arg(long)]
    max_structures: Option<u64>,
    /// Stop a search after this many seconds.
    #[arg(long)]
    max_seconds: Option<u64>,
}

impl Limits {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_structures: self.max_structures.unwrap_or(d.max_structures),
            max_time: self.max_seconds.map_or(d.max_time, Duration::from_secs),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check well-formedness and report DCES subclasses.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// List the traces.
    Traces {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// List the configurations.
    Configs {
        file: PathBuf,
        /// `trace` or `step`.
        #[arg(long, default_value = "trace")]
        semantics: String,
        #[command(flatten)]
        out: Output,
    },
    /// List the reachable steps between configurations.
    Transitions {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
        /// Emit a DOT graph.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// List the reachable states of a DCES.
    States {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// List the posets of every reachable configuration.
    Posets {
        file: PathBuf,
        /// liberal, minimal, early, late, bsat or precedence.
        #[arg(long, default_value = "early")]
        mode: String,
        #[command(flatten)]
        out: Output,
    },
    /// Translate into another family.
    Translate {
        file: PathBuf,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        out: Output,
    },
    /// Compare two structures.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        /// trace, config, transition, state, poset or poset:MODE.
        #[arg(long, default_value = "trace")]
        kind: String,
        #[command(flatten)]
        out: Output,
    },
    /// Search all structures of a family for one equivalent to a target.
    Search {
        /// The target structure; its events are the search alphabet.
        target: PathBuf,
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "trace")]
        kind: String,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        out: Output,
    },
    /// Check registered claims.
    Verify {
        #[arg(long, required_unless_present = "all")]
        claim: Vec<String>,
        #[arg(long, conflicts_with = "claim")]
        all: bool,
        /// Random instances per universal claim.
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = ClaimConfig::default().seed)]
        seed: u64,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        out: Output,
    },
    /// List the bundled examples, or print one.
    Corpus {
        name: Option<String>,
        #[command(flatten)]
        out: Output,
    },
}

/// An error tied to the input file it came from.
struct Failure {
    file: Option<String>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { file: None, error }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.file, &self.error) {
            (None, e) => write!(f, "{e}"),
            // These already start with `line:column`.
            (
                Some(p),
                e @ (Error::Syntax { .. }
                | Error::UnknownEventAt { .. }
                | Error::ClauseNotAllowed { .. }),
            ) => {
                write!(f, "{p}:{e}")
            }
            (Some(p), e @ Error::Invalid { line: Some(_), .. }) => write!(f, "{p}:{e}"),
            (Some(p), e) => write!(f, "{p}: {e}"),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn load(path: &Path) -> Run<Structure> {
    let shown = path.display().to_string();
    let at = |error| Failure {
        file: Some(shown.clone()),
        error,
    };
    let text = std::fs::read_to_string(path).map_err(|source| {
        at(Error::Io {
            path: shown.clone(),
            source,
        })
    })?;
    parse_structure(&text).map_err(at)
}

/// Attaches a file to errors of an operation on a loaded structure.
fn on<T>(path: &Path, r: Result<T>) -> Run<T> {
    r.map_err(|error| Failure {
        file: Some(path.display().to_string()),
        error,
    })
}

fn names(ev: &Alphabet, s: EventSet) -> Vec<String> {
    let mut v: Vec<String> = ev.set_names(s).into_iter().map(String::from).collect();
    v.sort();
    v
}

fn show(v: &[String]) -> String {
    format!("{{{}}}", v.join(","))
}

fn envelope(kind: &str, structure: Value, result: Value) -> Value {
    json!({ "kind": kind, "structure": structure, "result": result })
}

fn emit_json(w: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(
        w,
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    )
}

/// Sets in size-then-name order.
fn sorted_named(ev: &Alphabet, sets: impl IntoIterator<Item = EventSet>) -> Vec<Vec<String>> {
    let mut v: Vec<Vec<String>> = sets.into_iter().map(|s| names(ev, s)).collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v.dedup();
    v
}

/// Traces in length-then-name order.
fn trace_list(s: &Structure) -> Vec<Vec<String>> {
    let ev = s.events();
    let mut ts: Vec<Vec<String>> = traces(s)
        .iter()
        .map(|t| t.names(ev).into_iter().map(String::from).collect())
        .collect();
    ts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    ts
}

type Edge = (Vec<String>, Vec<String>);

fn edge_list(s: &Structure) -> (Vec<Vec<String>>, Vec<Edge>) {
    let ev = s.events();
    let g = transition_graph(s);
    let nodes = sorted_named(ev, g.nodes.iter().copied());
    let mut edges: Vec<Edge> = g
        .edges
        .iter()
        .map(|&(x, y)| (names(ev, x), names(ev, y)))
        .collect();
    let key = |v: &Vec<String>| (v.len(), v.clone());
    edges.sort_by_key(|(x, y)| (key(x), key(y)));
    (nodes, edges)
}

fn poset_list(s: &Structure, mode: PosetMode) -> Result<Vec<NamedPoset>> {
    let mut ps: Vec<NamedPoset> = posets(s, mode)?
        .iter()
        .map(|p| NamedPoset::new(p, s.events()))
        .collect();
    ps.sort_by(|a, b| {
        (a.carrier.len(), a.order.len(), a).cmp(&(b.carrier.len(), b.order.len(), b))
    });
    ps.dedup();
    Ok(ps)
}

fn as_dces(s: &Structure) -> Result<&crate::kernel::Dces> {
    s.as_dces().ok_or(Error::Unsupported {
        op: "the state graph",
        family: s.family(),
    })
}

/// `{"kind": "traces", "structure": NAME, "result": [[EVENT, ...], ...]}`.
pub fn traces_json(s: &Structure) -> Value {
    envelope("traces", json!(s.name()), json!(trace_list(s)))
}

/// Configurations as sorted name lists, smallest first.
pub fn configs_json(s: &Structure, mode: ConfigMode) -> Value {
    let cs = sorted_named(s.events(), configurations(s, mode));
    envelope("configs", json!(s.name()), json!(cs))
}

/// Steps as `{"from": [...], "to": [...]}`.
pub fn transitions_json(s: &Structure) -> Value {
    let es: Vec<Value> = edge_list(s)
        .1
        .iter()
        .map(|(x, y)| json!({"from": x, "to": y}))
        .collect();
    envelope("transitions", json!(s.name()), json!(es))
}

/// The state graph of a DCES; steps refer to states by position.
pub fn states_json(s: &Structure) -> Result<Value> {
    let d = as_dces(s)?;
    let ev = &d.events;
    let g = dces_state_graph(d);
    let nodes: Vec<_> = g.nodes.iter().collect();
    let index = |st| {
        nodes
            .iter()
            .position(|n| *n == st)
            .expect("edge ends are nodes")
    };
    let state = |n: &crate::semantics::DcesState| {
        let cs: serde_json::Map<String, Value> = ev
            .all()
            .difference(n.config)
            .iter()
            .map(|e| (ev.name(e).to_string(), json!(names(ev, n.cs.get(e)))))
            .collect();
        json!({"config": names(ev, n.config), "cs": cs})
    };
    let ns: Vec<Value> = nodes.iter().map(|n| state(n)).collect();
    let es: Vec<Value> = g
        .edges
        .iter()
        .map(|(x, y)| json!({"from": index(x), "to": index(y)}))
        .collect();
    let result = json!({"initial": g.root.as_ref().map(index), "states": ns, "steps": es});
    Ok(envelope("states", json!(s.name()), result))
}

/// Posets as `{"events": [...], "order": [[u, e], ...]}` with `u < e`.
pub fn posets_json(s: &Structure, mode: PosetMode) -> Result<Value> {
    let v: Vec<Value> = poset_list(s, mode)?
        .iter()
        .map(|p| json!({"events": p.carrier, "order": p.order}))
        .collect();
    Ok(envelope(
        &format!("posets:{mode}"),
        json!(s.name()),
        json!(v),
    ))
}

fn dot_id(v: &[String]) -> String {
    format!("\"{}\"", show(v))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure {
            error: Error::Io { source, .. },
            ..
        }) if source.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            EXIT_ERROR
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure {
        file: None,
        error: Error::Io {
            path: "<stdout>".into(),
            source: e,
        },
    }
}

fn usage(msg: String) -> Failure {
    Error::Usage(msg).into()
}

fn dispatch(cmd: Command, w: &mut dyn Write) -> Run<i32> {
    match cmd {
        Command::Validate { file, out } => {
            // Parsing validates; an invalid structure fails with a line.
            let s = load(&file)?;
            let report = validate(&s);
            let mut result = json!({
                "ok": report.ok,
                "family": s.family().as_str(),
                "events": s.events().len(),
            });
            if let Structure::Dces(d) = &s {
                let flags = on(&file, crate::kernel::classify_dces(d))?;
                result["ssdc"] = json!(flags.is_ssdc);
                result["ebdc"] = json!(flags.is_ebdc);
            }
            if out.json {
                emit_json(w, &envelope("validate", json!(s.name()), result)).map_err(io)?;
            } else {
                write!(
                    w,
                    "{}: valid {} on {} events",
                    s.name(),
                    s.family(),
                    s.events().len()
                )
                .map_err(io)?;
                if let Structure::Dces(_) = &s {
                    let tag = |k: &str| {
                        if result[k] == json!(true) {
                            "yes"
                        } else {
                            "no"
                        }
                    };
                    write!(
                        w,
                        " (single-state: {}, extended-bundle: {})",
                        tag("ssdc"),
                        tag("ebdc")
                    )
                    .map_err(io)?;
                }
                writeln!(w).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Traces { file, out } => {
            let s = load(&file)?;
            if out.json {
                emit_json(w, &traces_json(&s)).map_err(io)?;
            } else {
                for t in trace_list(&s) {
                    writeln!(
                        w,
                        "{}",
                        if t.is_empty() {
                            "ε".to_string()
                        } else {
                            t.join(" ")
                        }
                    )
                    .map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Configs {
            file,
            semantics,
            out,
        } => {
            let mode = match semantics.as_str() {
                "trace" => ConfigMode::Trace,
                "step" => ConfigMode::Step,
                other => return Err(usage(format!("unknown configuration semantics `{other}`"))),
            };
            let s = load(&file)?;
            if out.json {
                emit_json(w, &configs_json(&s, mode)).map_err(io)?;
            } else {
                for c in sorted_named(s.events(), configurations(&s, mode)) {
                    writeln!(w, "{}", show(&c)).map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Transitions { file, out, dot } => {
            let s = load(&file)?;
            let (nodes, edges) = edge_list(&s);
            if dot {
                writeln!(w, "digraph \"{}\" {{", s.name()).map_err(io)?;
                for n in &nodes {
                    writeln!(w, "  {};", dot_id(n)).map_err(io)?;
                }
                for (x, y) in &edges {
                    writeln!(w, "  {} -> {};", dot_id(x), dot_id(y)).map_err(io)?;
                }
                writeln!(w, "}}").map_err(io)?;
            } else if out.json {
                emit_json(w, &transitions_json(&s)).map_err(io)?;
            } else {
                for (x, y) in &edges {
                    writeln!(w, "{} -> {}", show(x), show(y)).map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::States { file, out, dot } => {
            let s = load(&file)?;
            let d = on(&file, as_dces(&s))?;
            let ev = &d.events;
            let g = dces_state_graph(d);
            let nodes: Vec<_> = g.nodes.iter().collect();
            let index = |st| {
                nodes
                    .iter()
                    .position(|n| *n == st)
                    .expect("edge ends are nodes")
            };
            if dot {
                writeln!(w, "digraph \"{}\" {{", s.name()).map_err(io)?;
                for (i, n) in nodes.iter().enumerate() {
                    let label = format!("{} {}", ev.show_set(n.config), n.cs.show(ev, n.config));
                    writeln!(w, "  s{i} [label=\"{label}\"];").map_err(io)?;
                }
                for (x, y) in &g.edges {
                    writeln!(w, "  s{} -> s{};", index(x), index(y)).map_err(io)?;
                }
                writeln!(w, "}}").map_err(io)?;
            } else if out.json {
                emit_json(w, &on(&file, states_json(&s))?).map_err(io)?;
            } else {
                for (x, y) in &g.edges {
                    writeln!(w, "{} -> {}", x.show(ev), y.show(ev)).map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Posets { file, mode, out } => {
            let mode: PosetMode = mode.parse()?;
            let s = load(&file)?;
            if out.json {
                emit_json(w, &on(&file, posets_json(&s, mode))?).map_err(io)?;
            } else {
                for p in on(&file, poset_list(&s, mode))? {
                    writeln!(w, "{p}").map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Translate { file, to, out } => {
            let to: Family = to.parse()?;
            let s = load(&file)?;
            let t = on(&file, translate(&s, to, &FreshNamePolicy::default()))?;
            let text = serialize(&t);
            if out.json {
                let result = json!({"family": to.as_str(), "text": text});
                emit_json(w, &envelope("translate", json!(s.name()), result)).map_err(io)?;
            } else {
                write!(w, "{text}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Equiv {
            first,
            second,
            kind,
            out,
        } => {
            let kind: Kind = kind.parse()?;
            let a = load(&first)?;
            let b = load(&second)?;
            let v = on(&second, equivalent(&a, &b, kind))?;
            let witness = v.witness.as_ref().map(|w| w.to_string());
            if out.json {
                let result = json!({"equal": v.equal, "witness": witness});
                let names = json!([a.name(), b.name()]);
                emit_json(w, &envelope(&format!("equiv:{kind}"), names, result)).map_err(io)?;
            } else if let Some(wt) = witness {
                writeln!(w, "not {kind}-equivalent: {wt}").map_err(io)?;
            } else {
                writeln!(w, "{kind}-equivalent").map_err(io)?;
            }
            Ok(if v.equal { EXIT_OK } else { EXIT_DIFFERENT })
        }
        Command::Search {
            target,
            family,
            kind,
            limits,
            out,
        } => {
            let family: Family = family.parse()?;
            let kind: Kind = kind.parse()?;
            let t = load(&target)?;
            let spec = SearchSpec::new(family, t.events().clone())?.budget(limits.budget());
            let o = on(&target, search::find_match(&spec, &t, kind))?;
            let (status, found) = match &o.status {
                Status::Found(s) => ("found", Some(serialize(s))),
                Status::ExhaustedNone => ("exhausted-none", None),
                Status::BudgetExceeded(_) => ("budget-exceeded", None),
            };
            if out.json {
                let result = json!({
                    "status": status,
                    "explored": o.explored,
                    "space": o.space.to_string(),
                    "match": found,
                });
                emit_json(
                    w,
                    &envelope(&format!("search:{family}:{kind}"), json!(t.name()), result),
                )
                .map_err(io)?;
            } else {
                writeln!(w, "{o}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            claim,
            all,
            instances,
            seed,
            limits,
            out,
        } => {
            let ids: Vec<&str> = if all {
                search::claim_ids()
            } else {
                claim.iter().map(String::as_str).collect()
            };
            let cfg = ClaimConfig {
                budget: limits.budget(),
                seed,
                instances,
            };
            let reports = search::verify_claims(&ids, &cfg)?;
            let passed = reports.iter().all(|r| r.passed);
            if out.json {
                let v: Vec<Value> = reports
                    .iter()
                    .map(|r| {
                        json!({
                            "id": r.id,
                            "statement": r.statement,
                            "passed": r.passed,
                            "evidence": r.evidence,
                        })
                    })
                    .collect();
                emit_json(w, &envelope("verify", Value::Null, json!(v))).map_err(io)?;
            } else {
                for r in &reports {
                    let tag = if r.passed { "PASS" } else { "FAIL" };
                    writeln!(w, "{tag} {}: {}", r.id, r.statement).map_err(io)?;
                    for line in &r.evidence {
                        writeln!(w, "    {line}").map_err(io)?;
                    }
                }
            }
            Ok(if passed { EXIT_OK } else { EXIT_DIFFERENT })
        }
        Command::Corpus { name, out } => {
            if let Some(name) = name {
                let e = load_example(&name)?;
                if out.json {
                    let result = json!({"family": e.structure.family().as_str(), "text": e.source});
                    emit_json(w, &envelope("corpus", json!(name), result)).map_err(io)?;
                } else {
                    write!(w, "{}", e.source).map_err(io)?;
                }
                return Ok(EXIT_OK);
            }
            let mut ok = true;
            let mut rows = Vec::new();
            for n in example_names() {
                let e = load_example(n)?;
                let facts: Vec<Value> = e
                    .expected_facts
                    .iter()
                    .map(|f| {
                        let r = check_fact(&e.structure, f);
                        ok &= r.is_ok();
                        json!({"fact": format!("{f:?}"), "holds": r.is_ok(), "detail": r.err()})
                    })
                    .collect();
                rows.push(json!({
                    "name": n,
                    "family": e.structure.family().as_str(),
                    "facts": facts,
                }));
            }
            if out.json {
                emit_json(w, &envelope("corpus", Value::Null, json!(rows))).map_err(io)?;
            } else {
                for r in &rows {
                    let facts = r["facts"].as_array().expect("built above");
                    let held = facts.iter().filter(|f| f["holds"] == json!(true)).count();
                    writeln!(
                        w,
                        "{:<22} {:<5} {held}/{} facts hold",
                        r["name"].as_str().unwrap_or_default(),
                        r["family"].as_str().unwrap_or_default(),
                        facts.len()
                    )
                    .map_err(io)?;
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_DIFFERENT })
        }
    }
}
