use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wdm_core::bounds::{audit_with, AuditConfig, Direction, SeedFacts};
use wdm_core::cascade::DEFAULT_EXACT_CAP;
use wdm_core::constructions::{
    big_join_counterexample, figure4_tree, tight_cubic, torus_pattern, triangles_with_center,
    wheel_join, Construction,
};
use wdm_core::corpus::{generate_corpus, CorpusConfig, CorpusThreshold};
use wdm_core::graph::DEFAULT_PATH_CAP;
use wdm_core::io::{
    emit_bundle, emit_graph, load_certificate, parse_bundle, parse_graph, parse_minrep,
    split_bundle, GraphFile,
};
use wdm_core::reduction::{
    extract_solution, lift_solution, reduce_to_wdm_with, solve_minrep_bruteforce, Exponents,
    ReduceOptions, DEFAULT_REDUCE_GUARD,
};
use wdm_core::solvers::{greedy_wdm, min_kind_with, SolveOptions};
use wdm_core::{assign_threshold, MonopolyKind, ThresholdMode, Thresholds, WdmError};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

/// Weak dynamic monopolies: generate, solve, verify, bound and reduce.
///
/// Exit codes: 0 success, 1 verification failed, 2 usage or input error,
/// 3 instance exceeds a size cap. Caps can be raised with WDM_EXACT_CAP,
/// WDM_PATH_CAP and WDM_REDUCE_CAP.
#[derive(Parser)]
#[command(name = "wdm", version)]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a family instance and its certificate as a bundle.
    Gen(GenArgs),
    /// Find a minimum seed of the given kind.
    Solve(SolveArgs),
    /// Re-verify a bundle, or a graph file plus a certificate.
    Verify(VerifyArgs),
    /// Evaluate every bound, optionally against exact values.
    Bounds(BoundsArgs),
    /// Build the reduced graph of a MINREP instance.
    Reduce(ReduceArgs),
    /// Solve a MINREP instance by brute force.
    MinrepSolve(MinrepSolveArgs),
    /// Write a seeded random corpus of graph files.
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Triangles,
    TightCubic,
    Wheel,
    Torus,
    BigJoin,
    Figure4,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    /// Family parameters: triangles m, tight-cubic t, wheel n, torus n,
    /// big-join k n, figure4 none.
    params: Vec<usize>,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArg {
    /// Thresholds when the graph file has none, or to override it:
    /// strict, simple or a positive constant.
    #[arg(long, short)]
    threshold: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    /// wdm, dyn or mono.
    kind: String,
    graph: PathBuf,
    #[command(flatten)]
    threshold: ThresholdArg,
    /// Exact search cap on the vertex count (env WDM_EXACT_CAP).
    #[arg(long)]
    cap: Option<usize>,
    /// Comma-separated vertices every seed must contain.
    #[arg(long, value_delimiter = ',')]
    include: Vec<usize>,
    /// Comma-separated vertices no seed may contain.
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<usize>,
    /// Fix vertex 0 in the seed; only sound on vertex-transitive graphs.
    #[arg(long)]
    vertex_transitive: bool,
    /// Greedy elimination instead of exact search (wdm only).
    #[arg(long)]
    heuristic: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// A bundle, or a graph file when CERTIFICATE is given; `-` reads stdin.
    input: String,
    certificate: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    graph: PathBuf,
    #[command(flatten)]
    threshold: ThresholdArg,
    /// Compare against an exact minimum seed and its time range.
    #[arg(long)]
    exact: bool,
    /// Compare against this seed's exact time range instead.
    #[arg(long, value_delimiter = ',', conflicts_with = "exact")]
    seed: Vec<usize>,
    #[arg(long)]
    cap: Option<usize>,
    /// Largest vertex count for the longest-path search (env WDM_PATH_CAP).
    #[arg(long)]
    path_cap: Option<usize>,
    #[arg(long, default_value_t = 8)]
    degree_constant: usize,
}

#[derive(Args)]
struct ReduceArgs {
    minrep: PathBuf,
    /// Largest N accepted (env WDM_REDUCE_CAP).
    #[arg(long)]
    guard: Option<usize>,
    /// Divide every gadget exponent by this, rounding up.
    #[arg(long)]
    scale: Option<u32>,
    /// Write the reduced graph file here.
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Args)]
struct MinrepSolveArgs {
    minrep: PathBuf,
    /// Also reduce, lift the optimum and extract it back.
    #[arg(long)]
    lift: bool,
    #[arg(long)]
    guard: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorpusRule {
    Strict,
    Simple,
    Random,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, value_enum, default_value = "strict")]
    rule: CorpusRule,
    /// Directory for the files; without it, graphs go to stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Failed(String),
    Cap(String),
}

impl From<WdmError> for Failure {
    fn from(e: WdmError) -> Self {
        if e.is_capability() {
            return Failure::Cap(e.to_string());
        }
        match e {
            WdmError::InvalidParameter(_) | WdmError::Parse { .. } => Failure::Usage(e.to_string()),
            other => Failure::Failed(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn env_cap(name: &str, flag: Option<usize>, default: usize) -> Result<usize, Failure> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(name) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{name}={s:?} is not a number"))),
        Err(_) => Ok(default),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn read_path(path: &Path) -> Result<String, Failure> {
    read_input(&path.to_string_lossy())
}

fn write_output(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values always serialize"));
}

fn thresholds_for(f: &GraphFile, arg: &ThresholdArg) -> Result<Thresholds, Failure> {
    let mode = match arg.threshold.as_deref() {
        None => match &f.tau {
            Some(t) => return Ok(t.clone()),
            None => ThresholdMode::StrictMajority,
        },
        Some("strict") => ThresholdMode::StrictMajority,
        Some("simple") => ThresholdMode::SimpleMajority,
        Some(s) => ThresholdMode::Constant(
            s.parse()
                .map_err(|_| Failure::Usage(format!("unknown threshold rule {s:?}")))?,
        ),
    };
    Ok(assign_threshold(&f.graph, mode)?)
}

/// Reads a graph file; for a bundle, only the graph part is used.
fn load_graph(path: &Path) -> Result<GraphFile, Failure> {
    let text = read_path(path)?;
    let graph_text = split_bundle(&text).map_or(text.as_str(), |(g, _, _)| g);
    parse_graph(graph_text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn build_family(family: Family, p: &[usize]) -> Result<Construction, Failure> {
    let want = |k: usize| -> Result<(), Failure> {
        if p.len() == k {
            Ok(())
        } else {
            Err(Failure::Usage(format!("family takes {k} parameter(s), got {}", p.len())))
        }
    };
    let c = match family {
        Family::Triangles => {
            want(1)?;
            triangles_with_center(p[0])
        }
        Family::TightCubic => {
            want(1)?;
            tight_cubic(p[0])
        }
        Family::Wheel => {
            want(1)?;
            wheel_join(p[0])
        }
        Family::Torus => {
            want(1)?;
            torus_pattern(p[0])
        }
        Family::BigJoin => {
            want(2)?;
            let (k, n) = (p[0], p[1]);
            // clique vertices only need one active rim neighbour; the rim
            // waits for the whole clique
            big_join_counterexample(k, n, &vec![1; 2 * k], &vec![(2 * k) as u32; n])
        }
        Family::Figure4 => {
            want(0)?;
            figure4_tree()
        }
    };
    Ok(c?)
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Triangles => "triangles",
        Family::TightCubic => "tight-cubic",
        Family::Wheel => "wheel",
        Family::Torus => "torus",
        Family::BigJoin => "big-join",
        Family::Figure4 => "figure4",
    }
}

fn cmd_gen(a: GenArgs, json_out: bool) -> CmdResult {
    let c = build_family(a.family, &a.params)?;
    let params: Vec<String> = a.params.iter().map(|p| p.to_string()).collect();
    let name = format!("{} {}", family_name(a.family), params.join(" "));
    let f = GraphFile::new(c.graph.clone(), Some(c.tau.clone()))
        .named(name.trim_end())
        .with_provenance(c.certificate.provenance.clone());
    let text = if json_out {
        let mut s = serde_json::to_string_pretty(&json!({
            "graph": emit_graph(&f),
            "certificate": c.certificate,
            "n": c.graph.n(),
            "m": c.graph.m(),
        }))
        .expect("JSON values always serialize");
        s.push('\n');
        s
    } else {
        emit_bundle(&f, &c.certificate)?
    };
    match a.out {
        Some(path) => write_output(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(a: SolveArgs, json_out: bool) -> CmdResult {
    let kind = MonopolyKind::parse(&a.kind)
        .ok_or_else(|| Failure::Usage(format!("unknown kind {:?}; use wdm, dyn or mono", a.kind)))?;
    let f = load_graph(&a.graph)?;
    let tau = thresholds_for(&f, &a.threshold)?;
    let r = if a.heuristic {
        if kind != MonopolyKind::Weak {
            return Err(Failure::Usage("--heuristic only applies to wdm".into()));
        }
        greedy_wdm(&f.graph, &tau)?
    } else {
        let opts = SolveOptions {
            cap: env_cap("WDM_EXACT_CAP", a.cap, DEFAULT_EXACT_CAP)?,
            include: a.include,
            exclude: a.exclude,
            vertex_transitive: a.vertex_transitive,
        };
        min_kind_with(&f.graph, &tau, kind, &opts)?
    };
    if json_out {
        print_json(&serde_json::to_value(&r).expect("results serialize"));
    } else {
        println!("{}", r.size);
        println!("seed {}", join_ids(&r.witness));
        if let Some(p) = &r.partition {
            for (i, layer) in p.layers().iter().enumerate() {
                println!("D{i} {}", join_ids(layer));
            }
        }
        if !r.exact {
            println!("heuristic: size is an upper bound");
        }
    }
    Ok(())
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_verify(a: VerifyArgs, json_out: bool) -> CmdResult {
    let text = read_input(&a.input)?;
    let outcome = match &a.certificate {
        None => {
            if split_bundle(&text).is_none() {
                return Err(Failure::Usage(format!(
                    "{}: not a bundle; pass the certificate file as a second argument",
                    a.input
                )));
            }
            parse_bundle(&text).map(|(_, c)| c)
        }
        Some(cert_path) => {
            let f = parse_graph(&text)?;
            let tau = f
                .tau
                .ok_or_else(|| Failure::Usage("graph file has no thresholds".into()))?;
            let cert_text = read_path(cert_path)?;
            load_certificate(&cert_text, &f.graph, &tau)
        }
    };
    match outcome {
        Ok(cert) => {
            if json_out {
                print_json(&json!({"verified": true, "family": cert.family, "claim": cert.claim,
                    "size": cert.expected_size, "time": cert.expected_time}));
            } else {
                let time = cert.expected_time.map_or(String::new(), |t| format!(", time {t}"));
                println!(
                    "verified: {} {} seed of size {}{time}",
                    cert.family,
                    cert.claim.name(),
                    cert.expected_size
                );
            }
            Ok(())
        }
        Err(WdmError::Parse { line, message }) => {
            Err(Failure::Usage(format!("line {line}: {message}")))
        }
        Err(e) if e.is_capability() => Err(Failure::Cap(e.to_string())),
        Err(e) => {
            if json_out {
                print_json(&json!({"verified": false, "reason": e.to_string()}));
            }
            Err(Failure::Failed(e.to_string()))
        }
    }
}

fn cmd_bounds(a: BoundsArgs, json_out: bool) -> CmdResult {
    let f = load_graph(&a.graph)?;
    let tau = thresholds_for(&f, &a.threshold)?;
    let cap = env_cap("WDM_EXACT_CAP", a.cap, DEFAULT_EXACT_CAP)?;
    let cfg = AuditConfig {
        degree_constant: a.degree_constant,
        path_cap: env_cap("WDM_PATH_CAP", a.path_cap, DEFAULT_PATH_CAP)?,
    };
    let facts = if a.exact {
        Some(SeedFacts::minimum(&f.graph, &tau, &SolveOptions::with_cap(cap))?)
    } else if !a.seed.is_empty() {
        Some(SeedFacts::for_seed(&f.graph, &tau, &a.seed, cap)?)
    } else {
        None
    };
    let report = match audit_with(&f.graph, &tau, facts.as_ref(), &cfg) {
        Ok(r) => r,
        Err(WdmError::BoundViolated(msg)) => {
            if json_out {
                print_json(&json!({"violated": msg}));
            } else {
                println!("bound violated: {msg}");
            }
            return Err(Failure::Failed(msg));
        }
        Err(e) => return Err(e.into()),
    };
    let tight: Vec<&str> = report
        .entries
        .iter()
        .filter(|e| e.applicable && e.direction == Direction::LowerSize)
        .filter(|e| match (e.rounded(), e.compared) {
            (Some(r), Some(c)) => r == c.into(),
            _ => false,
        })
        .map(|e| e.name.as_str())
        .collect();
    if json_out {
        print_json(&json!({"facts": facts, "report": report, "tight": tight}));
    } else {
        if let Some(fa) = &facts {
            println!(
                "seed size {}{}, time range [{}, {}]",
                fa.size,
                if fa.minimum { " (minimum)" } else { "" },
                fa.t_min,
                fa.t_max
            );
        }
        print!("{}", report.to_table());
        if facts.is_some() {
            println!("all applicable bounds satisfied");
            if !tight.is_empty() {
                println!("tight: {}", tight.join(", "));
            }
        }
    }
    Ok(())
}

fn reduce_options(guard: Option<usize>, scale: Option<u32>) -> Result<ReduceOptions, Failure> {
    Ok(ReduceOptions {
        guard: env_cap("WDM_REDUCE_CAP", guard, DEFAULT_REDUCE_GUARD)?,
        exponents: match scale {
            None => Exponents::PROOF,
            Some(d) => Exponents::scaled(d)?,
        },
    })
}

fn load_minrep(path: &Path) -> Result<wdm_core::reduction::MinRepInstance, Failure> {
    let text = read_path(path)?;
    parse_minrep(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_reduce(a: ReduceArgs, json_out: bool) -> CmdResult {
    let inst = load_minrep(&a.minrep)?;
    let red = reduce_to_wdm_with(&inst, &reduce_options(a.guard, a.scale)?)?;
    let audit = red.audit_structure();
    if let Some(path) = &a.graph_out {
        let f = GraphFile::new(red.graph.clone(), Some(red.tau.clone()))
            .named(format!("reduced {}", a.minrep.display()));
        write_output(path, &emit_graph(&f))?;
    }
    if json_out {
        let mut v = serde_json::to_value(red.registry()).expect("registry serializes");
        v["structural_audit"] = json!(audit.as_ref().map_or_else(|e| e.clone(), |_| "pass".into()));
        print_json(&v);
    } else {
        let sizes = red.class_ranges().map(|r| r.len());
        println!("N {} M {}", red.n_param(), red.m_param());
        println!("vertices {} edges {}", red.graph.n(), red.graph.m());
        println!("class sizes {sizes:?}");
        println!("class thresholds {:?}", red.class_thresholds());
        println!("gadgets {}", red.gadgets().len());
        let gap = red.gap();
        println!("threshold gap {} < {}: {}", gap.lhs, gap.rhs, gap.holds);
        println!("proof grade: {}", red.proof_grade());
        println!(
            "structural audit: {}",
            audit.as_ref().map_or_else(|e| e.clone(), |_| "pass".into())
        );
    }
    audit.map_err(Failure::Failed)
}

fn cmd_minrep_solve(a: MinrepSolveArgs, json_out: bool) -> CmdResult {
    let inst = load_minrep(&a.minrep)?;
    let sol = solve_minrep_bruteforce(&inst)?;
    let mut out = json!({"size": sol.size(), "a": sol.a, "b": sol.b});
    if a.lift {
        let red = reduce_to_wdm_with(&inst, &reduce_options(a.guard, None)?)?;
        let lift = lift_solution(&red, &sol)?;
        if !lift.outcome.complete {
            return Err(Failure::Failed("lifted seed does not activate G'".into()));
        }
        let back = extract_solution(&red, &lift.seed, &lift.outcome.partition)?;
        out["lift"] = json!({"seed": lift.seed, "schedule": lift.schedule});
        out["extracted"] = json!({"size": back.size(), "a": back.a, "b": back.b});
    }
    if json_out {
        print_json(&out);
    } else {
        println!("{}", sol.size());
        println!("A {}", join_ids(&sol.a));
        println!("B {}", join_ids(&sol.b));
        if let Some(l) = out.get("lift") {
            let s = &l["schedule"];
            println!(
                "lift: V_3 at step {}, classes done by step {}, greedy layers {}",
                s["v3_last"], s["coarse_t"], s["t"]
            );
            println!("extracted size {}", out["extracted"]["size"]);
        }
    }
    Ok(())
}

fn cmd_corpus(a: CorpusArgs, json_out: bool) -> CmdResult {
    let cfg = CorpusConfig {
        seed: a.seed,
        count: a.count,
        n_min: a.n_min,
        n_max: a.n_max,
        threshold: match a.rule {
            CorpusRule::Strict => CorpusThreshold::StrictMajority,
            CorpusRule::Simple => CorpusThreshold::SimpleMajority,
            CorpusRule::Random => CorpusThreshold::Random,
        },
        ..CorpusConfig::default()
    };
    let corpus = generate_corpus(&cfg)?;
    let mut listing = Vec::new();
    for (i, e) in corpus.iter().enumerate() {
        let f = GraphFile::new(e.graph.clone(), Some(e.tau.clone()))
            .named(e.name.clone())
            .with_provenance(format!("corpus seed {} index {i}", a.seed));
        let text = emit_graph(&f);
        match &a.out {
            Some(dir) => {
                fs::create_dir_all(dir)
                    .map_err(|err| Failure::Usage(format!("{}: {err}", dir.display())))?;
                let path = dir.join(format!("graph-{i:03}.txt"));
                write_output(&path, &text)?;
                listing.push(json!({"name": e.name, "path": path, "n": e.graph.n(), "m": e.graph.m()}));
            }
            None if json_out => {
                listing.push(json!({"name": e.name, "n": e.graph.n(), "m": e.graph.m(), "text": text}));
            }
            None => {
                if i > 0 {
                    println!();
                }
                print!("{text}");
            }
        }
    }
    if json_out {
        print_json(&Value::Array(listing));
    } else if a.out.is_some() {
        println!("wrote {} graphs", corpus.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = cli.json;
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a, json_out),
        Cmd::Solve(a) => cmd_solve(a, json_out),
        Cmd::Verify(a) => cmd_verify(a, json_out),
        Cmd::Bounds(a) => cmd_bounds(a, json_out),
        Cmd::Reduce(a) => cmd_reduce(a, json_out),
        Cmd::MinrepSolve(a) => cmd_minrep_solve(a, json_out),
        Cmd::Corpus(a) => cmd_corpus(a, json_out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Failed(m)) => {
            eprintln!("failed: {m}");
            ExitCode::from(EXIT_FAILED)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("too large: {m}");
            ExitCode::from(EXIT_CAP)
        }
    }
}
