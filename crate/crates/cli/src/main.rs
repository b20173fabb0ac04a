//! `gsinc`: condition checks, relation comparisons, inclusion decisions and
//! the identity suites from the command line.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use gs_inclusion::config::dyadic_grid;
use gs_inclusion::decide::decide_inclusion;
use gs_inclusion::functions::{check_bmt_conditions, compare_weight_functions, BmtWeightFunction};
use gs_inclusion::grammar::{
    self, function_system, model_from_p, parse_config, parse_node, sequence, sequence_system, weight_function, Node,
    SpaceDefaults, SpaceSpec,
};
use gs_inclusion::report::Report;
use gs_inclusion::sequences::{relation_preceq, relation_subseteq};
use gs_inclusion::spaces::ModelKind;
use gs_inclusion::systems::{
    check_i, check_l, check_m, check_wi, check_wm, system_relation_functions, system_relation_sequences, Kind,
    WeightFunctionSystem, WeightSequenceSystem,
};
use gs_inclusion::verdict::render_pairs;
use gs_inclusion::verify::{run_suites, Suite, VerifyOptions};
use gs_inclusion::{Horizons, Status, Verdict};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser, Debug)]
#[command(name = "gsinc", version, about = "Inclusion checks for Gelfand-Shilov type spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// beurling or roumieu
    #[arg(long, global = true)]
    kind: Option<String>,
    /// Model exponent: 1, 2, inf, any p >= 1, or 0 for the vanishing-tail model
    #[arg(long, global = true)]
    p: Option<String>,
    /// Order horizon for weight sequences
    #[arg(long, global = true)]
    qmax: Option<usize>,
    /// Parameter grid as dyadic exponents `lo:hi`
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Directory for certificate.csv and summary.txt
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// File of `name = spec` lines
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Condition table for a space, system, sequence or weight function
    Conditions { spec: String },
    /// `M ⊆ N` and `M ≼ N` for sequences, `M [⊆] N` for systems
    CompareSequences { a: String, b: String },
    /// `σ = O(ω)` for weight functions, `W [⊆] V` for systems
    CompareFunctions { a: String, b: String },
    /// Decide whether space A is included in space B
    DecideInclusion { a: String, b: String },
    /// Run identity suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Decide the listed `A,B` pairs (default: all compatible config pairs)
    Report {
        pairs: Vec<String>,
        #[arg(long)]
        suite: Option<String>,
    },
}

/// Settings merged from the config file and the flags (flags win).
struct Settings {
    kind: Option<Kind>,
    model: ModelKind,
    seed: u64,
    tol: Option<f64>,
    hz: Horizons,
    specs: Vec<(String, String)>,
}

const RESERVED: [&str; 6] = ["kind", "p", "qmax", "grid", "seed", "tol"];

fn settings(c: &Common) -> anyhow::Result<Settings> {
    let mut file: Vec<(String, String, usize)> = Vec::new();
    if let Some(path) = &c.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        file = parse_config(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    }
    let get = |key: &str| file.iter().find(|(n, _, _)| n == key).map(|(_, v, _)| v.clone());
    let kind = c.kind.clone().or_else(|| get("kind")).map(|k| Kind::parse(&k)).transpose()?;
    let model = match c.p.clone().or_else(|| get("p")) {
        Some(p) => {
            let node = parse_node(&p, 1)?;
            match node {
                Node::Number { value, .. } => model_from_p(value)?,
                other => grammar::model_kind(&other)?,
            }
        }
        None => ModelKind::Lp(2.0),
    };
    let mut hz = Horizons::default();
    if let Some(q) = c.qmax.or(get("qmax").map(|v| v.parse()).transpose().context("qmax")?) {
        if q < hz.window + 2 {
            bail!("qmax must be at least {}", hz.window + 2);
        }
        hz.q_max = q;
    }
    if let Some(g) = c.grid.clone().or_else(|| get("grid")) {
        let (lo, hi) = g.split_once(':').ok_or_else(|| anyhow!("grid must look like lo:hi"))?;
        let (lo, hi): (i32, i32) = (lo.trim().parse()?, hi.trim().parse()?);
        if lo > hi {
            bail!("grid needs lo <= hi");
        }
        hz.lambda_grid = dyadic_grid(lo, hi);
    }
    let tol = c.tol.or(get("tol").map(|v| v.parse()).transpose().context("tol")?);
    if let Some(t) = tol {
        if !(t > 0.0) {
            bail!("tol must be positive");
        }
        hz.tol = t;
    }
    let seed = c.seed.or(get("seed").map(|v| v.parse()).transpose().context("seed")?).unwrap_or(42);
    let specs =
        file.into_iter().filter(|(n, _, _)| !RESERVED.contains(&n.as_str())).map(|(n, s, _)| (n, s)).collect();
    Ok(Settings { kind, model, seed, tol, hz, specs })
}

impl Settings {
    /// A config name or a literal spec.
    fn resolve<'a>(&'a self, arg: &'a str) -> &'a str {
        self.specs.iter().find(|(n, _)| n == arg).map(|(_, s)| s.as_str()).unwrap_or(arg)
    }

    fn defaults(&self) -> SpaceDefaults {
        SpaceDefaults { kind: self.kind, model: self.model }
    }

    fn space(&self, arg: &str) -> anyhow::Result<SpaceSpec> {
        let src = self.resolve(arg);
        grammar::space(&parse_node(src, 1)?, self.defaults(), &self.hz).map_err(|e| anyhow!("{src}: {e}"))
    }

    fn kinds(&self) -> Vec<Kind> {
        match self.kind {
            Some(k) => vec![k],
            None => vec![Kind::Beurling, Kind::Roumieu],
        }
    }
}

fn head(node: &Node) -> &str {
    match node {
        Node::Call { name, .. } => name,
        _ => "",
    }
}

fn print_row(label: &str, subject: &str, v: &Verdict) {
    println!("{label:<14} {:<12} {subject}", v.status.as_str());
    for (k, pairs) in [("witness", &v.witness), ("counterexample", &v.counterexample), ("horizon", &v.horizon)] {
        if !pairs.is_empty() {
            println!("{:<14} {k}: {}", "", render_pairs(pairs));
        }
    }
    if !v.note.is_empty() {
        println!("{:<14} note: {}", "", v.note);
    }
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Witnessed => 0,
        Status::Falsified => 1,
        Status::Inconclusive => 3,
    }
}

fn sequence_conditions(m: &WeightSequenceSystem, kind: Kind, hz: &Horizons) -> anyhow::Result<()> {
    let s = m.spec_string();
    let lc = if m.is_log_convex(hz) { Verdict::witnessed() } else { Verdict::inconclusive() };
    print_row("log-convex", &s, &lc);
    print_row(&format!("[L] {kind}"), &s, &check_l(m, kind, hz)?);
    print_row(&format!("[wI] {kind}"), &s, &check_wi(m, kind, hz)?);
    print_row(&format!("[I] {kind}"), &s, &check_i(m, kind, hz)?);
    Ok(())
}

fn function_conditions(w: &WeightFunctionSystem, kind: Kind, hz: &Horizons) -> anyhow::Result<()> {
    let s = w.spec_string();
    print_row(&format!("[wM] {kind}"), &s, &check_wm(w, kind, hz)?);
    print_row(&format!("[M] {kind}"), &s, &check_m(w, kind, hz)?);
    Ok(())
}

fn bmt_conditions(omega: &BmtWeightFunction, hz: &Horizons) -> anyhow::Result<()> {
    let c = check_bmt_conditions(omega, hz)?;
    let s = omega.spec_string();
    print_row("(alpha)", &s, &c.alpha);
    print_row("(gamma)", &s, &c.gamma);
    print_row("(delta)", &s, &c.delta);
    Ok(())
}

fn cmd_conditions(st: &Settings, arg: &str) -> anyhow::Result<u8> {
    let src = st.resolve(arg);
    let node = parse_node(src, 1)?;
    let hz = &st.hz;
    match head(&node) {
        "pow" | "logpow" | "phi-table" => bmt_conditions(&weight_function(&node)?, hz)?,
        "space" | "gs" | "bb" => {
            for kind in st.kinds() {
                let d = SpaceDefaults { kind: Some(kind), model: st.model };
                let sp = grammar::space(&node, d, hz)?;
                if sp.kind != kind {
                    continue;
                }
                sequence_conditions(&sp.seq, kind, hz)?;
                function_conditions(&sp.fun, kind, hz)?;
            }
            if head(&node) == "bb" {
                let sp = grammar::space(&node, SpaceDefaults { kind: Some(Kind::Roumieu), model: st.model }, hz)?;
                if let gs_inclusion::systems::SeqSystemSpec::FromBmt(w) = sp.seq.spec() {
                    bmt_conditions(w, hz)?;
                }
            }
        }
        "frombmt" | "explicit" => {
            let m = sequence_system(&node, 1, hz)?;
            for kind in st.kinds() {
                sequence_conditions(&m, kind, hz)?;
            }
        }
        "fromomega" | "polyshift" | "assoc" => {
            let w = function_system(&node, 1, hz)?;
            for kind in st.kinds() {
                function_conditions(&w, kind, hz)?;
            }
        }
        "dilated" => {
            let m = sequence_system(&node, 1, hz)?;
            let w = function_system(&node, 1, hz)?;
            for kind in st.kinds() {
                sequence_conditions(&m, kind, hz)?;
                function_conditions(&w, kind, hz)?;
            }
        }
        _ => {
            let m = WeightSequenceSystem::dilated(sequence(&node, sequence_dim(&node), hz)?, hz)?;
            for kind in st.kinds() {
                sequence_conditions(&m, kind, hz)?;
            }
        }
    }
    Ok(0)
}

/// Dimension implied by a bare sequence spec: the factor count of a tensor.
fn sequence_dim(node: &Node) -> usize {
    match node {
        Node::Call { name, args, .. } if name == "tensor" => args.len().max(1),
        Node::Call { name, args, .. } if name == "dilate" => args.first().map(|a| sequence_dim(&a.value)).unwrap_or(1),
        _ => 1,
    }
}

fn is_system(node: &Node) -> bool {
    matches!(head(node), "dilated" | "frombmt" | "explicit" | "fromomega" | "polyshift" | "assoc")
}

fn single_kind(st: &Settings) -> anyhow::Result<Kind> {
    st.kind.ok_or_else(|| anyhow!("comparing systems needs --kind"))
}

fn cmd_compare_sequences(st: &Settings, a: &str, b: &str) -> anyhow::Result<u8> {
    let (na, nb) = (parse_node(st.resolve(a), 1)?, parse_node(st.resolve(b), 1)?);
    let hz = &st.hz;
    if is_system(&na) || is_system(&nb) {
        let kind = single_kind(st)?;
        let (m, n) = (sequence_system(&na, 1, hz)?, sequence_system(&nb, 1, hz)?);
        let v = system_relation_sequences(&m, &n, kind, hz)?;
        print_row("M [⊆] N", &format!("{} vs {}", m.spec_string(), n.spec_string()), &v);
        return Ok(exit_for(v.status));
    }
    let (m, n) = (sequence(&na, sequence_dim(&na), hz)?, sequence(&nb, sequence_dim(&nb), hz)?);
    let subject = format!("{} vs {}", m.spec_string(), n.spec_string());
    let sub = relation_subseteq(&m, &n, hz)?;
    let pre = relation_preceq(&m, &n, hz)?;
    print_row("M ⊆ N", &subject, &sub);
    print_row("M ≼ N", &subject, &pre);
    Ok(exit_for(pre.status))
}

fn cmd_compare_functions(st: &Settings, a: &str, b: &str) -> anyhow::Result<u8> {
    let (na, nb) = (parse_node(st.resolve(a), 1)?, parse_node(st.resolve(b), 1)?);
    let hz = &st.hz;
    if is_system(&na) || is_system(&nb) {
        let kind = single_kind(st)?;
        let (w, v) = (function_system(&na, 1, hz)?, function_system(&nb, 1, hz)?);
        let r = system_relation_functions(&w, &v, kind, hz)?;
        print_row("W [⊆] V", &format!("{} vs {}", w.spec_string(), v.spec_string()), &r);
        return Ok(exit_for(r.status));
    }
    let (omega, sigma) = (Arc::new(weight_function(&na)?), Arc::new(weight_function(&nb)?));
    let v = compare_weight_functions(&omega, &sigma, hz)?;
    print_row("B = O(A)", &format!("{} vs {}", omega.spec_string(), sigma.spec_string()), &v);
    Ok(exit_for(v.status))
}

fn cmd_decide(st: &Settings, a: &str, b: &str, out: Option<&PathBuf>) -> anyhow::Result<u8> {
    let (sa, sb) = (st.space(a)?, st.space(b)?);
    let cert = decide_inclusion(&sa, &sb, &st.hz)?;
    let report = Report { certificates: vec![cert.clone()], checks: vec![] };
    print!("{}", report.summary());
    if let Some(dir) = out {
        report.write_to(dir)?;
    }
    Ok(cert.conclusion.exit_code() as u8)
}

fn verify_options(st: &Settings) -> VerifyOptions {
    VerifyOptions { seed: st.seed, tol: st.tol.unwrap_or(1e-6), horizons: st.hz.clone(), ..VerifyOptions::default() }
}

fn cmd_verify(st: &Settings, suite: &str, out: Option<&PathBuf>) -> anyhow::Result<u8> {
    let suites = Suite::parse_selector(suite)?;
    let checks = run_suites(&suites, &verify_options(st))?;
    let all = checks.iter().all(|r| r.passed);
    let report = Report { certificates: vec![], checks };
    print!("{}", report.summary());
    if let Some(dir) = out {
        report.write_to(dir)?;
    }
    Ok(if all { 0 } else { 1 })
}

fn cmd_report(st: &Settings, pairs: &[String], suite: Option<&str>, out: Option<&PathBuf>) -> anyhow::Result<u8> {
    let mut certificates = Vec::new();
    let chosen: Vec<(String, String)> = if pairs.is_empty() {
        let names: Vec<&String> = st.specs.iter().map(|(n, _)| n).collect();
        names.iter().flat_map(|a| names.iter().filter(move |b| a != *b).map(move |b| (a.to_string(), b.to_string()))).collect()
    } else {
        pairs
            .iter()
            .map(|p| p.split_once(',').map(|(a, b)| (a.trim().to_string(), b.trim().to_string())))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| anyhow!("pairs must look like A,B"))?
    };
    for (a, b) in chosen {
        let (sa, sb) = (st.space(&a)?, st.space(&b)?);
        if pairs.is_empty() && (sa.kind != sb.kind || sa.model != sb.model || sa.dim != sb.dim) {
            continue;
        }
        certificates.push(decide_inclusion(&sa, &sb, &st.hz)?);
    }
    let checks = match suite {
        Some(s) => run_suites(&Suite::parse_selector(s)?, &verify_options(st))?,
        None => vec![],
    };
    let report = Report { certificates, checks };
    print!("{}", report.summary());
    if let Some(dir) = out {
        report.write_to(dir)?;
    }
    Ok(0)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let st = settings(&cli.common)?;
    let out = cli.common.out.as_ref();
    match &cli.command {
        Command::Conditions { spec } => cmd_conditions(&st, spec),
        Command::CompareSequences { a, b } => cmd_compare_sequences(&st, a, b),
        Command::CompareFunctions { a, b } => cmd_compare_functions(&st, a, b),
        Command::DecideInclusion { a, b } => cmd_decide(&st, a, b, out),
        Command::Verify { suite } => cmd_verify(&st, suite, out),
        Command::Report { pairs, suite } => cmd_report(&st, pairs, suite.as_deref(), out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
