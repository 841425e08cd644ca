use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use sl3bp::characters::{qhr_character, sl3_adm_character, t_check, numeric_s_check, DEFAULT_ORDER};
use sl3bp::fusion::rules::groth_fuse_rule;
use sl3bp::fusion::verlinde::fusion_table;
use sl3bp::fusion::{standard_verlinde_reduce, FusionMethod, FusionTable, ModuleLabel};
use sl3bp::io::{
    complex_csv, complex_json, envelope, fusion_table_to_json, parse_admissible, parse_label, smatrix_numeric_json,
    smatrix_to_json, to_pretty,
};
use sl3bp::modular::{bp_smatrix, bp_tmatrix, sl3_adm_smatrix, sl3_tmatrix, wzw_smatrix, wzw_tmatrix, SMatrix};
use sl3bp::verify::{run_suite, Suite, VerifyOptions};
use sl3bp::weights::{admissible_weights, c_bp, check_u, check_u_odd, enumerate_p};
use sl3bp::Error;

#[derive(Parser)]
#[command(name = "sl3bp", version, about = "Modular data, fusion and characters for sl(3) and Bershadsky-Polyakov minimal models")]
struct Cli {
    /// `key = value` defaults; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algebra {
    Wzw,
    Bp,
    #[value(name = "sl3-adm")]
    Sl3Adm,
}

impl Algebra {
    fn name(self) -> &'static str {
        match self {
            Algebra::Wzw => "wzw",
            Algebra::Bp => "bp",
            Algebra::Sl3Adm => "sl3-adm",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Verlinde,
    KacWalton,
    Bp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Module {
    Bp,
    #[value(name = "sl3-adm")]
    Sl3Adm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Single {
    STransform,
    TTransform,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    u: i64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact S-matrix
    #[command(args_override_self = true)]
    SMatrix {
        #[command(flatten)]
        c: Common,
        #[arg(long, value_enum, default_value = "bp")]
        algebra: Algebra,
        #[arg(long, overrides_with = "numeric")]
        exact: bool,
        #[arg(long, overrides_with = "exact")]
        numeric: bool,
    },
    /// Diagonal T-matrix
    #[command(args_override_self = true)]
    TMatrix {
        #[command(flatten)]
        c: Common,
        #[arg(long, value_enum, default_value = "bp")]
        algebra: Algebra,
    },
    /// Fusion table over the integrable alcove
    #[command(args_override_self = true)]
    Fusion {
        #[command(flatten)]
        c: Common,
        #[arg(long, value_enum, default_value = "verlinde")]
        method: Method,
        /// check Verlinde, Kac-Walton and (odd u) BP tables against each other
        #[arg(long)]
        compare: bool,
    },
    /// Grothendieck fusion of two module classes
    #[command(args_override_self = true)]
    GrothFusion {
        #[command(flatten)]
        c: Common,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// also run the symbolic Verlinde reduction where it applies
        #[arg(long)]
        compare: bool,
    },
    /// Character as a truncated q-series
    #[command(args_override_self = true)]
    Character {
        #[command(flatten)]
        c: Common,
        #[arg(long, value_enum, default_value = "bp")]
        module: Module,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: i64,
    },
    /// Verification suites, or a single numeric transform check
    #[command(args_override_self = true)]
    Verify {
        #[arg(value_enum)]
        check: Option<Single>,
        #[command(flatten)]
        c: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        zeta: Vec<String>,
        #[arg(long, default_value_t = 5)]
        instances: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Integrable labels and admissible weights
    #[command(args_override_self = true)]
    Admissible {
        #[command(flatten)]
        c: Common,
    },
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) | Error::Cyc(_) | Error::Series(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

/// Splices `--key=value` pairs from the config file in front of the user's own flags.
fn with_config(args: Vec<String>) -> Result<Vec<String>, Failure> {
    let pos = args.iter().position(|a| a == "--config" || a.starts_with("--config="));
    let Some(pos) = pos else { return Ok(args) };
    let path = match args[pos].split_once('=') {
        Some((_, p)) => p.to_string(),
        None => args.get(pos + 1).cloned().ok_or_else(|| usage("--config needs a path"))?,
    };
    let text = fs::read_to_string(&path).map_err(|e| usage(format!("config {path}: {e}")))?;
    let cmd = Cli::command();
    let sub = args
        .iter()
        .skip(1)
        .find_map(|a| cmd.find_subcommand(a))
        .ok_or_else(|| usage("no subcommand given"))?;
    let known = |k: &str| sub.get_arguments().any(|a| a.get_long() == Some(k));
    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("{path}:{}: expected key = value", n + 1)))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        if !known(&k) {
            continue;
        }
        match v {
            "true" => extra.push(format!("--{k}")),
            "false" => {}
            _ => extra.push(format!("--{k}={v}")),
        }
    }
    let at = args.iter().position(|a| a == sub.get_name()).unwrap_or(1) + 1;
    let mut out = args;
    out.splice(at..at, extra);
    Ok(out)
}

fn emit(c: &Common, text: String) -> Result<(), Failure> {
    match &c.out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_only(c: &Common) -> Result<(), Failure> {
    if c.format == Format::Csv {
        return Err(usage("csv output is only available for complex-valued results (s-matrix, t-matrix)"));
    }
    Ok(())
}

fn write_smatrix<L: Clone + PartialEq + std::fmt::Display>(c: &Common, alg: &str, exact: bool, s: &SMatrix<L>) -> Outcome {
    let ok = s.is_unitary() && s.is_symmetric();
    let text = match c.format {
        Format::Csv => complex_csv(&s.labels.iter().map(ToString::to_string).collect::<Vec<_>>(), &s.to_complex()),
        Format::Json if exact => to_pretty(&smatrix_to_json(c.u, alg, s)),
        Format::Json => to_pretty(&smatrix_numeric_json(c.u, alg, s)),
    };
    emit(c, text)?;
    if !ok {
        return Err(Failure::Invariant(format!("{alg} S-matrix at u = {} fails unitarity or symmetry", c.u)));
    }
    Ok(true)
}

fn s_matrix(c: &Common, algebra: Algebra, numeric: bool) -> Outcome {
    let exact = !numeric;
    match algebra {
        Algebra::Wzw => write_smatrix(c, "wzw", exact, &wzw_smatrix(c.u)?),
        Algebra::Bp => write_smatrix(c, "bp", exact, &bp_smatrix(c.u)?),
        Algebra::Sl3Adm => write_smatrix(c, "sl3-adm", exact, &sl3_adm_smatrix(c.u)?),
    }
}

fn t_matrix(c: &Common, algebra: Algebra) -> Outcome {
    let rows: Vec<(String, sl3bp::cyclo::Phase)> = match algebra {
        Algebra::Wzw => {
            check_u(c.u)?;
            enumerate_p(c.u).iter().map(|l| (l.to_string(), wzw_tmatrix(c.u, l))).collect()
        }
        Algebra::Bp => enumerate_p(c.u).iter().map(|l| Ok((l.to_string(), bp_tmatrix(c.u, l)?))).collect::<Result<_, Error>>()?,
        Algebra::Sl3Adm => {
            admissible_weights(c.u)?.iter().map(|a| (a.to_string(), sl3_tmatrix(c.u, &a.weight.finite()))).collect()
        }
    };
    if algebra == Algebra::Bp {
        check_u_odd(c.u)?;
    }
    let text = match c.format {
        Format::Csv => {
            let mut s = String::from("label,re,im\n");
            for (l, p) in &rows {
                let z = p.to_complex();
                s.push_str(&format!("\"{l}\",{:e},{:e}\n", z.re, z.im));
            }
            s
        }
        Format::Json => to_pretty(&envelope(
            "t-matrix",
            json!({
                "u": c.u,
                "algebra": algebra.name(),
                "labels": rows.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>(),
                "phases": rows.iter().map(|(_, p)| p.value().to_string()).collect::<Vec<_>>(),
                "complex": rows.iter().map(|(_, p)| complex_json(p.to_complex())).collect::<Vec<_>>(),
            }),
        )),
    };
    emit(c, text)?;
    Ok(true)
}

fn fusion(c: &Common, method: Method, compare: bool) -> Outcome {
    json_only(c)?;
    let m = match method {
        Method::Verlinde => FusionMethod::Verlinde,
        Method::KacWalton => FusionMethod::KacWalton,
        Method::Bp => FusionMethod::Bp,
    };
    let t = fusion_table(c.u, m)?;
    emit(c, to_pretty(&fusion_table_to_json(&t, &m.to_string())))?;
    if !compare {
        return Ok(true);
    }
    let mut others: Vec<(FusionMethod, FusionTable)> = Vec::new();
    for o in [FusionMethod::Verlinde, FusionMethod::KacWalton, FusionMethod::Bp] {
        if o != m && (o != FusionMethod::Bp || c.u % 2 == 1) {
            others.push((o, fusion_table(c.u, o)?));
        }
    }
    for (o, x) in &others {
        if let Some((a, b, nu, p, q)) = t.first_difference(x) {
            return Err(Failure::Invariant(format!("{m} gives N_{{{a},{b}}}^{nu} = {p} but {o} gives {q}")));
        }
    }
    eprintln!("{} triples agree across {} methods", t.dim().pow(3), others.len() + 1);
    Ok(true)
}

fn groth_fusion(c: &Common, left: &str, right: &str, compare: bool) -> Outcome {
    json_only(c)?;
    check_u_odd(c.u)?;
    let a: ModuleLabel = left.parse()?;
    let b: ModuleLabel = right.parse()?;
    let t = fusion_table(c.u, FusionMethod::Bp)?;
    let (rule, s) = groth_fuse_rule(c.u, &t, &a, &b)?;
    let mut body = json!({
        "u": c.u,
        "left": a.to_string(),
        "right": b.to_string(),
        "rule": format!("{rule:?}"),
        "classes": s.to_json(),
    });
    let mut ok = true;
    if compare {
        let r = match standard_verlinde_reduce(c.u, &t, &a, &b) {
            Ok(r) => {
                ok = r == s;
                json!({ "agrees": ok })
            }
            Err(Error::Unsupported(m)) => json!({ "unsupported": m }),
            Err(e) => return Err(e.into()),
        };
        body["reduction"] = r;
    }
    emit(c, to_pretty(&envelope("groth-sum", body)))?;
    if !ok {
        return Err(Failure::Invariant("closed form and Verlinde reduction disagree".into()));
    }
    Ok(true)
}

fn character(c: &Common, module: Module, lambda: &str, order: i64) -> Outcome {
    json_only(c)?;
    if !(0..=400).contains(&order) {
        return Err(usage(format!("order {order} out of range")));
    }
    let (label, series) = match module {
        Module::Bp => {
            check_u_odd(c.u)?;
            let l = parse_label(lambda, Some(c.u))?;
            (l.to_string(), qhr_character(c.u, &l, order)?)
        }
        Module::Sl3Adm => {
            let a = parse_admissible(c.u, lambda)?;
            (a.to_string(), sl3_adm_character(&a.weight, order, false)?)
        }
    };
    let mut body = series.to_json();
    if let Value::Object(m) = &mut body {
        m.insert("u".into(), json!(c.u));
        m.insert("module".into(), json!(match module { Module::Bp => "bp", Module::Sl3Adm => "sl3-adm" }));
        m.insert("lambda".into(), json!(label));
        if module == Module::Bp {
            m.insert("centralCharge".into(), json!(c_bp(c.u).to_string()));
        }
    }
    emit(c, to_pretty(&envelope("character", body)))?;
    Ok(true)
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    s.trim().parse::<Complex64>().map_err(|_| usage(format!("bad complex number {s:?}")))
}

#[allow(clippy::too_many_arguments)]
fn verify(
    c: &Common,
    check: Option<Single>,
    suite: Suite,
    order: Option<i64>,
    tol: f64,
    tau: Option<&str>,
    zeta: &[String],
    instances: usize,
    seed: u64,
) -> Outcome {
    json_only(c)?;
    let mut opts = VerifyOptions { tol, instances, seed, ..VerifyOptions::default() };
    if let Some(t) = tau {
        opts.tau = parse_complex(t)?;
    }
    if !zeta.is_empty() {
        opts.zetas = zeta.iter().map(|z| parse_complex(z)).collect::<Result<_, _>>()?;
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(usage("tolerance must be positive"));
    }
    if let Some(single) = check {
        let order = order.unwrap_or(DEFAULT_ORDER);
        let mut worst: f64 = 0.0;
        let mut points = Vec::new();
        for z in &opts.zetas {
            let (err, extra) = match single {
                Single::STransform => {
                    let r = numeric_s_check(c.u, *z, opts.tau, order, tol)?;
                    (r.max_rel_error, json!({ "tail": r.tail_estimate, "automorphyResidual": r.kappa_residual }))
                }
                Single::TTransform => (t_check(c.u, *z, opts.tau, order)?, json!({})),
            };
            worst = worst.max(err);
            points.push(json!({ "zeta": [z.re, z.im], "maxRelError": err, "diagnostics": extra }));
        }
        let passed = worst < tol;
        let body = json!({
            "u": c.u,
            "check": match single { Single::STransform => "s-transform", Single::TTransform => "t-transform" },
            "tau": [opts.tau.re, opts.tau.im],
            "order": order,
            "tol": tol,
            "passed": passed,
            "points": points,
        });
        emit(c, to_pretty(&envelope("verify", body)))?;
        return Ok(passed);
    }
    if let Some(o) = order {
        opts.order = o;
    }
    let report = run_suite(c.u, suite, &opts)?;
    for ch in report.checks.iter().filter(|ch| !ch.passed) {
        eprintln!("{ch}");
    }
    emit(c, to_pretty(&report.to_json()))?;
    Ok(report.passed())
}

fn admissible(c: &Common) -> Outcome {
    json_only(c)?;
    check_u(c.u)?;
    let labels: Vec<Value> = enumerate_p(c.u)
        .iter()
        .map(|l| {
            let mut v = json!({ "label": l.to_string() });
            if c.u % 2 == 1 {
                v["j"] = json!(l.j().to_string());
                v["delta"] = json!(l.delta(c.u).to_string());
            }
            v
        })
        .collect();
    let mut body = json!({ "u": c.u, "integrable": labels });
    if c.u % 2 == 1 {
        body["admissible"] = admissible_weights(c.u)?
            .iter()
            .map(|a| {
                json!({
                    "weight": a.to_string(),
                    "family": a.family.tag(),
                    "lambda": a.lambda.to_string(),
                    "conformalWeight": a.conformal_weight(c.u).to_string(),
                })
            })
            .collect();
    }
    emit(c, to_pretty(&envelope("admissible", body)))?;
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match &cli.cmd {
        Cmd::SMatrix { c, algebra, numeric, .. } => s_matrix(c, *algebra, *numeric),
        Cmd::TMatrix { c, algebra } => t_matrix(c, *algebra),
        Cmd::Fusion { c, method, compare } => fusion(c, *method, *compare),
        Cmd::GrothFusion { c, left, right, compare } => groth_fusion(c, left, right, *compare),
        Cmd::Character { c, module, lambda, order } => character(c, *module, lambda, *order),
        Cmd::Verify { check, c, suite, order, tol, tau, zeta, instances, seed } => {
            verify(c, *check, *suite, *order, *tol, tau.as_deref(), zeta, *instances, *seed)
        }
        Cmd::Admissible { c } => admissible(c),
    }
}

fn main() -> ExitCode {
    let args = match with_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(Failure::Usage(m) | Failure::Invariant(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Invariant(m)) => {
            eprintln!("invariant violation: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
