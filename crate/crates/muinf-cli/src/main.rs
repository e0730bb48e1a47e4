//! Command-line interface: every library module behind one binary with
//! machine-readable CSV/JSON output and checkpoint management.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.

mod output;

use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use muinf::convolve::{self, ConvKind, FnTable};
use muinf::divisors::{divisor_set, DivisorSystem};
use muinf::explicit::{explicit_table, ExplicitConfig, FormulaKind, ZeroList};
use muinf::factorint::{self, ArithKind};
use muinf::sieve::{self, Checkpoint, ScanConfig};
use muinf::walk::{self, LilConfig, WalkConfig};
use muinf::zetafun;

use output::{fmt_f64, parse_grid, sha256_file, Emitter, Format, Output};

#[derive(Parser)]
#[command(
    name = "muinf",
    version,
    about = "Modified Möbius function toolkit: divisor systems, convolutions, \
             summatory sieve, zeta products, explicit formulas, random walks",
    after_help = "Relative --output paths are placed under $MUINF_OUT_DIR when set.\n\
                  Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factor a 64-bit integer.
    Factor(FactorArgs),
    /// Evaluate one of the multiplicative functions at n (default μ∞).
    Mu(MuArgs),
    /// List a divisor system of n.
    Divisors(DivisorsArgs),
    /// Convolve named tables, invert them, or hunt for an associativity witness.
    Convolve(ConvolveArgs),
    /// Sieve a summatory function to x_max with checkpointed records.
    Scan(ScanArgs),
    /// Evaluate zeta, the m-product, the partial Dirichlet sum, F(s), or bounds.
    Series(SeriesArgs),
    /// Truncated explicit formula against sieved summatory values.
    Explicit(ExplicitArgs),
    /// Random-walk simulation: threshold probabilities or the LIL report.
    Walk(WalkArgs),
    /// Cross-module verification suites; exits 1 on any failure.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize)]
struct FactorArgs {
    #[arg(long)]
    n: u64,
}

#[derive(Args, Serialize)]
struct MuArgs {
    #[arg(long)]
    n: u64,
    /// mu | mu_inf | tau_inf | sigma_inf | tau_bb | sigma_bb
    #[arg(long, default_value = "mu_inf")]
    kind: String,
}

#[derive(Args, Serialize)]
struct DivisorsArgs {
    #[arg(long)]
    n: u64,
    /// infinitary | unitary | biunitary | all
    #[arg(long, default_value = "infinitary")]
    system: String,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ConvolveArgs {
    /// convolve | inverse | witness
    #[arg(long, default_value = "convolve")]
    op: String,
    /// dirichlet | infinitary | biunitary
    #[arg(long, default_value = "infinitary")]
    kind: String,
    /// Named table: one|delta|id|mu|mu_inf|tau_inf|sigma_inf|tau_bb|sigma_bb
    #[arg(long, default_value = "one")]
    f: String,
    #[arg(long, default_value = "one")]
    g: String,
    #[arg(long, default_value = "100")]
    limit: u64,
    /// Comma-separated pool for the witness scan.
    #[arg(long, default_value = "delta,one,id,mu_inf")]
    pool: String,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    /// mu | mu_inf | tau_inf | sigma_inf | tau_bb | sigma_bb
    #[arg(long, default_value = "mu_inf")]
    kind: String,
    #[arg(long)]
    x_max: u64,
    #[arg(long, default_value = "1048576")]
    segment_size: u64,
    #[arg(long, default_value = "1000000")]
    checkpoint_every: u64,
    /// Worker threads; 0 = machine parallelism.
    #[arg(long, default_value = "0")]
    threads: usize,
    /// Resume from a checkpoint file written by --checkpoint-out.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Where to save the final checkpoint.
    #[arg(long)]
    checkpoint_out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SeriesArgs {
    /// zeta | zeta-prime | m-product | m-partial | f-series | bounds
    #[arg(long)]
    op: String,
    #[arg(long, default_value = "2.0")]
    sigma: f64,
    #[arg(long, default_value = "0.0")]
    t: f64,
    /// Terms for m-partial.
    #[arg(long, default_value = "1000000")]
    terms: u64,
    /// Truncation depth for the bounds op (N_J scaling).
    #[arg(long, default_value = "3")]
    depth: u32,
    /// lo:hi:count grids for the bounds op.
    #[arg(long, default_value = "1.05:3:20")]
    sigma_grid: String,
    #[arg(long, default_value = "0:30:20")]
    t_grid: String,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExplicitArgs {
    /// classical | modified
    #[arg(long, default_value = "modified")]
    kind: String,
    /// Zeros file: one ordinate per line, '#' comments.
    #[arg(long)]
    zeros: PathBuf,
    #[arg(long, default_value = "2")]
    depth: u32,
    #[arg(long, default_value = "100.0")]
    t_cutoff: f64,
    /// Integer grid lo:hi:count of evaluation points (x >= 2).
    #[arg(long, default_value = "10:1000:100")]
    x_grid: String,
    #[arg(long, default_value = "0")]
    threads: usize,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct WalkArgs {
    /// Steps per trial.
    #[arg(long, default_value = "10000")]
    n: u64,
    #[arg(long, default_value = "100000")]
    trials: u64,
    #[arg(long, default_value = "1")]
    seed: u64,
    /// Thresholds c for P(|S_n| < c√n).
    #[arg(long, default_value = "0.5,1,2,3")]
    c_list: String,
    /// Emit the iterated-logarithm report instead.
    #[arg(long)]
    lil: bool,
    #[arg(long, default_value = "1000000")]
    n_max: u64,
    /// Join a sieved |M(x)|/sqrt(x log log x) column onto the LIL rows.
    #[arg(long)]
    with_m_ratio: bool,
    /// Worker threads; 0 = machine parallelism.
    #[arg(long, default_value = "0")]
    threads: usize,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// convolution | bounds | sieve | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value = "10000")]
    limit: u64,
    #[arg(long, default_value = "1000000")]
    x_max: u64,
}

enum CliError {
    Lib(muinf::Error),
    Io(io::Error),
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(muinf::Error::Io { .. }) | CliError::Lib(muinf::Error::Parse { .. }) => 3,
            CliError::Lib(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<muinf::Error> for CliError {
    fn from(e: muinf::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage<T: std::fmt::Display>(e: T) -> CliError {
    CliError::Usage(e.to_string())
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cmd: Cmd) -> Result<i32, CliError> {
    match cmd {
        Cmd::Factor(a) => cmd_factor(a),
        Cmd::Mu(a) => cmd_mu(a),
        Cmd::Divisors(a) => cmd_divisors(a),
        Cmd::Convolve(a) => cmd_convolve(a),
        Cmd::Scan(a) => cmd_scan(a),
        Cmd::Series(a) => cmd_series(a),
        Cmd::Explicit(a) => cmd_explicit(a),
        Cmd::Walk(a) => cmd_walk(a),
        Cmd::Verify(a) => cmd_verify(a),
    }
}

fn config_json<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

fn make_emitter<T: Serialize>(
    command: &'static str,
    args: &T,
    format: &str,
    path: Option<&Path>,
    inputs: Vec<(String, String)>,
) -> Result<Emitter, CliError> {
    let format = Format::from_str(format).map_err(usage)?;
    let out = Output::create(path)?;
    Ok(Emitter::new(format, out, command, config_json(args), inputs))
}

fn digest_input(label: &str, path: &Path) -> Result<(String, String), CliError> {
    Ok((label.to_string(), sha256_file(path)?))
}

fn cmd_factor(args: FactorArgs) -> Result<i32, CliError> {
    let f = factorint::factorize(args.n)?;
    println!("{} = {f}", args.n);
    Ok(0)
}

fn cmd_mu(args: MuArgs) -> Result<i32, CliError> {
    let kind = ArithKind::from_str(&args.kind)?;
    let v = factorint::pointwise(kind, args.n)?;
    println!("{v}");
    Ok(0)
}

fn cmd_divisors(args: DivisorsArgs) -> Result<i32, CliError> {
    let system = DivisorSystem::from_str(&args.system)?;
    let set = divisor_set(args.n, system)?;
    let mut em = make_emitter("divisors", &args, &args.format, args.output.as_deref(), vec![])?;
    em.begin(&["d"])?;
    for d in &set.divisors {
        em.row(&[json!(d)])?;
    }
    em.finish()?;
    Ok(0)
}

fn named_table(name: &str, limit: u64) -> Result<FnTable, CliError> {
    match name {
        "one" => Ok(FnTable::constant_one(limit)),
        "delta" => Ok(FnTable::delta(limit)),
        "id" => Ok(FnTable::identity(limit)),
        "mu_inf" => Ok(FnTable::mu_infinity(limit)),
        other => {
            let kind = ArithKind::from_str(other).map_err(|_| {
                usage(format!(
                    "unknown table `{other}` \
                     (one|delta|id|mu|mu_inf|tau_inf|sigma_inf|tau_bb|sigma_bb)"
                ))
            })?;
            let sieve = factorint::FactorSieve::new(limit.max(1));
            let mut values = Vec::with_capacity(limit as usize);
            for n in 1..=limit {
                values.push(factorint::pointwise_of(kind, &sieve.factorize(n))?);
            }
            Ok(FnTable::from_fn(limit, |n| {
                num::BigRational::from_integer(values[(n - 1) as usize].into())
            }))
        }
    }
}

fn cmd_convolve(args: ConvolveArgs) -> Result<i32, CliError> {
    let kind = ConvKind::from_str(&args.kind)?;
    let limit = args.limit;
    match args.op.as_str() {
        "convolve" | "inverse" => {
            let f = named_table(&args.f, limit)?;
            let result = if args.op == "convolve" {
                let g = named_table(&args.g, limit)?;
                convolve::convolve(kind, &f, &g, limit)?
            } else {
                convolve::inverse(kind, &f, limit)?
            };
            let mut em =
                make_emitter("convolve", &args, &args.format, args.output.as_deref(), vec![])?;
            em.begin(&["n", "value"])?;
            for n in 1..=limit {
                em.row(&[json!(n), json!(result.get(n).to_string())])?;
            }
            em.finish()?;
        }
        "witness" => {
            let names: Vec<&str> = args.pool.split(',').filter(|s| !s.is_empty()).collect();
            let pool: Vec<FnTable> = names
                .iter()
                .map(|name| named_table(name, limit))
                .collect::<Result<_, _>>()?;
            let witness = convolve::find_nonassociative_witness(kind, limit, &pool)?;
            let mut em =
                make_emitter("convolve", &args, &args.format, args.output.as_deref(), vec![])?;
            em.begin(&["f", "g", "h", "n", "left", "right"])?;
            match witness {
                Some(w) => {
                    em.row(&[
                        json!(names[w.f_index]),
                        json!(names[w.g_index]),
                        json!(names[w.h_index]),
                        json!(w.n),
                        json!(w.left.to_string()),
                        json!(w.right.to_string()),
                    ])?;
                }
                None => eprintln!("no associativity witness up to {limit}"),
            }
            em.finish()?;
        }
        other => return Err(usage(format!("unknown op `{other}`"))),
    }
    Ok(0)
}

fn cmd_scan(args: ScanArgs) -> Result<i32, CliError> {
    let kind = ArithKind::from_str(&args.kind)?;
    let mut inputs = Vec::new();
    let resume = match &args.resume {
        Some(path) => {
            inputs.push(digest_input("resume", path)?);
            Some(Checkpoint::load(path)?)
        }
        None => None,
    };
    let cfg = ScanConfig {
        kind,
        x_max: args.x_max,
        segment_size: args.segment_size,
        checkpoint_every: args.checkpoint_every,
        threads: args.threads,
    };
    let mut em = make_emitter("scan", &args, &args.format, args.output.as_deref(), inputs)?;
    em.begin(&["x", "msum", "ratio", "min_ratio", "max_ratio", "wm_over_logx"])?;
    let mut sink_err: Option<io::Error> = None;
    let end = sieve::scan(&cfg, resume.as_ref(), |r| {
        if sink_err.is_none() {
            let row = [
                json!(r.x),
                json!(r.msum),
                json!(r.ratio),
                json!(r.min_ratio),
                json!(r.max_ratio),
                json!(r.wm_over_log_x()),
            ];
            if let Err(e) = em.row(&row) {
                sink_err = Some(e);
            }
        }
    })?;
    if let Some(e) = sink_err {
        return Err(e.into());
    }
    em.finish()?;
    if let Some(path) = &args.checkpoint_out {
        end.save(path)?;
    }
    Ok(0)
}

fn cmd_series(args: SeriesArgs) -> Result<i32, CliError> {
    use num::complex::Complex64;
    let s = Complex64::new(args.sigma, args.t);
    let mut em = make_emitter("series", &args, &args.format, args.output.as_deref(), vec![])?;
    match args.op.as_str() {
        "zeta" | "zeta-prime" | "f-series" => {
            let v = match args.op.as_str() {
                "zeta" => zetafun::zeta(s)?,
                "zeta-prime" => zetafun::zeta_prime(s)?,
                _ => zetafun::f_series(s)?,
            };
            em.begin(&["sigma", "t", "re", "im"])?;
            em.row(&[json!(args.sigma), json!(args.t), json!(v.re), json!(v.im)])?;
        }
        "m-product" => {
            let eval = zetafun::m_product(s)?;
            em.begin(&["sigma", "t", "re", "im", "tail_bound", "depth"])?;
            em.row(&[
                json!(args.sigma),
                json!(args.t),
                json!(eval.value.re),
                json!(eval.value.im),
                json!(eval.tail_bound),
                json!(eval.depth),
            ])?;
        }
        "m-partial" => {
            let eval = zetafun::m_partial_sum(s, args.terms)?;
            em.begin(&["sigma", "t", "re", "im", "tail_bound", "terms"])?;
            em.row(&[
                json!(args.sigma),
                json!(args.t),
                json!(eval.value.re),
                json!(eval.value.im),
                json!(eval.tail_bound),
                json!(eval.terms_used),
            ])?;
        }
        "bounds" => {
            let sigmas = parse_grid(&args.sigma_grid).map_err(usage)?;
            let ts = parse_grid(&args.t_grid).map_err(usage)?;
            let report = zetafun::bounds_check(&sigmas, &ts, args.depth)?;
            em.begin(&["sigma", "t", "re", "im", "tail_bound", "check", "slack"])?;
            for row in &report.rows {
                em.row(&[
                    json!(row.sigma),
                    json!(row.t),
                    json!(row.re),
                    json!(row.im),
                    json!(row.tail_bound),
                    json!(row.check.tag()),
                    json!(row.slack),
                ])?;
            }
            eprintln!(
                "bounds: {} checks, {} violations, slack in [{}, {}]",
                report.rows.len(),
                report.violations,
                fmt_f64(report.min_slack),
                fmt_f64(report.max_slack)
            );
        }
        other => return Err(usage(format!("unknown op `{other}`"))),
    }
    em.finish()?;
    Ok(0)
}

fn cmd_explicit(args: ExplicitArgs) -> Result<i32, CliError> {
    let kind = FormulaKind::from_str(&args.kind)?;
    let inputs = vec![digest_input("zeros", &args.zeros)?];
    let zeros = ZeroList::load(&args.zeros)?;
    let grid = parse_grid(&args.x_grid).map_err(usage)?;
    let mut xs_int = Vec::with_capacity(grid.len());
    for &x in &grid {
        if x < 2.0 || x.fract() != 0.0 {
            return Err(usage(format!("x grid must be integers >= 2, got {x}")));
        }
        xs_int.push(x as u64);
    }
    let config = ExplicitConfig {
        depth: args.depth,
        t_cutoff: args.t_cutoff,
    };
    let measured_kind = match kind {
        FormulaKind::Classical => ArithKind::Mu,
        FormulaKind::Modified => ArithKind::MuInfinity,
    };
    let formula = explicit_table(kind, &grid, &config, &zeros)?;
    let measured = sieve::summatory_at_points(measured_kind, &xs_int, args.threads)?;
    let mut em = make_emitter("explicit", &args, &args.format, args.output.as_deref(), inputs)?;
    em.begin(&["x", "measured", "explicit_sum", "abs_err"])?;
    for ((x, m), f) in xs_int.iter().zip(&measured).zip(&formula) {
        em.row(&[json!(x), json!(m), json!(f), json!((f - *m as f64).abs())])?;
    }
    em.finish()?;
    Ok(0)
}

fn rayon_pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| usage(format!("thread pool: {e}")))
}

fn cmd_walk(args: WalkArgs) -> Result<i32, CliError> {
    let pool = rayon_pool(args.threads)?;
    if args.lil {
        let report = pool.install(|| {
            walk::lil_scan(&LilConfig {
                n_max: args.n_max,
                trials: args.trials,
                seed: args.seed,
            })
        })?;
        let m_ratios: Option<Vec<f64>> = if args.with_m_ratio {
            let points: Vec<u64> = report.rows.iter().map(|r| r.n).collect();
            let sums = sieve::summatory_at_points(ArithKind::MuInfinity, &points, args.threads)?;
            Some(
                points
                    .iter()
                    .zip(&sums)
                    .map(|(&n, &m)| {
                        let nf = n as f64;
                        (m.unsigned_abs() as f64) / (nf * nf.ln().ln()).sqrt()
                    })
                    .collect(),
            )
        } else {
            None
        };
        let mut em = make_emitter("walk", &args, &args.format, args.output.as_deref(), vec![])?;
        if m_ratios.is_some() {
            em.begin(&["n", "quantile25", "median", "quantile75", "m_inf_ratio"])?;
        } else {
            em.begin(&["n", "quantile25", "median", "quantile75"])?;
        }
        for (i, row) in report.rows.iter().enumerate() {
            let mut values = vec![
                json!(row.n),
                json!(row.q25),
                json!(row.median),
                json!(row.q75),
            ];
            if let Some(rs) = &m_ratios {
                values.push(json!(rs[i]));
            }
            em.row(&values)?;
        }
        em.finish()?;
        eprintln!(
            "per-trial sup quartiles: {} / {} / {}; max {}",
            fmt_f64(report.sup_q25),
            fmt_f64(report.sup_median),
            fmt_f64(report.sup_q75),
            fmt_f64(report.sup_max)
        );
    } else {
        let thresholds: Vec<f64> = args
            .c_list
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| usage(format!("bad threshold `{s}`"))))
            .collect::<Result<_, _>>()?;
        let stats = pool.install(|| {
            walk::simulate(&WalkConfig {
                steps: args.n,
                trials: args.trials,
                seed: args.seed,
                thresholds,
            })
        })?;
        let cheb = walk::chebyshev_check(&stats);
        let mut em = make_emitter("walk", &args, &args.format, args.output.as_deref(), vec![])?;
        em.begin(&["c", "empirical_prob", "gaussian_prob", "cheb_bound", "slack"])?;
        for (t, c) in stats.thresholds.iter().zip(&cheb.rows) {
            em.row(&[
                json!(t.c),
                json!(t.inside_prob),
                json!(t.gaussian_prob),
                json!(c.bound),
                json!(c.slack),
            ])?;
        }
        em.finish()?;
    }
    Ok(0)
}

struct SuiteResult {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn verify_convolution(limit: u64) -> Vec<SuiteResult> {
    let run = || -> Result<Vec<SuiteResult>, muinf::Error> {
        let one = FnTable::constant_one(limit);
        let delta = FnTable::delta(limit);
        let inv_inf = convolve::inverse(ConvKind::Infinitary, &one, limit)?;
        let inv_bb = convolve::inverse(ConvKind::Biunitary, &one, limit)?;
        let mut pointwise_ok = true;
        for n in 1..=limit {
            let mu = factorint::mu_infinity(n)? as i128;
            pointwise_ok &= inv_inf.to_i128(n)? == mu && inv_bb.to_i128(n)? == mu;
        }
        let inf_delta = convolve::convolve(ConvKind::Infinitary, &one, &inv_inf, limit)? == delta;
        let bb_delta = convolve::convolve(ConvKind::Biunitary, &one, &inv_bb, limit)? == delta;
        Ok(vec![
            SuiteResult {
                name: "convolution.inverse_pointwise",
                passed: pointwise_ok,
                detail: format!("inverse(1) = mu_inf on 1..={limit} under both convolutions"),
            },
            SuiteResult {
                name: "convolution.inverse_roundtrip",
                passed: inf_delta && bb_delta,
                detail: format!("1 * inverse(1) = delta on 1..={limit}"),
            },
        ])
    };
    run().unwrap_or_else(|e| {
        vec![SuiteResult {
            name: "convolution",
            passed: false,
            detail: format!("error: {e}"),
        }]
    })
}

fn verify_bounds() -> Vec<SuiteResult> {
    let sigmas: Vec<f64> = (0..20).map(|i| 1.05 + i as f64 * (3.0 - 1.05) / 19.0).collect();
    let ts: Vec<f64> = (0..20).map(|i| i as f64 * 30.0 / 19.0).collect();
    match zetafun::bounds_check(&sigmas, &ts, 3) {
        Ok(rep) => vec![SuiteResult {
            name: "bounds.grid",
            passed: rep.violations == 0,
            detail: format!(
                "{} checks, {} violations, min slack {:.3e}",
                rep.rows.len(),
                rep.violations,
                rep.min_slack
            ),
        }],
        Err(e) => vec![SuiteResult {
            name: "bounds.grid",
            passed: false,
            detail: format!("error: {e}"),
        }],
    }
}

fn verify_sieve(x_max: u64) -> Vec<SuiteResult> {
    let run = || -> Result<Vec<SuiteResult>, muinf::Error> {
        let mut results = Vec::new();
        let mut small = ScanConfig::new(ArithKind::MuInfinity, x_max);
        small.segment_size = 1 << 16;
        small.checkpoint_every = (x_max / 8).max(1);
        let mut large = small.clone();
        large.segment_size = 1 << 20;
        let a = sieve::scan_to_vec(&small, None)?;
        let b = sieve::scan_to_vec(&large, None)?;
        results.push(SuiteResult {
            name: "sieve.segment_invariance",
            passed: a == b,
            detail: format!("segment 2^16 vs 2^20 to {x_max}"),
        });
        let mut one = small.clone();
        one.threads = 1;
        let mut four = small.clone();
        four.threads = 4;
        let c = sieve::scan_to_vec(&one, None)?;
        let d = sieve::scan_to_vec(&four, None)?;
        results.push(SuiteResult {
            name: "sieve.parallel_determinism",
            passed: c == d,
            detail: "threads 1 vs 4".to_string(),
        });
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut sample: Vec<u64> = (0..1_000).map(|_| rng.gen_range(1..=x_max)).collect();
        sample.sort_unstable();
        sample.dedup();
        let mut idx = 0;
        let mut agreed = true;
        sieve::stream_values(ArithKind::MuInfinity, 1, x_max, 1 << 18, 0, &mut |n, v| {
            if idx < sample.len() && sample[idx] == n {
                agreed &= v as i32 == factorint::mu_infinity(n)?;
                idx += 1;
            }
            Ok(())
        })?;
        results.push(SuiteResult {
            name: "sieve.pointwise_sample",
            passed: agreed && idx == sample.len(),
            detail: format!("{} sampled n <= {x_max}", sample.len()),
        });
        Ok(results)
    };
    run().unwrap_or_else(|e| {
        vec![SuiteResult {
            name: "sieve",
            passed: false,
            detail: format!("error: {e}"),
        }]
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, CliError> {
    let mut results = Vec::new();
    match args.suite.as_str() {
        "convolution" => results.extend(verify_convolution(args.limit)),
        "bounds" => results.extend(verify_bounds()),
        "sieve" => results.extend(verify_sieve(args.x_max)),
        "all" => {
            results.extend(verify_convolution(args.limit));
            results.extend(verify_bounds());
            results.extend(verify_sieve(args.x_max));
        }
        other => return Err(usage(format!("unknown suite `{other}`"))),
    }
    let mut failed = 0;
    for r in &results {
        println!(
            "{}: {} — {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        if !r.passed {
            failed += 1;
        }
    }
    println!(
        "verify: {}/{} checks passed",
        results.len() - failed,
        results.len()
    );
    Ok(if failed > 0 { 1 } else { 0 })
}
