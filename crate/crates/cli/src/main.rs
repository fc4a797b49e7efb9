// `!(a < b)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use shortpsi::bounds::{
    bt_edge_bound, composite_e, composite_e_sweep, lemma3_bound, lemma4_bound, lemma5_bound,
    lemma6_bound,
};
use shortpsi::explicit::{kernel_bounds, s_rho, truncated_psi1, zero_sum_split, PSI1_EPS};
use shortpsi::query::sqrt_log;
use shortpsi::report::{fmt12, summary_line, to_csv, to_json};
use shortpsi::verify::{verify_theorem_grid, ScaleRule, XGrid};
use shortpsi::zeros::n_upper;
use shortpsi::{max_gap_scan, IntervalQuery, LambdaSource, SegmentedSieve, ZeroTable, CONSTANTS};

mod config;

use config::{parse_count, Format, Partial, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "shortpsi", version, about = "Check explicit short-interval prime bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a zero-ordinate file or print statistics about it.
    Zeros {
        #[arg(value_enum)]
        action: ZerosAction,
        #[arg(long, env = "SHORTPSI_ZEROS")]
        zeros: PathBuf,
    },
    /// Check the short-interval bound over an (x, h) grid.
    VerifyTheorem(RunArgs),
    /// Compare the truncated explicit formula for ψ₁ with the sieve.
    Explicit {
        #[arg(long)]
        x: f64,
        /// Truncation height; defaults to the largest ordinate in the table.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, env = "SHORTPSI_ZEROS")]
        zeros: PathBuf,
    },
    /// Evaluate one lemma bound and compare it with the table where possible.
    CheckLemma(LemmaArgs),
    /// Scan prime gaps below a limit against c·√p·log p.
    Gaps {
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        #[arg(long, default_value_t = CONSTANTS.carneiro_c)]
        c: f64,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum ZerosAction {
    Validate,
    Stats,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// File of `key = value` settings; flags override it. Keys: zeros, sieve_limit,
    /// x_grid, h_rule (repeatable), delta_rule, alpha, beta, format, out, workers.
    #[arg(long, env = "SHORTPSI_CONFIG")]
    config: Option<PathBuf>,
    /// Zero-ordinate file; enables the zero-sum budget audit.
    #[arg(long, env = "SHORTPSI_ZEROS")]
    zeros: Option<PathBuf>,
    /// Sieve height; defaults to the largest x + h of the grid.
    #[arg(long, env = "SHORTPSI_SIEVE_LIMIT", value_parser = parse_count)]
    sieve_limit: Option<u64>,
    /// `log:COUNT:LO:HI` or a comma list; default log:30:2e4:1e8.
    #[arg(long, env = "SHORTPSI_X_GRID")]
    x_grid: Option<XGrid>,
    /// `c*sqrt(x)*log(x)`, `x^e` or `x`; repeatable. Defaults to the four standard rules.
    #[arg(long = "h-rule", env = "SHORTPSI_H_RULES", value_delimiter = ';')]
    h_rules: Vec<ScaleRule>,
    /// Smoothing width rule; default 0.1*sqrt(x)*log(x).
    #[arg(long, env = "SHORTPSI_DELTA_RULE")]
    delta_rule: Option<ScaleRule>,
    #[arg(long, env = "SHORTPSI_ALPHA")]
    alpha: Option<f64>,
    #[arg(long, env = "SHORTPSI_BETA")]
    beta: Option<f64>,
    #[arg(long, env = "SHORTPSI_FORMAT")]
    format: Option<Format>,
    #[arg(long, env = "SHORTPSI_OUT")]
    out: Option<PathBuf>,
    /// Worker threads; default is the available parallelism.
    #[arg(long, env = "SHORTPSI_WORKERS")]
    workers: Option<usize>,
    /// Record the wall-clock time in JSON metadata (breaks byte identity).
    #[arg(long)]
    timestamp: bool,
}

impl RunArgs {
    fn partial(&self) -> Partial {
        Partial {
            zeros: self.zeros.clone(),
            sieve_limit: self.sieve_limit,
            x_grid: self.x_grid.clone(),
            h_rules: (!self.h_rules.is_empty()).then(|| self.h_rules.clone()),
            delta_rule: self.delta_rule,
            alpha: self.alpha,
            beta: self.beta,
            format: self.format,
            out: self.out.clone(),
            workers: self.workers,
        }
    }
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq)]
enum LemmaId {
    #[value(name = "3")]
    L3,
    #[value(name = "4")]
    L4,
    #[value(name = "5")]
    L5,
    #[value(name = "6")]
    L6,
    #[value(name = "bt")]
    Bt,
    #[value(name = "E")]
    E,
}

#[derive(Args, Debug)]
struct LemmaArgs {
    #[arg(value_enum)]
    lemma: LemmaId,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long)]
    t1: Option<f64>,
    #[arg(long)]
    t2: Option<f64>,
    #[arg(long, env = "SHORTPSI_ZEROS")]
    zeros: Option<PathBuf>,
}

/// Outcome of a subcommand: the machine-readable summary and pass status.
struct Outcome {
    summary: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            eprintln!("summary: {}", o.summary);
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            eprintln!("summary: status=error");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Zeros { action, zeros } => cmd_zeros(action, &zeros),
        Command::VerifyTheorem(args) => cmd_verify_theorem(&args),
        Command::Explicit { x, t, zeros } => cmd_explicit(x, t, &zeros),
        Command::CheckLemma(args) => cmd_check_lemma(&args),
        Command::Gaps { limit, c } => cmd_gaps(limit, c),
    }
}

fn load_table(path: &Path) -> Result<ZeroTable> {
    ZeroTable::load_path(path).with_context(|| format!("loading zeros from {}", path.display()))
}

fn cmd_zeros(action: ZerosAction, path: &Path) -> Result<Outcome> {
    let table = load_table(path)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "count = {}", table.count())?;
    writeln!(out, "gamma_max = {}", fmt12(table.gamma_max()))?;
    writeln!(out, "sha256 = {}", table.source_digest())?;
    match action {
        ZerosAction::Stats => {
            writeln!(out, "gamma_1 = {}", fmt12(table.ordinates()[0]))?;
            let mut t = 100.0;
            while t <= table.gamma_max() {
                writeln!(
                    out,
                    "N({t}) = {}  (upper {:.1})",
                    table.count_below(t)?,
                    n_upper(t)
                )?;
                t *= 10.0;
            }
            Ok(Outcome { summary: format!("count={} gamma_max={}", table.count(), fmt12(table.gamma_max())), pass: true })
        }
        ZerosAction::Validate => {
            let first_ok = table.first_ordinate_consistent();
            if !first_ok {
                writeln!(out, "first ordinate {} does not match 14.1347...", table.ordinates()[0])?;
            }
            let report = table.check_counting_bounds(&table.counting_samples(1000))?;
            for v in report.violations.iter().take(20) {
                writeln!(out, "violation: {v:?}")?;
            }
            let pass = first_ok && report.ok();
            Ok(Outcome {
                summary: format!(
                    "count={} samples={} violations={} status={}",
                    table.count(),
                    report.samples,
                    report.violations.len(),
                    if pass { "pass" } else { "fail" }
                ),
                pass,
            })
        }
    }
}

fn cmd_verify_theorem(args: &RunArgs) -> Result<Outcome> {
    let file = match &args.config {
        Some(p) => Partial::from_file(p)?,
        None => Partial::default(),
    };
    let cfg = RunConfig::resolve(args.partial().or(file))?;
    if let Some(n) = cfg.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    let table = cfg.zeros_path.as_deref().map(load_table).transpose()?;
    let sieve = SegmentedSieve::new(cfg.sieve_limit);
    let report = verify_theorem_grid(&cfg.xs, &cfg.rules, table.as_ref(), &sieve, &cfg.options)?;
    let body = match cfg.output_format {
        Format::Csv => to_csv(&report),
        Format::Json => {
            let ts = args.timestamp.then(unix_time);
            let mut s = serde_json::to_string_pretty(&to_json(&report, cfg.echo(), table.as_ref(), ts))?;
            s.push('\n');
            s
        }
    };
    match &cfg.output_path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    let s = &report.summary;
    Ok(Outcome {
        summary: format!(
            "points={} passed={} violations={} max_ratio={} audit_violations={} ({})",
            s.points,
            s.passed,
            s.points - s.passed,
            fmt12(s.max_ratio),
            s.audit_violations,
            summary_line(&report)
        ),
        pass: s.all_pass(),
    })
}

fn unix_time() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    format!("unix:{secs}")
}

fn cmd_explicit(x: f64, t: Option<f64>, zeros: &Path) -> Result<Outcome> {
    let table = load_table(zeros)?;
    let t = t.unwrap_or(table.gamma_max());
    let formula = truncated_psi1(x, t, &table)?;
    let sieve = SegmentedSieve::new(x.floor() as u64);
    let psi1 = sieve.psi1(x)?;
    let residual = formula.value - psi1;
    let budget = PSI1_EPS + formula.tail_bound;
    let pass = residual.abs() <= budget;
    let mut out = std::io::stdout().lock();
    writeln!(out, "x = {x}")?;
    writeln!(out, "T = {t} ({} zeros)", formula.zero_count_used)?;
    writeln!(out, "psi1_sieve = {}", fmt12(psi1))?;
    writeln!(out, "psi1_formula = {}", fmt12(formula.value))?;
    writeln!(out, "residual = {}", fmt12(residual))?;
    writeln!(out, "budget = {}", fmt12(budget))?;
    Ok(Outcome {
        summary: format!("residual={} budget={} status={}", fmt12(residual), fmt12(budget), status(pass)),
        pass,
    })
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.with_context(|| format!("--{name} is required for this lemma"))
}

fn lemma_query(a: &LemmaArgs) -> Result<IntervalQuery> {
    let x = need(a.x, "x")?;
    let h = need(a.h, "h")?;
    let delta = a.delta.unwrap_or(0.1 * sqrt_log(x));
    Ok(IntervalQuery::new(x, h, delta, a.alpha, a.beta)?)
}

fn cmd_check_lemma(a: &LemmaArgs) -> Result<Outcome> {
    let table = a.zeros.as_deref().map(load_table).transpose()?;
    let need_table = || table.as_ref().context("--zeros is required for this lemma");
    let (rhs, lhs, name) = match a.lemma {
        LemmaId::L3 => {
            let q = lemma_query(a)?;
            let rhs = lemma3_bound(&q)?;
            let split = zero_sum_split(&q, need_table()?)?;
            (rhs, split.high_partial.abs(), "high zero sum in table")
        }
        LemmaId::L4 => {
            let q = lemma_query(a)?;
            let rhs = lemma4_bound(&q)?;
            let t = need_table()?;
            let zs = t.range(0.0, q.low_height());
            audit_kernel(zs, &q, |b| b.low)?;
            let split = zero_sum_split(&q, t)?;
            (rhs, split.low.abs(), "low zero sum")
        }
        LemmaId::L5 => {
            let (t1, t2) = (need(a.t1, "t1")?, need(a.t2, "t2")?);
            let rhs = lemma5_bound(t1, t2)?;
            let lhs = need_table()?.sum_inv_gamma_range(t1, t2)?;
            (rhs, lhs, "sum of 1/gamma")
        }
        LemmaId::L6 => {
            let q = lemma_query(a)?;
            let rhs = lemma6_bound(&q)?;
            let t = need_table()?;
            let zs = t.range(q.low_height(), q.high_height());
            audit_kernel(zs, &q, |b| b.middle)?;
            let split = zero_sum_split(&q, t)?;
            (rhs, split.middle.abs(), "middle zero sum")
        }
        LemmaId::Bt => {
            let q = lemma_query(a)?;
            let rhs = bt_edge_bound(&q)?;
            let (x, h, d) = (q.x, q.h, q.delta);
            let sieve = SegmentedSieve::new((x + h + d).floor() as u64);
            let edges = sieve.psi_interval(x - d, d)? + sieve.psi_interval(x + h, d)?;
            (rhs, edges, "prime powers in the two ramps")
        }
        LemmaId::E => {
            let x = need(a.x, "x")?;
            let e = match a.h {
                Some(h) => composite_e(x, h)?,
                None => composite_e_sweep(x, 64)?.1,
            };
            (3.0 * sqrt_log(x), e, "E")
        }
    };
    let pass = lhs < rhs;
    let v = json!({ "lemma": format!("{:?}", a.lemma), "lhs": fmt12(lhs), "lhs_kind": name, "rhs": fmt12(rhs), "pass": pass });
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(Outcome { summary: format!("lhs={} rhs={} status={}", fmt12(lhs), fmt12(rhs), status(pass)), pass })
}

/// Check the per-zero majorant selected by `pick` for every zero in `zs`.
fn audit_kernel(
    zs: &[f64],
    q: &IntervalQuery,
    pick: impl Fn(&shortpsi::explicit::KernelBounds) -> f64,
) -> Result<()> {
    for &g in zs {
        let s = s_rho(g, q).norm();
        let b = pick(&kernel_bounds(g, q));
        if !(s <= b * (1.0 + 1e-12)) {
            bail!("kernel bound fails at gamma = {g}: |S| = {s} > {b}");
        }
    }
    Ok(())
}

fn cmd_gaps(limit: u64, c: f64) -> Result<Outcome> {
    let scan = max_gap_scan(limit)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "p,q,gap,ratio")?;
    for r in &scan.records {
        writeln!(out, "{},{},{},{}", r.p, r.q, r.gap, fmt12(r.ratio))?;
    }
    let worst = scan.worst.map_or(0.0, |w| w.ratio);
    let pass = worst < c;
    Ok(Outcome {
        summary: format!(
            "gaps={} max_gap={} worst_ratio={} bound={} status={}",
            scan.gaps_scanned,
            scan.max_gap(),
            fmt12(worst),
            fmt12(c),
            status(pass)
        ),
        pass,
    })
}
