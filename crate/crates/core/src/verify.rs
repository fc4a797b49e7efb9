//! Grid verification of the short-interval bound against sieved ψ.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bt_edge_bound, composite_e, lemma3_bound, lemma4_bound, lemma5_formula, lemma6_bound,
    theorem_rhs,
};
use crate::error::{Error, Result};
use crate::explicit::zero_sum_split;
use crate::numeric::log_spaced;
use crate::query::{check_theorem_domain, sqrt_log, to_half_integer, IntervalQuery};
use crate::sieve::LambdaSource;
use crate::zeros::ZeroTable;

/// `e^10`, where the derivation's majorization of E starts.
pub const E_POW_10: f64 = 22_026.465_794_806_718;

/// Lemma-value keys, in report column order.
pub const LEMMA_KEYS: [&str; 6] = ["lemma3", "lemma4", "lemma5_mid_budget", "lemma6", "bt_edge", "E"];

/// A rule turning `x` into a length: `c·√x·log x`, `x^e`, or `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScaleRule {
    SqrtLog(f64),
    Power(f64),
    Linear,
}

impl ScaleRule {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ScaleRule::SqrtLog(c) => c * sqrt_log(x),
            ScaleRule::Power(e) => x.powf(e),
            ScaleRule::Linear => x,
        }
    }

    /// The four h-rules of the standard grid.
    pub fn standard_h_rules() -> Vec<ScaleRule> {
        vec![
            ScaleRule::SqrtLog(1.0),
            ScaleRule::SqrtLog(10.0),
            ScaleRule::Power(0.75),
            ScaleRule::Linear,
        ]
    }
}

impl fmt::Display for ScaleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleRule::SqrtLog(c) if *c == 1.0 => write!(f, "sqrt(x)*log(x)"),
            ScaleRule::SqrtLog(c) => write!(f, "{c}*sqrt(x)*log(x)"),
            ScaleRule::Power(e) => write!(f, "x^{e}"),
            ScaleRule::Linear => write!(f, "x"),
        }
    }
}

impl FromStr for ScaleRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Syntax(format!("unrecognized rule {s:?}"));
        if t == "x" {
            return Ok(ScaleRule::Linear);
        }
        if let Some(e) = t.strip_prefix("x^") {
            let e: f64 = e.parse().map_err(|_| bad())?;
            return Ok(ScaleRule::Power(e));
        }
        if t == "sqrt(x)*log(x)" {
            return Ok(ScaleRule::SqrtLog(1.0));
        }
        if let Some(c) = t.strip_suffix("*sqrt(x)*log(x)") {
            let c: f64 = c.parse().map_err(|_| bad())?;
            if c > 0.0 {
                return Ok(ScaleRule::SqrtLog(c));
            }
        }
        Err(bad())
    }
}

/// Grid of x values: `log:COUNT:LO:HI` or a comma-separated list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum XGrid {
    LogSpaced { count: usize, lo: f64, hi: f64 },
    List(Vec<f64>),
}

impl XGrid {
    pub fn standard() -> Self {
        XGrid::LogSpaced { count: 30, lo: 2e4, hi: 1e8 }
    }

    /// Grid points, offset to half-integers.
    pub fn points(&self) -> Vec<f64> {
        let raw = match self {
            XGrid::LogSpaced { count, lo, hi } => log_spaced(*lo, *hi, *count),
            XGrid::List(v) => v.clone(),
        };
        raw.into_iter().map(to_half_integer).collect()
    }
}

impl fmt::Display for XGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XGrid::LogSpaced { count, lo, hi } => write!(f, "log:{count}:{lo:e}:{hi:e}"),
            XGrid::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl FromStr for XGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Syntax(format!("unrecognized x grid {s:?}"));
        if let Some(rest) = s.strip_prefix("log:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let count: usize = parts[0].parse().map_err(|_| bad())?;
            let lo: f64 = parts[1].parse().map_err(|_| bad())?;
            let hi: f64 = parts[2].parse().map_err(|_| bad())?;
            if count == 0 || !(lo > 0.0 && lo <= hi) {
                return Err(bad());
            }
            return Ok(XGrid::LogSpaced { count, lo, hi });
        }
        let v: std::result::Result<Vec<f64>, _> =
            s.split(',').filter(|p| !p.trim().is_empty()).map(|p| p.trim().parse()).collect();
        let v = v.map_err(|_| bad())?;
        if v.is_empty() {
            return Err(bad());
        }
        Ok(XGrid::List(v))
    }
}

/// Per-point result of the theorem check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub x: f64,
    pub h: f64,
    pub delta: f64,
    /// `|ψ(x+h) − ψ(x) − h|`.
    pub observed: f64,
    pub theorem_rhs: f64,
    pub margin: f64,
    pub lemma_values: BTreeMap<String, f64>,
    pub pass: bool,
}

impl BoundReport {
    pub fn ratio(&self) -> f64 {
        self.observed / self.theorem_rhs
    }

    pub fn lemma(&self, key: &str) -> f64 {
        self.lemma_values.get(key).copied().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub alpha: f64,
    pub beta: f64,
    /// Override for Δ; `None` means `√x log x / 10`.
    pub delta_rule: Option<ScaleRule>,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { alpha: 1.0, beta: 1.0, delta_rule: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RangeSummary {
    pub points: usize,
    pub passed: usize,
    pub max_ratio: f64,
    pub min_margin: f64,
}

impl RangeSummary {
    fn add(&mut self, r: &BoundReport) {
        if self.points == 0 {
            self.max_ratio = f64::NEG_INFINITY;
            self.min_margin = f64::INFINITY;
        }
        self.points += 1;
        self.passed += r.pass as usize;
        self.max_ratio = self.max_ratio.max(r.ratio());
        self.min_margin = self.min_margin.min(r.margin);
    }
}

/// Budget audit: `(1/Δ)(|low| + |middle| + |high| + tail) + √x log x + Δ ≥ observed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditPoint {
    pub x: f64,
    pub h: f64,
    pub observed: f64,
    pub audit_rhs: f64,
}

impl AuditPoint {
    pub fn holds(&self) -> bool {
        self.observed <= self.audit_rhs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub points: usize,
    pub passed: usize,
    pub max_ratio: f64,
    /// `(x, h)` where `observed / theorem_rhs` peaks.
    pub max_ratio_at: Option<(f64, f64)>,
    /// Points with `x < e^10`.
    pub below_e10: RangeSummary,
    pub from_e10: RangeSummary,
    pub audit_checked: usize,
    pub audit_violations: usize,
}

impl GridSummary {
    pub fn all_pass(&self) -> bool {
        self.passed == self.points && self.audit_violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub rows: Vec<BoundReport>,
    pub audits: Vec<AuditPoint>,
    pub summary: GridSummary,
}

/// Lemma right-hand sides at query `q`. Values outside a lemma's hypotheses
/// become NaN, except the low-zero bound whose range is empty when `αx ≤ h`.
pub fn lemma_values(q: &IntervalQuery) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    m.insert("lemma3".into(), lemma3_bound(q).unwrap_or(f64::NAN));
    let l4 = if q.low_height() <= 1.0 { Ok(0.0) } else { lemma4_bound(q) };
    m.insert("lemma4".into(), l4.unwrap_or(f64::NAN));
    let (t1, t2) = (q.low_height(), q.high_height());
    m.insert(
        "lemma5_mid_budget".into(),
        if t2 > t1 { lemma5_formula(t1, t2) } else { f64::NAN },
    );
    m.insert("lemma6".into(), lemma6_bound(q).unwrap_or(f64::NAN));
    m.insert("bt_edge".into(), bt_edge_bound(q).unwrap_or(f64::NAN));
    m.insert("E".into(), composite_e(q.x, q.h).unwrap_or(f64::NAN));
    m
}

/// Validate the whole grid, returning the `(x, h)` pairs and the sieve
/// height they require.
pub fn expand_grid(xs: &[f64], h_rules: &[ScaleRule]) -> Result<(Vec<(f64, f64)>, u64)> {
    let mut pts = Vec::with_capacity(xs.len() * h_rules.len());
    let mut need = 0u64;
    for &x in xs {
        for rule in h_rules {
            let h = rule.eval(x);
            check_theorem_domain(x, h)
                .map_err(|e| Error::Syntax(format!("grid point x = {x}, h rule {rule}: {e}")))?;
            need = need.max((x + h).floor() as u64);
            pts.push((x, h));
        }
    }
    Ok((pts, need))
}

/// Check `|ψ(x+h) − ψ(x) − h| < theorem_rhs(x, h)` at every grid point.
///
/// With a zero table, each point also gets the budget audit. Rows are sorted
/// by `(x, h)`.
pub fn verify_theorem_grid<S: LambdaSource + Sync + ?Sized>(
    xs: &[f64],
    h_rules: &[ScaleRule],
    table: Option<&ZeroTable>,
    source: &S,
    opts: &GridOptions,
) -> Result<GridReport> {
    let (pts, need) = expand_grid(xs, h_rules)?;
    if let Some(&(x, _)) = pts.first() {
        source.check_covered(x.floor() as u64, need)?;
    }
    let results: Vec<Result<(BoundReport, Option<AuditPoint>)>> = pts
        .par_iter()
        .map(|&(x, h)| evaluate_point(x, h, table, source, opts))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut audits = Vec::new();
    for r in results {
        let (row, audit) = r?;
        rows.push(row);
        audits.extend(audit);
    }
    rows.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.h.total_cmp(&b.h)));
    audits.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.h.total_cmp(&b.h)));
    let summary = summarize(&rows, &audits);
    Ok(GridReport { rows, audits, summary })
}

fn evaluate_point<S: LambdaSource + ?Sized>(
    x: f64,
    h: f64,
    table: Option<&ZeroTable>,
    source: &S,
    opts: &GridOptions,
) -> Result<(BoundReport, Option<AuditPoint>)> {
    let delta = opts.delta_rule.map_or(0.1 * sqrt_log(x), |r| r.eval(x));
    let q = IntervalQuery::new(x, h, delta, opts.alpha, opts.beta)?;
    let observed = (source.psi_interval(x, h)? - h).abs();
    let rhs = theorem_rhs(x, h)?;
    let row = BoundReport {
        x,
        h,
        delta,
        observed,
        theorem_rhs: rhs,
        margin: rhs - observed,
        lemma_values: lemma_values(&q),
        pass: observed < rhs,
    };
    let audit = match table {
        Some(t) => {
            let split = zero_sum_split(&q, t)?;
            Some(AuditPoint {
                x,
                h,
                observed,
                audit_rhs: split.abs_budget() / delta + sqrt_log(x) + delta,
            })
        }
        None => None,
    };
    Ok((row, audit))
}

pub fn summarize(rows: &[BoundReport], audits: &[AuditPoint]) -> GridSummary {
    let mut s = GridSummary {
        points: rows.len(),
        passed: rows.iter().filter(|r| r.pass).count(),
        max_ratio: 0.0,
        max_ratio_at: None,
        below_e10: RangeSummary::default(),
        from_e10: RangeSummary::default(),
        audit_checked: audits.len(),
        audit_violations: audits.iter().filter(|a| !a.holds()).count(),
    };
    for r in rows {
        if s.max_ratio_at.is_none() || r.ratio() > s.max_ratio {
            s.max_ratio = r.ratio();
            s.max_ratio_at = Some((r.x, r.h));
        }
        if r.x < E_POW_10 {
            s.below_e10.add(r);
        } else {
            s.from_e10.add(r);
        }
    }
    s
}
