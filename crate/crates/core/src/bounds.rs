//! Closed-form right-hand sides of the short-interval argument.
//!
//! Each evaluator checks the hypotheses its inequality was derived under and
//! returns a gate or domain error rather than a meaningless number.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::log_spaced;
use crate::query::{check_theorem_domain, default_delta, sqrt_log, IntervalQuery};
use crate::zeros::GAMMA_1;

/// The printed constants of the argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub gamma_1: f64,
    pub lemma1_eps: f64,
    pub lemma2_eps_num: f64,
    pub delta_factor: f64,
    pub schoenfeld_c: f64,
    pub theorem_c1: f64,
    pub theorem_c2: f64,
    pub crossover_delta: f64,
    pub carneiro_c: f64,
}

pub const CONSTANTS: Constants = Constants {
    gamma_1: GAMMA_1,
    lemma1_eps: 12.0 / 5.0,
    lemma2_eps_num: 48.0 / 5.0,
    delta_factor: 0.1,
    schoenfeld_c: 1.0 / (8.0 * PI),
    theorem_c1: SQRT_2 / PI,
    theorem_c2: 5.0,
    crossover_delta: 0.5 + 1.0 / (4.0 * SQRT_2),
    carneiro_c: 22.0 / 25.0,
};

/// Smallest x for the Schoenfeld bound.
pub const SCHOENFELD_X_MIN: f64 = 73.2;

fn domain(what: &'static str, detail: String) -> Error {
    Error::DomainViolation { what, detail }
}

/// High-zero bound `4Δ(x+h+Δ)^{3/2}/(πβx) · log(βx/Δ)`, requiring `βx/Δ ≥ γ₁`.
pub fn lemma3_bound(q: &IntervalQuery) -> Result<f64> {
    let t = q.high_height();
    if !(t >= GAMMA_1) {
        return Err(Error::GateViolation {
            lemma: "lemma3",
            detail: format!("beta*x/delta = {t} is below gamma_1 = {GAMMA_1}"),
        });
    }
    Ok(4.0 * q.delta * (q.x + q.h + q.delta).powf(1.5) / (PI * q.beta * q.x) * t.ln())
}

/// Low-zero bound `αx(h+Δ)Δ/(πh√(x−Δ)) · log(αx/h)`, requiring `αx > h`.
pub fn lemma4_bound(q: &IntervalQuery) -> Result<f64> {
    let t = q.low_height();
    if !(t > 1.0) {
        return Err(domain("lemma4", format!("alpha*x/h = {t} must exceed 1")));
    }
    if !(q.delta < q.x) {
        return Err(domain("lemma4", "delta must be below x".into()));
    }
    Ok(q.alpha * q.x * (q.h + q.delta) * q.delta / (PI * q.h * (q.x - q.delta).sqrt()) * t.ln())
}

/// `(1/4π)(log² T₂ − log² T₁) + (1/2π) log(T₂/T₁) + 1/2`, without range gate.
pub fn lemma5_formula(t1: f64, t2: f64) -> f64 {
    let (l1, l2) = (t1.ln(), t2.ln());
    (l2 * l2 - l1 * l1) / (4.0 * PI) + (l2 - l1) / (2.0 * PI) + 0.5
}

/// Reciprocal zero-sum bound for `T₂ > T₁ ≥ 100`.
pub fn lemma5_bound(t1: f64, t2: f64) -> Result<f64> {
    if !(t1 >= 100.0 && t2 > t1) {
        return Err(Error::GateViolation {
            lemma: "lemma5",
            detail: format!("need T2 > T1 >= 100, got T1 = {t1}, T2 = {t2}"),
        });
    }
    Ok(lemma5_formula(t1, t2))
}

/// Middle-zero bound
/// `Δ(x+h+Δ)^{1/2}((1/π) log(αβx²/(hΔ)) log(βh/(αΔ)) + (2/π) log(βh/(αΔ)) + 2)`.
pub fn lemma6_bound(q: &IntervalQuery) -> Result<f64> {
    let IntervalQuery { x, h, delta, alpha, beta } = *q;
    let ratio = beta * h / (alpha * delta);
    if !(ratio > 1.0) {
        return Err(domain("lemma6", format!("beta*h/(alpha*delta) = {ratio} must exceed 1")));
    }
    let lr = ratio.ln();
    let lp = (alpha * beta * x * x / (h * delta)).ln();
    Ok(delta * (x + h + delta).sqrt() * (lp * lr / PI + 2.0 * lr / PI + 2.0))
}

/// Brun–Titchmarsh edge bound `4Δ log(x+h+Δ)/log Δ`.
pub fn bt_edge_bound(q: &IntervalQuery) -> Result<f64> {
    bt_edge(q.delta, q.x + q.h + q.delta)
}

/// `4Δ log(top)/log Δ` for `Δ > 1`.
pub fn bt_edge(delta: f64, top: f64) -> Result<f64> {
    if !(delta > 1.0) {
        return Err(domain("bt_edge", format!("delta = {delta} must exceed 1")));
    }
    Ok(4.0 * delta * top.ln() / delta.ln())
}

/// `E(x, h, Δ)` as defined, at `α = β = 1` and `Δ = √x log x/10`:
/// `(11/10)√x log x + x(h+Δ)/(πh√(x−Δ)) log(x/h) + 4(x+h+Δ)^{3/2}/(πx) log(x/Δ)`.
///
/// The middle term is the low-zero contribution and is absent when `x/h ≤ 1`
/// (no zero lies below height 1).
pub fn composite_e(x: f64, h: f64) -> Result<f64> {
    if !(x >= 1000.0) {
        return Err(domain("E", format!("x = {x} is below 1000")));
    }
    let delta = default_delta(x);
    if !(h >= delta && h <= x) {
        return Err(domain("E", format!("h = {h} outside [delta, x] = [{delta}, {x}]")));
    }
    let low = if x > h {
        x * (h + delta) / (PI * h * (x - delta).sqrt()) * (x / h).ln()
    } else {
        0.0
    };
    let high = 4.0 * (x + h + delta).powf(1.5) / (PI * x) * (x / delta).ln();
    Ok(1.1 * sqrt_log(x) + low + high)
}

/// Largest `E(x, h)` over `n` log-spaced `h` in `[√x log x, x]`, as `(h, E)`.
pub fn composite_e_sweep(x: f64, n: usize) -> Result<(f64, f64)> {
    let mut worst = (f64::NAN, f64::NEG_INFINITY);
    for h in log_spaced(sqrt_log(x).min(x), x, n.max(2)) {
        let e = composite_e(x, h)?;
        if e > worst.1 {
            worst = (h, e);
        }
    }
    Ok(worst)
}

/// The further-simplified, h-free majorant of E:
/// `(11/10)√x log x + (1/π) x log x/√(x−Δ) + (2/π)(2x+Δ)^{3/2} log x / x`.
///
/// Its ratio to `√x log x` tends to `11/10 + 1/π + 4√2/π ≈ 3.219` from above,
/// so unlike [`composite_e`] it never drops below 3.
pub fn composite_e_simplified(x: f64) -> f64 {
    let delta = default_delta(x);
    let l = x.ln();
    1.1 * sqrt_log(x) + x * l / (PI * (x - delta).sqrt()) + 2.0 / PI * (2.0 * x + delta).powf(1.5) * l / x
}

/// Which leading constant to use in the theorem bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LeadingConstant {
    /// `√2/π`, valid on the whole range `h ≤ x`.
    #[default]
    Sqrt2,
    /// `1/π`, the variant available when `h = o(x)`. Not asserted anywhere.
    One,
}

/// `(√2/π)√x log x log(h/(√x log x)) + 5√x log x`.
pub fn theorem_rhs(x: f64, h: f64) -> Result<f64> {
    theorem_rhs_with(x, h, LeadingConstant::Sqrt2)
}

pub fn theorem_rhs_with(x: f64, h: f64, c: LeadingConstant) -> Result<f64> {
    check_theorem_domain(x, h)?;
    let s = sqrt_log(x);
    let lead = match c {
        LeadingConstant::Sqrt2 => CONSTANTS.theorem_c1,
        LeadingConstant::One => 1.0 / PI,
    };
    Ok(lead * s * (h / s).ln() + CONSTANTS.theorem_c2 * s)
}

/// `(1/8π)√x log² x` for `x ≥ 73.2`.
pub fn schoenfeld_rhs(x: f64) -> Result<f64> {
    if !(x >= SCHOENFELD_X_MIN) {
        return Err(domain("schoenfeld", format!("x = {x} is below 73.2")));
    }
    let l = x.ln();
    Ok(CONSTANTS.schoenfeld_c * x.sqrt() * l * l)
}

/// Interval bound implied by two Schoenfeld bounds: `(1/4π)√(x+h) log²(x+h)`.
pub fn schoenfeld_interval_rhs(x: f64, h: f64) -> Result<f64> {
    Ok(2.0 * schoenfeld_rhs(x + h)?)
}

/// `1/2 + 1/(4√2)`: below `h = x^δ` the theorem's leading constant beats
/// the Schoenfeld interval bound's.
pub fn crossover_delta() -> f64 {
    CONSTANTS.crossover_delta
}

/// Right side before the final expansion:
/// `(2x + √x log x/10)^{1/2}((1/π) log x · log(10h/(√x log x)) + (2/π) log(10h/(√x log x)) + 2) + 3√x log x`.
pub fn assembled_bound(x: f64, h: f64) -> Result<f64> {
    check_theorem_domain(x, h)?;
    let s = sqrt_log(x);
    let l10 = (10.0 * h / s).ln();
    let lead = (2.0 * x + 0.1 * s).sqrt();
    Ok(lead * (x.ln() * l10 / PI + 2.0 * l10 / PI + 2.0) + 3.0 * s)
}

/// The AM–GM step `(2x + √x log x/10)^{1/2} ≤ √(2x) + √2 log x/40`, as `(lhs, rhs)`.
pub fn am_gm_step(x: f64) -> (f64, f64) {
    let lhs = (2.0 * x + 0.1 * sqrt_log(x)).sqrt();
    let rhs = (2.0 * x).sqrt() + SQRT_2 * x.ln() / 40.0;
    (lhs, rhs)
}

/// Edge sums plus the smoothing error at the default Δ:
/// `4Δ log(x+h+Δ)/log Δ + 48/(5Δ)`, to be compared with `√x log x`.
pub fn edge_budget(x: f64, h: f64) -> Result<f64> {
    let q = IntervalQuery::unit(x, h, default_delta(x))?;
    Ok(bt_edge_bound(&q)? + CONSTANTS.lemma2_eps_num / q.delta)
}
