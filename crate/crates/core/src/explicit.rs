//! Truncated explicit formulas over the zeros ρ = 1/2 + iγ.
//!
//! Every zero sum runs over positive ordinates and doubles the real part,
//! in fixed-size chunks reduced in index order so results do not depend on
//! the number of worker threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::DoubleF64;
use crate::query::{is_half_integer, IntervalQuery};
use crate::sieve::LambdaSource;
use crate::zeros::{inv_sq_tail_beyond, skewes_bound, ZeroTable};

/// Largest argument `t` for which `γ log t` is trusted in double precision.
pub const MAX_X: f64 = 1e10;
/// Largest ordinate accepted in a zero sum.
pub const MAX_GAMMA: f64 = 1e6;

/// Majorant of `|ε(x)|` in the smoothed ψ₁ formula.
pub const PSI1_EPS: f64 = 12.0 / 5.0;

const CHUNK: usize = 4096;

fn check_envelope(top_t: f64, top_gamma: f64) -> Result<()> {
    if top_t > MAX_X {
        return Err(Error::OutsideEnvelope(format!("argument {top_t} exceeds {MAX_X}")));
    }
    if top_gamma > MAX_GAMMA {
        return Err(Error::OutsideEnvelope(format!("ordinate {top_gamma} exceeds {MAX_GAMMA}")));
    }
    Ok(())
}

/// `t^s` for real `t > 0`.
#[inline]
fn real_pow(t: f64, s: Complex64) -> Complex64 {
    let l = t.ln();
    let mag = (s.re * l).exp();
    let (sin, cos) = (s.im * l).sin_cos();
    Complex64::new(mag * cos, mag * sin)
}

/// `e^z − 1` without cancellation for small `|z|`.
#[inline]
fn expm1(z: Complex64) -> Complex64 {
    let (sin, cos) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * cos - 2.0 * half * half, z.re.exp() * sin)
}

/// `b^s − (b − d)^s`, evaluated as `−b^s · expm1(s · log1p(−d/b))`.
#[inline]
fn power_step(b: f64, d: f64, s: Complex64) -> Complex64 {
    -real_pow(b, s) * expm1(s * (-d / b).ln_1p())
}

/// The smoothed-interval kernel S(ρ) for an arbitrary complex ρ.
///
/// `((x+h+Δ)^{ρ+1} − (x+h)^{ρ+1} − x^{ρ+1} + (x−Δ)^{ρ+1}) / (ρ(ρ+1))`,
/// grouped as the difference of two ramp steps.
pub fn s_kernel(rho: Complex64, q: &IntervalQuery) -> Complex64 {
    let s = rho + 1.0;
    let upper = power_step(q.x + q.h + q.delta, q.delta, s);
    let lower = power_step(q.x, q.delta, s);
    (upper - lower) / (rho * s)
}

/// S(ρ) at ρ = 1/2 + iγ.
pub fn s_rho(gamma: f64, q: &IntervalQuery) -> Complex64 {
    s_kernel(Complex64::new(0.5, gamma), q)
}

/// The three per-zero majorants of |S(ρ)| used by the lemmas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelBounds {
    /// `4(x+h+Δ)^{3/2}/γ²`.
    pub high: f64,
    /// `(h+Δ)Δ/√(x−Δ)`.
    pub low: f64,
    /// `2(x+h+Δ)^{1/2}Δ/γ`.
    pub middle: f64,
}

pub fn kernel_bounds(gamma: f64, q: &IntervalQuery) -> KernelBounds {
    let top = q.x + q.h + q.delta;
    KernelBounds {
        high: 4.0 * top.powf(1.5) / (gamma * gamma),
        low: (q.h + q.delta) * q.delta / (q.x - q.delta).sqrt(),
        middle: 2.0 * top.sqrt() * q.delta / gamma,
    }
}

/// `Σ 2 Re f(γ)` over `gammas`, chunked with a fixed reduction order.
fn sum_2re<F>(gammas: &[f64], f: F) -> f64
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let partials: Vec<DoubleF64> = gammas
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(|&g| 2.0 * f(g).re).sum::<DoubleF64>())
        .collect();
    let mut acc = DoubleF64::ZERO;
    for p in partials {
        acc += p;
    }
    acc.value()
}

/// `Σ_{γ ∈ gammas} 2 Re S(1/2 + iγ)`.
pub fn sum_s_rho(gammas: &[f64], q: &IntervalQuery) -> f64 {
    sum_2re(gammas, |g| s_rho(g, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedPsi1 {
    pub value: f64,
    pub truncation_height: f64,
    /// Majorant of the omitted zeros: `2x^{3/2} log T/(2πT)`.
    pub tail_bound: f64,
    pub zero_count_used: usize,
}

/// `x²/2 − 2 Re Σ_{0<γ≤T} x^{ρ+1}/(ρ(ρ+1)) − x log 2π`.
pub fn truncated_psi1(x: f64, t: f64, table: &ZeroTable) -> Result<TruncatedPsi1> {
    if !is_half_integer(x) || x <= 0.0 {
        return Err(Error::IntegerX(x));
    }
    if t > table.gamma_max() {
        return Err(Error::TableExhausted { height: t, gamma_max: table.gamma_max() });
    }
    if !(t > 0.0) {
        return Err(Error::InvalidHeight(t));
    }
    let gammas = table.range(0.0, t);
    check_envelope(x, gammas.last().copied().unwrap_or(0.0))?;
    let zero_sum = sum_2re(gammas, |g| {
        let rho = Complex64::new(0.5, g);
        real_pow(x, rho + 1.0) / (rho * (rho + 1.0))
    });
    let mut acc = DoubleF64::ZERO;
    acc.add_product(x, 0.5 * x);
    acc.add_f64(-zero_sum);
    acc.add_product(-x, (2.0 * PI).ln());
    Ok(TruncatedPsi1 {
        value: acc.value(),
        truncation_height: t,
        tail_bound: 2.0 * x.powf(1.5) * skewes_bound(t),
        zero_count_used: gammas.len(),
    })
}

/// Σ_ρ S(ρ) split at the heights αx/h and βx/Δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroSumSplit {
    /// `0 < γ ≤ αx/h`.
    pub low: f64,
    /// `αx/h < γ ≤ min(βx/Δ, gamma_max)`.
    pub middle: f64,
    /// `βx/Δ < γ ≤ gamma_max`.
    pub high_partial: f64,
    /// Bound on `|Σ S(ρ)|` over every zero above `gamma_max`.
    pub high_tail_bound: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Set when `βx/Δ > gamma_max`, so part of the middle range is covered
    /// only by `high_tail_bound`.
    pub middle_truncated: bool,
}

impl ZeroSumSplit {
    pub fn total(&self) -> f64 {
        let mut acc = DoubleF64::new(self.low);
        acc.add_f64(self.middle);
        acc.add_f64(self.high_partial);
        acc.value()
    }

    /// `|low| + |middle| + |high_partial| + high_tail_bound`.
    pub fn abs_budget(&self) -> f64 {
        self.low.abs() + self.middle.abs() + self.high_partial.abs() + self.high_tail_bound
    }
}

/// Majorant of `|Σ_{γ > G} S(ρ)|` (both signs of γ) from `|S| ≤ 4(x+h+Δ)^{3/2}/γ²`.
pub fn high_tail_bound(q: &IntervalQuery, table: &ZeroTable) -> f64 {
    let g = table.gamma_max();
    let inv_sq = skewes_bound(g).min(inv_sq_tail_beyond(g, table.count()));
    8.0 * (q.x + q.h + q.delta).powf(1.5) * inv_sq
}

pub fn zero_sum_split(q: &IntervalQuery, table: &ZeroTable) -> Result<ZeroSumSplit> {
    q.validate()?;
    let g_max = table.gamma_max();
    let t_low = q.low_height();
    let t_high = q.high_height();
    check_envelope(q.x + q.h + q.delta, g_max)?;
    if t_low > g_max {
        return Err(Error::TableExhausted { height: t_low, gamma_max: g_max });
    }
    let low = sum_s_rho(table.range(0.0, t_low), q);
    let middle = sum_s_rho(table.range(t_low, t_high), q);
    let high_partial = sum_s_rho(table.range(t_high, g_max), q);
    Ok(ZeroSumSplit {
        low,
        middle,
        high_partial,
        high_tail_bound: high_tail_bound(q, table),
        alpha: q.alpha,
        beta: q.beta,
        middle_truncated: t_high > g_max,
    })
}

/// Majorant of `|ε(Δ)|` in the smoothed interval formula: `48/(5Δ)`.
pub fn smoothed_eps_bound(delta: f64) -> f64 {
    48.0 / (5.0 * delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothedResidual {
    pub weighted_sum: f64,
    /// `weighted_sum − (h + Δ − (1/Δ) Σ S(ρ))` with the table zeros.
    pub residual: f64,
    /// `48/(5Δ) + high_tail_bound/Δ`.
    pub budget: f64,
    pub split: ZeroSumSplit,
}

impl SmoothedResidual {
    pub fn within_budget(&self) -> bool {
        self.residual.abs() <= self.budget
    }
}

pub fn smoothed_interval_residual<S: LambdaSource + ?Sized>(
    q: &IntervalQuery,
    table: &ZeroTable,
    source: &S,
) -> Result<SmoothedResidual> {
    let split = zero_sum_split(q, table)?;
    let weighted_sum = source.weighted_lambda_sum(q)?;
    let mut acc = DoubleF64::new(weighted_sum);
    acc.add_f64(-q.h);
    acc.add_f64(-q.delta);
    acc.add_f64(split.total() / q.delta);
    Ok(SmoothedResidual {
        weighted_sum,
        residual: acc.value(),
        budget: smoothed_eps_bound(q.delta) + split.high_tail_bound / q.delta,
        split,
    })
}
