//! Error-free transformations and a double-double accumulator.
//!
//! Sums over 10⁸ von Mangoldt terms or 10⁵ oscillating zero terms lose
//! several digits with naive `f64` accumulation. [`DoubleF64`] keeps an
//! unevaluated `hi + lo` pair, so a running sum carries roughly 106 bits
//! and differences of large nearly-equal partial sums (second differences
//! of ψ₁, prefix-sum range queries) stay accurate.

use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// Knuth's TwoSum: `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// `a * b = p + e` exactly, via fused multiply-add.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleF64 {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleF64 {
    pub const ZERO: DoubleF64 = DoubleF64 { hi: 0.0, lo: 0.0 };

    pub fn new(v: f64) -> Self {
        DoubleF64 { hi: v, lo: 0.0 }
    }

    /// Rounded value.
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add_f64(&mut self, v: f64) {
        let (s, e) = two_sum(self.hi, v);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        self.hi = hi;
        self.lo = lo;
    }

    /// Accumulate the exact product `a * b`.
    pub fn add_product(&mut self, a: f64, b: f64) {
        let (p, pe) = two_prod(a, b);
        *self += DoubleF64 { hi: p, lo: pe };
    }

    /// Product with a plain double, accurate to double-double precision.
    pub fn mul_f64(self, b: f64) -> DoubleF64 {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        DoubleF64 { hi, lo }
    }
}

impl From<f64> for DoubleF64 {
    fn from(v: f64) -> Self {
        DoubleF64::new(v)
    }
}

impl AddAssign for DoubleF64 {
    fn add_assign(&mut self, rhs: DoubleF64) {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        self.hi = hi;
        self.lo = lo;
    }
}

impl AddAssign<f64> for DoubleF64 {
    fn add_assign(&mut self, rhs: f64) {
        self.add_f64(rhs);
    }
}

impl Add for DoubleF64 {
    type Output = DoubleF64;
    fn add(mut self, rhs: DoubleF64) -> DoubleF64 {
        self += rhs;
        self
    }
}

impl Neg for DoubleF64 {
    type Output = DoubleF64;
    fn neg(self) -> DoubleF64 {
        DoubleF64 { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleF64 {
    type Output = DoubleF64;
    fn sub(self, rhs: DoubleF64) -> DoubleF64 {
        self + (-rhs)
    }
}

impl SubAssign for DoubleF64 {
    fn sub_assign(&mut self, rhs: DoubleF64) {
        *self += -rhs;
    }
}

impl std::iter::Sum<f64> for DoubleF64 {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = DoubleF64::ZERO;
        for v in iter {
            acc.add_f64(v);
        }
        acc
    }
}

/// Compensated sum of a slice in index order.
pub fn compensated_sum(values: &[f64]) -> f64 {
    values.iter().copied().sum::<DoubleF64>().value()
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `n` points log-spaced on `[lo, hi]`, endpoints included.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}
