//! Exact von Mangoldt values over integer windows.
//!
//! [`SegmentedSieve`] streams Λ(n) over any window below its capacity using
//! base primes up to the square root of the capacity; [`SieveTable`] is a
//! materialized window. Both answer ψ, ψ₁, interval counts and trapezoid
//! weighted sums through the [`LambdaSource`] trait, with all accumulation
//! done in double-double.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{two_sum, DoubleF64};
use crate::query::IntervalQuery;

const SEGMENT_LEN: usize = 1 << 18;

/// Λ(n) by trial factorization.
///
/// Independent of the sieve; this is the reference definition.
pub fn lambda(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // m is prime and n had no smaller prime factor, so n = m.
    (m as f64).ln()
}

/// Trapezoid weight: ramps up on `[x − Δ, x]`, equals 1 on `[x, x + h]`,
/// ramps down on `[x + h, x + h + Δ]`, vanishes elsewhere.
pub fn weight(n: f64, q: &IntervalQuery) -> f64 {
    let IntervalQuery { x, h, delta, .. } = *q;
    if n <= x - delta || n >= x + h + delta {
        0.0
    } else if n < x {
        (n - x + delta) / delta
    } else if n <= x + h {
        1.0
    } else {
        (x + h + delta - n) / delta
    }
}

/// Anything that can enumerate the nonzero Λ(n) over an integer window in
/// ascending order.
pub trait LambdaSource {
    /// Covered integer range `[lo, hi]`.
    fn coverage(&self) -> (u64, u64);

    /// Call `f(n, Λ(n))` for every prime power `n` in `[lo, hi]`, ascending.
    fn visit_range(&self, lo: u64, hi: u64, f: &mut dyn FnMut(u64, f64));

    fn check_covered(&self, lo: u64, hi: u64) -> Result<()> {
        let (have_lo, have_hi) = self.coverage();
        // Nothing below 2 contributes, so coverage from 2 counts as from 1.
        let eff_lo = lo.max(2);
        if hi < eff_lo {
            return Ok(());
        }
        if eff_lo < have_lo.max(2) || hi > have_hi {
            return Err(Error::SieveRangeExceeded {
                need_lo: lo,
                need_hi: hi,
                have_lo,
                have_hi,
            });
        }
        Ok(())
    }

    /// Checked enumeration over `[lo, hi]`.
    fn for_each_lambda(&self, lo: u64, hi: u64, f: &mut dyn FnMut(u64, f64)) -> Result<()> {
        let lo = lo.max(2);
        if hi < lo {
            return Ok(());
        }
        self.check_covered(lo, hi)?;
        self.visit_range(lo, hi, f);
        Ok(())
    }

    /// Compensated sum of Λ(n) over `lo ≤ n ≤ hi`.
    fn lambda_sum(&self, lo: u64, hi: u64) -> Result<DoubleF64> {
        let mut acc = DoubleF64::ZERO;
        self.for_each_lambda(lo, hi, &mut |_, v| acc.add_f64(v))?;
        Ok(acc)
    }

    /// ψ(x) = Σ_{n ≤ x} Λ(n), inclusive at integer x.
    fn psi(&self, x: f64) -> Result<f64> {
        if x < 2.0 {
            return Ok(0.0);
        }
        Ok(self.lambda_sum(2, x.floor() as u64)?.value())
    }

    /// ψ(x + h) − ψ(x): Λ summed over `x < n ≤ x + h`.
    fn psi_interval(&self, x: f64, h: f64) -> Result<f64> {
        if h < 0.0 || x < 0.0 {
            return Err(Error::InvalidQuery(format!(
                "psi_interval needs x, h >= 0, got {x}, {h}"
            )));
        }
        let lo = x.floor() as u64 + 1;
        let hi = (x + h).floor() as u64;
        if hi < lo {
            return Ok(0.0);
        }
        Ok(self.lambda_sum(lo, hi)?.value())
    }

    /// ψ₁(x) = Σ_{n ≤ x} (x − n) Λ(n) in double-double.
    fn psi1_dd(&self, x: f64) -> Result<DoubleF64> {
        let mut acc = DoubleF64::ZERO;
        if x < 2.0 {
            return Ok(acc);
        }
        self.for_each_lambda(2, x.floor() as u64, &mut |n, v| {
            let (d, e) = two_sum(x, -(n as f64));
            acc.add_product(d, v);
            acc.add_product(e, v);
        })?;
        Ok(acc)
    }

    fn psi1(&self, x: f64) -> Result<f64> {
        Ok(self.psi1_dd(x)?.value())
    }

    /// Σ Λ(n) w(n) over the support of the trapezoid weight.
    fn weighted_lambda_sum(&self, q: &IntervalQuery) -> Result<f64> {
        let (lo, hi) = q.integer_window();
        let mut acc = DoubleF64::ZERO;
        self.for_each_lambda(lo, hi, &mut |n, v| acc.add_product(v, weight(n as f64, q)))?;
        Ok(acc.value())
    }

    /// ψ at many points in one ascending pass. Output order matches input.
    fn psi_at(&self, points: &[f64]) -> Result<Vec<f64>> {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].total_cmp(&points[b]));
        let mut out = vec![0.0; points.len()];
        let Some(&last) = order.last() else {
            return Ok(out);
        };
        let top = points[last];
        if top < 2.0 {
            return Ok(out);
        }
        let mut acc = DoubleF64::ZERO;
        let mut next = 0usize;
        self.for_each_lambda(2, top.floor() as u64, &mut |n, v| {
            let nf = n as f64;
            while next < order.len() && points[order[next]] < nf {
                out[order[next]] = acc.value();
                next += 1;
            }
            acc.add_f64(v);
        })?;
        for &i in &order[next..] {
            out[i] = acc.value();
        }
        Ok(out)
    }
}

/// Segmented sieve of Eratosthenes with prime-power detection.
#[derive(Debug, Clone)]
pub struct SegmentedSieve {
    limit: u64,
    base_primes: Vec<u64>,
    /// Prime powers `p^k`, `k ≥ 2`, up to `limit`, ascending, with `log p`.
    powers: Vec<(u64, f64)>,
}

impl SegmentedSieve {
    /// Sieve able to answer queries on `[1, limit]`.
    pub fn new(limit: u64) -> Self {
        let root = isqrt(limit);
        let base_primes = small_primes(root);
        let mut powers = Vec::new();
        for &p in &base_primes {
            let lp = (p as f64).ln();
            let mut q = p;
            while let Some(next) = q.checked_mul(p) {
                if next > limit {
                    break;
                }
                powers.push((next, lp));
                q = next;
            }
        }
        powers.sort_by_key(|&(n, _)| n);
        SegmentedSieve { limit, base_primes, powers }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Mark composites among `[seg_lo, seg_lo + flags.len())`; `flags[i]` is
    /// set for composite `seg_lo + i` (and for 0 and 1).
    fn mark_composites(&self, seg_lo: u64, flags: &mut [bool]) {
        flags.fill(false);
        let seg_hi = seg_lo + flags.len() as u64 - 1;
        for &p in &self.base_primes {
            let sq = p * p;
            if sq > seg_hi {
                break;
            }
            let first = sq.max(seg_lo.div_ceil(p) * p);
            let mut i = (first - seg_lo) as usize;
            let step = p as usize;
            while i < flags.len() {
                flags[i] = true;
                i += step;
            }
        }
        for n in seg_lo..seg_lo.saturating_add(flags.len() as u64).min(2) {
            flags[(n - seg_lo) as usize] = true;
        }
    }

    /// Fill `out` with Λ(seg_lo + i), reusing `flags` as scratch.
    fn fill_segment(&self, seg_lo: u64, flags: &mut [bool], out: &mut [f64]) {
        debug_assert_eq!(flags.len(), out.len());
        self.mark_composites(seg_lo, flags);
        for (i, (v, &composite)) in out.iter_mut().zip(flags.iter()).enumerate() {
            *v = if composite { 0.0 } else { ((seg_lo + i as u64) as f64).ln() };
        }
        let seg_hi = seg_lo + out.len() as u64 - 1;
        let start = self.powers.partition_point(|&(n, _)| n < seg_lo);
        for &(n, lp) in self.powers[start..].iter().take_while(|&&(n, _)| n <= seg_hi) {
            out[(n - seg_lo) as usize] = lp;
        }
    }

    /// Call `f(p)` for every prime `p` in `[lo, hi]`, ascending.
    pub fn for_each_prime(&self, lo: u64, hi: u64, f: &mut dyn FnMut(u64)) -> Result<()> {
        let lo = lo.max(2);
        if hi < lo {
            return Ok(());
        }
        self.check_covered(lo, hi)?;
        let mut flags = vec![false; SEGMENT_LEN];
        let mut seg_lo = lo;
        while seg_lo <= hi {
            let len = ((hi - seg_lo + 1) as usize).min(SEGMENT_LEN);
            let flags = &mut flags[..len];
            self.mark_composites(seg_lo, flags);
            for (i, &c) in flags.iter().enumerate() {
                if !c {
                    f(seg_lo + i as u64);
                }
            }
            seg_lo += len as u64;
        }
        Ok(())
    }

    /// Materialize `[lo, hi]` as a table, sieving segments in parallel.
    pub fn table(&self, lo: u64, hi: u64) -> Result<SieveTable> {
        if lo < 1 || hi < lo {
            return Err(Error::InvalidQuery(format!("bad table window [{lo}, {hi}]")));
        }
        self.check_covered(lo, hi)?;
        let mut values = vec![0.0; (hi - lo + 1) as usize];
        values
            .par_chunks_mut(SEGMENT_LEN)
            .enumerate()
            .for_each_init(
                || vec![false; SEGMENT_LEN],
                |flags, (k, chunk)| {
                    let seg_lo = lo + (k * SEGMENT_LEN) as u64;
                    self.fill_segment(seg_lo, &mut flags[..chunk.len()], chunk);
                },
            );
        Ok(SieveTable { lo, hi, values })
    }
}

impl LambdaSource for SegmentedSieve {
    fn coverage(&self) -> (u64, u64) {
        (1, self.limit)
    }

    fn visit_range(&self, lo: u64, hi: u64, f: &mut dyn FnMut(u64, f64)) {
        let mut flags = vec![false; SEGMENT_LEN];
        let mut vals = vec![0.0; SEGMENT_LEN];
        let mut seg_lo = lo;
        while seg_lo <= hi {
            let len = ((hi - seg_lo + 1) as usize).min(SEGMENT_LEN);
            self.fill_segment(seg_lo, &mut flags[..len], &mut vals[..len]);
            for (i, &v) in vals[..len].iter().enumerate() {
                if v != 0.0 {
                    f(seg_lo + i as u64, v);
                }
            }
            seg_lo += len as u64;
        }
    }
}

/// Λ(n) materialized for `lo ≤ n ≤ hi`. Immutable once built.
#[derive(Debug, Clone)]
pub struct SieveTable {
    lo: u64,
    hi: u64,
    values: Vec<f64>,
}

impl SieveTable {
    /// Table over `[lo, hi]` using a sieve sized for `hi`.
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        SegmentedSieve::new(hi).table(lo, hi)
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Λ(n) for `n` in the window.
    pub fn lambda(&self, n: u64) -> Option<f64> {
        (self.lo..=self.hi)
            .contains(&n)
            .then(|| self.values[(n - self.lo) as usize])
    }
}

impl LambdaSource for SieveTable {
    fn coverage(&self) -> (u64, u64) {
        (self.lo, self.hi)
    }

    fn visit_range(&self, lo: u64, hi: u64, f: &mut dyn FnMut(u64, f64)) {
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        for (i, &v) in self.values[a..=b].iter().enumerate() {
            if v != 0.0 {
                f(lo + i as u64, v);
            }
        }
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Primes up to `n` by a plain sieve of Eratosthenes.
fn small_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}
