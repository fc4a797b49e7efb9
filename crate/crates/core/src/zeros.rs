//! Tables of nontrivial zeta-zero ordinates.
//!
//! The accepted text format is one positive decimal ordinate per line in
//! strictly ascending order; blank lines and lines starting with `#` are
//! skipped. Queries assume the table holds *every* zero with
//! `0 < γ ≤ gamma_max`, which is what the standard published tables provide.

use std::f64::consts::PI;
use std::io::Read;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numeric::DoubleF64;

/// First zero ordinate γ₁ = 14.1347251417…
pub const GAMMA_1: f64 = 14.134_725_141_734_694;

/// Ordinates below this cannot belong to a nontrivial zero.
const MIN_ORDINATE: f64 = 14.0;

#[derive(Debug, Clone)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    /// `inv[k] = Σ_{j<k} 1/γ_j`.
    inv_prefix: Vec<DoubleF64>,
    /// `inv_sq[k] = Σ_{j<k} 1/γ_j²`.
    inv_sq_prefix: Vec<DoubleF64>,
    digest: String,
}

/// Upper bound `T log T / (2π)` on N(T), valid for `T > 15`.
pub fn n_upper(t: f64) -> f64 {
    t * t.ln() / (2.0 * PI)
}

/// Lower bound `T log T / (2π) − T/2` on N(T), valid for `T > 100`.
pub fn n_lower(t: f64) -> f64 {
    n_upper(t) - t / 2.0
}

/// Skewes-type bound `log T / (2πT)` on `Σ_{γ ≥ T} 1/γ²`, for `T ≥ γ₁`.
pub fn skewes_bound(t: f64) -> f64 {
    t.ln() / (2.0 * PI * t)
}

/// Rigorous majorant of `Σ_{γ > G} 1/γ²` given the exact count `N(G)`.
///
/// Integration by parts gives `Σ_{γ>G} γ⁻² = −N(G)/G² + 2∫_G^∞ N(t) t⁻³ dt`.
/// Two upper bounds for N(t) are integrated in closed form and the smaller
/// result is returned:
///
/// * `N(t) < t log t/(2π)` gives `(log G + 1)/(πG) − N(G)/G²`;
/// * `N(t) ≤ (t/2π) log(t/2πe) + 7/8 + 0.112 log t + 0.278 log log t +
///   2.510 + 0.2/t` (explicit Riemann–von Mangoldt, `t ≥ e`), with
///   `log log t ≤ log log G + (log t − log G)/log G`, gives
///   `log(G/2π)/(πG) + [3.385 + 0.056(2 log G + 1) + 0.278(log log G +
///   1/(2 log G))]/G² + 0.4/(3G³) − N(G)/G²`.
///
/// The first form overshoots the true tail by about 0.9/G, the second by
/// `O(log G / G²)`.
pub fn inv_sq_tail_beyond(g: f64, count: usize) -> f64 {
    let n = count as f64;
    let lg = g.ln();
    let boundary = n / (g * g);
    let crude = (lg + 1.0) / (PI * g) - boundary;
    let refined = (g / (2.0 * PI)).ln() / (PI * g)
        + (3.385 + 0.056 * (2.0 * lg + 1.0) + 0.278 * (lg.ln() + 0.5 / lg)) / (g * g)
        + 0.4 / (3.0 * g * g * g)
        - boundary;
    crude.min(refined).max(0.0)
}

impl ZeroTable {
    /// Parse and validate a zero file.
    pub fn load<R: Read>(mut source: R) -> Result<Self> {
        let mut bytes = Vec::new();
        source.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn load_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let f = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::load(std::io::BufReader::new(f))
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let digest = hex::encode(Sha256::digest(bytes));
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
            line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
            content: "<invalid utf-8>".into(),
        })?;
        let mut ordinates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let value: f64 = s
                .parse()
                .map_err(|_| Error::Parse { line, content: s.to_string() })?;
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidOrdinate { line, value });
            }
            if let Some(&previous) = ordinates.last() {
                if value <= previous {
                    return Err(Error::OrderViolation { line, value, previous });
                }
            } else if value <= MIN_ORDINATE {
                return Err(Error::InvalidOrdinate { line, value });
            }
            ordinates.push(value);
        }
        if ordinates.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self::from_sorted(ordinates, digest))
    }

    fn from_sorted(ordinates: Vec<f64>, digest: String) -> Self {
        let mut inv_prefix = Vec::with_capacity(ordinates.len() + 1);
        let mut inv_sq_prefix = Vec::with_capacity(ordinates.len() + 1);
        let (mut a, mut b) = (DoubleF64::ZERO, DoubleF64::ZERO);
        inv_prefix.push(a);
        inv_sq_prefix.push(b);
        for &g in &ordinates {
            a.add_f64(1.0 / g);
            b.add_f64(1.0 / (g * g));
            inv_prefix.push(a);
            inv_sq_prefix.push(b);
        }
        ZeroTable { ordinates, inv_prefix, inv_sq_prefix, digest }
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn count(&self) -> usize {
        self.ordinates.len()
    }

    pub fn gamma_max(&self) -> f64 {
        *self.ordinates.last().expect("tables are never empty")
    }

    /// SHA-256 of the ingested bytes, lowercase hex.
    pub fn source_digest(&self) -> &str {
        &self.digest
    }

    /// Whether the first ordinate reads as 14.13… at the printed precision.
    pub fn first_ordinate_consistent(&self) -> bool {
        (self.ordinates[0] * 100.0).floor() == 1413.0
    }

    /// Number of ordinates `≤ t`.
    fn rank(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// Number of ordinates `< t`.
    fn rank_strict(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g < t)
    }

    /// N(T) = #{γ : 0 < γ ≤ T}.
    pub fn count_below(&self, t: f64) -> Result<usize> {
        if t > self.gamma_max() {
            return Err(Error::TableExhausted { height: t, gamma_max: self.gamma_max() });
        }
        Ok(self.rank(t))
    }

    /// `(partial, tail_bound)`: the table sum `Σ_{γ ≥ T} 1/γ²` and a rigorous
    /// bound on the zeros above `gamma_max`.
    pub fn sum_inv_gamma_sq_above(&self, t: f64) -> Result<(f64, f64)> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidHeight(t));
        }
        let k = self.rank_strict(t);
        let partial = (self.inv_sq_prefix[self.count()] - self.inv_sq_prefix[k]).value();
        Ok((partial, inv_sq_tail_beyond(self.gamma_max(), self.count())))
    }

    /// `Σ 1/γ` over `T1 < γ < T2`.
    pub fn sum_inv_gamma_range(&self, t1: f64, t2: f64) -> Result<f64> {
        if !(t1 > 0.0 && t1 < t2) {
            return Err(Error::InvalidRange { t1, t2 });
        }
        if t2 > self.gamma_max() {
            return Err(Error::TableExhausted { height: t2, gamma_max: self.gamma_max() });
        }
        let a = self.rank(t1);
        let b = self.rank_strict(t2);
        if b <= a {
            return Ok(0.0);
        }
        Ok((self.inv_prefix[b] - self.inv_prefix[a]).value())
    }

    /// Ordinates in the half-open height range `(lo, hi]`.
    pub fn range(&self, lo: f64, hi: f64) -> &[f64] {
        let a = self.rank(lo);
        let b = self.rank(hi).max(a);
        &self.ordinates[a..b]
    }

    /// Check the classical counting bounds at each sample height.
    pub fn check_counting_bounds(&self, samples: &[f64]) -> Result<CountingReport> {
        let mut report = CountingReport::default();
        for &t in samples {
            let n = self.count_below(t)?;
            report.samples += 1;
            if t > 15.0 {
                report.upper_checked += 1;
                if !((n as f64) < n_upper(t)) {
                    report.violations.push(CountingViolation { t, count: n, kind: BoundKind::Upper });
                }
            }
            if t > 100.0 {
                report.lower_checked += 1;
                if !((n as f64) > n_lower(t)) {
                    report.violations.push(CountingViolation { t, count: n, kind: BoundKind::Lower });
                }
            }
        }
        Ok(report)
    }

    /// Heights that stress the counting bounds: just below and at every
    /// ordinate (where N jumps) plus `extra` log-spaced points.
    pub fn counting_samples(&self, extra: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.count() + extra);
        for &g in &self.ordinates {
            out.push(g * (1.0 - 1e-12));
            out.push(g);
        }
        out.extend(crate::numeric::log_spaced(15.5, self.gamma_max(), extra));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingViolation {
    pub t: f64,
    pub count: usize,
    pub kind: BoundKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CountingReport {
    pub samples: usize,
    pub upper_checked: usize,
    pub lower_checked: usize,
    pub violations: Vec<CountingViolation>,
}

impl CountingReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIRST_TEN: &str = "14.134725141734693790\n21.022039638771554993\n25.010857580145688763\n\
30.424876125859513210\n32.935061587739189691\n37.586178158825671257\n40.918719012147495187\n\
43.327073280914999519\n48.005150881167159727\n49.773832477672302181\n";

    fn ten() -> ZeroTable {
        ZeroTable::from_bytes(FIRST_TEN.as_bytes()).unwrap()
    }

    #[test]
    fn load_three() {
        let t = ZeroTable::load("14.134725\n21.022040\n25.010858".as_bytes()).unwrap();
        assert_eq!(t.count(), 3);
        assert!((t.gamma_max() - 25.010858).abs() < 1e-12);
        assert!(t.first_ordinate_consistent());
        assert_eq!(t.source_digest().len(), 64);
    }

    #[test]
    fn comments_and_blanks() {
        let t = ZeroTable::load("# header\n\n14.134725\n  \n# mid\n21.022040\n".as_bytes()).unwrap();
        assert_eq!(t.count(), 2);
    }

    #[test]
    fn order_violation_reports_line() {
        let e = ZeroTable::load("21.0\n14.1".as_bytes()).unwrap_err();
        assert!(matches!(e, Error::OrderViolation { line: 2, .. }), "{e:?}");
        let e = ZeroTable::load("14.2\n14.2".as_bytes()).unwrap_err();
        assert!(matches!(e, Error::OrderViolation { line: 2, .. }));
    }

    #[test]
    fn malformed_and_empty() {
        let e = ZeroTable::load("14.13\nabc\n".as_bytes()).unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, content: "abc".into() });
        assert_eq!(ZeroTable::load("".as_bytes()).unwrap_err(), Error::EmptyInput);
        assert_eq!(ZeroTable::load("# only\n\n".as_bytes()).unwrap_err(), Error::EmptyInput);
        assert!(matches!(
            ZeroTable::load("-3\n".as_bytes()).unwrap_err(),
            Error::InvalidOrdinate { line: 1, .. }
        ));
        assert!(matches!(
            ZeroTable::load("3.5\n14.2".as_bytes()).unwrap_err(),
            Error::InvalidOrdinate { line: 1, .. }
        ));
    }

    #[test]
    fn counting() {
        let t = ten();
        assert_eq!(t.count_below(14.0).unwrap(), 0);
        assert_eq!(t.count_below(t.ordinates()[4]).unwrap(), 5);
        assert_eq!(t.count_below(t.gamma_max()).unwrap(), 10);
        assert!(matches!(t.count_below(50.0), Err(Error::TableExhausted { .. })));
    }

    #[test]
    fn reciprocal_sums() {
        let t = ten();
        assert_eq!(t.sum_inv_gamma_range(22.0, 24.0).unwrap(), 0.0);
        let one = t.sum_inv_gamma_range(14.0, 15.0).unwrap();
        assert!((one - 1.0 / 14.134725141734694).abs() < 1e-16);
        assert!((one - 0.070748).abs() < 1e-6);
        assert!(t.sum_inv_gamma_range(15.0, 14.0).is_err());
        assert!(t.sum_inv_gamma_range(15.0, 60.0).is_err());
        let direct: f64 = t.ordinates()[1..4].iter().map(|g| 1.0 / g).sum();
        assert!((t.sum_inv_gamma_range(20.0, 31.0).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn strict_endpoints() {
        let t = ten();
        let g = t.ordinates();
        let s = t.sum_inv_gamma_range(g[1], g[3]).unwrap();
        assert!((s - 1.0 / g[2]).abs() < 1e-16);
    }

    #[test]
    fn inverse_square_above_top() {
        let t = ten();
        let (partial, tail) = t.sum_inv_gamma_sq_above(t.gamma_max() + 0.001).unwrap();
        assert_eq!(partial, 0.0);
        assert!(tail > 0.0);
        assert!(t.sum_inv_gamma_sq_above(0.0).is_err());
        assert!(t.sum_inv_gamma_sq_above(f64::NAN).is_err());
    }

    #[test]
    fn tail_forms() {
        // At G = 74920.83 with N(G) = 10^5 the refined form is within 1e-7 of
        // the heuristic main term (log(G/2π) + 1)/(2πG).
        let g = 74_920.827_498_994;
        let tail = inv_sq_tail_beyond(g, 100_000);
        let heuristic = ((g / (2.0 * PI)).ln() + 1.0) / (2.0 * PI * g);
        assert!(tail > heuristic && tail - heuristic < 1e-7, "{tail} vs {heuristic}");
        assert!(tail < skewes_bound(g));
    }

    #[test]
    fn counting_bound_gates() {
        let t = ten();
        let r = t.check_counting_bounds(&[14.5, 16.0, 49.0]).unwrap();
        assert_eq!((r.samples, r.upper_checked, r.lower_checked), (3, 2, 0));
        assert!(r.ok());
    }
}
