//! The `(x, h, Δ, α, β)` tuple that every interval computation is keyed on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest `x` covered by the short-interval theorem.
pub const THEOREM_X_MIN: f64 = 2.0e4;

/// Ramp width used throughout the theorem-level verification: `Δ = √x log x / 10`.
pub fn default_delta(x: f64) -> f64 {
    0.1 * x.sqrt() * x.ln()
}

/// `√x log x`, the natural scale of the short-interval error.
pub fn sqrt_log(x: f64) -> f64 {
    x.sqrt() * x.ln()
}

/// Offset `x` to the half-integer `⌊x⌋ + 1/2`.
pub fn to_half_integer(x: f64) -> f64 {
    x.floor() + 0.5
}

pub fn is_half_integer(x: f64) -> bool {
    x.is_finite() && x - x.floor() == 0.5
}

/// Interval query with `2 ≤ Δ ≤ h ≤ x` and positive split parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalQuery {
    pub x: f64,
    pub h: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl IntervalQuery {
    pub fn new(x: f64, h: f64, delta: f64, alpha: f64, beta: f64) -> Result<Self> {
        let q = IntervalQuery { x, h, delta, alpha, beta };
        q.validate()?;
        Ok(q)
    }

    /// Query with `α = β = 1`.
    pub fn unit(x: f64, h: f64, delta: f64) -> Result<Self> {
        Self::new(x, h, delta, 1.0, 1.0)
    }

    /// Theorem-level query: `Δ = √x log x / 10`, `α = β = 1`, and the
    /// theorem's own domain `x ≥ 2·10⁴`, `√x log x ≤ h ≤ x`.
    pub fn theorem(x: f64, h: f64) -> Result<Self> {
        let q = Self::unit(x, h, default_delta(x))?;
        q.validate_theorem_domain()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let IntervalQuery { x, h, delta, alpha, beta } = *self;
        if ![x, h, delta, alpha, beta].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidQuery(format!("non-finite field in {self:?}")));
        }
        if !(2.0 <= delta && delta <= h && h <= x) {
            return Err(Error::InvalidQuery(format!(
                "need 2 <= delta <= h <= x, got delta = {delta}, h = {h}, x = {x}"
            )));
        }
        if alpha <= 0.0 || beta <= 0.0 {
            return Err(Error::InvalidQuery(format!(
                "alpha and beta must be positive, got {alpha}, {beta}"
            )));
        }
        Ok(())
    }

    pub fn validate_theorem_domain(&self) -> Result<()> {
        check_theorem_domain(self.x, self.h)
    }

    /// Support of the trapezoid weight, `[x − Δ, x + h + Δ]`.
    pub fn support(&self) -> (f64, f64) {
        (self.x - self.delta, self.x + self.h + self.delta)
    }

    /// Integer window `[⌈x − Δ⌉, ⌊x + h + Δ⌋]` covering the support.
    pub fn integer_window(&self) -> (u64, u64) {
        let (a, b) = self.support();
        (a.ceil().max(1.0) as u64, b.floor().max(0.0) as u64)
    }

    /// Lower split height `αx/h`.
    pub fn low_height(&self) -> f64 {
        self.alpha * self.x / self.h
    }

    /// Upper split height `βx/Δ`.
    pub fn high_height(&self) -> f64 {
        self.beta * self.x / self.delta
    }
}

pub(crate) fn check_theorem_domain(x: f64, h: f64) -> Result<()> {
    if !(x >= THEOREM_X_MIN) {
        return Err(Error::DomainViolation {
            what: "theorem",
            detail: format!("x = {x} is below 2e4"),
        });
    }
    let floor = sqrt_log(x);
    if !(h >= floor && h <= x) {
        return Err(Error::DomainViolation {
            what: "theorem",
            detail: format!("h = {h} outside [sqrt(x) log x, x] = [{floor}, {x}]"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_constraints() {
        assert!(IntervalQuery::unit(100.5, 10.0, 2.0).is_ok());
        assert!(IntervalQuery::unit(100.5, 10.0, 1.0).is_err());
        assert!(IntervalQuery::unit(100.5, 1.0, 2.0).is_err());
        assert!(IntervalQuery::unit(10.5, 11.0, 2.0).is_err());
        assert!(IntervalQuery::new(100.5, 10.0, 2.0, 0.0, 1.0).is_err());
        assert!(IntervalQuery::unit(f64::NAN, 10.0, 2.0).is_err());
    }

    #[test]
    fn theorem_domain() {
        let x = 2.0e4;
        assert!(IntervalQuery::theorem(x, sqrt_log(x)).is_ok());
        assert!(IntervalQuery::theorem(x, x).is_ok());
        assert!(IntervalQuery::theorem(x, x.powf(0.4)).is_err());
        assert!(IntervalQuery::theorem(1e3, 1e3).is_err());
    }

    #[test]
    fn half_integers() {
        assert_eq!(to_half_integer(2e4), 20000.5);
        assert!(is_half_integer(100.5));
        assert!(!is_half_integer(100.0));
        assert!(!is_half_integer(100.25));
    }

    #[test]
    fn window_bounds() {
        let q = IntervalQuery::unit(100.5, 10.0, 2.0).unwrap();
        assert_eq!(q.integer_window(), (99, 112));
    }
}
