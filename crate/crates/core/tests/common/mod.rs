//! Helpers shared by the integration tests: the bundled zero table and an
//! independent quadrature for the interval kernel.

#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64;
use shortpsi::ZeroTable;

pub fn zeros_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/zeros_100k.txt")
}

pub fn load_zeros() -> ZeroTable {
    ZeroTable::load_path(zeros_path()).expect("bundled zero table")
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        out.push((z, 2.0 / ((1.0 - z * z) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre over `[a, b]` with `panels` equal pieces.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    rule: &[(f64, f64)],
) -> Complex64 {
    let w = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * w;
        for &(z, wt) in rule {
            acc += f(mid + 0.5 * w * z) * (0.5 * w * wt);
        }
    }
    acc
}

/// `S(ρ) = ∫_0^Δ ∫_{x−Δ+u}^{x+h+u} t^{ρ−1} dt du` by nested quadrature.
pub fn s_quadrature(rho: Complex64, x: f64, h: f64, delta: f64) -> Complex64 {
    let rule = gauss_legendre(20);
    // Panels scale with the phase swept by t^{iγ} across each range.
    let panels = |len: f64| ((rho.im.abs() * len / (x - delta)) / 2.0).ceil() as usize + 2;
    let inner_panels = panels(h + delta);
    let kernel = |t: f64| (rho - 1.0).expf(t);
    integrate(
        |u| integrate(kernel, x - delta + u, x + h + u, inner_panels, &rule),
        0.0,
        delta,
        panels(delta),
        &rule,
    )
}

/// `|a − b| / max(|a|, |b|)` for complex values.
pub fn complex_rel(a: Complex64, b: Complex64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}
