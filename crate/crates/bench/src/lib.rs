//! Inputs shared by the benchmarks.

use std::f64::consts::PI;

use shortpsi::ZeroTable;

/// Approximate ordinates from the smooth counting function
/// `N(t) ≈ (t/2π) log(t/2πe) + 7/8`, solved for `N = n − 1/2` by Newton.
/// Good enough to exercise the kernels; not actual zeros.
pub fn synthetic_ordinates(count: usize) -> Vec<f64> {
    let smooth = |t: f64| t / (2.0 * PI) * (t / (2.0 * PI * std::f64::consts::E)).ln() + 0.875;
    let mut t = 14.0;
    (1..=count)
        .map(|n| {
            let target = n as f64 - 0.5;
            for _ in 0..50 {
                let step = (smooth(t) - target) / ((t / (2.0 * PI)).ln() / (2.0 * PI));
                t -= step;
                if step.abs() < 1e-12 * t {
                    break;
                }
            }
            t.max(14.2 + n as f64 * 1e-9)
        })
        .collect()
}

pub fn synthetic_table(count: usize) -> ZeroTable {
    let text: String = synthetic_ordinates(count).iter().map(|g| format!("{g:.12}\n")).collect();
    ZeroTable::from_bytes(text.as_bytes()).expect("synthetic ordinates are ascending")
}
