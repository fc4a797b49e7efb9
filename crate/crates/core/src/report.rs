//! CSV and JSON rendering of grid reports.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::verify::{BoundReport, GridReport, LEMMA_KEYS};
use crate::zeros::ZeroTable;

pub const CSV_COLUMNS: [&str; 13] = [
    "x",
    "h",
    "delta",
    "observed",
    "theorem_rhs",
    "margin",
    "lemma3",
    "lemma4",
    "lemma5_mid_budget",
    "lemma6",
    "bt_edge",
    "E",
    "pass",
];

/// 12 significant digits in scientific notation; NaN stays `NaN`.
pub fn fmt12(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        format!("{v}")
    }
}

/// Round to 12 significant digits for JSON; non-finite values become null.
pub fn round12(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let r: f64 = fmt12(v).parse().unwrap_or(v);
    json!(r)
}

pub fn csv_row(r: &BoundReport) -> String {
    let mut cells: Vec<String> = [r.x, r.h, r.delta, r.observed, r.theorem_rhs, r.margin]
        .iter()
        .map(|&v| fmt12(v))
        .collect();
    cells.extend(LEMMA_KEYS.iter().map(|k| fmt12(r.lemma(k))));
    cells.push(r.pass.to_string());
    cells.join(",")
}

pub fn to_csv(report: &GridReport) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(out, "{}", csv_row(r));
    }
    out
}

/// Source description of the zero data, for report metadata.
pub fn zero_metadata(table: Option<&ZeroTable>) -> Value {
    match table {
        Some(t) => json!({
            "sha256": t.source_digest(),
            "count": t.count(),
            "gamma_max": t.gamma_max(),
        }),
        None => Value::Null,
    }
}

fn row_json(r: &BoundReport) -> Value {
    let mut m = Map::new();
    for (k, v) in [
        ("x", r.x),
        ("h", r.h),
        ("delta", r.delta),
        ("observed", r.observed),
        ("theorem_rhs", r.theorem_rhs),
        ("margin", r.margin),
    ] {
        m.insert(k.into(), round12(v));
    }
    for k in LEMMA_KEYS {
        m.insert(k.into(), round12(r.lemma(k)));
    }
    m.insert("pass".into(), json!(r.pass));
    Value::Object(m)
}

/// JSON document `{metadata, rows, summary}`. `config` is echoed verbatim.
pub fn to_json(
    report: &GridReport,
    config: Value,
    table: Option<&ZeroTable>,
    timestamp: Option<String>,
) -> Value {
    let s = &report.summary;
    let range = |r: &crate::verify::RangeSummary| {
        json!({
            "points": r.points,
            "passed": r.passed,
            "max_ratio": round12(r.max_ratio),
            "min_margin": round12(r.min_margin),
        })
    };
    let max_audit_ratio = report
        .audits
        .iter()
        .map(|a| a.observed / a.audit_rhs)
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    json!({
        "metadata": {
            "tool": "shortpsi",
            "version": env!("CARGO_PKG_VERSION"),
            "config": config,
            "zeros": zero_metadata(table),
            "timestamp": timestamp,
        },
        "rows": report.rows.iter().map(row_json).collect::<Vec<_>>(),
        "summary": {
            "points": s.points,
            "passed": s.passed,
            "violations": s.points - s.passed,
            "max_ratio": round12(s.max_ratio),
            "max_ratio_at": s.max_ratio_at.map(|(x, h)| json!([round12(x), round12(h)])),
            "below_e10": range(&s.below_e10),
            "from_e10": range(&s.from_e10),
            "audit": {
                "checked": s.audit_checked,
                "violations": s.audit_violations,
                "max_ratio": max_audit_ratio.map(round12),
            },
        },
    })
}

/// One-line human summary.
pub fn summary_line(report: &GridReport) -> String {
    let s = &report.summary;
    let mut line = format!(
        "{} of {} points pass, max observed/bound = {}",
        s.passed,
        s.points,
        if s.points == 0 { "n/a".to_string() } else { format!("{:.4}", s.max_ratio) },
    );
    if let Some((x, h)) = s.max_ratio_at {
        let _ = write!(line, " at x = {x}, h = {h:.1}");
    }
    if s.audit_checked > 0 {
        let _ = write!(line, "; budget audit {} of {} hold", s.audit_checked - s.audit_violations, s.audit_checked);
    }
    line
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::summarize;
    use std::collections::BTreeMap;

    fn row() -> BoundReport {
        let mut lv = BTreeMap::new();
        for (i, k) in LEMMA_KEYS.iter().enumerate() {
            lv.insert(k.to_string(), i as f64 + 0.5);
        }
        lv.insert("lemma5_mid_budget".into(), f64::NAN);
        BoundReport {
            x: 20000.5,
            h: 1.0 / 3.0,
            delta: 2.0,
            observed: 10.0,
            theorem_rhs: 100.0,
            margin: 90.0,
            lemma_values: lv,
            pass: true,
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt12(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt12(20000.5), "2.00005000000e4");
        assert_eq!(fmt12(f64::NAN), "NaN");
        assert_eq!(round12(1.0 / 3.0), json!(0.333333333333));
        assert_eq!(round12(f64::INFINITY), Value::Null);
    }

    #[test]
    fn csv_shape() {
        let rows = vec![row()];
        let r = GridReport { summary: summarize(&rows, &[]), rows, audits: vec![] };
        let csv = to_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        let cells: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(cells.len(), CSV_COLUMNS.len());
        assert_eq!(cells[8], "NaN");
        assert_eq!(cells[12], "true");
    }

    #[test]
    fn json_shape() {
        let rows = vec![row()];
        let r = GridReport { summary: summarize(&rows, &[]), rows, audits: vec![] };
        let v = to_json(&r, json!({"alpha": 1.0}), None, None);
        assert_eq!(v["metadata"]["timestamp"], Value::Null);
        assert_eq!(v["rows"][0]["h"], json!(0.333333333333));
        assert_eq!(v["rows"][0]["lemma5_mid_budget"], Value::Null);
        assert_eq!(v["summary"]["violations"], json!(0));
        assert!(summary_line(&r).starts_with("1 of 1 points pass"));
    }
}
