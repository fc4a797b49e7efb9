//! Run configuration: `key = value` files merged under command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use shortpsi::verify::{expand_grid, GridOptions, ScaleRule, XGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format {other:?}, expected csv or json"),
        }
    }
}

/// Settings as read from a file or flags; every field optional.
#[derive(Debug, Clone, Default)]
pub struct Partial {
    pub zeros: Option<PathBuf>,
    pub sieve_limit: Option<u64>,
    pub x_grid: Option<XGrid>,
    pub h_rules: Option<Vec<ScaleRule>>,
    pub delta_rule: Option<ScaleRule>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Partial {
    /// Fields set in `self` win over `other`.
    pub fn or(self, other: Partial) -> Partial {
        Partial {
            zeros: self.zeros.or(other.zeros),
            sieve_limit: self.sieve_limit.or(other.sieve_limit),
            x_grid: self.x_grid.or(other.x_grid),
            h_rules: self.h_rules.or(other.h_rules),
            delta_rule: self.delta_rule.or(other.delta_rule),
            alpha: self.alpha.or(other.alpha),
            beta: self.beta.or(other.beta),
            format: self.format.or(other.format),
            out: self.out.or(other.out),
            workers: self.workers.or(other.workers),
        }
    }

    pub fn from_file(path: &Path) -> Result<Partial> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Partial::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// Parse `key = value` lines. `#` starts a comment; `h_rule` may repeat.
    pub fn parse(text: &str) -> Result<Partial> {
        let mut p = Partial::default();
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("line {}: expected key = value, got {raw:?}", i + 1);
            };
            let (k, v) = (k.trim().replace('-', "_"), v.trim());
            let ctx = || format!("line {}: bad value for {k}", i + 1);
            match k.as_str() {
                "zeros" | "zeros_path" => p.zeros = Some(v.into()),
                "sieve_limit" => p.sieve_limit = Some(parse_count(v).with_context(ctx)?),
                "x_grid" => p.x_grid = Some(v.parse().with_context(ctx)?),
                "h_rule" | "h_rules" => {
                    for r in v.split(';') {
                        rules.push(r.parse().with_context(ctx)?);
                    }
                }
                "delta_rule" => p.delta_rule = Some(v.parse().with_context(ctx)?),
                "alpha" => p.alpha = Some(v.parse().with_context(ctx)?),
                "beta" => p.beta = Some(v.parse().with_context(ctx)?),
                "format" | "output_format" => p.format = Some(v.parse()?),
                "out" | "output_path" => p.out = Some(v.into()),
                "workers" => p.workers = Some(v.parse().with_context(ctx)?),
                _ => bail!("line {}: unknown key {k:?}", i + 1),
            }
        }
        if !rules.is_empty() {
            p.h_rules = Some(rules);
        }
        Ok(p)
    }
}

/// Integers may be written as `200000000` or `2e8`.
pub fn parse_count(s: &str) -> Result<u64> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let v: f64 = s.parse().with_context(|| format!("not a number: {s:?}"))?;
    if !(v >= 0.0 && v.fract() == 0.0 && v < 1.8e19) {
        bail!("not a non-negative integer: {s:?}");
    }
    Ok(v as u64)
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub zeros_path: Option<PathBuf>,
    pub sieve_limit: u64,
    pub x_grid: String,
    pub h_rules: Vec<String>,
    pub delta_rule: String,
    pub alpha: f64,
    pub beta: f64,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub xs: Vec<f64>,
    #[serde(skip)]
    pub rules: Vec<ScaleRule>,
    #[serde(skip)]
    pub options: GridOptions,
}

impl RunConfig {
    /// Fill defaults and validate the grid.
    pub fn resolve(p: Partial) -> Result<RunConfig> {
        let grid = p.x_grid.unwrap_or_else(XGrid::standard);
        let rules = p.h_rules.unwrap_or_else(ScaleRule::standard_h_rules);
        let xs = grid.points();
        if xs.is_empty() || rules.is_empty() {
            bail!("config-invalid: empty grid");
        }
        let alpha = p.alpha.unwrap_or(1.0);
        let beta = p.beta.unwrap_or(1.0);
        if !(alpha > 0.0 && beta > 0.0) {
            bail!("config-invalid: alpha and beta must be positive");
        }
        let (_, need) = expand_grid(&xs, &rules).map_err(|e| anyhow::anyhow!("config-invalid: {e}"))?;
        let sieve_limit = p.sieve_limit.unwrap_or(need);
        if sieve_limit < need {
            bail!("capacity-exceeded: sieve_limit {sieve_limit} is below the required {need}");
        }
        let delta = p.delta_rule.unwrap_or(ScaleRule::SqrtLog(0.1));
        if p.workers == Some(0) {
            bail!("config-invalid: workers must be positive");
        }
        Ok(RunConfig {
            zeros_path: p.zeros,
            sieve_limit,
            x_grid: grid.to_string(),
            h_rules: rules.iter().map(|r| r.to_string()).collect(),
            delta_rule: delta.to_string(),
            alpha,
            beta,
            output_format: p.format.unwrap_or(Format::Csv),
            output_path: p.out,
            workers: p.workers,
            xs,
            options: GridOptions {
                alpha,
                beta,
                delta_rule: p.delta_rule,
            },
            rules,
        })
    }

    pub fn echo(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).unwrap_or_default();
        // The output path does not affect report content.
        if let Some(m) = v.as_object_mut() {
            m.remove("output_path");
        }
        v
    }
}
