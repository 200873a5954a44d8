//! Run configuration: TOML document, defaults and validation.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const MAX_ORDER: i64 = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricSpec {
    Name(String),
    Full {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

impl MetricSpec {
    pub fn name(&self) -> &str {
        match self {
            MetricSpec::Name(n) | MetricSpec::Full { name: n, .. } => n,
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        match self {
            MetricSpec::Name(_) => BTreeMap::new(),
            MetricSpec::Full { params, .. } => params.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub geodesic: f64,
    pub quadrature: f64,
    pub extrapolation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { geodesic: 1e-10, quadrature: 1e-10, extrapolation: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ladder {
    pub h: f64,
    pub depth: usize,
}

impl Default for Ladder {
    fn default() -> Self {
        Self { h: 0.2, depth: 4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    /// `-` for standard output.
    pub path: String,
    pub format: Format,
}

impl Default for Output {
    fn default() -> Self {
        Self { path: "-".into(), format: Format::Json }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub metric: MetricSpec,
    pub points: Vec<[f64; 4]>,
    pub alpha: f64,
    pub order: i64,
    pub mu_a: f64,
    pub tolerances: Tolerances,
    pub ladder: Ladder,
    pub output: Output,
    /// Gauge parameters for `sweep-alpha`.
    pub alphas: Vec<f64>,
    /// Proper-time ladder for `check heat-kernel`: `t_min`, `t_max`, count.
    pub tau_range: (f64, f64, usize),
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            metric: MetricSpec::Name("minkowski".into()),
            points: vec![],
            alpha: 1.0,
            order: 2,
            mu_a: 1.0,
            tolerances: Tolerances::default(),
            ladder: Ladder::default(),
            output: Output::default(),
            alphas: vec![0.5, 1.0, 1.5, 2.0, 3.0],
            tau_range: (2e-3, 2e-1, 7),
            seed: 0,
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// `parse_config`: TOML text to a validated configuration with defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Parse {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    /// Collect every violation rather than stopping at the first.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut bad = Vec::new();
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            bad.push(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(0..=MAX_ORDER).contains(&self.order) {
            bad.push(format!("order must lie in [0, {MAX_ORDER}], got {}", self.order));
        }
        if !(self.mu_a > 0.0 && self.mu_a.is_finite()) {
            bad.push(format!("mu_a must be positive, got {}", self.mu_a));
        }
        let t = &self.tolerances;
        for (k, v) in [("geodesic", t.geodesic), ("quadrature", t.quadrature), ("extrapolation", t.extrapolation)] {
            if !(v > 0.0 && v.is_finite()) {
                bad.push(format!("tolerances.{k} must be positive, got {v}"));
            }
        }
        if !(self.ladder.h > 0.0 && self.ladder.h.is_finite()) || self.ladder.depth < 2 {
            bad.push("ladder needs h > 0 and depth >= 2".into());
        }
        if self.points.iter().flatten().any(|c| !c.is_finite()) {
            bad.push("points must be finite".into());
        }
        if self.alphas.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            bad.push("alphas must all be positive".into());
        }
        let (t0, t1, n) = self.tau_range;
        if !(t0 > 0.0 && t1 > t0 && n >= 2) {
            bad.push("tau_range needs 0 < t_min < t_max and at least two samples".into());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(bad))
        }
    }

    pub fn order_usize(&self) -> usize {
        self.order as usize
    }
}
