//! Result envelope, tabular views and plot-data emission.

use crate::config::RunConfig;
use crate::error::CliError;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

pub const SCHEMA: &str = "photon-green.result";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub signature: String,
    pub curvature: String,
    pub world_function: String,
    pub epsilon_prescription: String,
    pub branches: Vec<String>,
    pub bbar: String,
    pub derivative_ordering: String,
}

impl Default for Conventions {
    fn default() -> Self {
        use photon_green::hadamard::{BBAR_FLAG, ORDERING_FLAG};
        Self {
            signature: "Lorentzian (+,-,-,-); Riemannian (+,+,+,+)".into(),
            curvature: "R^l_{mnr} = d_n Gamma^l_{mr} - d_r Gamma^l_{mn} + ...; R_{mr} = R^l_{mlr}; S4 radius a has R = +12/a^2".into(),
            world_function: "sigma = half squared geodesic length, > 0 for timelike separation".into(),
            epsilon_prescription: photon_green::green::EPSILON_PRESCRIPTION.into(),
            branches: vec![
                "i^(s+1) on the principal branch".into(),
                "proper-time ray tau = t (delta - i sgn sigma)".into(),
                "Gamma(0), Gamma(-1), 1/eps kept as symbolic weights".into(),
            ],
            bbar: BBAR_FLAG.into(),
            derivative_ordering: ORDERING_FLAG.into(),
        }
    }
}

/// Column-labelled numeric table.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(&self.columns).map_err(csv_err)?;
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => match n.as_f64() {
                        Some(f) if n.is_f64() => fmt_float(f),
                        _ => n.to_string(),
                    },
                    other => other.to_string(),
                })
                .collect();
            w.write_record(&cells).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }
}

fn fmt_float(f: f64) -> String {
    if f == 0.0 || (1e-4..1e12).contains(&f.abs()) {
        format!("{f}")
    } else {
        format!("{f:e}")
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub schema: String,
    pub schema_version: u32,
    pub command: String,
    pub status: String,
    pub config: RunConfig,
    pub conventions: Conventions,
    pub payload: Value,
    pub tables: BTreeMap<String, Table>,
    pub error_estimates: BTreeMap<String, f64>,
    pub error: Option<ErrorInfo>,
    pub wall_time_s: f64,
}

impl ResultEnvelope {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// The table written for `--format csv`: the first one by name.
    pub fn primary_table(&self) -> Option<&Table> {
        self.tables.values().next()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    ResidualVsTau,
    LadderConvergence,
    AlphaSweep,
}

impl PlotKind {
    fn table(self) -> &'static str {
        match self {
            PlotKind::ResidualVsTau => "residual",
            PlotKind::LadderConvergence => "ladder",
            PlotKind::AlphaSweep => "alpha_sweep",
        }
    }
}

/// Least-squares slope of `y` against `x`.
pub fn linear_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `emit_plot_data`: CSV for external plotting; the alpha sweep gets a
/// trailing comment line with the fitted slope.
pub fn emit_plot_data(env: &ResultEnvelope, kind: PlotKind) -> Result<String, CliError> {
    let t = env
        .tables
        .get(kind.table())
        .ok_or_else(|| CliError::Core(photon_green::Error::SeriesMissing(kind.table().into())))?;
    let mut out = t.to_csv()?;
    if kind == PlotKind::AlphaSweep {
        let col = |i: usize| -> Vec<f64> { t.rows.iter().filter_map(|r| r.get(i).and_then(Value::as_f64)).collect() };
        let (x, y) = (col(0), col(1));
        if x.len() >= 2 && x.len() == y.len() {
            out.push_str(&format!("# slope {:e}\n", linear_slope(&x, &y)));
        }
    }
    Ok(out)
}
