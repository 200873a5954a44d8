//! Command dispatch. Every command is a pure function of the configuration.

use crate::config::RunConfig;
use crate::envelope::{linear_slope, Conventions, ErrorInfo, ResultEnvelope, Table, SCHEMA, SCHEMA_VERSION};
use crate::error::CliError;
use num_complex::Complex64;
use photon_green::green::green_asymptotics;
use photon_green::hadamard::{divergence_report, ff_correlator, hadamard_from_feynman, maxwell_stress};
use photon_green::proper_time::{
    inc_gamma_grid, inc_gamma_integral, inc_gamma_quadrature, osc_gamma_closed, osc_gamma_quadrature, residual_scan, DampingOptions, OSC_BETAS,
};
use photon_green::sdw::{sdw_coincidence, sdw_coincidence_isotropic, sdw_coincidence_ladder, CoincidenceOptions};
use photon_green::tensor::Mat4;
use photon_green::{MetricModel, Signature, SpacetimePoint};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    ComputeGreen,
    ComputeStressTensor,
    CheckGammaIntegrals,
    CheckHeatKernel,
    Coincidence,
    SweepAlpha,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ComputeGreen => "compute green",
            Command::ComputeStressTensor => "compute stress-tensor",
            Command::CheckGammaIntegrals => "check gamma-integrals",
            Command::CheckHeatKernel => "check heat-kernel",
            Command::Coincidence => "coincidence",
            Command::SweepAlpha => "sweep-alpha",
        }
    }
}

type Tables = BTreeMap<String, Table>;
type Estimates = BTreeMap<String, f64>;

struct Outcome {
    payload: Value,
    tables: Tables,
    estimates: Estimates,
}

/// `run_command`: always returns an envelope; failures are recorded in it.
pub fn run_command(cmd: Command, cfg: &RunConfig) -> ResultEnvelope {
    let start = Instant::now();
    let result = cfg.validate().and_then(|_| execute(cmd, cfg));
    let (payload, tables, estimates, error) = match result {
        Ok(o) => (o.payload, o.tables, o.estimates, None),
        Err(e) => (Value::Null, Tables::new(), Estimates::new(), Some(ErrorInfo { code: e.code().into(), message: e.to_string() })),
    };
    ResultEnvelope {
        schema: SCHEMA.into(),
        schema_version: SCHEMA_VERSION,
        command: cmd.name().into(),
        status: if error.is_none() { "ok".into() } else { "error".into() },
        config: cfg.clone(),
        conventions: Conventions::default(),
        payload,
        tables,
        error_estimates: estimates,
        error,
        wall_time_s: start.elapsed().as_secs_f64(),
    }
}

fn execute(cmd: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::ComputeGreen => compute_green(cfg),
        Command::ComputeStressTensor => compute_stress(cfg),
        Command::CheckGammaIntegrals => check_gamma(cfg),
        Command::CheckHeatKernel => check_heat(cfg),
        Command::Coincidence => coincidence(cfg),
        Command::SweepAlpha => sweep_alpha(cfg),
    }
}

fn model(cfg: &RunConfig) -> Result<MetricModel, CliError> {
    Ok(MetricModel::from_name(cfg.metric.name(), &cfg.metric.params())?)
}

/// Sphere radius when the model is a round sphere.
fn sphere_radius(m: &MetricModel) -> Option<f64> {
    match (m.constant_curvature(), m.signature) {
        (Some(k), Signature::Riemannian) if k > 0.0 => Some(1.0 / k.sqrt()),
        _ => None,
    }
}

/// `(x, x′)` from the configured points, or a default pair.
fn pair(cfg: &RunConfig, m: &MetricModel) -> (SpacetimePoint, SpacetimePoint) {
    let x = cfg.points.first().copied().unwrap_or([0.0; 4]);
    let xp = cfg.points.get(1).copied().unwrap_or_else(|| match sphere_radius(m) {
        // geodesic angle 0.5 from the origin
        Some(a) if x == [0.0; 4] => [2.0 * a * 0.25f64.tan(), 0.0, 0.0, 0.0],
        _ => [x[0] + 0.3, x[1] + 0.1, x[2], x[3]],
    });
    (SpacetimePoint::new(x), SpacetimePoint::new(xp))
}

fn num(v: f64) -> Value {
    json!(v)
}

fn push_matrix(t: &mut Table, label: &str, m: &Mat4) {
    for (a, row) in m.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            t.push(vec![json!(label), json!(a), json!(b), num(*v)]);
        }
    }
}

fn compute_green(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = model(cfg)?;
    let (x, xp) = pair(cfg, &m);
    let g = green_asymptotics(&m, &x, &xp, cfg.alpha, cfg.order_usize(), cfg.mu_a)?;
    let h = hadamard_from_feynman(&g);
    let mut t = Table::new(&["bucket", "mu", "nu", "re", "im"]);
    let buckets: [(&str, &[[Complex64; 4]; 4]); 4] =
        [("inverse_sigma", &g.inverse_sigma), ("log", &g.log), ("finite", &g.finite), ("residual_pole", &g.residual_pole)];
    for (name, m4) in buckets {
        for a in 0..4 {
            for b in 0..4 {
                t.push(vec![json!(name), json!(a), json!(b), num(m4[a][b].re), num(m4[a][b].im)]);
            }
        }
    }
    let estimates = Estimates::from([("derivative_error".into(), g.derivative_error), ("higher_log_max".into(), g.higher_log_max)]);
    Ok(Outcome {
        payload: json!({ "x": x.coords, "xp": xp.coords, "green": g, "hadamard": h }),
        tables: Tables::from([("green".into(), t)]),
        estimates,
    })
}

fn compute_stress(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = model(cfg)?;
    let x = cfg.points.first().copied().unwrap_or([0.0; 4]);
    let s = maxwell_stress(&m, x, cfg.alpha, cfg.order_usize(), cfg.mu_a)?;
    let ff = ff_correlator(&m, x, cfg.alpha, cfg.order_usize(), cfg.mu_a)?;
    let report = divergence_report(&m, x, cfg.alpha)?;
    let mut t = Table::new(&["bucket", "mu", "nu", "value"]);
    push_matrix(&mut t, "inv_eps", &s.ledger.inv_eps);
    push_matrix(&mut t, "gamma0", &s.ledger.gamma0);
    push_matrix(&mut t, "gamma_minus1", &s.ledger.gamma_minus1);
    push_matrix(&mut t, "finite", &s.finite);
    let payload = json!({
        "x": x,
        "ledger": s.ledger,
        "finite": s.finite,
        "ff_correlator": ff,
        "divergence_report": report,
        "metadata": {
            "flags": s.flags,
            "normalization": s.normalization,
            "trace": s.trace,
            "asymmetry": s.asymmetry,
        },
    });
    Ok(Outcome {
        payload,
        tables: Tables::from([("stress".into(), t)]),
        estimates: Estimates::from([("stress".into(), s.error), ("asymmetry".into(), s.asymmetry)]),
    })
}

fn check_gamma(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut osc = Table::new(&["beta", "closed_re", "closed_im", "quadrature_re", "quadrature_im", "abs_err", "estimate"]);
    let mut osc_max: f64 = 0.0;
    for &b in &OSC_BETAS {
        let beta = Complex64::new(b, 0.0);
        let c = osc_gamma_closed(beta)?;
        let q = osc_gamma_quadrature(beta, &DampingOptions::default())?;
        let err = (c - q.value).norm();
        osc_max = osc_max.max(err);
        osc.push(vec![num(b), num(c.re), num(c.im), num(q.value.re), num(q.value.im), num(err), num(q.error)]);
    }
    let mut inc = Table::new(&["beta", "nu", "c", "closed", "quadrature", "abs_err"]);
    let mut inc_max: f64 = 0.0;
    for (b, n, c) in inc_gamma_grid() {
        let closed = inc_gamma_integral(b, n, c)?;
        let quad = inc_gamma_quadrature(b, n, c, cfg.tolerances.quadrature)?;
        inc_max = inc_max.max((closed - quad).abs());
        inc.push(vec![num(b), num(n), num(c), num(closed), num(quad), num((closed - quad).abs())]);
    }
    Ok(Outcome {
        payload: json!({ "oscillatory_max_abs_err": osc_max, "incomplete_max_abs_err": inc_max, "points": { "oscillatory": OSC_BETAS.len(), "incomplete": inc.rows.len() } }),
        tables: Tables::from([("incomplete".into(), inc), ("oscillatory".into(), osc)]),
        estimates: Estimates::from([("oscillatory".into(), osc_max), ("incomplete".into(), inc_max)]),
    })
}

fn tau_ladder(cfg: &RunConfig) -> Vec<f64> {
    let (t0, t1, n) = cfg.tau_range;
    (0..n).map(|k| t0 * (t1 / t0).powf(k as f64 / (n - 1) as f64)).collect()
}

fn check_heat(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = model(cfg)?;
    let (x, xp) = pair(cfg, &m);
    let order = cfg.order_usize();
    let scan = residual_scan(&m, &x, &xp, &tau_ladder(cfg), order, 0.0)?;
    let mut t = Table::new(&["tau", "residual", "stripped"]);
    for (ti, s) in scan.t.iter().zip(&scan.samples) {
        t.push(vec![num(*ti), num(s.residual), num(s.stripped)]);
    }
    let expected = order as f64 - 1.0;
    let within = |s: f64| (s - expected).abs() <= 0.1 * expected.abs().max(1.0);
    Ok(Outcome {
        payload: json!({
            "x": x.coords, "xp": xp.coords, "order": order,
            "slope": scan.slope, "slope_stripped": scan.slope_stripped,
            "expected_slope": expected,
            "slope_within_10pct": within(scan.slope),
            "stripped_within_10pct": within(scan.slope_stripped),
        }),
        tables: Tables::from([("residual".into(), t)]),
        estimates: Estimates::new(),
    })
}

fn coincidence(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = model(cfg)?;
    let x = SpacetimePoint::new(cfg.points.first().copied().unwrap_or([0.0; 4]));
    let opts = CoincidenceOptions { step: cfg.ladder.h, levels: cfg.ladder.depth, ..CoincidenceOptions::default() };
    let symmetric = m.constant_curvature().is_some();
    let mut table = Table::new(&["n", "mu", "nu", "value", "error"]);
    let mut estimates = Estimates::new();
    let mut routes = vec![];
    for n in 0..=cfg.order_usize() {
        let c = if symmetric { sdw_coincidence_isotropic(&m, &x, n)? } else { sdw_coincidence(&m, &x, n, &opts)? };
        for a in 0..4 {
            for b in 0..4 {
                table.push(vec![json!(n), json!(a), json!(b), num(c.value[a][b]), num(c.error)]);
            }
        }
        estimates.insert(format!("b{n}"), c.error);
        routes.push(format!("{:?}", c.route));
    }
    // transported [b_1] along the step ladder, for convergence plots
    let mut ladder = Table::new(&["step", "extrapolant", "error_estimate"]);
    let mut ladder_limit = Value::Null;
    if cfg.order >= 1 {
        let rungs = sdw_coincidence_ladder(&m, &x, 1, &opts)?;
        for (h, c) in rungs.iter().skip(1) {
            ladder.push(vec![num(*h), num(c.value[0][0]), num(c.error)]);
        }
        if let Some((_, c)) = rungs.last() {
            estimates.insert("ladder_b1".into(), c.error);
            ladder_limit = json!(c.value);
        }
    }
    Ok(Outcome {
        payload: json!({ "x": x.coords, "routes": routes, "ladder_b1": ladder_limit }),
        tables: Tables::from([("coincidence".into(), table), ("ladder".into(), ladder)]),
        estimates,
    })
}

fn sweep_alpha(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = model(cfg)?;
    let (x, xp) = pair(cfg, &m);
    let closed = photon_green::bitensor::ClosedForm::for_model(&m).is_some();
    // dominant component of A, fixed once so every row tracks the same entry
    let probe = if closed { Some(divergence_report(&m, x.coords, 2.0)?) } else { None };
    let idx = probe.as_ref().map(|r| {
        let mut best = (0, 0, 0, 0);
        let a = &r.tensor_a;
        for i in 0..256 {
            let k = (i / 64, (i / 16) % 4, (i / 4) % 4, i % 4);
            if a[k.0][k.1][k.2][k.3].abs() > a[best.0][best.1][best.2][best.3].abs() {
                best = k;
            }
        }
        best
    });
    let mut t = Table::new(&["alpha", "ledger_inv_eps", "green_inverse_sigma_im_00", "green_log_im_00"]);
    let mut defect: f64 = 0.0;
    for &alpha in &cfg.alphas {
        let g = green_asymptotics(&m, &x, &xp, alpha, cfg.order_usize(), cfg.mu_a)?;
        let ledger = match (&probe, idx) {
            (Some(p), Some((b, c, r, s))) => {
                let v = divergence_report(&m, x.coords, alpha)?.nonminimal.inv_eps[b][c][r][s];
                defect = defect.max((v - (alpha - 1.0) * p.tensor_a[b][c][r][s]).abs());
                num(v)
            }
            _ => Value::Null,
        };
        t.push(vec![num(alpha), ledger, num(g.inverse_sigma[0][0].im), num(g.log[0][0].im)]);
    }
    let slope = {
        let xs: Vec<f64> = t.rows.iter().filter_map(|r| r[0].as_f64()).collect();
        let ys: Vec<f64> = t.rows.iter().filter_map(|r| r[1].as_f64()).collect();
        (ys.len() == xs.len() && xs.len() >= 2).then(|| linear_slope(&xs, &ys))
    };
    Ok(Outcome {
        payload: json!({
            "x": x.coords, "xp": xp.coords,
            "ledger_component": idx.map(|(b, c, r, s)| [b, c, r, s]),
            "ledger_slope": slope,
            "factorization_defect": defect,
        }),
        tables: Tables::from([("alpha_sweep".into(), t)]),
        estimates: Estimates::from([("factorization_defect".into(), defect)]),
    })
}
