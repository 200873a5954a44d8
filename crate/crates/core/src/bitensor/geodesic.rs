//! Two-point geodesic boundary-value problem.
//!
//! The geodesic is parametrized by `λ ∈ [0, 1]` from `x` (λ = 0) to `x′`
//! (λ = 1). Shooting integrates the geodesic equation together with its
//! variational equations (so the exponential-map Jacobian `∂z(1)/∂u₀` is exact
//! up to ODE tolerance) and a parallel-transported frame.

use crate::geometry::{MetricModel, SpacetimePoint};
use crate::numerics::ode::{self, OdeOptions};
use crate::tensor::{self, Mat4, Vec4};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicOptions {
    /// Endpoint residual tolerance (max-norm in chart coordinates).
    pub tol: f64,
    pub max_iter: usize,
    /// Try perturbed chords to detect several connecting geodesics.
    pub multistart: bool,
    /// Number of uniform samples stored along the path (≥ 2).
    pub samples: usize,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self { tol: 1e-11, max_iter: 60, multistart: true, samples: 17, rtol: 1e-12, atol: 1e-14 }
    }
}

impl GeodesicOptions {
    pub fn single_start() -> Self {
        Self { multistart: false, ..Self::default() }
    }

    fn ode(&self) -> OdeOptions {
        OdeOptions { rtol: self.rtol, atol: self.atol, max_steps: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSample {
    pub lambda: f64,
    pub point: Vec4,
    pub tangent: Vec4,
    /// Columns are the images of the coordinate basis at `x` under parallel
    /// transport to this sample.
    pub frame: Mat4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSolution {
    pub x: SpacetimePoint,
    pub xp: SpacetimePoint,
    pub tangent0: Vec4,
    pub tangent1: Vec4,
    pub samples: Vec<GeodesicSample>,
    /// `g(u₀, u₀)`: signed squared length.
    pub length2: f64,
    /// `∫₀¹ g(ż, ż) dλ`, integrated along the path.
    pub action: f64,
    /// Endpoint residual `|z(1) − x′|∞`.
    pub residual: f64,
    /// `∂z^ν(1)/∂u₀^α`.
    pub jacobian: Mat4,
    /// Parallel transport matrix from `x` to `x′`.
    pub transport: Mat4,
    /// Largest relative drift of `g(ż, ż)` along the samples.
    pub norm_drift: f64,
    /// Squared lengths of other geodesics found by the multistart.
    pub alternatives: Vec<f64>,
    pub newton_iterations: usize,
}

const STATE: usize = 57;

struct Shot {
    end: Vec<f64>,
    outputs: Vec<Vec<f64>>,
}

fn rhs(model: &MetricModel, chart: u8, y: &[f64]) -> Result<Vec<f64>> {
    let z: Vec4 = std::array::from_fn(|i| y[i]);
    let loc = model.local(&SpacetimePoint { chart_id: chart, coords: z })?;
    let gam = &loc.christoffel;
    let dgam = &loc.dchristoffel;
    let u = &y[4..8];
    let jz = &y[8..24];
    let ju = &y[24..40];
    let fr = &y[40..56];
    let mut d = vec![0.0; STATE];
    d[..4].copy_from_slice(u);
    for l in 0..4 {
        let mut a = 0.0;
        for m in 0..4 {
            for n in 0..4 {
                a -= gam[l][m][n] * u[m] * u[n];
            }
        }
        d[4 + l] = a;
    }
    for l in 0..4 {
        for k in 0..4 {
            d[8 + l * 4 + k] = ju[l * 4 + k];
            let mut jd = 0.0;
            let mut fd = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    let c = gam[l][m][n] * u[m];
                    jd -= 2.0 * c * ju[n * 4 + k];
                    fd -= c * fr[n * 4 + k];
                    let mut dd = 0.0;
                    for r in 0..4 {
                        dd += dgam[l][m][n][r] * jz[r * 4 + k];
                    }
                    jd -= dd * u[m] * u[n];
                }
            }
            d[24 + l * 4 + k] = jd;
            d[40 + l * 4 + k] = fd;
        }
    }
    d[56] = tensor::dot(&loc.metric.g, &[u[0], u[1], u[2], u[3]], &[u[0], u[1], u[2], u[3]]);
    Ok(d)
}

fn shoot(model: &MetricModel, x: &SpacetimePoint, u0: &Vec4, lambdas: &[f64], opts: &GeodesicOptions) -> Result<Shot> {
    let mut y0 = vec![0.0; STATE];
    y0[..4].copy_from_slice(&x.coords);
    y0[4..8].copy_from_slice(u0);
    for i in 0..4 {
        y0[24 + i * 4 + i] = 1.0;
        y0[40 + i * 4 + i] = 1.0;
    }
    let mut outs: Vec<f64> = lambdas.iter().copied().filter(|&l| l > 0.0 && l < 1.0).collect();
    outs.push(1.0);
    let res = ode::integrate(|_, y| rhs(model, x.chart_id, y), 0.0, &y0, &outs, opts.ode())?;
    let end = res.last().unwrap().clone();
    let mut outputs = Vec::with_capacity(lambdas.len());
    let mut it = res.into_iter();
    for &l in lambdas {
        if l <= 0.0 {
            outputs.push(y0.clone());
        } else if l >= 1.0 {
            outputs.push(end.clone());
        } else {
            outputs.push(it.next().unwrap());
        }
    }
    Ok(Shot { end, outputs })
}

fn mat_from(y: &[f64], off: usize) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| y[off + i * 4 + j]))
}

fn vec_from(y: &[f64], off: usize) -> Vec4 {
    std::array::from_fn(|i| y[off + i])
}

fn residual_of(end: &[f64], xp: &SpacetimePoint) -> Vec4 {
    std::array::from_fn(|i| end[i] - xp.coords[i])
}

fn inf_norm(v: &Vec4) -> f64 {
    v.iter().fold(0.0f64, |m, a| m.max(a.abs()))
}

/// Damped Newton on the initial tangent.
fn newton(
    model: &MetricModel,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    guess: Vec4,
    opts: &GeodesicOptions,
) -> Result<(Vec4, usize)> {
    let mut u0 = guess;
    let mut shot = shoot(model, x, &u0, &[], opts)?;
    let mut f = residual_of(&shot.end, xp);
    let mut res = inf_norm(&f);
    let scale = 1.0 + inf_norm(&xp.coords).max(inf_norm(&x.coords));
    for it in 0..opts.max_iter {
        if res <= opts.tol * scale {
            return Ok((u0, it));
        }
        let j = mat_from(&shot.end, 8);
        let jinv = tensor::inverse(&j).ok_or(Error::ConjugatePoint { delta: f64::INFINITY })?;
        let step = tensor::mat_vec(&jinv, &f);
        let mut damp = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec4 = std::array::from_fn(|i| u0[i] - damp * step[i]);
            if let Ok(s) = shoot(model, x, &trial, &[], opts) {
                let ft = residual_of(&s.end, xp);
                let rt = inf_norm(&ft);
                if rt.is_finite() && rt < res {
                    u0 = trial;
                    shot = s;
                    f = ft;
                    res = rt;
                    accepted = true;
                    break;
                }
            }
            damp *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if res <= opts.tol * scale {
        return Ok((u0, opts.max_iter));
    }
    Err(Error::NoConvergence { what: "geodesic shooting", iterations: opts.max_iter, last: res })
}

fn chord_starts(x: &SpacetimePoint, xp: &SpacetimePoint, multistart: bool) -> Vec<Vec4> {
    let chord: Vec4 = std::array::from_fn(|i| xp.coords[i] - x.coords[i]);
    let mut out = vec![chord];
    if !multistart {
        return out;
    }
    let len = inf_norm(&chord).max(1e-300);
    // Eight deterministic bends: ± 0.4|chord| along each coordinate axis.
    for axis in 0..4 {
        for sgn in [1.0, -1.0] {
            let mut u = chord;
            u[axis] += sgn * 0.4 * len;
            out.push(u);
        }
    }
    out
}

/// `solve_geodesic`: minimal-length geodesic from `x` to `x′`.
pub fn solve_geodesic(model: &MetricModel, x: &SpacetimePoint, xp: &SpacetimePoint, opts: &GeodesicOptions) -> Result<GeodesicSolution> {
    solve_geodesic_from(model, x, xp, None, opts)
}

/// As [`solve_geodesic`], optionally warm-started from a known tangent.
pub fn solve_geodesic_from(
    model: &MetricModel,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    warm: Option<Vec4>,
    opts: &GeodesicOptions,
) -> Result<GeodesicSolution> {
    let lambdas: Vec<f64> = (0..opts.samples.max(2)).map(|k| k as f64 / (opts.samples.max(2) - 1) as f64).collect();
    solve_with_samples(model, x, xp, warm, opts, &lambdas)
}

/// Solve and store samples at the requested affine parameters.
pub fn solve_with_samples(
    model: &MetricModel,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    warm: Option<Vec4>,
    opts: &GeodesicOptions,
    lambdas: &[f64],
) -> Result<GeodesicSolution> {
    if x.chart_id != xp.chart_id {
        return Err(Error::OutOfChart { coords: xp.coords });
    }
    model.metric_at(x)?;
    model.metric_at(xp)?;
    let starts = match warm {
        Some(u) => vec![u],
        None => chord_starts(x, xp, opts.multistart),
    };
    let coincident = x.coords == xp.coords;
    let mut found: Vec<(Vec4, usize, f64)> = Vec::new();
    let mut last_err = None;
    if coincident {
        found.push(([0.0; 4], 0, 0.0));
    } else {
        for s in starts {
            match newton(model, x, xp, s, opts) {
                Ok((u, it)) => {
                    let g = model.metric_at(x)?.g;
                    let l2 = tensor::dot(&g, &u, &u);
                    let scale = inf_norm(&u).max(1e-300);
                    if !found.iter().any(|(v, _, _)| inf_norm(&std::array::from_fn(|i| v[i] - u[i])) < 1e-6 * scale) {
                        found.push((u, it, l2));
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
    }
    if found.is_empty() {
        return Err(last_err.unwrap_or(Error::NoConvergence { what: "geodesic shooting", iterations: 0, last: f64::NAN }));
    }
    found.sort_by(|a, b| a.2.abs().partial_cmp(&b.2.abs()).unwrap());
    let best = found[0];
    let alternatives: Vec<f64> = found[1..].iter().map(|f| f.2).collect();
    if let Some(second) = alternatives.first() {
        if (second.abs() - best.2.abs()).abs() <= 1e-6 * best.2.abs().max(1e-300) {
            return Err(Error::MultipleGeodesics { lengths: found.iter().map(|f| f.2).collect() });
        }
    }
    let shot = shoot(model, x, &best.0, lambdas, opts)?;
    let end = &shot.end;
    let jacobian = mat_from(end, 8);
    let jdet = tensor::det(&jacobian);
    if !jdet.is_finite() || jdet.abs() < 1e-12 {
        return Err(Error::ConjugatePoint { delta: f64::INFINITY });
    }
    let mut samples = Vec::with_capacity(lambdas.len());
    let mut drift = 0.0f64;
    for (l, y) in lambdas.iter().zip(&shot.outputs) {
        let point = vec_from(y, 0);
        let tangent = vec_from(y, 4);
        let g = model.metric_at(&SpacetimePoint { chart_id: x.chart_id, coords: point })?.g;
        let n2 = tensor::dot(&g, &tangent, &tangent);
        if best.2.abs() > 0.0 {
            drift = drift.max((n2 - best.2).abs() / best.2.abs());
        }
        samples.push(GeodesicSample { lambda: *l, point, tangent, frame: mat_from(y, 40) });
    }
    Ok(GeodesicSolution {
        x: *x,
        xp: *xp,
        tangent0: best.0,
        tangent1: vec_from(end, 4),
        samples,
        length2: best.2,
        action: end[56],
        residual: inf_norm(&residual_of(end, xp)),
        jacobian,
        transport: mat_from(end, 40),
        norm_drift: drift,
        alternatives,
        newton_iterations: best.1,
    })
}
