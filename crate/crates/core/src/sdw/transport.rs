//! Seeley–DeWitt coefficients on arbitrary metrics by transport along the geodesic.
//!
//! With `x′` fixed, `σ^{;λ}∇_λ = t d/dt` along the geodesic from `x′` (t = 0)
//! to `x` (t = 1), so the recursion integrates to
//! `b_n(x, x′) = ∫₀¹ t^{n−1} M_n(z(t)) dt` with
//! `M_n = Δ^{−1/2} □(Δ^{1/2} b_{n−1}) − R_μ^λ b_{n−1,λν′}` parallel-transported to `x`.
//! The Laplacian at each node is a stencil over neighbouring points, each a
//! fresh two-point evaluation anchored at `x′`.

use crate::bitensor::geodesic::{self, GeodesicOptions};
use crate::bitensor::TwoPoint;
use crate::covariant::{covariant_derivative, FieldShape};
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::numerics::quad::kronrod15_unit;
use crate::numerics::stencil::StencilOptions;
use crate::tensor::{self, Mat4};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportOptions {
    pub stencil_step: f64,
    pub stencil_levels: usize,
    pub geodesic: GeodesicOptions,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self {
            stencil_step: 2e-2,
            stencil_levels: 3,
            geodesic: GeodesicOptions { multistart: false, rtol: 1e-13, atol: 1e-15, tol: 1e-12, ..GeodesicOptions::default() },
        }
    }
}

impl TransportOptions {
    fn stencil(&self) -> StencilOptions {
        StencilOptions { step: self.stencil_step, levels: self.stencil_levels }
    }
}

/// Engineering cap on the transport order.
pub const MAX_ORDER: usize = 3;

/// `sdw_rhs`: `Δ^{−1/2} □(Δ^{1/2} b_prev) − R_μ^λ b_prev,λν′` at `z`, with
/// `b_prev(p)` the previous coefficient at `(p, x′)`.
pub fn sdw_rhs<F>(
    model: &MetricModel,
    pairs: &dyn TwoPoint,
    z: &SpacetimePoint,
    xp: &SpacetimePoint,
    prev: &F,
    opts: &TransportOptions,
) -> Result<(Mat4, f64)>
where
    F: Fn(&SpacetimePoint) -> Result<Mat4> + Sync,
{
    let field = |p: &SpacetimePoint| {
        let (sq, _) = pairs.transport_data(p, xp)?;
        let b = prev(p)?;
        Ok(b.iter().flatten().map(|v| sq * v).collect::<Vec<f64>>())
    };
    let shape = FieldShape { lower: 1, inert: 4 };
    let d = covariant_derivative(model, &field, shape, z, true, opts.stencil()).map_err(|e| match e {
        Error::OutOfChart { .. } => Error::StencilOutOfDomain,
        other => other,
    })?;
    let second = d.second.expect("second derivatives requested");
    let loc = model.local(z)?;
    let curv = loc.curvature();
    let inv = loc.metric.inv;
    let (sq, _) = pairs.transport_data(z, xp)?;
    let b = prev(z)?;
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let flat = mu * 4 + nu;
            let mut lap = 0.0;
            for a in 0..4 {
                for c in 0..4 {
                    lap += inv[a][c] * second[(flat * 4 + a) * 4 + c];
                }
            }
            let mut ric = 0.0;
            for l in 0..4 {
                let mut r_ml = 0.0;
                for k in 0..4 {
                    r_ml += curv.ricci[mu][k] * inv[k][l];
                }
                ric += r_ml * b[l][nu];
            }
            out[mu][nu] = lap / sq - ric;
        }
    }
    Ok((out, d.error / sq))
}

/// `b_n(x, x′)` with an error estimate (stencil plus embedded-quadrature).
pub fn b_coefficient(
    model: &MetricModel,
    pairs: &dyn TwoPoint,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    n: usize,
    opts: &TransportOptions,
) -> Result<(Mat4, f64)> {
    if n > MAX_ORDER {
        return Err(Error::CapExceeded { requested: n, cap: MAX_ORDER });
    }
    if n == 0 {
        return Ok((pairs.transport_data(x, xp)?.1, 0.0));
    }
    let rule = kronrod15_unit();
    // node t measured from x′; geodesic parameter λ = 1 − t measured from x
    let mut lambdas: Vec<f64> = rule.iter().map(|r| 1.0 - r.0).collect();
    lambdas.sort_by(|a, b| a.total_cmp(b));
    let sol = geodesic::solve_with_samples(model, x, xp, None, &opts.geodesic, &lambdas)?;
    let terms: Vec<(Mat4, f64, f64, f64)> = rule
        .par_iter()
        .map(|&(t, wk, wg)| {
            let sample = sol
                .samples
                .iter()
                .min_by(|a, b| (a.lambda - (1.0 - t)).abs().total_cmp(&(b.lambda - (1.0 - t)).abs()))
                .expect("samples present");
            let z = SpacetimePoint { chart_id: x.chart_id, coords: sample.point };
            let prev = |p: &SpacetimePoint| Ok(b_coefficient(model, pairs, p, xp, n - 1, opts)?.0);
            let (m, err) = sdw_rhs(model, pairs, &z, xp, &prev, opts)?;
            // covector slot from z back to x: M_x = Eᵀ M_z
            let mx = tensor::matmul(&tensor::transpose(&sample.frame), &m);
            let tw = t.powi(n as i32 - 1);
            Ok((mx, wk * tw, wg * tw, err * wk * tw))
        })
        .collect::<Result<_>>()?;
    let mut kron = [[0.0; 4]; 4];
    let mut gauss = [[0.0; 4]; 4];
    let mut err = 0.0;
    for (m, wk, wg, e) in &terms {
        kron = tensor::add(&kron, &tensor::scale(m, *wk));
        gauss = tensor::add(&gauss, &tensor::scale(m, *wg));
        err += e;
    }
    Ok((kron, err + tensor::max_abs(&tensor::sub(&kron, &gauss))))
}

/// Transported coefficients at sample points of a geodesic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SDWCoefficients {
    pub order: usize,
    pub x: SpacetimePoint,
    pub xp: SpacetimePoint,
    /// Geodesic parameter of each sample (0 at `x`).
    pub lambdas: Vec<f64>,
    /// `b[k][n]` at sample `k`.
    pub b: Vec<Vec<Mat4>>,
    pub errors: Vec<Vec<f64>>,
}

/// `sdw_transport`: `b_0 … b_N` at the requested geodesic samples.
pub fn sdw_transport(
    model: &MetricModel,
    pairs: &dyn TwoPoint,
    sol: &geodesic::GeodesicSolution,
    order: usize,
    lambdas: &[f64],
    opts: &TransportOptions,
) -> Result<SDWCoefficients> {
    if order > MAX_ORDER {
        return Err(Error::CapExceeded { requested: order, cap: MAX_ORDER });
    }
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let dense = geodesic::solve_with_samples(model, &sol.x, &sol.xp, Some(sol.tangent0), &opts.geodesic, &sorted)?;
    let mut b = Vec::with_capacity(sorted.len());
    let mut errors = Vec::with_capacity(sorted.len());
    for s in &dense.samples {
        let z = SpacetimePoint { chart_id: sol.x.chart_id, coords: s.point };
        let row: Vec<(Mat4, f64)> = (0..=order).map(|n| b_coefficient(model, pairs, &z, &sol.xp, n, opts)).collect::<Result<_>>()?;
        b.push(row.iter().map(|r| r.0).collect());
        errors.push(row.iter().map(|r| r.1).collect());
    }
    Ok(SDWCoefficients { order, x: sol.x, xp: sol.xp, lambdas: sorted, b, errors })
}
