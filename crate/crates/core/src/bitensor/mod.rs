//! Synge world function and its derived two-point tensors.
//!
//! Index conventions: unprimed indices live at `x`, primed at `x′`. In every
//! `Mat4` below the row index is unprimed and the column index primed.

pub mod closed;
pub mod field;
pub mod coincidence;
pub mod geodesic;
pub mod types;

pub use closed::{ClosedForm, PairG};
pub use coincidence::{coincidence_extrapolate, CoincidenceLimit};
pub use geodesic::{solve_geodesic, GeodesicOptions, GeodesicSample, GeodesicSolution};
pub use types::{BiScalarPack, BiTensor, Point, Variance};

use crate::geometry::{MetricModel, SpacetimePoint};
use crate::numerics::stencil::{partials, StencilOptions};
use crate::tensor::{self, Mat4, Vec4};
use crate::{Error, Result};
use serde::Serialize;

/// World function with first derivatives at both ends.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorldFunction {
    pub sigma: f64,
    /// `σ_{;μ}`
    pub grad_x: Vec4,
    /// `σ_{;ν′}`
    pub grad_xp: Vec4,
}

/// `world_function`: `σ`, `σ_{;μ}`, `σ_{;ν′}` from a geodesic solution.
pub fn world_function(model: &MetricModel, sol: &GeodesicSolution) -> Result<WorldFunction> {
    let g = model.metric_at(&sol.x)?.g;
    let gp = model.metric_at(&sol.xp)?.g;
    let gx = tensor::mat_vec(&g, &sol.tangent0);
    let gxp = tensor::mat_vec(&gp, &sol.tangent1);
    Ok(WorldFunction {
        sigma: 0.5 * sol.action,
        grad_x: std::array::from_fn(|i| -gx[i]),
        grad_xp: gxp,
    })
}

/// `σ_{;μν′}` from the exponential-map Jacobian: `−g(x) · (∂z(1)/∂u₀)⁻¹`.
pub fn sigma_mixed(model: &MetricModel, sol: &GeodesicSolution) -> Result<Mat4> {
    let g = model.metric_at(&sol.x)?.g;
    let jinv = tensor::inverse(&sol.jacobian).ok_or(Error::ConjugatePoint { delta: f64::INFINITY })?;
    Ok(tensor::scale(&tensor::matmul(&g, &jinv), -1.0))
}

/// `σ_{;μν′}` by central differences of `σ_{;μ}` in the primed point.
pub fn sigma_mixed_stencil(
    model: &MetricModel,
    sol: &GeodesicSolution,
    opts: &GeodesicOptions,
    stencil: StencilOptions,
) -> Result<Mat4> {
    let single = GeodesicOptions { multistart: false, samples: 2, ..opts.clone() };
    let f = |c: &Vec4| {
        let xp = SpacetimePoint { chart_id: sol.xp.chart_id, coords: *c };
        let s = geodesic::solve_geodesic_from(model, &sol.x, &xp, Some(sol.tangent0), &single)?;
        Ok(world_function(model, &s)?.grad_x.to_vec())
    };
    let p = partials(&f, &sol.xp.coords, false, stencil)?;
    Ok(std::array::from_fn(|mu| std::array::from_fn(|nu| p.d1[nu][mu])))
}

/// `van_vleck`: `Δ = sgn · det σ_{;μν′} / (√|g| √|g′|)`, normalized to 1 at coincidence.
pub fn van_vleck(model: &MetricModel, x: &SpacetimePoint, xp: &SpacetimePoint, mixed: &Mat4) -> Result<f64> {
    let d = model.metric_at(x)?.det;
    let dp = model.metric_at(xp)?.det;
    let delta = d.signum() * tensor::det(mixed) / (d.abs().sqrt() * dp.abs().sqrt());
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::ConjugatePoint { delta });
    }
    Ok(delta)
}

/// `parallel_propagator`: `g_{μν′}` lowering the transported frame.
pub fn parallel_propagator(model: &MetricModel, sol: &GeodesicSolution) -> Result<Mat4> {
    let g = model.metric_at(&sol.x)?.g;
    let pinv = tensor::inverse(&sol.transport).ok_or(Error::SingularMetric { det: 0.0 })?;
    Ok(tensor::matmul(&g, &pinv))
}

/// Everything at a pair of points that the heat-kernel coefficients need.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairData {
    pub sigma: f64,
    pub grad_x: Vec4,
    pub grad_xp: Vec4,
    pub mixed: Mat4,
    pub propagator: Mat4,
    pub van_vleck: f64,
}

/// Source of two-point data at arbitrary pairs.
pub trait TwoPoint: Sync {
    fn pair(&self, x: &SpacetimePoint, xp: &SpacetimePoint) -> Result<PairData>;

    /// `(√Δ, g_{μν′})` only.
    fn transport_data(&self, x: &SpacetimePoint, xp: &SpacetimePoint) -> Result<(f64, Mat4)> {
        let p = self.pair(x, xp)?;
        Ok((p.van_vleck.sqrt(), p.propagator))
    }
}

/// Two-point data from the numerical geodesic solver.
pub struct Geodesic<'a> {
    pub model: &'a MetricModel,
    pub opts: GeodesicOptions,
}

impl TwoPoint for Geodesic<'_> {
    fn pair(&self, x: &SpacetimePoint, xp: &SpacetimePoint) -> Result<PairData> {
        let sol = solve_geodesic(self.model, x, xp, &self.opts)?;
        pair_from_solution(self.model, &sol)
    }

    fn transport_data(&self, x: &SpacetimePoint, xp: &SpacetimePoint) -> Result<(f64, Mat4)> {
        let sol = solve_geodesic(self.model, x, xp, &self.opts)?;
        let mixed = sigma_mixed(self.model, &sol)?;
        Ok((van_vleck(self.model, x, xp, &mixed)?.sqrt(), parallel_propagator(self.model, &sol)?))
    }
}

/// Closed forms where available, numerical geodesics otherwise.
pub fn provider(model: &MetricModel) -> Box<dyn TwoPoint + '_> {
    match ClosedForm::for_model(model) {
        Some(c) => Box::new(c),
        None => Box::new(Geodesic {
            model,
            opts: GeodesicOptions { multistart: false, rtol: 1e-13, atol: 1e-15, tol: 1e-12, ..GeodesicOptions::default() },
        }),
    }
}

pub fn pair_from_solution(model: &MetricModel, sol: &GeodesicSolution) -> Result<PairData> {
    let w = world_function(model, sol)?;
    let mixed = sigma_mixed(model, sol)?;
    Ok(PairData {
        sigma: w.sigma,
        grad_x: w.grad_x,
        grad_xp: w.grad_xp,
        van_vleck: van_vleck(model, &sol.x, &sol.xp, &mixed)?,
        mixed,
        propagator: parallel_propagator(model, sol)?,
    })
}
