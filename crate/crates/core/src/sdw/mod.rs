//! Seeley–DeWitt bi-vector coefficients of the minimal photon operator.
//!
//! Two independent routes are provided: [`transport`] integrates the recursion
//! along the geodesic for any metric, and [`isotropic`] solves it in closed
//! radial form on maximally symmetric spaces. They cross-check each other.

pub mod isotropic;
pub mod series;
pub mod transport;

pub use isotropic::IsotropicSdw;
pub use transport::{b_coefficient, sdw_rhs, sdw_transport, SDWCoefficients, TransportOptions};

use crate::bitensor::{coincidence_extrapolate, provider};
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::tensor::Mat4;
use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CoincidenceRoute {
    Exact,
    Ladder,
    Algebraic,
    Isotropic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoincidenceValue {
    pub value: Mat4,
    pub error: f64,
    pub route: CoincidenceRoute,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoincidenceOptions {
    pub step: f64,
    pub levels: usize,
    pub direction: [f64; 4],
    pub transport: TransportOptions,
}

impl Default for CoincidenceOptions {
    fn default() -> Self {
        Self { step: 0.2, levels: 4, direction: [0.5, -0.3, 0.6, 0.2], transport: TransportOptions::default() }
    }
}

/// `sdw_coincidence`: `[b_n]` by Richardson extrapolation of transported
/// coefficients at shrinking separation (`[b_0] = g` exactly).
pub fn sdw_coincidence(model: &MetricModel, x: &SpacetimePoint, n: usize, opts: &CoincidenceOptions) -> Result<CoincidenceValue> {
    Ok(sdw_coincidence_ladder(model, x, n, opts)?.pop().expect("non-empty ladder").1)
}

/// Like [`sdw_coincidence`], but returns the extrapolant after every rung,
/// keyed by the smallest step used so far.
pub fn sdw_coincidence_ladder(model: &MetricModel, x: &SpacetimePoint, n: usize, opts: &CoincidenceOptions) -> Result<Vec<(f64, CoincidenceValue)>> {
    if n == 0 {
        return Ok(vec![(0.0, CoincidenceValue { value: model.metric_at(x)?.g, error: 0.0, route: CoincidenceRoute::Exact })]);
    }
    let pairs = provider(model);
    let d = opts.direction;
    let f = |h: f64| {
        let xp = x.offset(&[h * d[0], h * d[1], h * d[2], h * d[3]]);
        let (b, _) = b_coefficient(model, pairs.as_ref(), x, &xp, n, &opts.transport)?;
        Ok(b.iter().flatten().copied().collect::<Vec<f64>>())
    };
    let lim = coincidence_extrapolate(&f, opts.step, opts.levels)?;
    Ok(lim
        .history
        .into_iter()
        .map(|(h, v, error)| (h, CoincidenceValue { value: crate::tensor::unflat2(&v), error, route: CoincidenceRoute::Ladder }))
        .collect())
}

/// `[b_n]` from the algebraic coincidence form of the recursion, `n [b_n] = [M_n]`.
pub fn sdw_coincidence_algebraic(model: &MetricModel, x: &SpacetimePoint, n: usize, opts: &TransportOptions) -> Result<CoincidenceValue> {
    if n == 0 {
        return Ok(CoincidenceValue { value: model.metric_at(x)?.g, error: 0.0, route: CoincidenceRoute::Exact });
    }
    let pairs = provider(model);
    let prev = |p: &SpacetimePoint| Ok(b_coefficient(model, pairs.as_ref(), p, x, n - 1, opts)?.0);
    let (m, err) = sdw_rhs(model, pairs.as_ref(), x, x, &prev, opts)?;
    let k = 1.0 / n as f64;
    Ok(CoincidenceValue { value: crate::tensor::scale(&m, k), error: err * k, route: CoincidenceRoute::Algebraic })
}

/// `[b_n]` on a maximally symmetric space from the radial profiles.
pub fn sdw_coincidence_isotropic(model: &MetricModel, x: &SpacetimePoint, n: usize) -> Result<CoincidenceValue> {
    let k = model
        .constant_curvature()
        .ok_or_else(|| Error::InvalidParameters("metric is not maximally symmetric".into()))?;
    let iso = IsotropicSdw::new(k, n, isotropic::DEFAULT_DEGREE)?;
    Ok(CoincidenceValue {
        value: iso.coincidence(n, &model.metric_at(x)?.g),
        error: 0.0,
        route: CoincidenceRoute::Isotropic,
    })
}
