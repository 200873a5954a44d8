//! The Euler–Maclaurin route to the `log(σ/2)` coefficient at `α = 1`:
//! `√Δ ∫₀^{y*} y Γ(−y−s) b_{y+1} dy`, with `b_{y+1}` interpolated
//! quadratically through the integer orders 1, 2, 3.

use super::source::Source;
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::numerics::quad::integrate_real;
use crate::proper_time::kernel::{kernel_prefactor, CMat4};
use crate::tensor::Mat4;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmLogCoefficient {
    pub y_star: f64,
    pub s_small: f64,
    /// `(i/16π²) √Δ ∫₀^{y*} y Γ(−y−s) b_{y+1} dy` at `s → 0`.
    pub value: CMat4,
    /// `value / y*`, comparable with the jet-route log coefficient as `y* → 0`.
    pub normalized: CMat4,
    pub interpolation: String,
}

fn lagrange(z: f64, k: usize) -> f64 {
    let nodes = [1.0, 2.0, 3.0];
    (0..3).filter(|&j| j != k).map(|j| (z - nodes[j]) / (nodes[k] - nodes[j])).product()
}

/// `∫₀^{y*} y Γ(−y−s) ℓ_k(y+1) dy`.
fn weight(k: usize, y_star: f64, s: f64) -> Result<f64> {
    let f = |y: f64| if y == 0.0 { 0.0 } else { y * gamma(-y - s) * lagrange(y + 1.0, k) };
    let split = (4.0 * s).min(0.5 * y_star);
    let (a, _) = integrate_real(f, 0.0, split, 1e-16, 1e-13)?;
    let (b, _) = integrate_real(f, split, y_star, 1e-16, 1e-13)?;
    Ok(a + b)
}

pub fn log_coefficient_em(model: &MetricModel, x: &SpacetimePoint, xp: &SpacetimePoint, y_star: f64, s_small: f64) -> Result<EmLogCoefficient> {
    if !(y_star > 0.0) || !(s_small > 0.0) {
        return Err(Error::Domain("need y* > 0 and s > 0".into()));
    }
    if y_star > 2.0 {
        return Err(Error::InterpolationUnstable(format!("y* = {y_star} leaves the interpolation range [0, 2]")));
    }
    let src = Source::new(model, 3)?;
    let mut b: Vec<Mat4> = Vec::with_capacity(3);
    let mut sq = 1.0;
    for n in 1..=3 {
        let (_, q, bn) = src.pair_b(x, xp, n)?;
        sq = q;
        b.push(bn);
    }
    // the interpolant must stay within the node range on [1, 1 + y*]
    let node_max = b.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..=32 {
        let z = 1.0 + y_star * i as f64 / 32.0;
        for mu in 0..4 {
            for nu in 0..4 {
                let v: f64 = (0..3).map(|k| lagrange(z, k) * b[k][mu][nu]).sum();
                if v.abs() > 10.0 * node_max.max(f64::MIN_POSITIVE) {
                    return Err(Error::InterpolationUnstable(format!("|b_(y+1)| = {v:e} at y = {}", z - 1.0)));
                }
            }
        }
    }
    // s → 0 by linear extrapolation from s and s/2
    let w: Vec<f64> = (0..3)
        .map(|k| Ok(2.0 * weight(k, y_star, 0.5 * s_small)? - weight(k, y_star, s_small)?))
        .collect::<Result<_>>()?;
    let c = kernel_prefactor() * sq;
    let value: CMat4 = std::array::from_fn(|mu| std::array::from_fn(|nu| c * (0..3).map(|k| w[k] * b[k][mu][nu]).sum::<f64>()));
    let normalized = std::array::from_fn(|mu| std::array::from_fn(|nu| value[mu][nu] / y_star));
    Ok(EmLogCoefficient { y_star, s_small, value, normalized, interpolation: "quadratic through n = 1, 2, 3 at the pair".into() })
}
