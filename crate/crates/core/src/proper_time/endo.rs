//! Gauge-parameter transform of the heat kernel.
//!
//! `K^{(α)}(τ) = K^{(1)}(τ) + i ∫_τ^{τ/α} dy ∇_μ∇^λ K^{(1)}_{λν′}(y)`, with the
//! integral taken along the straight ray `y = τu`, `u ∈ [1, 1/α]`.

use super::heat::damped_ray;
use super::kernel::{czero4, grad_div, kernel_prefactor, CMat4, KernelField};
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::numerics::quad::integrate_vec;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndoCorrection {
    pub alpha: f64,
    pub tau: Complex64,
    pub value: CMat4,
    pub error: f64,
}

fn to_vec(m: &CMat4) -> Vec<Complex64> {
    m.iter().flatten().copied().collect()
}

fn from_vec(v: &[Complex64]) -> CMat4 {
    std::array::from_fn(|mu| std::array::from_fn(|nu| v[mu * 4 + nu]))
}

fn density(model: &MetricModel, x: &SpacetimePoint, xp: &[f64; 4]) -> Result<f64> {
    Ok((model.metric_at(x)?.det.abs() * model.metric_at(&SpacetimePoint::new(*xp))?.det.abs()).powf(0.25))
}

/// `i ∫_τ^{τ/α} dy ∇_μ∇^λ K^{(1)}_{λν′}(y)` for the truncated kernel.
pub fn endo_correction(
    model: &MetricModel,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    alpha: f64,
    tau: Complex64,
    order: usize,
) -> Result<EndoCorrection> {
    let field = KernelField::new(model, xp, order)?;
    endo_with(&field, x, alpha, tau, 1e-12)
}

pub fn endo_with(field: &KernelField<'_>, x: &SpacetimePoint, alpha: f64, tau: Complex64, tol: f64) -> Result<EndoCorrection> {
    if alpha <= 0.0 {
        return Err(Error::Domain(format!("gauge parameter must be positive, got {alpha}")));
    }
    if alpha == 1.0 {
        return Ok(EndoCorrection { alpha, tau, value: czero4(), error: 0.0 });
    }
    let w = density(field.model, x, &field.xp)?;
    let c = Complex64::i() * tau * kernel_prefactor() * w;
    let (v, err) = integrate_vec(
        |u| {
            let d = field.covariant(&x.coords, tau * u)?;
            Ok(to_vec(&grad_div(&d)).into_iter().map(|z| z * c).collect())
        },
        1.0,
        1.0 / alpha,
        0.0,
        tol,
    )?;
    Ok(EndoCorrection { alpha, tau, value: from_vec(&v), error: err })
}

/// `lim_{s→0} i^{s+1}/Γ(s+1) ∫₀^∞ dτ τ^s ΔK(τ)` for the Endo correction `ΔK`,
/// taken at `s = 0` along the decaying ray where the integral converges.
pub fn gauge_shift_by_endo(
    model: &MetricModel,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    alpha: f64,
    order: usize,
    tol: f64,
) -> Result<(CMat4, f64)> {
    let field = KernelField::new(model, xp, order)?;
    let sigma = field.closed.eval(&x.coords, &xp.coords).sigma;
    if sigma == 0.0 {
        return Err(Error::NullSeparation);
    }
    let omega = damped_ray(sigma, 1.0, 0.0);
    let scale = 0.5 * sigma.abs();
    let (v, err) = integrate_vec(
        |v| {
            if v <= 0.0 || v >= 1.0 {
                return Ok(vec![Complex64::new(0.0, 0.0); 16]);
            }
            let t = scale * v / (1.0 - v);
            let jac = scale / (1.0 - v).powi(2);
            let e = endo_with(&field, x, alpha, omega * t, tol * 1e-2)?;
            Ok(to_vec(&e.value).into_iter().map(|z| z * Complex64::i() * omega * jac).collect())
        },
        0.0,
        1.0,
        0.0,
        tol,
    )?;
    Ok((from_vec(&v), err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trivial_gauge_gives_zero() {
        let m = MetricModel::sphere(1.0);
        let e = endo_correction(&m, &SpacetimePoint::new([0.1; 4]), &SpacetimePoint::new([0.0; 4]), 1.0, Complex64::new(0.0, -0.1), 2)
            .unwrap();
        assert!(e.value.iter().flatten().all(|c| *c == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn reversed_orientation() {
        // α ↦ 1/α with τ ↦ τ/α swaps the endpoints
        let m = MetricModel::euclidean();
        let (x, xp) = (SpacetimePoint::new([0.3, 0.1, 0.0, -0.2]), SpacetimePoint::new([0.0; 4]));
        let tau = Complex64::new(0.0, -0.2);
        let a = endo_correction(&m, &x, &xp, 2.0, tau, 0).unwrap();
        let b = endo_correction(&m, &x, &xp, 0.5, tau / 2.0, 0).unwrap();
        for mu in 0..4 {
            for nu in 0..4 {
                assert!((a.value[mu][nu] + b.value[mu][nu]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn flat_gauge_shift_matches_closed_form() {
        let m = MetricModel::euclidean();
        let (x, xp) = (SpacetimePoint::new([0.3, 0.1, 0.0, -0.2]), SpacetimePoint::new([0.0, 0.2, 0.1, 0.0]));
        let d: Vec<f64> = (0..4).map(|i| x.coords[i] - xp.coords[i]).collect();
        let sigma = 0.5 * d.iter().map(|v| v * v).sum::<f64>();
        for alpha in [0.5, 2.0] {
            let (g, _) = gauge_shift_by_endo(&m, &x, &xp, alpha, 0, 1e-11).unwrap();
            for mu in 0..4 {
                for nu in 0..4 {
                    let eta = if mu == nu { 1.0 } else { 0.0 };
                    let want = (alpha - 1.0) / (16.0 * PI * PI) * (eta / sigma - d[mu] * d[nu] / (sigma * sigma));
                    assert!((g[mu][nu] - Complex64::new(0.0, want)).norm() < 1e-9, "{alpha} {mu}{nu}");
                }
            }
        }
    }
}
