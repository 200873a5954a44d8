//! Truncated heat kernel and the residual of its evolution equation.

use super::kernel::{box_op, cfrobenius, czero4, kernel_prefactor, unpack, CMat4, KernelField};
use crate::bitensor::{provider, PairG};
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::sdw::isotropic::{IsotropicSdw, DEFAULT_DEGREE};
use crate::sdw::transport::{b_coefficient, TransportOptions};
use crate::tensor::Mat4;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatKernelSample {
    pub tau: Complex64,
    pub order: usize,
    pub sigma: f64,
    /// `g^{1/4} g′^{1/4}`
    pub density: f64,
    pub k: CMat4,
}

/// Point on the decaying ray `τ = t (δ − i sgn σ)`.
pub fn damped_ray(sigma: f64, t: f64, delta: f64) -> Complex64 {
    let sgn = if sigma < 0.0 { -1.0 } else { 1.0 };
    Complex64::new(delta * t, -sgn * t)
}

fn b_values(model: &MetricModel, x: &SpacetimePoint, xp: &SpacetimePoint, order: usize) -> Result<(PairG<f64>, Vec<Mat4>)> {
    let pairs = provider(model);
    let p = pairs.pair(x, xp)?;
    let pg = PairG { sigma: p.sigma, grad_x: p.grad_x, grad_xp: p.grad_xp, propagator: p.propagator, sqrt_delta: p.van_vleck.sqrt() };
    let b = match model.constant_curvature() {
        Some(k) => {
            let iso = IsotropicSdw::new(k, order, DEFAULT_DEGREE)?;
            (0..=order).map(|n| iso.b(n, &pg)).collect()
        }
        None => (0..=order)
            .map(|n| Ok(b_coefficient(model, pairs.as_ref(), x, xp, n, &TransportOptions::default())?.0))
            .collect::<Result<_>>()?,
    };
    Ok((pg, b))
}

/// `K = (i/16π²) g^{1/4} √Δ g′^{1/4} e^{iσ/2τ} Σ_{n≤N} (iτ)^{n−2} b_n`.
pub fn heat_kernel_expansion(
    model: &MetricModel,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    tau: Complex64,
    order: usize,
) -> Result<HeatKernelSample> {
    if tau.norm() == 0.0 {
        return Err(Error::Domain("proper time must be nonzero".into()));
    }
    let density = (model.metric_at(x)?.det.abs() * model.metric_at(xp)?.det.abs()).powf(0.25);
    let (pg, b) = b_values(model, x, xp, order)?;
    let phase = (Complex64::i() * pg.sigma / (2.0 * tau)).exp();
    let mut k = czero4();
    for (n, bn) in b.iter().enumerate() {
        let c = kernel_prefactor() * density * pg.sqrt_delta * phase * (Complex64::i() * tau).powi(n as i32 - 2);
        for mu in 0..4 {
            for nu in 0..4 {
                k[mu][nu] += c * bn[mu][nu];
            }
        }
    }
    Ok(HeatKernelSample { tau, order, sigma: pg.sigma, density, k })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatResidual {
    pub tau: Complex64,
    /// Frobenius norm of `i∂_τK − P(1)K`.
    pub residual: f64,
    /// `|e^{iσ/2τ}|`
    pub gaussian: f64,
    /// Residual with the Gaussian factor divided out.
    pub stripped: f64,
}

/// Residual of `i∂_τ K = P(1) K` for the truncated kernel, with exact derivatives.
pub fn heat_equation_residual(
    model: &MetricModel,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    tau: Complex64,
    order: usize,
) -> Result<HeatResidual> {
    let field = KernelField::new(model, xp, order)?;
    heat_residual_with(&field, x, tau)
}

pub fn heat_residual_with(field: &KernelField<'_>, x: &SpacetimePoint, tau: Complex64) -> Result<HeatResidual> {
    let d = field.covariant(&x.coords, tau)?;
    let lap = box_op(&d);
    let k = unpack(&d.value);
    let dt = field.tau_derivative(&x.coords, tau);
    let loc = field.model.local(x)?;
    let ric = loc.curvature().ricci;
    let inv = loc.metric.inv;
    let mut r = czero4();
    for mu in 0..4 {
        for nu in 0..4 {
            let mut rk = Complex64::new(0.0, 0.0);
            for l in 0..4 {
                let r_ml: f64 = (0..4).map(|a| ric[mu][a] * inv[a][l]).sum();
                rk += r_ml * k[l][nu];
            }
            // i∂_τK − (−□K + Ric K)
            r[mu][nu] = kernel_prefactor() * (Complex64::i() * dt[mu][nu] + lap[mu][nu] - rk);
        }
    }
    let sigma = field.closed.eval(&x.coords, &field.xp).sigma;
    let gaussian = (Complex64::i() * sigma / (2.0 * tau)).exp().norm();
    let residual = cfrobenius(&r);
    Ok(HeatResidual { tau, residual, gaussian, stripped: residual / gaussian })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualScan {
    pub order: usize,
    pub delta: f64,
    pub t: Vec<f64>,
    pub samples: Vec<HeatResidual>,
    /// Least-squares log-log slope of the residual against `|τ|`.
    pub slope: f64,
    /// Same with the Gaussian factor divided out.
    pub slope_stripped: f64,
}

fn loglog_slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    let lx: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Residuals along the damped ray at the given `|τ|` values.
pub fn residual_scan(
    model: &MetricModel,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    t: &[f64],
    order: usize,
    delta: f64,
) -> Result<ResidualScan> {
    let field = KernelField::new(model, xp, order)?;
    let sigma = field.closed.eval(&x.coords, &xp.coords).sigma;
    let samples: Vec<HeatResidual> =
        t.iter().map(|&ti| heat_residual_with(&field, x, damped_ray(sigma, ti, delta))).collect::<Result<_>>()?;
    let raw: Vec<f64> = samples.iter().map(|s| s.residual).collect();
    let stripped: Vec<f64> = samples.iter().map(|s| s.stripped).collect();
    Ok(ResidualScan {
        order,
        delta,
        t: t.to_vec(),
        slope: loglog_slope(t, &raw),
        slope_stripped: loglog_slope(t, &stripped),
        samples,
    })
}
