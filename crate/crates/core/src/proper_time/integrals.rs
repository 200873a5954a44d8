//! The two gamma-function integral identities, in closed form and by direct
//! quadrature of their left-hand sides.

use super::special::gamma_complex;
use crate::numerics::quad::{gauss_legendre_unit, integrate};
use crate::numerics::richardson::neville_at_zero;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, gamma_ur};
use std::f64::consts::PI;

/// `∫₀^∞ y^{−β} e^{iy} dy = i Γ(1 − β) e^{−iπβ/2}`.
pub fn osc_gamma_closed(beta: Complex64) -> Result<Complex64> {
    if beta.re >= 1.0 {
        return Err(Error::Domain(format!("Re(beta) = {} must be below 1", beta.re)));
    }
    let i = Complex64::i();
    Ok(i * gamma_complex(1.0 - beta) * (-i * PI * beta / 2.0).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DampingOptions {
    /// Largest damping `ε₀`; the ladder is `ε_k = ε₀ 2^{−k}`.
    pub eps0: f64,
    pub levels: usize,
    pub tol: f64,
}

impl Default for DampingOptions {
    fn default() -> Self {
        Self { eps0: 0.5, levels: 10, tol: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DampedQuadrature {
    pub value: Complex64,
    pub error: f64,
    pub eps: Vec<f64>,
    pub damped: Vec<Complex64>,
}

/// `∫₀^∞ y^{−β} e^{(i−ε)y} dy` at fixed damping.
pub fn osc_gamma_damped(beta: Complex64, eps: f64) -> Result<Complex64> {
    if beta.re >= 1.0 {
        return Err(Error::Domain(format!("Re(beta) = {} must be below 1", beta.re)));
    }
    if eps <= 0.0 {
        return Err(Error::Domain("damping must be positive".into()));
    }
    let k = Complex64::new(-eps, 1.0);
    let f = |y: f64| (-beta * y.ln()).exp() * (k * y).exp();
    // head: y = u^m removes the endpoint singularity
    let m = if beta.re > 0.0 { 1.0 / (1.0 - beta.re) } else { 1.0 };
    let head_end = 2.0 * PI;
    let (head, _) = integrate(
        |u: f64| if u == 0.0 { Complex64::new(0.0, 0.0) } else { f(u.powf(m)) * m * u.powf(m - 1.0) },
        0.0,
        head_end.powf(1.0 / m),
        1e-14,
        1e-13,
    )?;
    // tail: half-period panels until the envelope is negligible
    let mut total = head;
    let mut a = head_end;
    let envelope = |y: f64| (-eps * y).exp() * y.powf(-beta.re).max(1.0) * y.max(1.0);
    let rule = gauss_legendre_unit::<f64>(24);
    while envelope(a) > 1e-18 {
        total += rule.iter().fold(Complex64::new(0.0, 0.0), |acc, &(t, w)| acc + f(a + PI * t) * (w * PI));
        a += PI;
    }
    Ok(total)
}

/// Left side of the oscillatory identity by damped quadrature, extrapolated to `ε → 0`.
pub fn osc_gamma_quadrature(beta: Complex64, opts: &DampingOptions) -> Result<DampedQuadrature> {
    let eps: Vec<f64> = (0..opts.levels).map(|k| opts.eps0 * 0.5f64.powi(k as i32)).collect();
    let damped: Vec<Complex64> = eps.iter().map(|&e| osc_gamma_damped(beta, e)).collect::<Result<_>>()?;
    let (value, error) = neville_at_zero(&eps, &damped);
    if !(error <= opts.tol) {
        return Err(Error::NoConvergence { what: "damping extrapolation", iterations: opts.levels, last: error });
    }
    Ok(DampedQuadrature { value, error, eps, damped })
}

fn check_inc_domain(beta: f64, nu: f64, c: f64) -> Result<()> {
    if beta <= 0.0 || beta + nu <= 0.0 || c <= 0.0 {
        return Err(Error::Domain(format!("need beta > 0, beta + nu > 0, c > 0 (got {beta}, {nu}, {c})")));
    }
    Ok(())
}

/// `∫₀^∞ x^{β−1} Γ(ν, cx) dx = Γ(β + ν) / (β c^β)`.
pub fn inc_gamma_integral(beta: f64, nu: f64, c: f64) -> Result<f64> {
    check_inc_domain(beta, nu, c)?;
    Ok(gamma(beta + nu) / (beta * c.powf(beta)))
}

/// Left side by direct quadrature (`ν > 0`), substituting `x = u^{1/β}`.
pub fn inc_gamma_quadrature(beta: f64, nu: f64, c: f64, tol: f64) -> Result<f64> {
    check_inc_domain(beta, nu, c)?;
    if nu <= 0.0 {
        return Err(Error::Domain("quadrature route needs nu > 0".into()));
    }
    let upper = |x: f64| if x == 0.0 { gamma(nu) } else { gamma_ur(nu, c * x) * gamma(nu) };
    let x_end = (80.0 + 4.0 * nu.abs() + 4.0 * beta) / c;
    let (v, _) = integrate(
        |u: f64| Complex64::new(upper(u.powf(1.0 / beta)), 0.0),
        0.0,
        x_end.powf(beta),
        tol * 1e-2,
        tol * 1e-2,
    )?;
    Ok(v.re / beta)
}

/// `β` values of the oscillatory identity check.
pub const OSC_BETAS: [f64; 5] = [-1.0, 0.0, 0.25, 0.5, 0.75];

/// `(β, ν, c)` on a 3 × 3 × 3 grid for the incomplete-gamma identity.
pub fn inc_gamma_grid() -> Vec<(f64, f64, f64)> {
    let (betas, nus, cs) = ([0.5, 1.0, 2.0], [0.5, 1.0, 2.5], [0.5, 1.0, 3.0]);
    let mut out = Vec::with_capacity(27);
    for &b in &betas {
        for &n in &nus {
            for &c in &cs {
                out.push((b, n, c));
            }
        }
    }
    out
}
