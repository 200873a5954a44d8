//! Jet-valued assembly of `𝒢(s) = Σ_n Γ(1−s−n) U_n(s;α) B_n(s)`.

use super::source::{Source, TermData};
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::proper_time::kernel::{czero4, kernel_prefactor, CMat4};
use crate::proper_time::{alpha_jet, gamma_jet, prefactor_jet, SJet};
use crate::tensor::Mat4;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A 4×4 array of jets.
pub type JetTensor = Vec<Vec<SJet>>;

/// Working order in `s`; two orders suffice for one pole and the `s²` term.
pub const JET_ORDER: i32 = 2;

fn map2(f: impl Fn(usize, usize) -> Result<SJet>) -> Result<JetTensor> {
    (0..4).map(|mu| (0..4).map(|nu| f(mu, nu)).collect()).collect()
}

/// `B_n(s) = (σ/2)^n e^{sL} b_n √Δ`.
pub fn b_factor(t: &TermData, order: i32) -> Result<JetTensor> {
    let e = SJet::exp_sl(order);
    map2(|mu, nu| Ok(e.scale_re(t.f[mu][nu])))
}

fn mat_jet(m: &Mat4, mu: usize, nu: usize, order: i32) -> SJet {
    SJet::constant(Complex64::new(m[mu][nu], 0.0), order)
}

/// `U_n(s;α) B_n(s) = (2/σ) B_n + ((α^{s+1}−1)/((s+n)(s+1))) ∇_μ∇^λ B_{n λν′}`.
pub fn u_factor(t: &TermData, alpha: f64, order: i32) -> Result<JetTensor> {
    let b = b_factor(t, order)?;
    let e = SJet::exp_sl(order);
    let a = alpha_jet(alpha, t.n, order)?;
    let two_over_sigma = 2.0 / t.sigma;
    map2(|mu, nu| {
        let delta = b[mu][nu].scale_re(two_over_sigma);
        if alpha == 1.0 {
            return Ok(delta);
        }
        let poly = &(&mat_jet(&t.x0, mu, nu, order) + &mat_jet(&t.x1, mu, nu, order).mul_s())
            + &mat_jet(&t.x2, mu, nu, order).mul_s().mul_s();
        let grad = a.try_mul(&e.try_mul(&poly)?)?;
        Ok(&delta + &grad)
    })
}

/// `Γ(1−s−n) U_n B_n` for one `n`.
pub fn calg_term(t: &TermData, alpha: f64, order: i32) -> Result<JetTensor> {
    let g = gamma_jet(t.n, order)?;
    let u = u_factor(t, alpha, order)?;
    map2(|mu, nu| g.try_mul(&u[mu][nu]))
}

/// `𝒢(s)` summed over `n ≤ N`.
pub fn assemble_calg(model: &MetricModel, x: &SpacetimePoint, xp: &SpacetimePoint, alpha: f64, order: usize) -> Result<JetTensor> {
    let src = Source::new(model, order)?;
    let mut total: Option<JetTensor> = None;
    for n in 0..=order {
        let t = src.term(x, xp, n, alpha != 1.0)?;
        let term = calg_term(&t, alpha, JET_ORDER)?;
        total = Some(match total {
            None => term,
            Some(acc) => acc.iter().zip(&term).map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| a + b).collect()).collect(),
        });
    }
    total.ok_or_else(|| Error::Domain("empty sum".into()))
}

/// Symbolic `iε` tag carried with every expansion.
pub const EPSILON_PRESCRIPTION: &str = "sigma -> sigma + i*epsilon";

/// Local asymptotics `G ∼ A/σ + C log(σ/2) + F`, with the surviving `1/s`
/// residue reported separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenExpansion {
    pub alpha: f64,
    pub mu_a: f64,
    pub order: usize,
    pub sigma: f64,
    /// `log(σ/2)` at the pair.
    pub log_sigma_half: f64,
    /// `σ ×` the `n = 0` contribution: the coefficient of `1/σ`.
    pub inverse_sigma: CMat4,
    /// The part of `inverse_sigma` coming from the `δ` piece of `U_0`.
    pub inverse_sigma_minimal: CMat4,
    /// Coefficient of `log(σ/2)`.
    pub log: CMat4,
    /// Remaining finite part (`n ≥ 1` terms at `L⁰`).
    pub finite: CMat4,
    /// Surviving `1/s` residue.
    pub residual_pole: CMat4,
    /// Largest coefficient of `L²` or higher in the limit (should vanish).
    pub higher_log_max: f64,
    pub epsilon_prescription: String,
    pub derivative_error: f64,
    pub exact_derivatives: bool,
}

impl GreenExpansion {
    /// `A/σ + C L + F` at the pair.
    pub fn total(&self) -> CMat4 {
        std::array::from_fn(|mu| {
            std::array::from_fn(|nu| {
                self.inverse_sigma[mu][nu] / self.sigma + self.log[mu][nu] * self.log_sigma_half + self.finite[mu][nu]
            })
        })
    }
}

fn cadd(a: &mut CMat4, mu: usize, nu: usize, v: Complex64) {
    a[mu][nu] += v;
}

/// `G ∼ (i/16π²) lim_{s→0} μ_A^{2s}/Γ(s+1) 𝒢(s)`, sorted into buckets.
pub fn green_asymptotics(
    model: &MetricModel,
    x: &SpacetimePoint,
    xp: &SpacetimePoint,
    alpha: f64,
    order: usize,
    mu_a: f64,
) -> Result<GreenExpansion> {
    if alpha <= 0.0 {
        return Err(Error::Domain(format!("gauge parameter must be positive, got {alpha}")));
    }
    let src = Source::new(model, order)?;
    let pre = prefactor_jet(mu_a, JET_ORDER)?;
    let c = kernel_prefactor();
    let mut out = GreenExpansion {
        alpha,
        mu_a,
        order,
        sigma: 0.0,
        log_sigma_half: 0.0,
        inverse_sigma: czero4(),
        inverse_sigma_minimal: czero4(),
        log: czero4(),
        finite: czero4(),
        residual_pole: czero4(),
        higher_log_max: 0.0,
        epsilon_prescription: EPSILON_PRESCRIPTION.into(),
        derivative_error: 0.0,
        exact_derivatives: src.is_exact(),
    };
    for n in 0..=order {
        let t = src.term(x, xp, n, alpha != 1.0)?;
        out.sigma = t.sigma;
        out.log_sigma_half = t.big_l;
        out.derivative_error = out.derivative_error.max(t.error);
        let term = calg_term(&t, alpha, JET_ORDER)?;
        for mu in 0..4 {
            for nu in 0..4 {
                let lim = pre.try_mul(&term[mu][nu])?.limit_s0()?;
                let at = |v: &[Complex64], l: usize| v.get(l).copied().unwrap_or_default() * c;
                cadd(&mut out.residual_pole, mu, nu, at(&lim.residue, 0));
                cadd(&mut out.log, mu, nu, at(&lim.finite, 1));
                for l in 2..lim.finite.len() {
                    out.higher_log_max = out.higher_log_max.max(at(&lim.finite, l).norm());
                }
                if n == 0 {
                    cadd(&mut out.inverse_sigma, mu, nu, at(&lim.finite, 0) * t.sigma);
                    out.inverse_sigma_minimal[mu][nu] = c * 2.0 * t.f[mu][nu];
                } else {
                    cadd(&mut out.finite, mu, nu, at(&lim.finite, 0));
                }
            }
        }
    }
    Ok(out)
}
