//! The truncated heat kernel as an exact field of `x` on closed-form models.
//!
//! `K̃_{μν′}(τ) = e^{iσ/2τ} √Δ Σ_{n≤N} (iτ)^{n−2} b_{n μν′}` without the
//! `i/16π²` prefactor and the density weights. Real and imaginary parts are
//! carried as separate real jets, laid out as `[μ][part][ν]`.

use crate::bitensor::{ClosedForm, PairG};
use crate::covariant::{covariant_exact, CovariantJet, FieldShape};
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::scalar::{Jet, Scalar};
use crate::sdw::isotropic::{IsotropicSdw, DEFAULT_DEGREE};
use crate::tensor::Vec4;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type CMat4 = [[Complex64; 4]; 4];

/// `i / 16π²`.
pub fn kernel_prefactor() -> Complex64 {
    Complex64::new(0.0, 1.0 / (16.0 * PI * PI))
}

pub fn czero4() -> CMat4 {
    [[Complex64::new(0.0, 0.0); 4]; 4]
}

pub const KERNEL_SHAPE: FieldShape = FieldShape { lower: 1, inert: 8 };

/// Exact kernel field anchored at `x′`.
#[derive(Clone, Debug)]
pub struct KernelField<'a> {
    pub model: &'a MetricModel,
    pub closed: ClosedForm,
    pub sdw: IsotropicSdw<f64>,
    pub xp: Vec4,
    pub order: usize,
}

impl<'a> KernelField<'a> {
    pub fn new(model: &'a MetricModel, xp: &SpacetimePoint, order: usize) -> Result<Self> {
        let closed = ClosedForm::for_model(model)
            .ok_or_else(|| Error::InvalidParameters("exact kernel fields need closed-form two-point functions".into()))?;
        let k = model.constant_curvature().expect("closed-form models are maximally symmetric");
        Ok(Self { model, closed, sdw: IsotropicSdw::new(k, order, DEFAULT_DEGREE)?, xp: xp.coords, order })
    }

    /// Field values at `x` in any scalar type.
    pub fn eval<S: Scalar<Base = f64>>(&self, x: &[S; 4], tau: Complex64) -> Vec<S> {
        let xp: [S; 4] = std::array::from_fn(|i| S::cst(self.xp[i]));
        let pair: PairG<S> = self.closed.eval(x, &xp);
        let w = Complex64::i() / (2.0 * tau);
        let amp = pair.sigma.scale(w.re).exp();
        let (ph_re, ph_im) = (amp * pair.sigma.scale(w.im).cos(), amp * pair.sigma.scale(w.im).sin());
        let mut s_re = [[S::k(0.0); 4]; 4];
        let mut s_im = [[S::k(0.0); 4]; 4];
        for n in 0..=self.order {
            let c = (Complex64::i() * tau).powi(n as i32 - 2);
            let b = self.sdw.b(n, &pair);
            for mu in 0..4 {
                for nu in 0..4 {
                    let v = b[mu][nu] * pair.sqrt_delta;
                    s_re[mu][nu] += v.scale(c.re);
                    s_im[mu][nu] += v.scale(c.im);
                }
            }
        }
        let mut out = vec![S::k(0.0); 32];
        for mu in 0..4 {
            for nu in 0..4 {
                out[mu * 8 + nu] = ph_re * s_re[mu][nu] - ph_im * s_im[mu][nu];
                out[mu * 8 + 4 + nu] = ph_re * s_im[mu][nu] + ph_im * s_re[mu][nu];
            }
        }
        out
    }

    /// Exact first and second covariant derivatives at `x`.
    pub fn covariant(&self, x: &Vec4, tau: Complex64) -> Result<CovariantJet<f64>> {
        covariant_exact(self.model, |p: &[Jet<f64, 4>; 4]| Ok(self.eval(p, tau)), KERNEL_SHAPE, x)
    }

    /// `K̃` as a complex matrix.
    pub fn value(&self, x: &Vec4, tau: Complex64) -> CMat4 {
        unpack(&self.eval(x, tau))
    }

    /// `∂_τ K̃`, differentiating the explicit τ-dependence.
    pub fn tau_derivative(&self, x: &Vec4, tau: Complex64) -> CMat4 {
        let pair: PairG<f64> = self.closed.eval(x, &self.xp);
        let phase = (Complex64::i() * pair.sigma / (2.0 * tau)).exp();
        let dphase = -Complex64::i() * pair.sigma / (2.0 * tau * tau);
        let mut out = czero4();
        for n in 0..=self.order {
            let c = (Complex64::i() * tau).powi(n as i32 - 2);
            let dc = c * (dphase + (n as f64 - 2.0) / tau);
            let b = self.sdw.b(n, &pair);
            for mu in 0..4 {
                for nu in 0..4 {
                    out[mu][nu] += phase * dc * b[mu][nu] * pair.sqrt_delta;
                }
            }
        }
        out
    }
}

/// `[μ][part][ν]` layout to a complex matrix.
pub fn unpack(v: &[f64]) -> CMat4 {
    std::array::from_fn(|mu| std::array::from_fn(|nu| Complex64::new(v[mu * 8 + nu], v[mu * 8 + 4 + nu])))
}

/// `∇_μ ∇^λ T_{λν′}` from the second derivatives in kernel layout.
pub fn grad_div(d: &CovariantJet<f64>) -> CMat4 {
    let inv = d.connection.inv;
    let mut out = czero4();
    for mu in 0..4 {
        for nu in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..4 {
                for k in 0..4 {
                    let (fr, fi) = (l * 8 + nu, l * 8 + 4 + nu);
                    let at = |f: usize| d.second[(f * 4 + k) * 4 + mu];
                    acc += inv[l][k] * Complex64::new(at(fr), at(fi));
                }
            }
            out[mu][nu] = acc;
        }
    }
    out
}

/// `□ T_{μν′}` from the second derivatives in kernel layout.
pub fn box_op(d: &CovariantJet<f64>) -> CMat4 {
    let inv = d.connection.inv;
    let mut out = czero4();
    for mu in 0..4 {
        for nu in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..4 {
                for b in 0..4 {
                    let at = |f: usize| d.second[(f * 4 + a) * 4 + b];
                    acc += inv[a][b] * Complex64::new(at(mu * 8 + nu), at(mu * 8 + 4 + nu));
                }
            }
            out[mu][nu] = acc;
        }
    }
    out
}

pub fn cfrobenius(m: &CMat4) -> f64 {
    m.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
