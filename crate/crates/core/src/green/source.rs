//! Local data of `B_n` at `x`: the field `F_n = (σ/2)^n √Δ b_n`, the log
//! `L = log(σ/2)` and the covariant derivatives entering `∇_μ∇^λ(e^{sL} F_{n λν′})`.

use crate::bitensor::{provider, ClosedForm, PairG, TwoPoint};
use crate::covariant::{covariant_derivative, covariant_exact, FieldShape};
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::numerics::stencil::StencilOptions;
use crate::scalar::{Jet, Scalar};
use crate::sdw::isotropic::{IsotropicSdw, DEFAULT_DEGREE};
use crate::sdw::transport::{b_coefficient, TransportOptions};
use crate::tensor::Mat4;
use crate::{Error, Result};
use serde::Serialize;

/// `∇_μ∇^λ(e^{sL} F_λν′) = e^{sL}(X₀ + s X₁ + s² X₂)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermData {
    pub n: usize,
    pub sigma: f64,
    pub big_l: f64,
    pub f: Mat4,
    pub x0: Mat4,
    pub x1: Mat4,
    pub x2: Mat4,
    /// Derivative error estimate (0 on the exact route).
    pub error: f64,
}

const F_SHAPE: FieldShape = FieldShape { lower: 1, inert: 4 };
const L_SHAPE: FieldShape = FieldShape { lower: 0, inert: 1 };

/// How `b_n` and its neighbourhood are obtained.
pub enum Source<'a> {
    /// Closed-form two-point functions with isotropic coefficients; exact jets.
    Exact { model: &'a MetricModel, closed: ClosedForm, sdw: IsotropicSdw<f64> },
    /// Numerical two-point data, isotropic profiles when available, transport
    /// otherwise; stencil derivatives.
    Numeric { model: &'a MetricModel, pairs: Box<dyn TwoPoint + 'a>, sdw: Option<IsotropicSdw<f64>>, stencil: StencilOptions },
}

impl<'a> Source<'a> {
    pub fn new(model: &'a MetricModel, order: usize) -> Result<Self> {
        let sdw = match model.constant_curvature() {
            Some(k) => Some(IsotropicSdw::new(k, order, DEFAULT_DEGREE)?),
            None => None,
        };
        Ok(match (ClosedForm::for_model(model), sdw) {
            (Some(closed), Some(sdw)) => Source::Exact { model, closed, sdw },
            (_, sdw) => Source::Numeric { model, pairs: provider(model), sdw, stencil: StencilOptions::default() },
        })
    }

    pub fn model(&self) -> &MetricModel {
        match self {
            Source::Exact { model, .. } | Source::Numeric { model, .. } => model,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Source::Exact { .. })
    }

    /// `(σ, √Δ, b_n)` at a pair.
    pub fn pair_b(&self, x: &SpacetimePoint, xp: &SpacetimePoint, n: usize) -> Result<(f64, f64, Mat4)> {
        match self {
            Source::Exact { closed, sdw, .. } => {
                let p: PairG<f64> = closed.eval(&x.coords, &xp.coords);
                Ok((p.sigma, p.sqrt_delta, sdw.b(n, &p)))
            }
            Source::Numeric { model, pairs, sdw, .. } => {
                let p = pairs.pair(x, xp)?;
                let pg = PairG { sigma: p.sigma, grad_x: p.grad_x, grad_xp: p.grad_xp, propagator: p.propagator, sqrt_delta: p.van_vleck.sqrt() };
                let b = match sdw {
                    Some(s) => s.b(n, &pg),
                    None => b_coefficient(model, pairs.as_ref(), x, xp, n, &TransportOptions::default())?.0,
                };
                Ok((p.sigma, pg.sqrt_delta, b))
            }
        }
    }

    fn field_f<S: Scalar<Base = f64>>(closed: &ClosedForm, sdw: &IsotropicSdw<f64>, x: &[S; 4], xp: &[f64; 4], n: usize) -> Vec<S> {
        let xpj: [S; 4] = std::array::from_fn(|i| S::cst(xp[i]));
        let p = closed.eval(x, &xpj);
        let b = sdw.b(n, &p);
        let w = p.sigma.scale(0.5).powi(n as i32) * p.sqrt_delta;
        b.iter().flatten().map(|&v| v * w).collect()
    }

    /// Local data of term `n`; derivatives only when `derivs` is set.
    pub fn term(&self, x: &SpacetimePoint, xp: &SpacetimePoint, n: usize, derivs: bool) -> Result<TermData> {
        let (sigma, sq, b) = self.pair_b(x, xp, n)?;
        if sigma == 0.0 {
            return Err(Error::NullSeparation);
        }
        if sigma < 0.0 {
            return Err(Error::Domain("local asymptotics in this form need σ > 0".into()));
        }
        let w = (0.5 * sigma).powi(n as i32) * sq;
        let f: Mat4 = std::array::from_fn(|m| std::array::from_fn(|v| b[m][v] * w));
        let zero = [[0.0; 4]; 4];
        let mut out = TermData { n, sigma, big_l: (0.5 * sigma).ln(), f, x0: zero, x1: zero, x2: zero, error: 0.0 };
        if !derivs {
            return Ok(out);
        }
        let (ff, fs, ll, ls, inv, error) = match self {
            Source::Exact { model, closed, sdw } => {
                let df = covariant_exact(model, |p: &[Jet<f64, 4>; 4]| Ok(Self::field_f(closed, sdw, p, &xp.coords, n)), F_SHAPE, &x.coords)?;
                let dl = covariant_exact(
                    model,
                    |p: &[Jet<f64, 4>; 4]| {
                        let xpj: [Jet<f64, 4>; 4] = std::array::from_fn(|i| Jet::constant(xp.coords[i]));
                        Ok(vec![closed.eval(p, &xpj).sigma.scale(0.5).ln()])
                    },
                    L_SHAPE,
                    &x.coords,
                )?;
                (df.first, df.second, dl.first, dl.second, df.connection.inv, 0.0)
            }
            Source::Numeric { model, stencil, .. } => {
                let field = |p: &SpacetimePoint| {
                    let (s, q, b) = self.pair_b(p, xp, n)?;
                    let w = (0.5 * s).powi(n as i32) * q;
                    Ok(b.iter().flatten().map(|v| v * w).collect::<Vec<f64>>())
                };
                let lfield = |p: &SpacetimePoint| Ok(vec![(0.5 * self.pair_b(p, xp, 0)?.0).ln()]);
                let df = covariant_derivative(model, &field, F_SHAPE, x, true, *stencil)?;
                let dl = covariant_derivative(model, &lfield, L_SHAPE, x, true, *stencil)?;
                let inv = model.metric_at(x)?.inv;
                let err = df.error.max(dl.error);
                (df.first, df.second.expect("requested"), dl.first, dl.second.expect("requested"), inv, err)
            }
        };
        let raise = |v: &[f64]| -> [f64; 4] { std::array::from_fn(|l| (0..4).map(|k| inv[l][k] * v[k]).sum()) };
        let dl_up = raise(&ll);
        for mu in 0..4 {
            for nu in 0..4 {
                let (mut x0, mut x1, mut x2) = (0.0, 0.0, 0.0);
                let mut div = 0.0;
                for l in 0..4 {
                    let flat = l * 4 + nu;
                    let mut ddl = 0.0;
                    for k in 0..4 {
                        x0 += inv[l][k] * fs[(flat * 4 + k) * 4 + mu];
                        div += inv[l][k] * ff[flat * 4 + k];
                        ddl += inv[l][k] * ls[k * 4 + mu];
                    }
                    x1 += dl_up[l] * ff[flat * 4 + mu] + ddl * f[l][nu];
                    x2 += ll[mu] * dl_up[l] * f[l][nu];
                }
                x1 += ll[mu] * div;
                out.x0[mu][nu] = x0;
                out.x1[mu][nu] = x1;
                out.x2[mu][nu] = x2;
            }
        }
        out.error = error;
        Ok(out)
    }
}
