//! Bitensor fields and exact covariant derivatives at either point.
//!
//! A [`BiField`] is a tensor with indices at `x` and `x′` that can be evaluated
//! in any scalar type. [`Grad`] appends one covariant derivative index at the
//! chosen point by seeding first-order duals there and subtracting the
//! connection terms for every index living at that point. Nesting `Grad`
//! gives `T_{..;abc′}` exactly, with no extrapolation, including at `x′ = x`
//! when the underlying closed form is analytic there.
//!
//! Components are stored row-major over the index slots, first slot most
//! significant; a derivative index is appended as the last slot, so
//! `T_{;ab}` means `∇_b ∇_a T`.

use super::closed::ClosedForm;
use crate::geometry::MetricModel;
use crate::scalar::{Dual, Scalar};
use crate::sdw::isotropic::IsotropicSdw;
use crate::{Error, Result};

/// Point an index lives at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    X,
    Xp,
}

pub trait BiField {
    fn slots(&self) -> Vec<Slot>;
    fn eval<S: Scalar<Base = f64>>(&self, x: &[S; 4], xp: &[S; 4]) -> Result<Vec<S>>;
}

/// Covariant derivative of `inner` at `at`.
pub struct Grad<'m, F> {
    pub inner: F,
    pub at: Slot,
    pub model: &'m MetricModel,
}

impl<'m, F: BiField> Grad<'m, F> {
    pub fn new(model: &'m MetricModel, inner: F, at: Slot) -> Self {
        Self { inner, at, model }
    }
}

impl<F: BiField> BiField for Grad<'_, F> {
    fn slots(&self) -> Vec<Slot> {
        let mut s = self.inner.slots();
        s.push(self.at);
        s
    }

    fn eval<S: Scalar<Base = f64>>(&self, x: &[S; 4], xp: &[S; 4]) -> Result<Vec<S>> {
        let (xd, xpd, point) = match self.at {
            Slot::X => (Dual::vars(x), Dual::consts(xp), x),
            Slot::Xp => (Dual::consts(x), Dual::vars(xp), xp),
        };
        let t = self.inner.eval::<Dual<S>>(&xd, &xpd)?;
        let gam = self.model.christoffel::<S>(point)?;
        let slots = self.inner.slots();
        let rank = slots.len();
        let mut out = Vec::with_capacity(t.len() * 4);
        for flat in 0..t.len() {
            for a in 0..4 {
                let mut v = t[flat].g[a];
                for (pos, s) in slots.iter().enumerate() {
                    if *s != self.at {
                        continue;
                    }
                    let stride = 4usize.pow((rank - 1 - pos) as u32);
                    let i = (flat / stride) % 4;
                    let base = flat - i * stride;
                    for l in 0..4 {
                        v -= gam[l][a][i] * t[base + l * stride].v;
                    }
                }
                out.push(v);
            }
        }
        Ok(out)
    }
}

/// Apply covariant derivatives in order (innermost first), at most four.
pub fn derivative<F: BiField>(model: &MetricModel, field: F, order: &[Slot], x: &[f64; 4], xp: &[f64; 4]) -> Result<Vec<f64>> {
    let g = |f, s| Grad::new(model, f, s);
    match *order {
        [] => field.eval::<f64>(x, xp),
        [a] => g(field, a).eval::<f64>(x, xp),
        [a, b] => Grad::new(model, g(field, a), b).eval::<f64>(x, xp),
        [a, b, c] => Grad::new(model, Grad::new(model, g(field, a), b), c).eval::<f64>(x, xp),
        [a, b, c, d] => Grad::new(model, Grad::new(model, Grad::new(model, g(field, a), b), c), d).eval::<f64>(x, xp),
        _ => Err(Error::InvalidParameters("at most four derivative indices".into())),
    }
}

/// Two-point building blocks on a closed-form geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kind {
    Sigma,
    SqrtDelta,
    Propagator,
    /// `(σ/2)^power Δ^{1/2} b_n`, or without `Δ^{1/2}` when `with_delta` is false.
    Sdw { n: usize, power: i32, with_delta: bool },
}

#[derive(Clone, Copy, Debug)]
pub struct ClosedField<'a> {
    pub closed: &'a ClosedForm,
    pub sdw: &'a IsotropicSdw<f64>,
    pub kind: Kind,
}

impl BiField for ClosedField<'_> {
    fn slots(&self) -> Vec<Slot> {
        match self.kind {
            Kind::Sigma | Kind::SqrtDelta => vec![],
            Kind::Propagator | Kind::Sdw { .. } => vec![Slot::X, Slot::Xp],
        }
    }

    fn eval<S: Scalar<Base = f64>>(&self, x: &[S; 4], xp: &[S; 4]) -> Result<Vec<S>> {
        let p = self.closed.eval(x, xp);
        Ok(match self.kind {
            Kind::Sigma => vec![p.sigma],
            Kind::SqrtDelta => vec![p.sqrt_delta],
            Kind::Propagator => p.propagator.iter().flatten().copied().collect(),
            Kind::Sdw { n, power, with_delta } => {
                if n > self.sdw.order() {
                    return Err(Error::SeriesMissing(format!("b_{n}")));
                }
                let mut w = p.sigma.scale(0.5).powi(power);
                if with_delta {
                    w *= p.sqrt_delta;
                }
                self.sdw.b(n, &p).iter().flatten().map(|&c| w * c).collect()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SpacetimePoint;
    use crate::sdw::isotropic::DEFAULT_DEGREE;

    #[test]
    fn gradient_of_sigma_matches_closed_form() {
        let m = MetricModel::sphere(1.3);
        let cf = ClosedForm::for_model(&m).unwrap();
        let sdw = IsotropicSdw::new(1.0 / (1.3 * 1.3), 1, DEFAULT_DEGREE).unwrap();
        let f = ClosedField { closed: &cf, sdw: &sdw, kind: Kind::Sigma };
        let (x, xp) = ([0.1, 0.2, -0.1, 0.3], [0.4, -0.2, 0.0, 0.1]);
        let g = derivative(&m, f, &[Slot::X], &x, &xp).unwrap();
        let gp = derivative(&m, f, &[Slot::Xp], &x, &xp).unwrap();
        let p = cf.eval(&x, &xp);
        for i in 0..4 {
            assert!((g[i] - p.grad_x[i]).abs() < 1e-12);
            assert!((gp[i] - p.grad_xp[i]).abs() < 1e-12);
        }
        // σ^{;a} σ_{;a} = 2σ
        let inv = m.metric_at(&SpacetimePoint::new(x)).unwrap().inv;
        let n: f64 = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| inv[a][b] * g[a] * g[b]).sum();
        assert!((n - 2.0 * p.sigma).abs() < 1e-12);
    }

    #[test]
    fn propagator_is_transported() {
        // σ^{;c} g_{ab′;c} = 0 away from coincidence
        let m = MetricModel::sphere(1.0);
        let cf = ClosedForm::for_model(&m).unwrap();
        let sdw = IsotropicSdw::new(1.0, 1, DEFAULT_DEGREE).unwrap();
        let f = ClosedField { closed: &cf, sdw: &sdw, kind: Kind::Propagator };
        let (x, xp) = ([0.3, 0.0, 0.2, -0.1], [-0.2, 0.1, 0.0, 0.4]);
        let d = derivative(&m, f, &[Slot::X], &x, &xp).unwrap();
        let p = cf.eval(&x, &xp);
        let inv = m.metric_at(&SpacetimePoint::new(x)).unwrap().inv;
        let up: Vec<f64> = (0..4).map(|c| (0..4).map(|k| inv[c][k] * p.grad_x[k]).sum()).collect();
        for ab in 0..16 {
            let s: f64 = (0..4).map(|c| up[c] * d[ab * 4 + c]).sum();
            assert!(s.abs() < 1e-12, "{ab}: {s}");
        }
    }
}
