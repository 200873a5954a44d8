//! Closed-form two-point functions for flat space and the round four-sphere.
//!
//! On the sphere everything is written through the embedding
//! `X = a (2y, 1 − |y|²) / (1 + |y|²)`, `y = x / 2a`, and the variable
//! `c = |X − X′|² / 4a² = sin²(θ/2)`. The functions of `c` used below are
//! analytic at `c = 0`, so jets evaluated at coincidence stay finite.

use super::{PairData, TwoPoint};
use crate::geometry::{MetricFamily, MetricModel, SpacetimePoint};
use crate::scalar::{Jet4, Scalar};
use crate::tensor::Mat4;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm {
    Flat { eta: [f64; 4] },
    Sphere { radius: f64 },
}

/// Two-point data with entries in a generic scalar.
#[derive(Clone, Copy, Debug)]
pub struct PairG<S> {
    pub sigma: S,
    pub grad_x: [S; 4],
    pub grad_xp: [S; 4],
    pub propagator: [[S; 4]; 4],
    pub sqrt_delta: S,
}

const SERIES_CUT: f64 = 0.04;
const TERMS: usize = 28;

fn binom_central(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * (k + j) as f64 / j as f64)
}

fn poly<S: Scalar<Base = f64>>(coef: &[f64], c: S) -> S {
    coef.iter().rev().fold(S::k(0.0), |acc, &a| acc * c + S::cst(a))
}

/// `θ² = 4 asin²(√c)`.
fn theta2<S: Scalar<Base = f64>>(c: S) -> S {
    if c.value() < SERIES_CUT {
        let mut coef = vec![0.0; TERMS];
        for (k, a) in coef.iter_mut().enumerate().skip(1) {
            *a = 2.0 * 4f64.powi(k as i32) / ((k * k) as f64 * binom_central(k));
        }
        poly(&coef, c)
    } else {
        let t = c.sqrt().asin();
        t * t * S::k(4.0)
    }
}

/// `θ / sin θ = asin(√c) / (√c √(1 − c))`.
fn theta_over_sin<S: Scalar<Base = f64>>(c: S) -> S {
    if c.value() < SERIES_CUT {
        let a: Vec<f64> = (0..TERMS).map(|k| binom_central(k) / (4f64.powi(k as i32) * (2 * k + 1) as f64)).collect();
        let b: Vec<f64> = (0..TERMS).map(|k| binom_central(k) / 4f64.powi(k as i32)).collect();
        let coef: Vec<f64> = (0..TERMS).map(|n| (0..=n).map(|k| a[k] * b[n - k]).sum()).collect();
        poly(&coef, c)
    } else {
        let s = c.sqrt();
        s.asin() / (s * (S::k(1.0) - c).sqrt())
    }
}

fn embedding<S: Scalar<Base = f64>>(x: &[S; 4], a: f64) -> ([S; 5], [[S; 5]; 4]) {
    let y: [S; 4] = std::array::from_fn(|i| x[i].scale(0.5 / a));
    let y2 = y.iter().fold(S::k(0.0), |acc, &v| acc + v * v);
    let w = (S::k(1.0) + y2).recip();
    let mut pos = [S::k(0.0); 5];
    for i in 0..4 {
        pos[i] = y[i] * w * S::k(2.0 * a);
    }
    pos[4] = (S::k(1.0) - y2) * w * S::cst(a);
    let mut e = [[S::k(0.0); 5]; 4];
    for mu in 0..4 {
        for i in 0..4 {
            let mut v = -(y[i] * y[mu] * w * w * S::k(2.0));
            if i == mu {
                v += w;
            }
            e[mu][i] = v;
        }
        e[mu][4] = -(y[mu] * w * w * S::k(2.0));
    }
    (pos, e)
}

fn dot5<S: Scalar<Base = f64>>(a: &[S; 5], b: &[S; 5]) -> S {
    (0..5).fold(S::k(0.0), |acc, i| acc + a[i] * b[i])
}

impl ClosedForm {
    pub fn for_model(model: &MetricModel) -> Option<Self> {
        match model.family {
            MetricFamily::Minkowski | MetricFamily::EuclideanFlat => Some(Self::Flat { eta: model.signature.eta() }),
            MetricFamily::RoundSphereS4 { radius } => Some(Self::Sphere { radius }),
            _ => None,
        }
    }

    /// Evaluate at `(x, x′)` in any scalar type.
    pub fn eval<S: Scalar<Base = f64>>(&self, x: &[S; 4], xp: &[S; 4]) -> PairG<S> {
        match *self {
            Self::Flat { eta } => {
                let d: [S; 4] = std::array::from_fn(|i| x[i] - xp[i]);
                let sigma = (0..4).fold(S::k(0.0), |acc, i| acc + d[i] * d[i].scale(eta[i])).scale(0.5);
                let mut propagator = [[S::k(0.0); 4]; 4];
                for i in 0..4 {
                    propagator[i][i] = S::cst(eta[i]);
                }
                PairG {
                    sigma,
                    grad_x: std::array::from_fn(|i| d[i].scale(eta[i])),
                    grad_xp: std::array::from_fn(|i| -d[i].scale(eta[i])),
                    propagator,
                    sqrt_delta: S::k(1.0),
                }
            }
            Self::Sphere { radius: a } => {
                let (p, e) = embedding(x, a);
                let (pp, ep) = embedding(xp, a);
                let diff: [S; 5] = std::array::from_fn(|i| p[i] - pp[i]);
                let c = dot5(&diff, &diff).scale(0.25 / (a * a));
                let q = theta_over_sin(c);
                let sigma = theta2(c).scale(0.5 * a * a);
                let grad_x = std::array::from_fn(|mu| -(q * dot5(&e[mu], &pp)));
                let grad_xp = std::array::from_fn(|nu| -(q * dot5(&ep[nu], &p)));
                let denom = (S::k(2.0) - c.scale(2.0)).scale(a * a);
                let propagator = std::array::from_fn(|mu| {
                    std::array::from_fn(|nu| dot5(&e[mu], &ep[nu]) - dot5(&e[mu], &pp) * dot5(&ep[nu], &p) / denom)
                });
                PairG { sigma, grad_x, grad_xp, propagator, sqrt_delta: q.powf(1.5) }
            }
        }
    }
}

impl TwoPoint for ClosedForm {
    fn pair(&self, x: &SpacetimePoint, xp: &SpacetimePoint) -> Result<PairData> {
        let base = self.eval(&x.coords, &xp.coords);
        let xj: [Jet4; 4] = std::array::from_fn(|i| Jet4::constant(x.coords[i]));
        let jets = self.eval(&xj, &Jet4::vars(xp.coords));
        let mixed: Mat4 = std::array::from_fn(|mu| std::array::from_fn(|nu| jets.grad_x[mu].g[nu]));
        Ok(PairData {
            sigma: base.sigma,
            grad_x: base.grad_x,
            grad_xp: base.grad_xp,
            mixed,
            propagator: base.propagator,
            van_vleck: base.sqrt_delta * base.sqrt_delta,
        })
    }

    fn transport_data(&self, x: &SpacetimePoint, xp: &SpacetimePoint) -> Result<(f64, Mat4)> {
        let p = self.eval(&x.coords, &xp.coords);
        Ok((p.sqrt_delta, p.propagator))
    }
}
