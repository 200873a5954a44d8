//! Covariant derivatives of sampled tensor fields.
//!
//! A field is a closure returning a flattened tensor whose leading `lower`
//! indices are covariant slots at the evaluation point, followed by an inert
//! block of length `inert` (for two-point tensors: the primed slots, which a
//! derivative at `x` does not see). Derivative indices are appended at the end,
//! so `second[(I, J, α, β)]` is `T_{I J ; α β} = ∇_β ∇_α T_{I J}`.

use crate::geometry::{Connection, MetricModel, SpacetimePoint};
use crate::numerics::stencil::{partials, StencilOptions};
use crate::scalar::{Jet, Scalar};
use crate::tensor::Vec4;
use crate::Result;

#[derive(Clone, Debug)]
pub struct CovariantDerivative {
    pub value: Vec<f64>,
    pub first: Vec<f64>,
    pub second: Option<Vec<f64>>,
    pub error: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct FieldShape {
    pub lower: usize,
    pub inert: usize,
}

impl FieldShape {
    pub fn len(&self) -> usize {
        4usize.pow(self.lower as u32) * self.inert
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn digits(&self, flat: usize) -> (Vec<usize>, usize) {
        let inert = flat % self.inert;
        let mut rest = flat / self.inert;
        let mut d = vec![0; self.lower];
        for s in (0..self.lower).rev() {
            d[s] = rest % 4;
            rest /= 4;
        }
        (d, inert)
    }

    fn index(&self, digits: &[usize], inert: usize) -> usize {
        digits.iter().fold(0, |acc, &v| acc * 4 + v) * self.inert + inert
    }
}

/// Apply the connection terms of one derivative to `∂_α T`:
/// `∇_α T_I = ∂_α T_I − Σ_s Γ^λ_{α i_s} T_{I[s→λ]}`.
fn connect<S: Scalar>(shape: FieldShape, gam: &[[[S; 4]; 4]; 4], t: &[S], dt: &[Vec<S>]) -> Vec<S> {
    let n = shape.len();
    let mut out = Vec::with_capacity(n * 4);
    for flat in 0..n {
        let (dig, inert) = shape.digits(flat);
        for a in 0..4 {
            let mut v = dt[a][flat];
            for s in 0..shape.lower {
                let mut d2 = dig.clone();
                for l in 0..4 {
                    d2[s] = l;
                    v -= gam[l][a][dig[s]] * t[shape.index(&d2, inert)];
                }
            }
            out.push(v);
        }
    }
    out
}

/// Second covariant derivative from coordinate partials and the connection.
fn connect2<S: Scalar>(
    shape: FieldShape,
    gam: &[[[S; 4]; 4]; 4],
    dgam: &[[[[S; 4]; 4]; 4]; 4],
    t: &[S],
    d1: &[Vec<S>],
    d2: &[Vec<Vec<S>>],
    first: &[S],
) -> Vec<S> {
    let n = shape.len();
    let mut out = Vec::with_capacity(n * 16);
    for flat in 0..n {
        let (dig, inert) = shape.digits(flat);
        for a in 0..4 {
            for b in 0..4 {
                // ∂_b (∇_a T_I)
                let mut v = d2[a][b][flat];
                for s in 0..shape.lower {
                    let mut dd = dig.clone();
                    for l in 0..4 {
                        dd[s] = l;
                        let j = shape.index(&dd, inert);
                        v -= dgam[l][a][dig[s]][b] * t[j] + gam[l][a][dig[s]] * d1[b][j];
                    }
                }
                // − Γ^k_{b a} ∇_k T_I
                for k in 0..4 {
                    v -= gam[k][b][a] * first[flat * 4 + k];
                }
                // − Σ_s Γ^l_{b i_s} ∇_a T_{I[s→l]}
                for s in 0..shape.lower {
                    let mut dd = dig.clone();
                    for l in 0..4 {
                        dd[s] = l;
                        v -= gam[l][b][dig[s]] * first[shape.index(&dd, inert) * 4 + a];
                    }
                }
                out.push(v);
            }
        }
    }
    out
}

/// `covariant_derivative`: first (and optionally second) covariant derivatives
/// by finite differences of a sampled field.
pub fn covariant_derivative<F>(
    model: &MetricModel,
    field: &F,
    shape: FieldShape,
    x: &SpacetimePoint,
    second: bool,
    opts: StencilOptions,
) -> Result<CovariantDerivative>
where
    F: Fn(&SpacetimePoint) -> Result<Vec<f64>> + Sync,
{
    let loc = model.local(x)?;
    let sampler = |c: &Vec4| field(&SpacetimePoint { chart_id: x.chart_id, coords: *c });
    let p = partials(&sampler, &x.coords, second, opts)?;
    let t = &p.value;
    let first = connect(shape, &loc.christoffel, t, &p.d1);
    let second = second.then(|| connect2(shape, &loc.christoffel, &loc.dchristoffel, t, &p.d1, &p.d2, &first));
    Ok(CovariantDerivative { value: t.clone(), first, second, error: p.error })
}

/// Exact covariant derivatives in any scalar type.
#[derive(Clone, Debug)]
pub struct CovariantJet<S> {
    pub value: Vec<S>,
    pub first: Vec<S>,
    pub second: Vec<S>,
    pub connection: Connection<S>,
}

/// First and second covariant derivatives of a field written against jets.
///
/// The field is evaluated once on second-order jets seeded at `x`, so the
/// result carries no truncation error. Layout as in [`covariant_derivative`].
pub fn covariant_exact<S, F>(model: &MetricModel, field: F, shape: FieldShape, x: &[S; 4]) -> Result<CovariantJet<S>>
where
    S: Scalar<Base = f64>,
    F: Fn(&[Jet<S, 4>; 4]) -> Result<Vec<Jet<S, 4>>>,
{
    let conn = model.connection(x)?;
    let xj: [Jet<S, 4>; 4] = std::array::from_fn(|i| Jet::var(x[i], i));
    let vals = field(&xj)?;
    let t: Vec<S> = vals.iter().map(|j| j.v).collect();
    let d1: Vec<Vec<S>> = (0..4).map(|a| vals.iter().map(|j| j.g[a]).collect()).collect();
    let d2: Vec<Vec<Vec<S>>> =
        (0..4).map(|a| (0..4).map(|b| vals.iter().map(|j| j.h[a][b]).collect()).collect()).collect();
    let first = connect(shape, &conn.christoffel, &t, &d1);
    let second = connect2(shape, &conn.christoffel, &conn.dchristoffel, &t, &d1, &d2, &first);
    Ok(CovariantJet { value: t, first, second, connection: conn })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor;

    #[test]
    fn metric_is_covariantly_constant() {
        let m = MetricModel::sphere(1.0);
        let field = |p: &SpacetimePoint| Ok(tensor::flat2(&m.metric_at(p)?.g));
        let shape = FieldShape { lower: 2, inert: 1 };
        for c in [[0.1, 0.2, -0.3, 0.4], [0.9, -0.5, 0.0, 0.3]] {
            let d = covariant_derivative(&m, &field, shape, &SpacetimePoint::new(c), true, StencilOptions::default())
                .unwrap();
            let worst = d.first.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            assert!(worst < 1e-9, "∇g = {worst}");
            let worst2 = d.second.unwrap().iter().fold(0.0f64, |a, v| a.max(v.abs()));
            assert!(worst2 < 1e-7, "∇∇g = {worst2}");
        }
    }

    #[test]
    fn hessian_of_flat_world_function_is_eta() {
        let m = MetricModel::minkowski();
        let xp = [0.3, 0.1, -0.2, 0.5];
        let eta = m.signature.eta();
        let sigma = |p: &SpacetimePoint| {
            Ok(vec![0.5 * (0..4).map(|i| eta[i] * (p.coords[i] - xp[i]).powi(2)).sum::<f64>()])
        };
        let shape = FieldShape { lower: 0, inert: 1 };
        let d = covariant_derivative(&m, &sigma, shape, &SpacetimePoint::new([1.0, 2.0, 0.0, -1.0]), true, StencilOptions::default())
            .unwrap();
        let h = d.second.unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { eta[a] } else { 0.0 };
                assert!((h[a * 4 + b] - want).abs() < 1e-9);
            }
        }
        // ∇∇ of a linear scalar vanishes
        let lin = |p: &SpacetimePoint| Ok(vec![2.0 * p.coords[0] - p.coords[3]]);
        let d = covariant_derivative(&m, &lin, shape, &SpacetimePoint::new([1.0, 2.0, 0.0, -1.0]), true, StencilOptions::default())
            .unwrap();
        assert!(d.second.unwrap().iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn exact_and_stencil_routes_agree() {
        let m = MetricModel::conformal_bump(0.4, 0.7, [0.1, 0.0, 0.0, 0.2], crate::geometry::Signature::Riemannian);
        let x = [0.2, -0.1, 0.3, 0.0];
        // a covector field written against generic scalars
        fn v<S: Scalar<Base = f64>>(p: &[S; 4]) -> Vec<S> {
            vec![p[0] * p[1], p[2].sin(), p[3].exp() * p[0], (p[1] * p[1]).scale(0.5)]
        }
        let shape = FieldShape { lower: 1, inert: 1 };
        let ex = covariant_exact(&m, |p| Ok(v(p)), shape, &x).unwrap();
        let fd = covariant_derivative(&m, &|p: &SpacetimePoint| Ok(v(&p.coords)), shape, &SpacetimePoint::new(x), true, StencilOptions::default())
            .unwrap();
        for (a, b) in ex.first.iter().zip(&fd.first) {
            assert!((a - b).abs() < 1e-9);
        }
        for (a, b) in ex.second.iter().zip(fd.second.as_ref().unwrap()) {
            assert!((a - b).abs() < 1e-7);
        }
    }
}
