//! Metric catalog and exact curvature.
//!
//! Conventions, used everywhere in the crate:
//!
//! * `Γ^λ_{μν} = ½ g^{λκ}(∂_μ g_{κν} + ∂_ν g_{κμ} − ∂_κ g_{μν})`
//! * `R^λ_{μνρ} = ∂_ν Γ^λ_{μρ} − ∂_ρ Γ^λ_{μν} + Γ^λ_{νκ} Γ^κ_{μρ} − Γ^λ_{ρκ} Γ^κ_{μν}`
//! * `R_{μν} = R^λ_{μλν}`, `R = g^{μν} R_{μν}`
//!
//! With these the round sphere has `R_{μν} = (3/a²) g_{μν}` and `R = 12/a²`.
//! Derivatives of the metric come from second-order jets, so Christoffel
//! symbols and curvature are exact up to rounding.

use crate::scalar::{Dual, Jet, Scalar};
use crate::tensor::{self, Mat4, Tensor3, Tensor4, Vec4};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Signature {
    /// (+,−,−,−)
    Lorentzian,
    /// (+,+,+,+)
    Riemannian,
}

impl Signature {
    pub fn eta(self) -> Vec4 {
        match self {
            Signature::Lorentzian => [1.0, -1.0, -1.0, -1.0],
            Signature::Riemannian => [1.0; 4],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub chart_id: u8,
    pub coords: Vec4,
}

impl SpacetimePoint {
    pub fn new(coords: Vec4) -> Self {
        Self { chart_id: 0, coords }
    }

    pub fn offset(&self, d: &Vec4) -> Self {
        Self { chart_id: self.chart_id, coords: std::array::from_fn(|i| self.coords[i] + d[i]) }
    }
}

/// Metric components tabulated on a regular grid, interpolated with local
/// Lagrange polynomials of the given order in each coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMetric {
    pub origin: Vec4,
    pub spacing: Vec4,
    pub shape: [usize; 4],
    pub order: usize,
    /// Upper-triangle components `g00, g01, g02, g03, g11, g12, g13, g22, g23, g33`
    /// per node, nodes in row-major order of `shape`.
    pub values: Vec<[f64; 10]>,
}

const UPPER: [(usize, usize); 10] =
    [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

impl GridMetric {
    /// Tabulate a closure on the grid.
    pub fn sample(origin: Vec4, spacing: Vec4, shape: [usize; 4], order: usize, f: impl Fn(Vec4) -> Mat4) -> Self {
        let mut values = Vec::with_capacity(shape.iter().product());
        for i0 in 0..shape[0] {
            for i1 in 0..shape[1] {
                for i2 in 0..shape[2] {
                    for i3 in 0..shape[3] {
                        let idx = [i0, i1, i2, i3];
                        let x = std::array::from_fn(|d| origin[d] + spacing[d] * idx[d] as f64);
                        let g = f(x);
                        values.push(UPPER.map(|(a, b)| g[a][b]));
                    }
                }
            }
        }
        Self { origin, spacing, shape, order, values }
    }

    fn node(&self, idx: [usize; 4]) -> &[f64; 10] {
        let s = self.shape;
        &self.values[((idx[0] * s[1] + idx[1]) * s[2] + idx[2]) * s[3] + idx[3]]
    }

    fn stencil_start(&self, d: usize, u: f64) -> Result<usize> {
        let n = self.order + 1;
        if self.shape[d] < n || u < -1e-12 || u > (self.shape[d] - 1) as f64 + 1e-12 {
            return Err(Error::StencilOutOfDomain);
        }
        let centre = u - (n as f64 - 1.0) / 2.0;
        Ok((centre.round().max(0.0) as usize).min(self.shape[d] - n))
    }

    fn components<S: Scalar<Base = f64>>(&self, x: &[S; 4]) -> Result<[[S; 4]; 4]> {
        let n = self.order + 1;
        let mut starts = [0usize; 4];
        let mut basis: Vec<Vec<S>> = Vec::with_capacity(4);
        for d in 0..4 {
            let u = (x[d] - S::cst(self.origin[d])) * S::cst(1.0 / self.spacing[d]);
            let s0 = self.stencil_start(d, u.value())?;
            starts[d] = s0;
            let w: Vec<S> = (0..n)
                .map(|j| {
                    let mut l = S::k(1.0);
                    for m in 0..n {
                        if m != j {
                            let den = (j as f64) - (m as f64);
                            l = l * (u - S::cst((s0 + m) as f64)) * S::cst(1.0 / den);
                        }
                    }
                    l
                })
                .collect();
            basis.push(w);
        }
        let mut acc = [S::k(0.0); 10];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let w = basis[0][a] * basis[1][b] * basis[2][c] * basis[3][e];
                        let v = self.node([starts[0] + a, starts[1] + b, starts[2] + c, starts[3] + e]);
                        for k in 0..10 {
                            acc[k] += w * S::cst(v[k]);
                        }
                    }
                }
            }
        }
        let mut g = [[S::k(0.0); 4]; 4];
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            g[i][j] = acc[k];
            g[j][i] = acc[k];
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MetricFamily {
    Minkowski,
    EuclideanFlat,
    /// Round four-sphere of radius `a` in the stereographic chart
    /// `g = δ / (1 + |x|²/4a²)²`, unit metric at the chart origin.
    RoundSphereS4 { radius: f64 },
    /// Constant-curvature Lorentzian chart `g = η / (1 + H² η(x,x)/4)²`,
    /// normalized so that `R = 12 H²` in the curvature convention above.
    DeSitter { hubble: f64 },
    /// `g = Ω² η` with `Ω = 1 + A exp(−|x − c|² / 2w²)` (Euclidean `|·|` in the chart).
    ConformallyFlat { amplitude: f64, width: f64, centre: Vec4 },
    UserDefined(GridMetric),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricModel {
    pub family: MetricFamily,
    pub signature: Signature,
}

/// Metric, inverse and determinant at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricAt {
    pub g: Mat4,
    pub inv: Mat4,
    pub det: f64,
}

/// Christoffel symbols, Riemann, Ricci and scalar curvature at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureBundle {
    pub christoffel: Tensor3,
    pub riemann: Tensor4,
    pub ricci: Mat4,
    pub scalar: f64,
}

/// Metric and connection data in a generic scalar.
#[derive(Clone, Copy, Debug)]
pub struct Connection<S> {
    pub g: [[S; 4]; 4],
    pub inv: [[S; 4]; 4],
    pub christoffel: [[[S; 4]; 4]; 4],
    /// `dchristoffel[l][m][n][r] = ∂_r Γ^l_{mn}`
    pub dchristoffel: [[[[S; 4]; 4]; 4]; 4],
}

/// Inverse of a 4×4 matrix by Gauss–Jordan elimination with partial pivoting
/// on the leading values.
pub fn inverse_generic<S: Scalar<Base = f64>>(m: &[[S; 4]; 4]) -> Option<[[S; 4]; 4]> {
    let mut a = *m;
    let mut inv = [[S::k(0.0); 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = S::k(1.0);
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&p, &q| a[p][col].value().abs().total_cmp(&a[q][col].value().abs()))?;
        if a[piv][col].value() == 0.0 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let r = a[col][col].recip();
        for j in 0..4 {
            a[col][j] *= r;
            inv[col][j] *= r;
        }
        for i in 0..4 {
            if i != col {
                let f = a[i][col];
                for j in 0..4 {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[i][j] -= f * ac;
                    inv[i][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

/// Everything the transport and geodesic code needs at a point:
/// metric, connection and the connection's first derivatives
/// (`dchristoffel[l][m][n][r] = ∂_r Γ^l_{mn}`).
#[derive(Clone, Copy, Debug)]
pub struct LocalGeometry {
    pub metric: MetricAt,
    pub christoffel: Tensor3,
    pub dchristoffel: Tensor4,
}

const SINGULAR_DET: f64 = 1e-14;

impl MetricModel {
    pub fn minkowski() -> Self {
        Self { family: MetricFamily::Minkowski, signature: Signature::Lorentzian }
    }

    pub fn euclidean() -> Self {
        Self { family: MetricFamily::EuclideanFlat, signature: Signature::Riemannian }
    }

    pub fn sphere(radius: f64) -> Self {
        Self { family: MetricFamily::RoundSphereS4 { radius }, signature: Signature::Riemannian }
    }

    pub fn de_sitter(hubble: f64) -> Self {
        Self { family: MetricFamily::DeSitter { hubble }, signature: Signature::Lorentzian }
    }

    pub fn conformal_bump(amplitude: f64, width: f64, centre: Vec4, signature: Signature) -> Self {
        Self { family: MetricFamily::ConformallyFlat { amplitude, width, centre }, signature }
    }

    pub fn user_defined(grid: GridMetric, signature: Signature) -> Self {
        Self { family: MetricFamily::UserDefined(grid), signature }
    }

    /// Catalog lookup by name with a parameter map.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
        let positive = |k: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::InvalidParameters(format!("{k} must be positive, got {v}")))
            }
        };
        match name.to_ascii_lowercase().as_str() {
            "minkowski" => Ok(Self::minkowski()),
            "euclidean" | "euclidean-flat" => Ok(Self::euclidean()),
            "sphere" | "s4" | "round-sphere" => Ok(Self::sphere(positive("radius", get("radius", 1.0))?)),
            "de-sitter" | "desitter" => Ok(Self::de_sitter(positive("hubble", get("hubble", 1.0))?)),
            "conformal-bump" | "conformally-flat" => {
                let sig = if get("riemannian", 1.0) != 0.0 { Signature::Riemannian } else { Signature::Lorentzian };
                let centre = [get("c0", 0.0), get("c1", 0.0), get("c2", 0.0), get("c3", 0.0)];
                Ok(Self::conformal_bump(get("amplitude", 0.2), positive("width", get("width", 1.0))?, centre, sig))
            }
            _ => Err(Error::MetricNotFound(name.to_string())),
        }
    }

    /// Sectional curvature for the maximally symmetric families.
    pub fn constant_curvature(&self) -> Option<f64> {
        match &self.family {
            MetricFamily::Minkowski | MetricFamily::EuclideanFlat => Some(0.0),
            MetricFamily::RoundSphereS4 { radius } => Some(1.0 / (radius * radius)),
            MetricFamily::DeSitter { hubble } => Some(hubble * hubble),
            _ => None,
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.family, MetricFamily::Minkowski | MetricFamily::EuclideanFlat)
    }

    fn check_chart(&self, x: &SpacetimePoint) -> Result<()> {
        let bad = x.chart_id != 0
            || x.coords.iter().any(|c| !c.is_finite())
            || match &self.family {
                MetricFamily::DeSitter { hubble } => {
                    let eta = self.signature.eta();
                    let q: f64 = (0..4).map(|i| eta[i] * x.coords[i] * x.coords[i]).sum();
                    1.0 + hubble * hubble * q / 4.0 <= 1e-3
                }
                _ => false,
            };
        if bad {
            Err(Error::OutOfChart { coords: x.coords })
        } else {
            Ok(())
        }
    }

    /// Metric components at a point, generic over the scalar so that jets
    /// give exact derivatives.
    pub fn components<S: Scalar<Base = f64>>(&self, x: &[S; 4]) -> Result<[[S; 4]; 4]> {
        let eta = self.signature.eta();
        let conformal = |omega2: S| {
            let mut g = [[S::k(0.0); 4]; 4];
            for i in 0..4 {
                g[i][i] = omega2 * S::cst(eta[i]);
            }
            g
        };
        match &self.family {
            MetricFamily::Minkowski | MetricFamily::EuclideanFlat => Ok(conformal(S::k(1.0))),
            MetricFamily::RoundSphereS4 { radius } => {
                let r2 = x.iter().fold(S::k(0.0), |acc, &c| acc + c * c);
                let w = (S::k(1.0) + r2 * S::cst(0.25 / (radius * radius))).recip();
                Ok(conformal(w * w))
            }
            MetricFamily::DeSitter { hubble } => {
                let q = (0..4).fold(S::k(0.0), |acc, i| acc + S::cst(eta[i]) * x[i] * x[i]);
                let w = (S::k(1.0) + q * S::cst(0.25 * hubble * hubble)).recip();
                Ok(conformal(w * w))
            }
            MetricFamily::ConformallyFlat { amplitude, width, centre } => {
                let d2 = (0..4).fold(S::k(0.0), |acc, i| {
                    let d = x[i] - S::cst(centre[i]);
                    acc + d * d
                });
                let omega = S::k(1.0) + S::cst(*amplitude) * (-d2 * S::cst(0.5 / (width * width))).exp();
                Ok(conformal(omega * omega))
            }
            MetricFamily::UserDefined(grid) => grid.components(x),
        }
    }

    /// `metric_at`: components, inverse and determinant.
    pub fn metric_at(&self, x: &SpacetimePoint) -> Result<MetricAt> {
        self.check_chart(x)?;
        let g = self.components(&x.coords)?;
        finish_metric(g, self.signature)
    }

    /// Metric, connection and connection derivatives from one jet evaluation.
    pub fn local(&self, x: &SpacetimePoint) -> Result<LocalGeometry> {
        self.check_chart(x)?;
        let g = self.components(&x.coords)?;
        let metric = finish_metric(g, self.signature)?;
        let c = self.connection(&x.coords)?;
        Ok(LocalGeometry { metric, christoffel: c.christoffel, dchristoffel: c.dchristoffel })
    }

    /// Metric, inverse, connection and connection derivatives in any scalar
    /// type (no chart or signature checks).
    pub fn connection<S: Scalar<Base = f64>>(&self, x: &[S; 4]) -> Result<Connection<S>> {
        let xj: [Jet<S, 4>; 4] = std::array::from_fn(|i| Jet::var(x[i], i));
        let gj = self.components(&xj)?;
        let g: [[S; 4]; 4] = gj.map(|r| r.map(|c| c.v));
        let inv = inverse_generic(&g).ok_or(Error::SingularMetric { det: 0.0 })?;
        let z = S::k(0.0);
        let mut lower = [[[z; 4]; 4]; 4]; // Γ_{k m n}
        let mut dlower = [[[[z; 4]; 4]; 4]; 4]; // ∂_r Γ_{k m n}
        for k in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    lower[k][m][n] = (gj[k][n].g[m] + gj[k][m].g[n] - gj[m][n].g[k]).scale(0.5);
                    for r in 0..4 {
                        dlower[k][m][n][r] = (gj[k][n].h[m][r] + gj[k][m].h[n][r] - gj[m][n].h[k][r]).scale(0.5);
                    }
                }
            }
        }
        // ∂_r g^{lk} = −g^{la} ∂_r g_{ab} g^{bk}
        let mut dinv = [[[z; 4]; 4]; 4];
        for l in 0..4 {
            for k in 0..4 {
                for r in 0..4 {
                    let mut s = z;
                    for a in 0..4 {
                        for b in 0..4 {
                            s += inv[l][a] * gj[a][b].g[r] * inv[b][k];
                        }
                    }
                    dinv[l][k][r] = -s;
                }
            }
        }
        let mut christoffel = [[[z; 4]; 4]; 4];
        let mut dchristoffel = [[[[z; 4]; 4]; 4]; 4];
        for l in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut c = z;
                    for k in 0..4 {
                        c += inv[l][k] * lower[k][m][n];
                    }
                    christoffel[l][m][n] = c;
                    for r in 0..4 {
                        let mut d = z;
                        for k in 0..4 {
                            d += dinv[l][k][r] * lower[k][m][n] + inv[l][k] * dlower[k][m][n][r];
                        }
                        dchristoffel[l][m][n][r] = d;
                    }
                }
            }
        }
        Ok(Connection { g, inv, christoffel, dchristoffel })
    }

    /// Christoffel symbols `Γ^l_{mn}` alone, in any scalar type.
    pub fn christoffel<S: Scalar<Base = f64>>(&self, x: &[S; 4]) -> Result<[[[S; 4]; 4]; 4]> {
        let gd = self.components(&Dual::vars(x))?;
        let g: [[S; 4]; 4] = gd.map(|r| r.map(|c| c.v));
        let inv = inverse_generic(&g).ok_or(Error::SingularMetric { det: 0.0 })?;
        let z = S::k(0.0);
        let mut out = [[[z; 4]; 4]; 4];
        for l in 0..4 {
            for m in 0..4 {
                for n in m..4 {
                    let mut c = z;
                    for k in 0..4 {
                        c += inv[l][k] * (gd[k][n].g[m] + gd[k][m].g[n] - gd[m][n].g[k]);
                    }
                    out[l][m][n] = c.scale(0.5);
                    out[l][n][m] = out[l][m][n];
                }
            }
        }
        Ok(out)
    }

    /// `curvature_at`: Christoffel, Riemann, Ricci and scalar curvature.
    pub fn curvature_at(&self, x: &SpacetimePoint) -> Result<CurvatureBundle> {
        let loc = self.local(x)?;
        Ok(loc.curvature())
    }
}

impl LocalGeometry {
    pub fn curvature(&self) -> CurvatureBundle {
        let gam = &self.christoffel;
        let dgam = &self.dchristoffel;
        let mut riemann = tensor::ZERO_T4;
        for l in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    for r in 0..4 {
                        let mut v = dgam[l][m][r][n] - dgam[l][m][n][r];
                        for k in 0..4 {
                            v += gam[l][n][k] * gam[k][m][r] - gam[l][r][k] * gam[k][m][n];
                        }
                        riemann[l][m][n][r] = v;
                    }
                }
            }
        }
        let mut ricci = tensor::ZERO4;
        for m in 0..4 {
            for n in 0..4 {
                ricci[m][n] = (0..4).map(|l| riemann[l][m][l][n]).sum();
            }
        }
        let inv = &self.metric.inv;
        let mut scalar = 0.0;
        for m in 0..4 {
            for n in 0..4 {
                scalar += inv[m][n] * ricci[m][n];
            }
        }
        CurvatureBundle { christoffel: *gam, riemann, ricci, scalar }
    }
}

impl CurvatureBundle {
    /// `R_{abcd}` with the first index lowered by `g`.
    pub fn riemann_lower(&self, g: &Mat4) -> Tensor4 {
        let mut out = tensor::ZERO_T4;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        out[a][b][c][d] = (0..4).map(|l| g[a][l] * self.riemann[l][b][c][d]).sum();
                    }
                }
            }
        }
        out
    }

    /// `R^a_b = g^{ac} R_{cb}`.
    pub fn ricci_mixed(&self, inv: &Mat4) -> Mat4 {
        tensor::matmul(inv, &self.ricci)
    }
}

fn finish_metric(g: Mat4, signature: Signature) -> Result<MetricAt> {
    let det = tensor::det(&g);
    if !det.is_finite() || det.abs() < SINGULAR_DET {
        return Err(Error::SingularMetric { det });
    }
    let expected_negative = signature == Signature::Lorentzian;
    if (det < 0.0) != expected_negative {
        return Err(Error::SingularMetric { det });
    }
    let inv = tensor::inverse(&g).ok_or(Error::SingularMetric { det })?;
    Ok(MetricAt { g, inv, det })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere_riemann_oracle(g: &Mat4, a: f64) -> Tensor4 {
        let mut r = tensor::ZERO_T4;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        r[i][j][k][l] = (g[i][k] * g[j][l] - g[i][l] * g[j][k]) / (a * a);
                    }
                }
            }
        }
        r
    }

    #[test]
    fn minkowski_is_eta() {
        let m = MetricModel::minkowski();
        let at = m.metric_at(&SpacetimePoint::new([0.3, -1.0, 2.0, 5.0])).unwrap();
        assert_eq!(at.g, tensor::diag([1.0, -1.0, -1.0, -1.0]));
        assert_eq!(at.det, -1.0);
        let c = m.curvature_at(&SpacetimePoint::new([0.3, -1.0, 2.0, 5.0])).unwrap();
        assert_eq!(tensor::max_abs4(&c.riemann), 0.0);
    }

    #[test]
    fn sphere_origin_is_unit_metric() {
        let m = MetricModel::sphere(1.0);
        let at = m.metric_at(&SpacetimePoint::new([0.0; 4])).unwrap();
        assert_eq!(at.g, tensor::identity());
        let at = m.metric_at(&SpacetimePoint::new([2.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((at.g[0][0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sphere_has_constant_curvature() {
        for a in [1.0, 0.7, 2.5] {
            let m = MetricModel::sphere(a);
            for p in [[0.0; 4], [0.3, -0.2, 0.5, 0.1], [1.2, 0.4, -0.9, 2.0]] {
                let x = SpacetimePoint::new(p);
                let g = m.metric_at(&x).unwrap().g;
                let c = m.curvature_at(&x).unwrap();
                assert!((c.scalar - 12.0 / (a * a)).abs() < 1e-10);
                let low = c.riemann_lower(&g);
                let oracle = sphere_riemann_oracle(&g, a);
                assert!(tensor::max_abs4(&tensor::zip4(&low, &oracle, |u, v| u - v)) < 1e-10);
                for i in 0..4 {
                    for j in 0..4 {
                        assert!((c.ricci[i][j] - 3.0 * g[i][j] / (a * a)).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn de_sitter_scalar_curvature() {
        let h = 0.8;
        let m = MetricModel::de_sitter(h);
        let c = m.curvature_at(&SpacetimePoint::new([0.2, 0.1, -0.3, 0.05])).unwrap();
        assert!((c.scalar - 12.0 * h * h).abs() < 1e-10);
    }

    #[test]
    fn degenerate_user_metric_is_singular() {
        let grid = GridMetric::sample([-1.0; 4], [0.5; 4], [5; 4], 2, |_| tensor::diag([1.0, 1.0, 1.0, 0.0]));
        let m = MetricModel::user_defined(grid, Signature::Riemannian);
        assert!(matches!(m.metric_at(&SpacetimePoint::new([0.0; 4])), Err(Error::SingularMetric { .. })));
    }

    #[test]
    fn user_grid_reproduces_polynomial_metric_derivatives() {
        // A quadratic metric is reproduced exactly by order-2 interpolation.
        let f = |x: Vec4| {
            let mut g = tensor::identity();
            g[0][0] = 1.0 + 0.1 * x[1] * x[1];
            g[1][1] = 1.0 + 0.05 * x[0] * x[2];
            g
        };
        let grid = GridMetric::sample([-1.0; 4], [0.25; 4], [9; 4], 2, f);
        let m = MetricModel::user_defined(grid, Signature::Riemannian);
        let x = SpacetimePoint::new([0.1, 0.3, -0.2, 0.05]);
        let g = m.metric_at(&x).unwrap().g;
        let exact = f(x.coords);
        assert!(tensor::max_abs(&tensor::sub(&g, &exact)) < 1e-13);
        let loc = m.local(&x).unwrap();
        // Γ^0_{01} = ½ g^{00} ∂_1 g_00
        let expect = 0.5 * (0.2 * x.coords[1]) / exact[0][0];
        assert!((loc.christoffel[0][0][1] - expect).abs() < 1e-12);
    }

    #[test]
    fn catalog_lookup() {
        let mut p = BTreeMap::new();
        p.insert("radius".to_string(), 2.0);
        assert_eq!(MetricModel::from_name("sphere", &p).unwrap(), MetricModel::sphere(2.0));
        assert!(matches!(MetricModel::from_name("kerr", &p), Err(Error::MetricNotFound(_))));
    }

    #[test]
    fn bianchi_and_symmetries_on_bump() {
        let m = MetricModel::conformal_bump(0.3, 0.8, [0.1, 0.0, -0.2, 0.3], Signature::Riemannian);
        let c = m.curvature_at(&SpacetimePoint::new([0.2, -0.4, 0.1, 0.6])).unwrap();
        let r = &c.riemann;
        for l in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    for d in 0..4 {
                        assert!((r[l][a][b][d] + r[l][a][d][b]).abs() < 1e-12);
                        assert!((r[l][a][b][d] + r[l][b][d][a] + r[l][d][a][b]).abs() < 1e-10);
                    }
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                assert!((c.ricci[i][j] - c.ricci[j][i]).abs() < 1e-12);
            }
        }
    }
}
