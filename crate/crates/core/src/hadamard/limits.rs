//! Coincidence limits on closed-form geometries and the displayed tensors
//! `A`, `B`, `C`.
//!
//! Rank-4 outputs are indexed `[β][γ][ρ][τ]`, the coefficient of the
//! placement `G_{γβ′;ρτ′}` (derivatives at `x` applied before those at `x′`).

use crate::bitensor::field::{derivative, ClosedField, Kind, Slot};
use crate::bitensor::ClosedForm;
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::sdw::isotropic::{IsotropicSdw, DEFAULT_DEGREE};
use crate::tensor::{Mat4, Tensor4};
use crate::{Error, Result};

/// Everything needed at one point `x`, with `x′ = x` exactly.
#[derive(Clone, Debug)]
pub struct Coincidence<'a> {
    pub model: &'a MetricModel,
    pub closed: ClosedForm,
    pub sdw: IsotropicSdw<f64>,
    pub x: [f64; 4],
    pub g: Mat4,
    pub inv: Mat4,
    pub ricci: Mat4,
    /// `R^λ_ρ`, row index up.
    pub ricci_mixed: Mat4,
    /// `R^λ_{μνρ}`.
    pub riemann: Tensor4,
}

fn idx4(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 4 + b) * 4 + c) * 4 + d
}

fn from_fn4(f: impl Fn(usize, usize, usize, usize) -> f64) -> Tensor4 {
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| std::array::from_fn(|d| f(a, b, c, d)))))
}

impl<'a> Coincidence<'a> {
    pub fn new(model: &'a MetricModel, x: [f64; 4]) -> Result<Self> {
        let closed = ClosedForm::for_model(model)
            .ok_or_else(|| Error::InvalidParameters("coincidence limits need a flat or spherical geometry".into()))?;
        let k = model.constant_curvature().unwrap_or(0.0);
        let sdw = IsotropicSdw::new(k, 2, DEFAULT_DEGREE)?;
        let loc = model.local(&SpacetimePoint::new(x))?;
        let curv = loc.curvature();
        let inv = loc.metric.inv;
        let ricci_mixed = std::array::from_fn(|l| std::array::from_fn(|r| (0..4).map(|k| inv[l][k] * curv.ricci[k][r]).sum()));
        Ok(Self { model, closed, sdw, x, g: loc.metric.g, inv, ricci: curv.ricci, ricci_mixed, riemann: curv.riemann })
    }

    fn field(&self, kind: Kind) -> ClosedField<'_> {
        ClosedField { closed: &self.closed, sdw: &self.sdw, kind }
    }

    /// Raw limit `[T_{;…}]` with derivative slots in application order.
    pub fn limit(&self, kind: Kind, order: &[Slot]) -> Result<Vec<f64>> {
        derivative(self.model, self.field(kind), order, &self.x, &self.x)
    }

    /// Undifferentiated limit of a two-index field, `[T_{μν′}]`.
    pub fn matrix(&self, kind: Kind) -> Result<Mat4> {
        let v = self.limit(kind, &[])?;
        Ok(std::array::from_fn(|a| std::array::from_fn(|b| v[a * 4 + b])))
    }

    /// `[T_{γβ′;ρτ′}]` as `[β][γ][ρ][τ]`.
    pub fn mixed_second(&self, kind: Kind) -> Result<Tensor4> {
        let v = self.limit(kind, &[Slot::X, Slot::Xp])?;
        Ok(from_fn4(|b, g, r, t| v[idx4(g, b, r, t)]))
    }

    /// `[T_{λβ′;}{}^{λ}{}_{γρτ′}]` as `[β][γ][ρ][τ]`.
    pub fn divergence_fourth(&self, kind: Kind) -> Result<Tensor4> {
        let v = self.limit(kind, &[Slot::X, Slot::X, Slot::X, Slot::Xp])?;
        Ok(from_fn4(|b, g, r, t| {
            let mut s = 0.0;
            for l in 0..4 {
                for k in 0..4 {
                    s += self.inv[l][k] * v[((idx4(l, b, k, g) * 4) + r) * 4 + t];
                }
            }
            s
        }))
    }

    /// `[T_{λβ′;}{}^{λ}{}_{μ}]` with the second derivative at `at`, as `[β][μ]`.
    fn divergence_second(&self, kind: Kind, at: Slot) -> Result<Mat4> {
        let v = self.limit(kind, &[Slot::X, at])?;
        Ok(std::array::from_fn(|b| {
            std::array::from_fn(|m| (0..4).flat_map(|l| (0..4).map(move |k| (l, k))).map(|(l, k)| self.inv[l][k] * v[idx4(l, b, k, m)]).sum())
        }))
    }

    /// Full second derivative `[T_{ab′;cd}]` or `[T_{ab′;cd′}]` in slot order.
    fn second(&self, kind: Kind, second_at: Slot) -> Result<Tensor4> {
        let v = self.limit(kind, &[Slot::X, second_at])?;
        Ok(from_fn4(|a, b, c, d| v[idx4(a, b, c, d)]))
    }
}

const PROP: Kind = Kind::Propagator;
const B1: Kind = Kind::Sdw { n: 1, power: 0, with_delta: false };
const B2: Kind = Kind::Sdw { n: 2, power: 0, with_delta: false };

/// `tensor_A`: the eight displayed terms built from propagator and `√Δ` limits.
pub fn tensor_a(c: &Coincidence) -> Result<Tensor4> {
    let t1 = c.divergence_fourth(PROP)?;
    let v_x = c.divergence_second(PROP, Slot::X)?;
    let v_xp = c.divergence_second(PROP, Slot::Xp)?;
    let p_xp = c.second(PROP, Slot::Xp)?; // [g_{λβ′;γτ′}] as [λ][β][γ][τ]
    let p_x = c.second(PROP, Slot::X)?;
    let d4 = c.limit(Kind::SqrtDelta, &[Slot::X, Slot::X, Slot::X, Slot::Xp])?;
    let (ric, rm) = (&c.ricci, &c.ricci_mixed);
    Ok(from_fn4(|b, g, r, t| {
        let mut s = t1[b][g][r][t] - v_x[b][g] * ric[r][t] / 6.0;
        s += (v_xp[b][t] * ric[g][r] - v_x[b][r] * ric[g][t]) / 6.0;
        for l in 0..4 {
            s += (p_xp[l][b][g][t] * rm[l][r] - p_x[l][b][g][r] * rm[l][t] + p_xp[l][b][r][t] * rm[l][g]) / 6.0;
        }
        // [√Δ_{;}{}^{λ}{}_{γρτ′}] g_{λβ} = [√Δ_{;βγρτ′}]
        s + d4[idx4(b, g, r, t)]
    }))
}

/// `tensor_B`: the five displayed groups with `b̄_1 = b_1`.
pub fn tensor_b(c: &Coincidence) -> Result<Tensor4> {
    let b1 = c.matrix(B1)?;
    let u = c.divergence_second(B1, Slot::Xp)?;
    let w = c.divergence_second(B1, Slot::X)?;
    let q = c.second(B1, Slot::Xp)?; // [b_{1ρβ′;γτ′}] as [ρ][β][γ][τ]
    let z = c.second(B1, Slot::X)?; // [b_{1τβ′;γρ}] as [τ][β][γ][ρ]
    let (g, ric, rm, riem) = (&c.g, &c.ricci, &c.ricci_mixed, &c.riemann);
    Ok(from_fn4(|be, ga, rh, ta| {
        let contract = |m: &dyn Fn(usize) -> f64| (0..4).map(|l| b1[l][be] * m(l)).sum::<f64>();
        let mut s = 0.5 * (u[be][ta] * g[ga][rh] - w[be][rh] * g[ga][ta]);
        s -= 0.5 * g[rh][ta] * (w[be][ga] + contract(&|l| rm[l][ga]) / 6.0);
        s -= (contract(&|l| rm[l][ta] * g[ga][rh] + rm[l][rh] * g[ga][ta]) + b1[ta][be] * ric[ga][rh] + b1[rh][be] * ric[ga][ta]) / 12.0;
        s += 0.5 * (q[rh][be][ga][ta] - z[ta][be][ga][rh]);
        s - (contract(&|l| riem[l][rh][ga][ta] + riem[l][ta][ga][rh]) + 0.5 * b1[ga][be] * ric[rh][ta]) / 6.0
    }))
}

/// `tensor_C` from `[b̄_2] = [b_2]` with the displayed `−2, −2, −½` pattern.
pub fn tensor_c(c: &Coincidence) -> Result<Tensor4> {
    Ok(tensor_c_from(&c.matrix(B2)?, &c.g))
}

/// `tensor_C` for a given `[b_2]` (row unprimed, column primed).
pub fn tensor_c_from(b2: &Mat4, g: &Mat4) -> Tensor4 {
    from_fn4(|be, ga, rh, ta| -2.0 * (b2[ta][be] * g[ga][rh] + b2[rh][be] * g[ga][ta]) - 0.5 * b2[ga][be] * g[rh][ta])
}

/// Minimal Γ(0) display: `[b_{1γβ′;ρτ′}] − (1/6)[b_{1γβ′}] R_{ρτ}`.
pub fn minimal_gamma0_display(c: &Coincidence) -> Result<Tensor4> {
    let d = c.mixed_second(B1)?;
    let b1 = c.matrix(B1)?;
    Ok(from_fn4(|be, ga, rh, ta| d[be][ga][rh][ta] - b1[ga][be] * c.ricci[rh][ta] / 6.0))
}

/// Minimal Γ(−1) display: `−½ [b_{2γβ′}] g_{ρτ}`.
pub fn minimal_gamma_minus1_display(c: &Coincidence) -> Result<Tensor4> {
    let b2 = c.matrix(B2)?;
    Ok(from_fn4(|be, ga, rh, ta| -0.5 * b2[ga][be] * c.g[rh][ta]))
}
