//! Seeley–DeWitt coefficients on maximally symmetric spaces.
//!
//! With sectional curvature `K` every coefficient has the form
//! `b_n = P_n g_{μν′} + Q_n n_μ n_{ν′}`, `n = ∇r`, so the recursion reduces to
//! two coupled radial equations. With `s(r) = sin(√K r)/√K`,
//! `A = s′/s`, `C = −1/s`, the bivector Laplacian in four dimensions reads
//!
//! ```text
//! (□F)_g  = P″ + 3A P′ − (A+C)² P + 2AC Q
//! (□F)_nn = Q″ + 3A Q′ + 2(A+C)² P + (2AC − 3(A² + C²)) Q
//! ```
//!
//! and `σ^{;λ}∇_λ = r d/dr`, so `r^{−n} ∫₀^r ρ^{n−1} S(ρ) dρ` maps `c_k r^k` to
//! `c_k r^k / (n + k)`. Everything is carried as power series in `r` and finally
//! re-expressed in `z = r² = 2σ`, which also covers Lorentzian signature.

use super::series::Laurent;
use crate::bitensor::PairG;
use crate::scalar::{Real, Scalar};
use crate::{Error, Result};

/// Radial profiles of `b_0 … b_N` as polynomials in `z = 2σ`:
/// `b_n = p_n(z) g_{μν′} + q_n(z) σ_{;μ} σ_{;ν′}`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsotropicSdw<T> {
    pub curvature: T,
    pub p: Vec<Vec<T>>,
    pub q: Vec<Vec<T>>,
    /// `√Δ` as a polynomial in `z`.
    pub sqrt_delta: Vec<T>,
}

/// Default truncation (highest power of `r` carried).
pub const DEFAULT_DEGREE: i32 = 56;

fn to_z<T: Real>(s: &Laurent<T>, shift: i32, tol: T) -> Result<Vec<T>> {
    let top = (s.hi() - shift) / 2;
    let mut out = Vec::with_capacity(top.max(0) as usize + 1);
    for j in 0..=top {
        out.push(s.coeff(2 * j + shift));
        let odd = s.coeff(2 * j + shift + 1);
        if odd.abs() > tol {
            return Err(Error::InvalidParameters("odd power in an even radial profile".into()));
        }
    }
    Ok(out)
}

impl<T: Real> IsotropicSdw<T> {
    /// Build profiles up to order `n_max` for sectional curvature `k`.
    pub fn new(k: T, n_max: usize, degree: i32) -> Result<Self> {
        if n_max > 3 {
            return Err(Error::CapExceeded { requested: n_max, cap: 3 });
        }
        let hi = degree + 6;
        // s(r) and s′(r) as series: (−K)^j r^{2j+1}/(2j+1)!
        let s = Laurent::from_fn(1, hi, |m| {
            if m % 2 == 1 {
                let j = (m - 1) / 2;
                (-k).powi(j) / (1..=m).fold(T::one(), |a, i| a * T::from_i32(i).unwrap())
            } else {
                T::zero()
            }
        });
        let sp = s.deriv();
        let inv_s = s.recip();
        let a = &sp * &inv_s;
        let c = -&inv_s;
        let apc = &a + &c;
        let apc2 = &apc * &apc;
        let ac2 = (&a * &c).scale(T::c(2.0));
        let a2c2 = &(&a * &a) + &(&c * &c);
        let qq = &ac2 - &a2c2.scale(T::c(3.0));
        let sq = s.shift(-1).powf(T::c(-1.5));
        let inv_sq = sq.recip();
        let three_k = k * T::c(3.0);
        let tol = T::c(1e-9) * (T::one() + k.abs()).powi(n_max as i32 + 2);

        let mut ps = vec![Laurent::constant(T::one(), hi)];
        let mut qs = vec![Laurent::zero(hi)];
        for n in 1..=n_max {
            let (pp, qp) = (&ps[n - 1], &qs[n - 1]);
            let pw = &sq * pp;
            let qw = &sq * qp;
            let (pw1, qw1) = (pw.deriv(), qw.deriv());
            let lp = &(&(&pw1.deriv() + &(&a * &pw1).scale(T::c(3.0))) - &(&apc2 * &pw)) + &(&ac2 * &qw);
            let lq = &(&(&qw1.deriv() + &(&a * &qw1).scale(T::c(3.0))) + &(&apc2 * &pw).scale(T::c(2.0)))
                + &(&qq * &qw);
            let src_p = &(&inv_sq * &lp) - &pp.scale(three_k);
            let src_q = &(&inv_sq * &lq) - &qp.scale(three_k);
            let nf = T::from_usize(n).unwrap();
            let transport = |src: &Laurent<T>| -> Result<Laurent<T>> {
                if src.valuation(tol) < 0 {
                    return Err(Error::InvalidParameters("singular radial source".into()));
                }
                let reg = Laurent::from_fn(0, src.hi(), |k| src.coeff(k));
                Ok(reg.map_terms(|k| (nf + T::from_i32(k).unwrap()).recip()))
            };
            ps.push(transport(&src_p)?);
            qs.push(transport(&src_q)?);
        }
        let mut p = Vec::with_capacity(n_max + 1);
        let mut q = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            p.push(to_z(&ps[n], 0, tol)?);
            if qs[n].valuation(tol) < 2 && n > 0 {
                return Err(Error::InvalidParameters("radial nn-profile not O(r²)".into()));
            }
            q.push(to_z(&qs[n], 2, tol)?);
        }
        Ok(Self { curvature: k, p, q, sqrt_delta: to_z(&sq, 0, tol)? })
    }

    pub fn order(&self) -> usize {
        self.p.len() - 1
    }
}

fn horner<S: Scalar<Base = f64>>(c: &[f64], z: S) -> S {
    c.iter().rev().fold(S::k(0.0), |acc, &a| acc * z + S::cst(a))
}

impl IsotropicSdw<f64> {
    /// Profiles `(p_n, q_n)` at a given world function.
    pub fn profiles<S: Scalar<Base = f64>>(&self, n: usize, sigma: S) -> (S, S) {
        let z = sigma.scale(2.0);
        (horner(&self.p[n], z), horner(&self.q[n], z))
    }

    /// `b_n(x, x′)` from two-point data in any scalar type.
    pub fn b<S: Scalar<Base = f64>>(&self, n: usize, pair: &PairG<S>) -> [[S; 4]; 4] {
        let (p, q) = self.profiles(n, pair.sigma);
        std::array::from_fn(|mu| std::array::from_fn(|nu| p * pair.propagator[mu][nu] + q * pair.grad_x[mu] * pair.grad_xp[nu]))
    }

    /// `√Δ` from the series (useful when no closed form is available).
    pub fn sqrt_delta_at<S: Scalar<Base = f64>>(&self, sigma: S) -> S {
        horner(&self.sqrt_delta, sigma.scale(2.0))
    }

    /// Coincidence limit `[b_n] = p_n(0) g_{μν}`.
    pub fn coincidence(&self, n: usize, g: &crate::tensor::Mat4) -> crate::tensor::Mat4 {
        crate::tensor::scale(g, self.p[n][0])
    }
}
