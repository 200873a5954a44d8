//! Closed-form flat-space covariant-gauge propagator.

use crate::proper_time::kernel::{kernel_prefactor, CMat4};
use crate::tensor::Vec4;

/// `(i/16π²)[(2/σ) η + (α−1)(η/σ − σ_μσ_ν/σ²)]`, the position-space form of
/// `(1/k²)(η − (1−α) k_μk_ν/k²)`.
pub fn flat_closed_form(eta: &Vec4, x: &Vec4, xp: &Vec4, alpha: f64) -> CMat4 {
    let s: Vec4 = std::array::from_fn(|i| eta[i] * (x[i] - xp[i]));
    let sigma = 0.5 * (0..4).map(|i| s[i] * (x[i] - xp[i])).sum::<f64>();
    std::array::from_fn(|mu| {
        std::array::from_fn(|nu| {
            let e = if mu == nu { eta[mu] } else { 0.0 };
            kernel_prefactor() * (2.0 * e / sigma + (alpha - 1.0) * (e / sigma - s[mu] * s[nu] / (sigma * sigma)))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Jet4, Scalar};

    /// The closed form solves `P(α) G = (−□ + (1 − 1/α)∂∂) G = 0` off coincidence.
    #[test]
    fn closed_form_solves_the_gauge_field_equation() {
        for eta in [[1.0; 4], [1.0, -1.0, -1.0, -1.0]] {
            let xp = [0.1, -0.2, 0.0, 0.3];
            let x = [0.7, 0.1, -0.4, 0.2];
            for alpha in [0.5, 1.0, 2.0] {
                // G written against jets in x
                let xj = Jet4::vars(x);
                let s: [Jet4; 4] = std::array::from_fn(|i| (xj[i] - Jet4::constant(xp[i])).scale(eta[i]));
                let sigma = (0..4).fold(Jet4::constant(0.0), |a, i| a + s[i] * (xj[i] - Jet4::constant(xp[i]))).scale(0.5);
                let g = |mu: usize, nu: usize| {
                    let e = if mu == nu { eta[mu] } else { 0.0 };
                    (sigma.recip().scale(2.0 * e)) + (sigma.recip().scale(e) - s[mu] * s[nu] / (sigma * sigma)).scale(alpha - 1.0)
                };
                for mu in 0..4 {
                    for nu in 0..4 {
                        let mut r: f64 = 0.0;
                        for a in 0..4 {
                            r -= eta[a] * g(mu, nu).h[a][a];
                            r += (1.0 - 1.0 / alpha) * eta[a] * g(a, nu).h[mu][a];
                        }
                        let closed = flat_closed_form(&eta, &x, &xp, alpha)[mu][nu];
                        assert!((closed.im * 16.0 * std::f64::consts::PI.powi(2) - g(mu, nu).v).abs() < 1e-12);
                        let scale = g(mu, nu).v.abs().max(1.0);
                        assert!(r.abs() < 1e-10 * scale, "alpha {alpha} ({mu},{nu}): {r}");
                    }
                }
            }
        }
    }
}
