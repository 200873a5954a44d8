//! Standard jets in `s` used by the Green-function assembly.

use super::sjet::SJet;
use super::special::{gamma_one_minus_s, recip_gamma_one_plus_s, series_mul, series_recip_linear};
use crate::{Error, Result};

/// `Γ(1 − s − n)` to order `K` via `Γ(1 − s − n) = Γ(1 − s) / Π_{j<n} (−s − j)`.
pub fn gamma_jet(n: usize, order: i32) -> Result<SJet> {
    if order < 1 {
        return Err(Error::Domain(format!("gamma_jet needs order >= 1, got {order}")));
    }
    if n == 0 {
        return Ok(SJet::from_series(&gamma_one_minus_s(order as usize), order));
    }
    let m = order as usize + 1;
    let mut a = gamma_one_minus_s(m);
    for j in 1..n {
        let r: Vec<f64> = series_recip_linear(j as f64, m).iter().map(|v| -v).collect();
        a = series_mul(&a, &r, m);
    }
    Ok(SJet::from_series(&a, m as i32).div_s()?.scale_re(-1.0))
}

/// `(α^{s+1} − 1) / ((s + n)(s + 1))`; at `n = 0` a simple pole `(α − 1)/s`.
pub fn alpha_jet(alpha: f64, n: usize, order: i32) -> Result<SJet> {
    if alpha <= 0.0 {
        return Err(Error::Domain(format!("gauge parameter must be positive, got {alpha}")));
    }
    let m = order as usize + usize::from(n == 0);
    let la = alpha.ln();
    let mut num = vec![0.0; m + 1];
    let mut f = alpha;
    for (k, v) in num.iter_mut().enumerate() {
        if k > 0 {
            f *= la / k as f64;
        }
        *v = f;
    }
    num[0] = alpha - 1.0;
    let mut a = series_mul(&num, &series_recip_linear(1.0, m), m);
    if n == 0 {
        SJet::from_series(&a, m as i32).div_s()
    } else {
        a = series_mul(&a, &series_recip_linear(n as f64, m), m);
        Ok(SJet::from_series(&a, m as i32))
    }
}

/// `μ_A^{2s} / Γ(s + 1)`.
pub fn prefactor_jet(mu_a: f64, order: i32) -> Result<SJet> {
    if mu_a <= 0.0 {
        return Err(Error::Domain(format!("renormalization scale must be positive, got {mu_a}")));
    }
    let r = SJet::from_series(&recip_gamma_one_plus_s(order.max(0) as usize), order);
    r.try_mul(&SJet::exp_linear(2.0 * mu_a.ln(), order))
}

/// `(σ/2)^{s+n} = (σ/2)^n e^{sL}`.
pub fn sigma_power_jet(sigma: f64, n: usize, order: i32) -> Result<SJet> {
    if sigma == 0.0 {
        return Err(Error::NullSeparation);
    }
    if sigma < 0.0 {
        return Err(Error::Domain("(σ/2)^s needs σ > 0 in this form".into()));
    }
    Ok(SJet::exp_sl(order).scale_re((0.5 * sigma).powi(n as i32)))
}

#[cfg(test)]
mod tests {
    use super::super::special::EULER_GAMMA;
    use super::*;
    use num_complex::Complex64;

    fn numeric_gamma(x: f64) -> f64 {
        statrs::function::gamma::gamma(x)
    }

    #[test]
    fn gamma_jets_against_numeric_gamma() {
        for n in 0..4usize {
            let j = gamma_jet(n, 6).unwrap();
            for s in [1e-2, -2e-2] {
                let want = numeric_gamma(1.0 - s - n as f64);
                let got = j.eval(Complex64::new(s, 0.0), 0.0).re;
                assert!((got - want).abs() < 1e-11 * want.abs().max(1.0), "n = {n}, s = {s}");
            }
        }
        let g1 = gamma_jet(1, 2).unwrap();
        assert!((g1.coeff(-1, 0).re + 1.0).abs() < 1e-15);
        assert!((g1.coeff(0, 0).re + EULER_GAMMA).abs() < 1e-15);
        let g2 = gamma_jet(2, 2).unwrap();
        assert!((g2.coeff(-1, 0).re - 1.0).abs() < 1e-15);
        assert!((g2.coeff(0, 0).re - (EULER_GAMMA - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn alpha_jets() {
        let a = alpha_jet(2.0, 0, 2).unwrap();
        assert!((a.coeff(-1, 0).re - 1.0).abs() < 1e-15);
        assert!((a.coeff(0, 0).re - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-14);
        let e = std::f64::consts::E;
        let b = alpha_jet(e, 1, 2).unwrap();
        assert!(!b.has_pole());
        assert!((b.coeff(0, 0).re - (e - 1.0)).abs() < 1e-14);
        let one = alpha_jet(1.0, 0, 3).unwrap();
        assert_eq!(one.max_norm(), 0.0);
    }

    #[test]
    fn sigma_power_times_gamma_pole() {
        // (σ/2)^s Γ(−s) = −1/s − (L + γ) + O(s)
        let l: f64 = 0.3;
        let sigma = 2.0 * l.exp();
        let p = sigma_power_jet(sigma, 0, 3).unwrap().try_mul(&gamma_jet(1, 3).unwrap()).unwrap();
        let lim = p.limit_s0().unwrap();
        assert!((lim.residue[0].re + 1.0).abs() < 1e-15);
        assert!((lim.finite[0].re + EULER_GAMMA).abs() < 1e-15);
        assert!((lim.finite[1].re + 1.0).abs() < 1e-15);
        let s = 1e-4;
        let direct = (0.5 * sigma).powf(s) * numeric_gamma(-s);
        let jet = p.eval(Complex64::new(s, 0.0), l).re;
        assert!((direct - jet).abs() < 1e-6);
    }
}
