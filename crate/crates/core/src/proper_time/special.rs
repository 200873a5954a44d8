//! Complex gamma function, zeta values and power series in `s`.

use num_complex::Complex64;
use std::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(z)` for complex `z` (Lanczos, reflected for `Re z < 1/2`).
pub fn gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::from(PI) / (s * gamma_complex(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::from(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// `ζ(k)` for integer `k ≥ 2` (direct sum with an Euler–Maclaurin tail).
pub fn zeta(k: u32) -> f64 {
    assert!(k >= 2, "zeta needs k >= 2");
    let n = 40usize;
    let kf = k as f64;
    let nf = n as f64;
    let head: f64 = (1..n).map(|j| (j as f64).powi(-(k as i32))).sum();
    let p = |m: i32| nf.powf(-kf - m as f64);
    // Bernoulli numbers B2, B4, B6, B8
    let rising = |m: u32| (0..m).fold(1.0, |a, j| a * (kf + j as f64));
    head + nf.powf(1.0 - kf) / (kf - 1.0) + 0.5 * p(0) + rising(1) / 12.0 * p(1) - rising(3) / 720.0 * p(3)
        + rising(5) / 30_240.0 * p(5)
        - rising(7) / 1_209_600.0 * p(7)
}

/// Coefficients `c_0 … c_order` of `exp(Σ a_k s^k)`.
pub fn series_exp(a: &[f64], order: usize) -> Vec<f64> {
    let at = |k: usize| a.get(k).copied().unwrap_or(0.0);
    let mut out = vec![0.0; order + 1];
    out[0] = at(0).exp();
    for m in 1..=order {
        let s: f64 = (1..=m).map(|k| k as f64 * at(k) * out[m - k]).sum();
        out[m] = s / m as f64;
    }
    out
}

/// Product of two power series truncated at `order`.
pub fn series_mul(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    (0..=order)
        .map(|m| (0..=m).map(|k| a.get(k).copied().unwrap_or(0.0) * b.get(m - k).copied().unwrap_or(0.0)).sum())
        .collect()
}

/// `1 / (c + s)` as a power series in `s` (`c ≠ 0`).
pub fn series_recip_linear(c: f64, order: usize) -> Vec<f64> {
    (0..=order).map(|k| (-1f64).powi(k as i32) / c.powi(k as i32 + 1)).collect()
}

/// `Γ(1 − s) = exp(γ s + Σ_{k≥2} ζ(k) s^k / k)`.
pub fn gamma_one_minus_s(order: usize) -> Vec<f64> {
    let mut a = vec![0.0; order + 1];
    if order >= 1 {
        a[1] = EULER_GAMMA;
    }
    for (k, v) in a.iter_mut().enumerate().skip(2) {
        *v = zeta(k as u32) / k as f64;
    }
    series_exp(&a, order)
}

/// `1 / Γ(1 + s) = exp(γ s − Σ_{k≥2} ζ(k) (−s)^k / k)`.
pub fn recip_gamma_one_plus_s(order: usize) -> Vec<f64> {
    let mut a = vec![0.0; order + 1];
    if order >= 1 {
        a[1] = EULER_GAMMA;
    }
    for (k, v) in a.iter_mut().enumerate().skip(2) {
        *v = -zeta(k as u32) * (-1f64).powi(k as i32) / k as f64;
    }
    series_exp(&a, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_known_points() {
        assert!((gamma_complex(Complex64::new(5.0, 0.0)).re - 24.0).abs() < 1e-12);
        assert!((gamma_complex(Complex64::new(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_complex(Complex64::new(-0.5, 0.0)).re + 2.0 * PI.sqrt()).abs() < 1e-13);
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 1.3;
        let g = gamma_complex(Complex64::new(0.0, y));
        assert!((g.norm_sqr() - PI / (y * (PI * y).sinh())).abs() < 1e-13);
        let real = statrs::function::gamma::gamma(2.7);
        assert!((gamma_complex(Complex64::new(2.7, 0.0)).re - real).abs() < 1e-12 * real);
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta(3) - 1.202_056_903_159_594_2).abs() < 1e-15);
    }

    #[test]
    fn gamma_series_matches_numeric_gamma() {
        let c = gamma_one_minus_s(14);
        let r = recip_gamma_one_plus_s(14);
        for s in [0.05, -0.08, 0.1] {
            let ev = |c: &[f64]| c.iter().rev().fold(0.0, |a, &v| a * s + v);
            let g = statrs::function::gamma::gamma(1.0 - s);
            assert!((ev(&c) - g).abs() < 1e-11);
            let h = 1.0 / statrs::function::gamma::gamma(1.0 + s);
            assert!((ev(&r) - h).abs() < 1e-11);
        }
    }
}
