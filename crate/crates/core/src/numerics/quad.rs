//! Gauss–Legendre rules and adaptive Gauss–Kronrod quadrature.

use crate::scalar::Real;
use crate::{Error, Result};
use num_complex::Complex;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[0, 1]`.
pub fn gauss_legendre_unit<T: Real>(n: usize) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(n);
    let nf = T::from_usize(n).unwrap();
    for i in 0..n {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut z = (T::PI() * (T::from_usize(i).unwrap() + T::c(0.75)) / (nf + T::c(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (mut p0, mut p1) = (T::one(), z);
            for k in 2..=n {
                let kf = T::from_usize(k).unwrap();
                let p2 = ((T::c(2.0) * kf - T::one()) * z * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - T::one());
            let dz = p1 / dp;
            z = z - dz;
            if dz.abs() <= T::epsilon() * T::c(4.0) {
                break;
            }
        }
        let w = T::c(2.0) / ((T::one() - z * z) * dp * dp);
        out.push(((T::one() - z) / T::c(2.0), w / T::c(2.0)));
    }
    out.reverse();
    out
}

const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Embedded Gauss (7) / Kronrod (15) rule on `[0, 1]`: `(node, kronrod weight, gauss weight)`.
pub fn kronrod15_unit() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(15);
    for j in 0..8 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        out.push((0.5 * (1.0 - XK[j]), 0.5 * WK[j], 0.5 * wg));
        if j < 7 {
            out.push((0.5 * (1.0 + XK[j]), 0.5 * WK[j], 0.5 * wg));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn gk15<T: Real, F: Fn(T) -> Complex<T>>(f: &F, a: T, b: T) -> (Complex<T>, T) {
    let c = (a + b) / T::c(2.0);
    let h = (b - a) / T::c(2.0);
    let fc = f(c);
    let mut k = fc * T::c(WK[7]);
    let mut g = fc * T::c(WG[3]);
    for j in 0..7 {
        let dx = h * T::c(XK[j]);
        let s = f(c - dx) + f(c + dx);
        k = k + s * T::c(WK[j]);
        if j % 2 == 1 {
            g = g + s * T::c(WG[j / 2]);
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand on `[a, b]`.
pub fn integrate<T: Real, F: Fn(T) -> Complex<T>>(f: F, a: T, b: T, abs_tol: T, rel_tol: T) -> Result<(Complex<T>, T)> {
    let mut intervals = vec![(a, b, gk15(&f, a, b))];
    let max_intervals = 20_000;
    loop {
        let total: Complex<T> = intervals.iter().fold(Complex::new(T::zero(), T::zero()), |s, iv| s + iv.2 .0);
        let err: T = intervals.iter().fold(T::zero(), |s, iv| s + iv.2 .1);
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if intervals.len() >= max_intervals {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                iterations: intervals.len(),
                last: err.to_f64().unwrap_or(f64::NAN),
            });
        }
        // Split the worst interval.
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, iv)| if iv.2 .1 > best.1 { (i, iv.2 .1) } else { best });
        let (lo, hi, _) = intervals.swap_remove(idx);
        let mid = (lo + hi) / T::c(2.0);
        intervals.push((lo, mid, gk15(&f, lo, mid)));
        intervals.push((mid, hi, gk15(&f, mid, hi)));
    }
}

type Panel = (f64, f64, Vec<Complex<f64>>, f64);

fn gk15_vec<F: Fn(f64) -> Result<Vec<Complex<f64>>>>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let mut k: Vec<Complex<f64>> = Vec::new();
    let mut g: Vec<Complex<f64>> = Vec::new();
    for (x, wk, wg) in kronrod15_unit() {
        let v = f(a + (b - a) * x)?;
        if k.is_empty() {
            k = vec![Complex::new(0.0, 0.0); v.len()];
            g = k.clone();
        }
        for (i, vi) in v.iter().enumerate() {
            k[i] += vi * wk;
            g[i] += vi * wg;
        }
    }
    let h = b - a;
    let err = k.iter().zip(&g).fold(0.0f64, |m, (p, q)| m.max(((p - q) * h).norm()));
    Ok((a, b, k.into_iter().map(|v| v * h).collect(), err))
}

/// Adaptive Gauss–Kronrod quadrature of a vector-valued integrand; the
/// error is the largest component error.
pub fn integrate_vec<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<(Vec<Complex<f64>>, f64)>
where
    F: Fn(f64) -> Result<Vec<Complex<f64>>>,
{
    let mut panels = vec![gk15_vec(&f, a, b)?];
    loop {
        let n = panels[0].2.len();
        let mut total = vec![Complex::new(0.0, 0.0); n];
        for p in &panels {
            for (t, v) in total.iter_mut().zip(&p.2) {
                *t += v;
            }
        }
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if err <= abs_tol.max(rel_tol * scale) {
            return Ok((total, err));
        }
        if panels.len() >= 4_000 {
            return Err(Error::NoConvergence { what: "vector quadrature", iterations: panels.len(), last: err });
        }
        let idx = (0..panels.len()).max_by(|&i, &j| panels[i].3.total_cmp(&panels[j].3)).expect("nonempty");
        let (lo, hi, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        panels.push(gk15_vec(&f, lo, mid)?);
        panels.push(gk15_vec(&f, mid, hi)?);
    }
}

/// Real-valued convenience wrapper.
pub fn integrate_real<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, abs_tol: T, rel_tol: T) -> Result<(T, T)> {
    let (v, e) = integrate(|x| Complex::new(f(x), T::zero()), a, b, abs_tol, rel_tol)?;
    Ok((v.re, e))
}
