//! Adaptive Dormand–Prince 5(4) integrator with exact hits on output times.

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-13, max_steps: 200_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Integrate `y' = f(t, y)` from `t0` and return the state at every time in
/// `outputs` (strictly increasing, all `> t0`).
pub fn integrate<F>(f: F, t0: f64, y0: &[f64], outputs: &[f64], opts: OdeOptions) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut out = Vec::with_capacity(outputs.len());
    let span = outputs.last().map(|&e| e - t0).unwrap_or(0.0);
    let mut h = (span * 0.05).max(1e-6);
    let mut steps = 0usize;
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    for &target in outputs {
        while t < target {
            if steps >= opts.max_steps {
                return Err(Error::OdeStep(format!("step budget exhausted at t = {t}")));
            }
            let last = t + h >= target;
            let hs = if last { target - t } else { h };
            k[0] = f(t, &y)?;
            let mut tmp = vec![0.0; n];
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for j in 0..s {
                        acc += hs * A[s][j] * k[j][i];
                    }
                    tmp[i] = acc;
                }
                k[s] = f(t + C[s] * hs, &tmp)?;
            }
            let mut err = 0.0f64;
            let mut y5 = vec![0.0; n];
            for i in 0..n {
                let mut v5 = y[i];
                let mut v4 = y[i];
                for s in 0..7 {
                    v5 += hs * B5[s] * k[s][i];
                    v4 += hs * B4[s] * k[s][i];
                }
                y5[i] = v5;
                let sc = opts.atol + opts.rtol * y[i].abs().max(v5.abs());
                err = err.max(((v5 - v4) / sc).abs());
            }
            steps += 1;
            if !err.is_finite() {
                h = hs * 0.1;
                if h < 1e-14 * span.max(1.0) {
                    return Err(Error::OdeStep("non-finite derivative".into()));
                }
                continue;
            }
            if err <= 1.0 {
                t = if last { target } else { t + hs };
                y = y5;
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            let proposed = hs * fac;
            if err <= 1.0 && last {
                h = h.max(proposed);
            } else {
                h = proposed;
            }
            if h < 1e-14 * span.max(1.0) {
                return Err(Error::OdeStep(format!("step size underflow at t = {t}")));
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let f = |_t: f64, y: &[f64]| Ok(vec![y[1], -y[0]]);
        let ts: Vec<f64> = (1..=4).map(|k| k as f64 * 0.75).collect();
        let ys = integrate(f, 0.0, &[1.0, 0.0], &ts, OdeOptions::default()).unwrap();
        for (t, y) in ts.iter().zip(&ys) {
            assert!((y[0] - t.cos()).abs() < 1e-10);
            assert!((y[1] + t.sin()).abs() < 1e-10);
        }
    }
}
