//! Central finite-difference partial derivatives with Richardson step halving.

use super::richardson::richardson;
use crate::tensor::Vec4;
use crate::Result;
use rayon::prelude::*;

/// Coordinate partials of a vector-valued function at a point.
#[derive(Clone, Debug)]
pub struct Partials {
    pub value: Vec<f64>,
    /// `d1[i] = ∂_i f`
    pub d1: Vec<Vec<f64>>,
    /// `d2[i][j] = ∂_i ∂_j f` (empty unless requested)
    pub d2: Vec<Vec<Vec<f64>>>,
    pub error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilOptions {
    pub step: f64,
    /// Number of step halvings (levels ≥ 1).
    pub levels: usize,
}

impl Default for StencilOptions {
    fn default() -> Self {
        Self { step: 1e-2, levels: 3 }
    }
}

fn shifted(x: &Vec4, moves: &[(usize, f64)]) -> Vec4 {
    let mut y = *x;
    for &(i, d) in moves {
        y[i] += d;
    }
    y
}

/// First (and optionally second) partials of `f` at `x`.
pub fn partials<F>(f: &F, x: &Vec4, second: bool, opts: StencilOptions) -> Result<Partials>
where
    F: Fn(&Vec4) -> Result<Vec<f64>> + Sync,
{
    let levels = opts.levels.max(1);
    let mut points: Vec<Vec4> = vec![*x];
    for k in 0..levels {
        let h = opts.step / 2f64.powi(k as i32);
        for i in 0..4 {
            points.push(shifted(x, &[(i, h)]));
            points.push(shifted(x, &[(i, -h)]));
        }
        if second {
            for i in 0..4 {
                for j in i + 1..4 {
                    for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                        points.push(shifted(x, &[(i, si * h), (j, sj * h)]));
                    }
                }
            }
        }
    }
    let vals: Vec<Vec<f64>> = points.par_iter().map(f).collect::<Result<_>>()?;
    let f0 = &vals[0];
    let n = f0.len();
    let per_level = 8 + if second { 24 } else { 0 };
    let mut d1_levels: Vec<Vec<Vec<f64>>> = vec![Vec::new(); 4];
    let mut d2_levels: Vec<Vec<Vec<Vec<f64>>>> = vec![vec![Vec::new(); 4]; 4];
    for k in 0..levels {
        let h = opts.step / 2f64.powi(k as i32);
        let base = 1 + k * per_level;
        for i in 0..4 {
            let fp = &vals[base + 2 * i];
            let fm = &vals[base + 2 * i + 1];
            d1_levels[i].push((0..n).map(|c| (fp[c] - fm[c]) / (2.0 * h)).collect());
            if second {
                d2_levels[i][i].push((0..n).map(|c| (fp[c] - 2.0 * f0[c] + fm[c]) / (h * h)).collect());
            }
        }
        if second {
            let mut idx = base + 8;
            for i in 0..4 {
                for j in i + 1..4 {
                    let (pp, pm, mp, mm) = (&vals[idx], &vals[idx + 1], &vals[idx + 2], &vals[idx + 3]);
                    idx += 4;
                    let d: Vec<f64> = (0..n).map(|c| (pp[c] - pm[c] - mp[c] + mm[c]) / (4.0 * h * h)).collect();
                    d2_levels[i][j].push(d.clone());
                    d2_levels[j][i].push(d);
                }
            }
        }
    }
    let mut error = 0.0f64;
    let mut d1 = Vec::with_capacity(4);
    for lv in &d1_levels {
        let r = richardson(lv, 2.0, 2, 2)?;
        if levels > 1 {
            error = error.max(r.error);
        }
        d1.push(r.value);
    }
    let mut d2 = Vec::new();
    if second {
        for i in 0..4 {
            let mut row = Vec::with_capacity(4);
            for j in 0..4 {
                let r = richardson(&d2_levels[i][j], 2.0, 2, 2)?;
                if levels > 1 {
                    error = error.max(r.error);
                }
                row.push(r.value);
            }
            d2.push(row);
        }
    }
    Ok(Partials { value: f0.clone(), d1, d2, error })
}
