//! Coincidence limits of two-point quantities by symmetric extrapolation.

use crate::numerics::richardson::richardson;
use crate::Result;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoincidenceLimit {
    pub value: Vec<f64>,
    pub error: f64,
    /// Step ladder used (`h₀, h₀/2, …`).
    pub steps: Vec<f64>,
    /// Extrapolant and error estimate after each rung: `(smallest step, value, error)`.
    pub history: Vec<(f64, Vec<f64>, f64)>,
}

/// `coincidence_extrapolate`: limit `ε → 0` of `f(ε)`, where `f(ε)` evaluates a
/// two-point quantity at separation `ε · d` along some fixed direction `d`.
///
/// Values at `±h` are averaged, which cancels odd powers, and the even
/// expansion is then Richardson-extrapolated over the halving ladder.
pub fn coincidence_extrapolate<F>(f: &F, h0: f64, levels: usize) -> Result<CoincidenceLimit>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    let levels = levels.max(1);
    let steps: Vec<f64> = (0..levels).map(|k| h0 / 2f64.powi(k as i32)).collect();
    let args: Vec<f64> = steps.iter().flat_map(|&h| [h, -h]).collect();
    let vals: Vec<Vec<f64>> = args.par_iter().map(|&e| f(e)).collect::<Result<_>>()?;
    let sym: Vec<Vec<f64>> = vals
        .chunks(2)
        .map(|pm| pm[0].iter().zip(&pm[1]).map(|(a, b)| 0.5 * (a + b)).collect())
        .collect();
    let r = richardson(&sym, 2.0, 2, 2)?;
    let history = r
        .diagonal
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let e = if k == 0 { f64::INFINITY } else { d.iter().zip(&r.diagonal[k - 1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) };
            (steps[k], d.clone(), e)
        })
        .collect();
    Ok(CoincidenceLimit { value: r.value, error: r.error, steps, history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitensor::{ClosedForm, TwoPoint};
    use crate::geometry::SpacetimePoint;

    #[test]
    fn polynomial_limit() {
        let f = |e: f64| Ok(vec![3.0 + e + 2.0 * e * e - e.powi(4) + 0.5 * e.powi(6)]);
        let r = coincidence_extrapolate(&f, 0.1, 4).unwrap();
        assert!((r.value[0] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn sphere_hessian_of_world_function() {
        // [σ_{;μν′}] = −g_{μν}
        let cf = ClosedForm::Sphere { radius: 1.0 };
        let x = [0.2, 0.0, -0.1, 0.3];
        let d = [0.3, -0.5, 0.2, 0.1];
        let f = |e: f64| {
            let xp: [f64; 4] = std::array::from_fn(|i| x[i] + e * d[i]);
            let p = cf.pair(&SpacetimePoint::new(x), &SpacetimePoint::new(xp))?;
            Ok(p.mixed.iter().flatten().copied().collect())
        };
        let r = coincidence_extrapolate(&f, 0.2, 4).unwrap();
        let g = crate::geometry::MetricModel::sphere(1.0).metric_at(&SpacetimePoint::new(x)).unwrap().g;
        for mu in 0..4 {
            for nu in 0..4 {
                assert!((r.value[mu * 4 + nu] + g[mu][nu]).abs() < 1e-10);
            }
        }
    }
}
