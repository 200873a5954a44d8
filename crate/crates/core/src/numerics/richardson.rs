//! Richardson and Neville extrapolation.

use crate::scalar::Real;
use crate::{Error, Result};
use num_complex::Complex;

/// Result of extrapolating a sequence of vector-valued estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct Extrapolated<T> {
    pub value: Vec<T>,
    pub error: T,
    /// Best estimate after each added level, for convergence plots.
    pub diagonal: Vec<Vec<T>>,
}

fn max_diff<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()))
}

fn scale_of<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// Richardson extrapolation of estimates `values[k]` taken at step `h / ratio^k`.
///
/// The error model is `c₁ h^{p} + c₂ h^{p+dp} + …`. Returns the last diagonal
/// entry with the difference between the last two diagonal entries as error.
pub fn richardson<T: Real>(values: &[Vec<T>], ratio: T, p: i32, dp: i32) -> Result<Extrapolated<T>> {
    let n = values.len();
    if n == 0 {
        return Err(Error::Domain("empty extrapolation ladder".into()));
    }
    let mut table: Vec<Vec<Vec<T>>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = vec![values[k].clone()];
        for j in 1..=k {
            let f = ratio.powi(p + dp * (j as i32 - 1));
            let prev = &table[k - 1][j - 1];
            let cur = &row[j - 1];
            let next: Vec<T> = cur.iter().zip(prev).map(|(&c, &q)| c + (c - q) / (f - T::one())).collect();
            row.push(next);
        }
        table.push(row);
    }
    let diagonal: Vec<Vec<T>> = table.iter().map(|r| r.last().unwrap().clone()).collect();
    let value = diagonal[n - 1].clone();
    let error = if n >= 2 { max_diff(&diagonal[n - 1], &diagonal[n - 2]) } else { T::infinity() };
    if n >= 3 {
        let prev = max_diff(&diagonal[n - 2], &diagonal[n - 3]);
        let floor = T::c(1e-9) * (T::one() + scale_of(&value));
        if error > T::c(10.0) * prev && error > floor {
            return Err(Error::NoConvergence {
                what: "richardson extrapolation",
                iterations: n,
                last: error.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(Extrapolated { value, error, diagonal })
}

/// Neville interpolation of `(x_k, y_k)` evaluated at `x = 0`.
///
/// Returns the estimate and the size of the last correction.
pub fn neville_at_zero<T: Real>(xs: &[T], ys: &[Complex<T>]) -> (Complex<T>, T) {
    let n = xs.len();
    let mut p: Vec<Complex<T>> = ys.to_vec();
    let mut last = T::infinity();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            let next = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
            if i == 0 {
                last = (next - p[0]).norm();
            }
            p[i] = next;
        }
    }
    (p[0], last)
}
