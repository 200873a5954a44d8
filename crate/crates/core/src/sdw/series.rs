//! Truncated Laurent series in one variable with tracked precision.

use crate::scalar::Real;
use std::ops::{Add, Mul, Neg, Sub};

/// `Σ_{k=lo}^{hi} c_k r^k + O(r^{hi+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<T> {
    lo: i32,
    hi: i32,
    c: Vec<T>,
}

impl<T: Real> Laurent<T> {
    pub fn from_fn(lo: i32, hi: i32, f: impl Fn(i32) -> T) -> Self {
        Self { lo, hi, c: (lo..=hi).map(f).collect() }
    }

    pub fn constant(v: T, hi: i32) -> Self {
        Self::from_fn(0, hi, |k| if k == 0 { v } else { T::zero() })
    }

    pub fn zero(hi: i32) -> Self {
        Self::constant(T::zero(), hi)
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.hi
    }

    pub fn coeff(&self, k: i32) -> T {
        if k < self.lo || k > self.hi {
            T::zero()
        } else {
            self.c[(k - self.lo) as usize]
        }
    }

    /// Multiply by `r^m`.
    pub fn shift(&self, m: i32) -> Self {
        Self { lo: self.lo + m, hi: self.hi + m, c: self.c.clone() }
    }

    pub fn scale(&self, k: T) -> Self {
        Self { lo: self.lo, hi: self.hi, c: self.c.iter().map(|&v| v * k).collect() }
    }

    pub fn deriv(&self) -> Self {
        let lo = if self.lo == 0 { 0 } else { self.lo - 1 };
        Self::from_fn(lo, self.hi - 1, |k| self.coeff(k + 1) * T::from_i32(k + 1).unwrap())
    }

    /// Apply `c_k r^k ↦ f(k) c_k r^k`.
    pub fn map_terms(&self, f: impl Fn(i32) -> T) -> Self {
        Self::from_fn(self.lo, self.hi, |k| self.coeff(k) * f(k))
    }

    /// Leading power with a coefficient above `tol` (or `hi + 1` if none).
    pub fn valuation(&self, tol: T) -> i32 {
        (self.lo..=self.hi).find(|&k| self.coeff(k).abs() > tol).unwrap_or(self.hi + 1)
    }

    /// Drop leading coefficients at or below `tol`.
    pub fn trim(&self, tol: T) -> Self {
        let v = self.valuation(tol).min(self.hi);
        Self::from_fn(v, self.hi, |k| self.coeff(k))
    }

    /// Reciprocal of a series with nonzero leading coefficient.
    pub fn recip(&self) -> Self {
        let c0 = self.coeff(self.lo);
        let n = (self.hi - self.lo) as usize;
        let mut g = vec![T::zero(); n + 1];
        g[0] = c0.recip();
        for k in 1..=n {
            let mut s = T::zero();
            for j in 1..=k {
                s += self.c[j] * g[k - j];
            }
            g[k] = -s / c0;
        }
        Self { lo: -self.lo, hi: self.hi - 2 * self.lo, c: g }
    }

    /// `f^p` for a series with `lo = 0` and positive constant term.
    pub fn powf(&self, p: T) -> Self {
        assert_eq!(self.lo, 0, "powf needs a regular series");
        let f0 = self.c[0];
        let n = self.hi as usize;
        let mut g = vec![T::zero(); n + 1];
        g[0] = f0.powf(p);
        for k in 1..=n {
            let kf = T::from_usize(k).unwrap();
            let mut s = T::zero();
            for j in 1..=k {
                let jf = T::from_usize(j).unwrap();
                s += (p * jf - kf + jf) * self.c[j] * g[k - j];
            }
            g[k] = s / (kf * f0);
        }
        Self { lo: 0, hi: self.hi, c: g }
    }

    /// Evaluate at `r` (negative powers allowed for `r ≠ 0`).
    pub fn eval(&self, r: T) -> T {
        let mut acc = T::zero();
        for k in (self.lo..=self.hi).rev() {
            acc = acc * r + self.coeff(k);
        }
        acc * r.powi(self.lo)
    }
}

impl<T: Real> Add for &Laurent<T> {
    type Output = Laurent<T>;
    fn add(self, o: Self) -> Laurent<T> {
        let hi = self.hi.min(o.hi);
        Laurent::from_fn(self.lo.min(o.lo), hi, |k| self.coeff(k) + o.coeff(k))
    }
}

impl<T: Real> Sub for &Laurent<T> {
    type Output = Laurent<T>;
    fn sub(self, o: Self) -> Laurent<T> {
        let hi = self.hi.min(o.hi);
        Laurent::from_fn(self.lo.min(o.lo), hi, |k| self.coeff(k) - o.coeff(k))
    }
}

impl<T: Real> Neg for &Laurent<T> {
    type Output = Laurent<T>;
    fn neg(self) -> Laurent<T> {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for &Laurent<T> {
    type Output = Laurent<T>;
    fn mul(self, o: Self) -> Laurent<T> {
        let lo = self.lo + o.lo;
        let hi = (self.hi + o.lo).min(o.hi + self.lo);
        let mut c = vec![T::zero(); (hi - lo + 1).max(0) as usize];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                let k = i + j;
                if k < c.len() {
                    c[k] += a * b;
                }
            }
        }
        Laurent { lo, hi, c }
    }
}
