//! Laurent jets in the regulator `s`, polynomial in `L = log(σ/2)`.
//!
//! An [`SJet`] stores `Σ_{k=−1}^{K} Σ_ℓ c_{kℓ} s^k L^ℓ + O(s^{K+1})`. Products
//! track how much of the expansion is still known, so a pole multiplying a
//! jet known to `s^K` is known only to `s^{K−1}`.

use crate::scalar::Real;
use crate::{Error, Result};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SJet<T = f64> {
    order: i32,
    /// `rows[k + 1][ℓ]`
    rows: Vec<Vec<Complex<T>>>,
}

/// Result of `s → 0`: surviving residue and finite value, both as polynomials in `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SLimit<T = f64> {
    pub residue: Vec<Complex<T>>,
    pub finite: Vec<Complex<T>>,
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> SJet<T> {
    pub fn zero(order: i32) -> Self {
        assert!(order >= -1, "order below the pole");
        Self { order, rows: vec![Vec::new(); (order + 2) as usize] }
    }

    pub fn constant(v: Complex<T>, order: i32) -> Self {
        let mut j = Self::zero(order);
        j.set(0, 0, v);
        j
    }

    /// Real power series `Σ_{k≥0} a_k s^k` with no `L` dependence.
    pub fn from_series(a: &[T], order: i32) -> Self {
        let mut j = Self::zero(order);
        for (k, &v) in a.iter().enumerate().take((order + 1).max(0) as usize) {
            j.set(k as i32, 0, Complex::new(v, T::zero()));
        }
        j
    }

    /// `e^{sL} = Σ_k s^k L^k / k!`.
    pub fn exp_sl(order: i32) -> Self {
        let mut j = Self::zero(order);
        let mut f = T::one();
        for k in 0..=order {
            if k > 0 {
                f = f / T::from_i32(k).unwrap();
            }
            j.set(k, k as usize, Complex::new(f, T::zero()));
        }
        j
    }

    /// `e^{a s}` for a numeric `a`.
    pub fn exp_linear(a: T, order: i32) -> Self {
        let mut j = Self::zero(order);
        let mut f = T::one();
        for k in 0..=order {
            if k > 0 {
                f = f * a / T::from_i32(k).unwrap();
            }
            j.set(k, 0, Complex::new(f, T::zero()));
        }
        j
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeff(&self, k: i32, l: usize) -> Complex<T> {
        if k < -1 || k > self.order {
            return czero();
        }
        self.rows[(k + 1) as usize].get(l).copied().unwrap_or_else(czero)
    }

    pub fn set(&mut self, k: i32, l: usize, v: Complex<T>) {
        assert!((-1..=self.order).contains(&k), "power outside the jet");
        let row = &mut self.rows[(k + 1) as usize];
        if row.len() <= l {
            row.resize(l + 1, czero());
        }
        row[l] = v;
    }

    /// Highest `L` power present in row `k`.
    pub fn l_degree(&self, k: i32) -> usize {
        if k < -1 || k > self.order {
            0
        } else {
            self.rows[(k + 1) as usize].len()
        }
    }

    pub fn has_pole(&self) -> bool {
        self.rows[0].iter().any(|c| c.norm() > T::zero())
    }

    fn low(&self) -> i32 {
        if self.has_pole() {
            -1
        } else {
            0
        }
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        Self { order: self.order, rows: self.rows.iter().map(|r| r.iter().map(|&c| c * k).collect()).collect() }
    }

    pub fn scale_re(&self, k: T) -> Self {
        self.scale(Complex::new(k, T::zero()))
    }

    /// Truncate to a lower order.
    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        Self { order, rows: self.rows[..(order + 2) as usize].to_vec() }
    }

    fn combine(&self, o: &Self, sign: T) -> Self {
        let order = self.order.min(o.order);
        let mut out = Self::zero(order);
        for k in -1..=order {
            let deg = self.l_degree(k).max(o.l_degree(k));
            for l in 0..deg {
                out.set(k, l, self.coeff(k, l) + o.coeff(k, l) * sign);
            }
        }
        out
    }

    /// Product; a surviving `s^{−2}` term is a [`Error::TruncationOverflow`].
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let (la, lb) = (self.low(), o.low());
        if la + lb < -1 {
            return Err(Error::TruncationOverflow { needed: -2, available: -1 });
        }
        let order = (self.order + lb).min(o.order + la);
        if order < -1 {
            return Err(Error::TruncationOverflow { needed: -1, available: order });
        }
        let mut out = Self::zero(order);
        for ka in la..=self.order {
            for kb in lb..=o.order {
                let k = ka + kb;
                if k > order {
                    continue;
                }
                for la_ in 0..self.l_degree(ka) {
                    let a = self.coeff(ka, la_);
                    if a.norm() == T::zero() {
                        continue;
                    }
                    for lb_ in 0..o.l_degree(kb) {
                        let v = out.coeff(k, la_ + lb_) + a * o.coeff(kb, lb_);
                        out.set(k, la_ + lb_, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Divide by `s`.
    pub fn div_s(&self) -> Result<Self> {
        if self.has_pole() {
            return Err(Error::TruncationOverflow { needed: -2, available: -1 });
        }
        let mut rows = self.rows[1..].to_vec();
        if rows.is_empty() {
            rows.push(Vec::new());
        }
        Ok(Self { order: self.order - 1, rows })
    }

    /// Multiply by `s`.
    pub fn mul_s(&self) -> Self {
        let mut rows = vec![Vec::new()];
        rows.extend(self.rows.iter().cloned());
        Self { order: self.order + 1, rows }
    }

    pub fn pole_part(&self) -> Vec<Complex<T>> {
        self.rows[0].clone()
    }

    pub fn finite_part(&self) -> Result<Vec<Complex<T>>> {
        if self.order < 0 {
            return Err(Error::TruncationOverflow { needed: 0, available: self.order });
        }
        Ok(self.rows[1].clone())
    }

    /// Take `s → 0`, reporting the residue separately.
    pub fn limit_s0(&self) -> Result<SLimit<T>> {
        Ok(SLimit { residue: self.pole_part(), finite: self.finite_part()? })
    }

    /// Evaluate the truncated expansion at numeric `s` and `L`.
    pub fn eval(&self, s: Complex<T>, big_l: T) -> Complex<T> {
        let mut acc: Complex<T> = czero();
        for k in -1..=self.order {
            let mut row: Complex<T> = czero();
            for l in (0..self.l_degree(k)).rev() {
                row = row * big_l + self.coeff(k, l);
            }
            acc = acc + row * s.powi(k);
        }
        acc
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> T {
        self.rows.iter().flatten().fold(T::zero(), |a, c| a.max(c.norm()))
    }
}

impl<T: Real> Add for &SJet<T> {
    type Output = SJet<T>;
    fn add(self, o: Self) -> SJet<T> {
        self.combine(o, T::one())
    }
}

impl<T: Real> Sub for &SJet<T> {
    type Output = SJet<T>;
    fn sub(self, o: Self) -> SJet<T> {
        self.combine(o, -T::one())
    }
}

impl<T: Real> Neg for &SJet<T> {
    type Output = SJet<T>;
    fn neg(self) -> SJet<T> {
        self.scale_re(-T::one())
    }
}
