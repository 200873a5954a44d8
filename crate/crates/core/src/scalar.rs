//! Scalar abstractions.
//!
//! [`Real`] is the floating-point base type (`f32` or `f64`). [`Scalar`] is
//! what metric components and two-point closed forms are written against, so
//! the same code evaluates plain values and second-order forward-mode jets.

use num_traits::{Float, FloatConst, FromPrimitive, One};
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Floating-point base type.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Default + Send + Sync + AddAssign + SubAssign + MulAssign + 'static
{
    #[inline]
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("representable constant")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Arithmetic needed to evaluate metric components and two-point functions.
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    type Base: Real;

    fn cst(v: Self::Base) -> Self;
    fn value(&self) -> Self::Base;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn asin(self) -> Self;
    fn atan(self) -> Self;
    fn powf(self, p: Self::Base) -> Self;

    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::cst(Self::Base::one());
        }
        let mut acc = self;
        for _ in 1..n.unsigned_abs() {
            acc *= self;
        }
        if n < 0 {
            Self::cst(Self::Base::one()) / acc
        } else {
            acc
        }
    }

    fn recip(self) -> Self {
        Self::cst(Self::Base::one()) / self
    }

    fn scale(self, k: Self::Base) -> Self {
        self * Self::cst(k)
    }

    /// Constant from an `f64` literal.
    fn k(v: f64) -> Self {
        Self::cst(Self::Base::c(v))
    }
}

impl<T: Real> Scalar for T {
    type Base = T;
    #[inline]
    fn cst(v: T) -> T {
        v
    }
    #[inline]
    fn value(&self) -> T {
        *self
    }
    fn sqrt(self) -> T {
        Float::sqrt(self)
    }
    fn exp(self) -> T {
        Float::exp(self)
    }
    fn ln(self) -> T {
        Float::ln(self)
    }
    fn sin(self) -> T {
        Float::sin(self)
    }
    fn cos(self) -> T {
        Float::cos(self)
    }
    fn tan(self) -> T {
        Float::tan(self)
    }
    fn asin(self) -> T {
        Float::asin(self)
    }
    fn atan(self) -> T {
        Float::atan(self)
    }
    fn powf(self, p: T) -> T {
        Float::powf(self, p)
    }
    fn powi(self, n: i32) -> T {
        Float::powi(self, n)
    }
}

/// Second-order jet in `N` variables: value, gradient and Hessian.
///
/// Derivatives propagate exactly through arithmetic and elementary functions,
/// so Christoffel symbols and Riemann tensors built from metric jets carry no
/// truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T, const N: usize> {
    pub v: T,
    pub g: [T; N],
    pub h: [[T; N]; N],
}

impl<T: Scalar, const N: usize> Jet<T, N> {
    pub fn constant(v: T) -> Self {
        Self { v, g: [T::k(0.0); N], h: [[T::k(0.0); N]; N] }
    }

    /// Independent variable number `i` with value `v`.
    pub fn var(v: T, i: usize) -> Self {
        let mut j = Self::constant(v);
        j.g[i] = T::k(1.0);
        j
    }

    /// Seed all `N` variables at `x`.
    pub fn vars(x: [T; N]) -> [Self; N] {
        std::array::from_fn(|i| Self::var(x[i], i))
    }

    /// Apply a scalar function with derivatives `(f, f', f'')` at `self.v`.
    #[inline]
    fn chain(self, f0: T, f1: T, f2: T) -> Self {
        let mut out = Self::constant(f0);
        for i in 0..N {
            out.g[i] = f1 * self.g[i];
            for k in 0..N {
                out.h[i][k] = f1 * self.h[i][k] + f2 * self.g[i] * self.g[k];
            }
        }
        out
    }
}

impl<T: Scalar, const N: usize> Add for Jet<T, N> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self += o;
        self
    }
}

impl<T: Scalar, const N: usize> AddAssign for Jet<T, N> {
    fn add_assign(&mut self, o: Self) {
        self.v += o.v;
        for i in 0..N {
            self.g[i] += o.g[i];
            for k in 0..N {
                self.h[i][k] += o.h[i][k];
            }
        }
    }
}

impl<T: Scalar, const N: usize> Sub for Jet<T, N> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        self -= o;
        self
    }
}

impl<T: Scalar, const N: usize> SubAssign for Jet<T, N> {
    fn sub_assign(&mut self, o: Self) {
        self.v -= o.v;
        for i in 0..N {
            self.g[i] -= o.g[i];
            for k in 0..N {
                self.h[i][k] -= o.h[i][k];
            }
        }
    }
}

impl<T: Scalar, const N: usize> Neg for Jet<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::constant(T::k(0.0)) - self
    }
}

impl<T: Scalar, const N: usize> Mul for Jet<T, N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Self::constant(self.v * o.v);
        for i in 0..N {
            out.g[i] = self.v * o.g[i] + o.v * self.g[i];
            for k in 0..N {
                out.h[i][k] = self.v * o.h[i][k]
                    + o.v * self.h[i][k]
                    + self.g[i] * o.g[k]
                    + self.g[k] * o.g[i];
            }
        }
        out
    }
}

impl<T: Scalar, const N: usize> MulAssign for Jet<T, N> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<T: Scalar, const N: usize> Div for Jet<T, N> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let r = o.v.recip();
        self * o.chain(r, -r * r, T::k(2.0) * r * r * r)
    }
}

impl<T: Scalar, const N: usize> Scalar for Jet<T, N> {
    type Base = T::Base;
    fn cst(v: T::Base) -> Self {
        Self::constant(T::cst(v))
    }
    fn value(&self) -> T::Base {
        self.v.value()
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let d1 = T::k(0.5) / s;
        self.chain(s, d1, -d1 / (T::k(2.0) * self.v))
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn ln(self) -> Self {
        let r = self.v.recip();
        self.chain(self.v.ln(), r, -r * r)
    }
    fn sin(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(c, -s, -c)
    }
    fn tan(self) -> Self {
        let t = self.v.tan();
        let d1 = T::k(1.0) + t * t;
        self.chain(t, d1, T::k(2.0) * t * d1)
    }
    fn asin(self) -> Self {
        let q = T::k(1.0) - self.v * self.v;
        let d1 = q.sqrt().recip();
        self.chain(self.v.asin(), d1, self.v * d1 / q)
    }
    fn atan(self) -> Self {
        let d1 = (T::k(1.0) + self.v * self.v).recip();
        self.chain(self.v.atan(), d1, -T::k(2.0) * self.v * d1 * d1)
    }
    fn powf(self, p: T::Base) -> Self {
        let one = <T::Base as num_traits::One>::one();
        let f = self.v.powf(p);
        let d1 = self.v.powf(p - one).scale(p);
        let d2 = self.v.powf(p - one - one).scale(p * (p - one));
        self.chain(f, d1, d2)
    }
    fn powi(self, n: i32) -> Self {
        let nf = T::k(n as f64);
        let f = self.v.powi(n);
        let d1 = nf * self.v.powi(n - 1);
        let d2 = nf * (nf - T::k(1.0)) * self.v.powi(n - 2);
        self.chain(f, d1, d2)
    }
}

/// Jets over the four chart coordinates.
pub type Jet4 = Jet<f64, 4>;

/// First-order dual number in four variables.
///
/// Nesting `Dual<Dual<..>>` gives mixed partials of any order at a cost that
/// grows as `5^depth`, far below nested second-order jets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub v: T,
    pub g: [T; 4],
}

impl<T: Scalar> Dual<T> {
    pub fn constant(v: T) -> Self {
        Self { v, g: [T::k(0.0); 4] }
    }

    pub fn var(v: T, i: usize) -> Self {
        let mut d = Self::constant(v);
        d.g[i] = T::k(1.0);
        d
    }

    pub fn vars(x: &[T; 4]) -> [Self; 4] {
        std::array::from_fn(|i| Self::var(x[i], i))
    }

    pub fn consts(x: &[T; 4]) -> [Self; 4] {
        x.map(Self::constant)
    }

    #[inline]
    fn chain(self, f0: T, f1: T) -> Self {
        Self { v: f0, g: self.g.map(|d| f1 * d) }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self += o;
        self
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    fn add_assign(&mut self, o: Self) {
        self.v += o.v;
        for i in 0..4 {
            self.g[i] += o.g[i];
        }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        self -= o;
        self
    }
}

impl<T: Scalar> SubAssign for Dual<T> {
    fn sub_assign(&mut self, o: Self) {
        self.v -= o.v;
        for i in 0..4 {
            self.g[i] -= o.g[i];
        }
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: -self.v, g: self.g.map(|d| -d) }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { v: self.v * o.v, g: std::array::from_fn(|i| self.v * o.g[i] + o.v * self.g[i]) }
    }
}

impl<T: Scalar> MulAssign for Dual<T> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let r = o.v.recip();
        let q = self.v * r;
        Self { v: q, g: std::array::from_fn(|i| (self.g[i] - q * o.g[i]) * r) }
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    type Base = T::Base;
    fn cst(v: T::Base) -> Self {
        Self::constant(T::cst(v))
    }
    fn value(&self) -> T::Base {
        self.v.value()
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, T::k(0.5) / s)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        self.chain(self.v.ln(), self.v.recip())
    }
    fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }
    fn tan(self) -> Self {
        let t = self.v.tan();
        self.chain(t, T::k(1.0) + t * t)
    }
    fn asin(self) -> Self {
        let d = (T::k(1.0) - self.v * self.v).sqrt().recip();
        self.chain(self.v.asin(), d)
    }
    fn atan(self) -> Self {
        let d = (T::k(1.0) + self.v * self.v).recip();
        self.chain(self.v.atan(), d)
    }
    fn powf(self, p: T::Base) -> Self {
        let one = <T::Base as num_traits::One>::one();
        self.chain(self.v.powf(p), self.v.powf(p - one).scale(p))
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::k(1.0);
        }
        self.chain(self.v.powi(n), T::k(n as f64) * self.v.powi(n - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_grad_hess(f: impl Fn([f64; 2]) -> f64, x: [f64; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
        let h = 1e-4;
        let mut g = [0.0; 2];
        let mut hs = [[0.0; 2]; 2];
        for i in 0..2 {
            let mut p = x;
            let mut m = x;
            p[i] += h;
            m[i] -= h;
            g[i] = (f(p) - f(m)) / (2.0 * h);
            for k in 0..2 {
                let e = |si: f64, sk: f64| {
                    let mut y = x;
                    y[i] += si * h;
                    y[k] += sk * h;
                    f(y)
                };
                hs[i][k] = (e(1.0, 1.0) - e(1.0, -1.0) - e(-1.0, 1.0) + e(-1.0, -1.0)) / (4.0 * h * h);
            }
        }
        (g, hs)
    }

    fn sample<S: Scalar<Base = f64>>(x: [S; 2]) -> S {
        let a = x[0] * x[1].sin() + (x[0] * x[0] + S::cst(1.0)).sqrt().ln();
        let b = (x[1] / (x[0] + S::cst(3.0))).atan() * x[0].exp().powf(0.3);
        a * b + (x[1] * S::cst(0.2)).asin().tan().powi(3) + x[0].cos().recip()
    }

    #[test]
    fn jet_matches_finite_differences() {
        let x = [0.4, -0.7];
        let jet = sample(Jet::<f64, 2>::vars(x));
        let (g, h) = fd_grad_hess(|y| sample(y), x);
        assert!((jet.v - sample(x)).abs() < 1e-14);
        for i in 0..2 {
            assert!((jet.g[i] - g[i]).abs() < 1e-8, "grad {i}");
            for k in 0..2 {
                assert!((jet.h[i][k] - h[i][k]).abs() < 1e-5, "hess {i}{k}");
            }
        }
    }

    #[test]
    fn integer_powers_agree() {
        let x = Jet::<f64, 1>::var(1.3, 0);
        let a = Scalar::powi(x, -3);
        let b = (x * x * x).recip();
        assert!((a.g[0] - b.g[0]).abs() < 1e-13);
        assert!((a.h[0][0] - b.h[0][0]).abs() < 1e-12);
    }

    #[test]
    fn nested_jets_give_fourth_derivatives() {
        // f = sin(x) y³, seeded in both levels
        type J2 = Jet<Jet<f64, 2>, 2>;
        let (x, y) = (0.3, 1.7);
        let seed = |v: f64, i: usize| {
            let mut j = J2::constant(Jet::var(v, i));
            j.g[i] = Jet::constant(1.0);
            j
        };
        let f = |a: J2, b: J2| a.sin() * b.powi(3);
        let r = f(seed(x, 0), seed(y, 1));
        // ∂x ∂x ∂y ∂y f = −sin(x) · 6y
        assert!((r.h[0][1].h[0][1] - (-x.sin() * 6.0 * y)).abs() < 1e-12);
        // ∂y ∂x ∂x f = −sin(x) · 3y²
        assert!((r.g[1].h[0][0] - (-x.sin() * 3.0 * y * y)).abs() < 1e-12);
        assert!((r.g[0].h[0][0] - (-x.cos() * y.powi(3))).abs() < 1e-12);
    }

    #[test]
    fn duals_agree_with_jets() {
        let x = [0.4, -0.7, 0.0, 0.0];
        let f = |a: [Dual<Dual<f64>>; 4]| sample([a[0], a[1]]);
        let inner = Dual::vars(&x);
        let outer: [Dual<Dual<f64>>; 4] = std::array::from_fn(|i| {
            let mut d = Dual::constant(inner[i]);
            d.g[i] = Dual::k(1.0);
            d
        });
        let r = f(outer);
        let jet = sample(Jet::<f64, 2>::vars([x[0], x[1]]));
        for i in 0..2 {
            assert!((r.g[i].v - jet.g[i]).abs() < 1e-13);
            for k in 0..2 {
                assert!((r.g[i].g[k] - jet.h[i][k]).abs() < 1e-12);
            }
        }
    }
}
