//! Dense four-dimensional tensor helpers.
//!
//! Index order is always the written order, e.g. `riemann[l][m][n][r]` is
//! `R^l_{mnr}`.

use nalgebra::Matrix4;

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];
pub type Tensor3 = [[[f64; 4]; 4]; 4];
pub type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];

pub const ZERO4: Mat4 = [[0.0; 4]; 4];
pub const ZERO_T4: Tensor4 = [[[[0.0; 4]; 4]; 4]; 4];

pub fn identity() -> Mat4 {
    let mut m = ZERO4;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn diag(d: Vec4) -> Mat4 {
    let mut m = ZERO4;
    for i in 0..4 {
        m[i][i] = d[i];
    }
    m
}

pub fn to_na(m: &Mat4) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m[i][j])
}

pub fn from_na(m: &Matrix4<f64>) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

pub fn det(m: &Mat4) -> f64 {
    to_na(m).determinant()
}

pub fn inverse(m: &Mat4) -> Option<Mat4> {
    to_na(m).try_inverse().map(|i| from_na(&i))
}

pub fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn transpose(a: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn mat_vec(a: &Mat4, v: &Vec4) -> Vec4 {
    std::array::from_fn(|i| (0..4).map(|k| a[i][k] * v[k]).sum())
}

pub fn dot(g: &Mat4, u: &Vec4, v: &Vec4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += g[i][j] * u[i] * v[j];
        }
    }
    s
}

pub fn scale(a: &Mat4, k: f64) -> Mat4 {
    a.map(|r| r.map(|v| v * k))
}

pub fn add(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + b[i][j]))
}

pub fn sub(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] - b[i][j]))
}

pub fn max_abs(a: &Mat4) -> f64 {
    a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn max_abs4(a: &Tensor4) -> f64 {
    a.iter().flatten().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn frobenius(a: &Mat4) -> f64 {
    a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Flatten a rank-4 tensor in row-major order.
pub fn flat4(t: &Tensor4) -> Vec<f64> {
    t.iter().flatten().flatten().flatten().copied().collect()
}

pub fn unflat4(v: &[f64]) -> Tensor4 {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| std::array::from_fn(|c| std::array::from_fn(|d| v[((a * 4 + b) * 4 + c) * 4 + d])))
    })
}

pub fn flat2(m: &Mat4) -> Vec<f64> {
    m.iter().flatten().copied().collect()
}

pub fn unflat2(v: &[f64]) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| v[i * 4 + j]))
}

pub fn map4(t: &Tensor4, f: impl Fn(f64) -> f64) -> Tensor4 {
    t.map(|a| a.map(|b| b.map(|c| c.map(&f))))
}

pub fn zip4(a: &Tensor4, b: &Tensor4, f: impl Fn(f64, f64) -> f64) -> Tensor4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| std::array::from_fn(|l| f(a[i][j][k][l], b[i][j][k][l]))))
    })
}
