//! Generic bitensor container and the scalar pack of a point pair.

use super::field::Slot;
use super::PairData;
use crate::geometry::{MetricModel, SpacetimePoint};
use crate::tensor::{Mat4, Vec4};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variance {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Point {
    X,
    Xp,
}

impl From<Slot> for Point {
    fn from(s: Slot) -> Self {
        match s {
            Slot::X => Point::X,
            Slot::Xp => Point::Xp,
        }
    }
}

/// Dense tensor with indices at `x` and `x′`, row-major over the slots.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiTensor {
    pub x: SpacetimePoint,
    pub xp: SpacetimePoint,
    pub slots: Vec<(Point, Variance)>,
    pub components: Vec<f64>,
}

impl BiTensor {
    pub fn new(x: SpacetimePoint, xp: SpacetimePoint, slots: Vec<(Point, Variance)>, components: Vec<f64>) -> Result<Self> {
        if components.len() != 4usize.pow(slots.len() as u32) {
            return Err(Error::InvalidParameters(format!("{} components for rank {}", components.len(), slots.len())));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("non-finite bitensor component".into()));
        }
        Ok(Self { x, xp, slots, components })
    }

    /// `T_{μν′}` from a matrix with unprimed rows.
    pub fn mixed(x: SpacetimePoint, xp: SpacetimePoint, m: &Mat4) -> Self {
        let slots = vec![(Point::X, Variance::Down), (Point::Xp, Variance::Down)];
        Self { x, xp, slots, components: m.iter().flatten().copied().collect() }
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.components[idx.iter().fold(0, |acc, &i| acc * 4 + i)]
    }

    /// Rank-2 view, if this is a two-index tensor.
    pub fn as_mat4(&self) -> Option<Mat4> {
        (self.rank() == 2).then(|| std::array::from_fn(|a| std::array::from_fn(|b| self.components[a * 4 + b])))
    }
}

/// `σ`, its gradients, `σ_{;μν′}` and the Van Vleck determinant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiScalarPack {
    pub sigma: f64,
    pub sigma_grad_x: Vec4,
    pub sigma_grad_xp: Vec4,
    pub sigma_mixed: BiTensor,
    pub vanvleck: f64,
    pub sqrt_vanvleck: f64,
}

impl BiScalarPack {
    pub fn from_pair(x: SpacetimePoint, xp: SpacetimePoint, p: &PairData) -> Self {
        Self {
            sigma: p.sigma,
            sigma_grad_x: p.grad_x,
            sigma_grad_xp: p.grad_xp,
            sigma_mixed: BiTensor::mixed(x, xp, &p.mixed),
            vanvleck: p.van_vleck,
            sqrt_vanvleck: p.van_vleck.sqrt(),
        }
    }

    /// `|σ_{;μ}σ^{;μ} − 2σ|`.
    pub fn norm_defect(&self, model: &MetricModel) -> Result<f64> {
        let inv = model.metric_at(&self.sigma_mixed.x)?.inv;
        let mut n = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                n += inv[a][b] * self.sigma_grad_x[a] * self.sigma_grad_x[b];
            }
        }
        Ok((n - 2.0 * self.sigma).abs())
    }
}
