//! Generic numerical kernels: extrapolation, stencils, quadrature, ODEs.

pub mod ode;
pub mod quad;
pub mod richardson;
pub mod stencil;
