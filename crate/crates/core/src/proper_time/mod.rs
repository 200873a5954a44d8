//! Proper-time analytics: gamma-function identities, Laurent jets in the
//! regulator, the gauge-parameter transform and heat-kernel checks.

pub mod endo;
pub mod factors;
pub mod heat;
pub mod integrals;
pub mod kernel;
pub mod sjet;
pub mod special;

pub use factors::{alpha_jet, gamma_jet, prefactor_jet, sigma_power_jet};
pub use sjet::{SJet, SLimit};
pub use endo::{endo_correction, gauge_shift_by_endo, EndoCorrection};
pub use heat::{damped_ray, heat_equation_residual, heat_kernel_expansion, residual_scan, HeatKernelSample, HeatResidual, ResidualScan};
pub use integrals::{
    inc_gamma_grid, inc_gamma_integral, inc_gamma_quadrature, osc_gamma_closed, osc_gamma_quadrature, DampedQuadrature, DampingOptions, OSC_BETAS,
};
