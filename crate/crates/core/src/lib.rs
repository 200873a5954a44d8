pub mod bitensor;
pub mod covariant;
pub mod error;
pub mod geometry;
pub mod green;
pub mod hadamard;
pub mod numerics;
pub mod proper_time;
pub mod scalar;
pub mod sdw;
pub mod tensor;

pub use error::{Error, Result};
pub use geometry::{CurvatureBundle, MetricModel, Signature, SpacetimePoint};
pub use scalar::{Jet, Jet4, Real, Scalar};
