use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("metric is singular at the queried point (|det g| = {det:e})")]
    SingularMetric { det: f64 },
    #[error("point {coords:?} is outside the chart domain")]
    OutOfChart { coords: [f64; 4] },
    #[error("unknown metric `{0}`")]
    MetricNotFound(String),
    #[error("invalid metric parameters: {0}")]
    InvalidParameters(String),
    #[error("stencil leaves the chart domain")]
    StencilOutOfDomain,
    #[error("no convergence in {what} after {iterations} iterations (last error {last:e})")]
    NoConvergence { what: &'static str, iterations: usize, last: f64 },
    #[error("several distinct geodesics connect the points (lengths {lengths:?})")]
    MultipleGeodesics { lengths: Vec<f64> },
    #[error("conjugate point along the geodesic (Van Vleck determinant {delta:e})")]
    ConjugatePoint { delta: f64 },
    #[error("ODE step failure: {0}")]
    OdeStep(String),
    #[error("order {requested} exceeds the cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("jet truncation overflow: required order {needed}, available {available}")]
    TruncationOverflow { needed: i32, available: i32 },
    #[error("null separation: local asymptotics undefined at sigma = 0")]
    NullSeparation,
    #[error("continuous-order interpolation unstable: {0}")]
    InterpolationUnstable(String),
    #[error("series `{0}` missing from payload")]
    SeriesMissing(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI envelopes.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMetric { .. } => "SINGULAR_METRIC",
            Error::OutOfChart { .. } => "OUT_OF_CHART",
            Error::MetricNotFound(_) => "METRIC_NOT_FOUND",
            Error::InvalidParameters(_) => "INVALID_PARAMETERS",
            Error::StencilOutOfDomain => "STENCIL_OUT_OF_DOMAIN",
            Error::NoConvergence { .. } => "NO_CONVERGENCE",
            Error::MultipleGeodesics { .. } => "MULTIPLE_GEODESICS",
            Error::ConjugatePoint { .. } => "CONJUGATE_POINT",
            Error::OdeStep(_) => "ODE_STEP",
            Error::CapExceeded { .. } => "CAP_EXCEEDED",
            Error::Domain(_) => "DOMAIN_ERROR",
            Error::TruncationOverflow { .. } => "TRUNCATION_OVERFLOW",
            Error::NullSeparation => "NULL_SEPARATION",
            Error::InterpolationUnstable(_) => "INTERPOLATION_UNSTABLE",
            Error::SeriesMissing(_) => "SERIES_MISSING",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
