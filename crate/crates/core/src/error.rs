use thiserror::Error;

/// Errors raised by the geometry, flow and variational routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point ({u}, {v}) lies outside the chart domain")]
    OutOfDomain { u: f64, v: f64 },
    #[error("metric is degenerate (|det g| = {det:e})")]
    DegenerateMetric { det: f64 },
    #[error("operation requires a Riemannian (positive definite) metric")]
    IndefiniteMetricUnsupported,
    #[error("zero tangent vector")]
    ZeroVector,
    #[error("trajectory has fewer than two samples")]
    EmptyTrajectory,
    #[error("extendibility probe needs a NormBlowup or DomainEscape trajectory")]
    WrongTermination,
    #[error("input `{0}` must be positive")]
    NonpositiveInput(&'static str),
    #[error("field strength is zero: flowlines are geodesics and have no radius")]
    ZeroStrength,
    #[error("curvature parameter G must be positive")]
    NonpositiveCurvatureParameter,
    #[error("profile touches the rotation axis at t = {t}")]
    AxisContact { t: f64 },
    #[error("torus parameters must satisfy 0 < r < R (got r = {r}, R = {big_r})")]
    BadTorusParameters { r: f64, big_r: f64 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("unknown surface name `{0}`")]
    UnknownName(String),
    #[error("no parameter interval satisfies the profile constraints")]
    EmptyDomain,
    #[error("curve has {got} nodes, at least {need} are required")]
    TooFewNodes { got: usize, need: usize },
    #[error("perturbation is not admissible: {0}")]
    BadPerturbation(String),
    #[error("curve is not critical (max |G - m kappa| = {max_residual:e})")]
    NotCritical { max_residual: f64 },
    #[error("stability test requires m != 0")]
    ZeroMass,
    #[error("tube leaves its embeddedness band (r * kappa * cos v >= 1)")]
    DegenerateTube,
    #[error("invalid step policy: {0}")]
    InvalidPolicy(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
