//! Magnetic flowlines on Riemannian surfaces.
//!
//! Charts carry a metric model and an orientation; a [`ForceOperator`] turns a
//! magnetic strength or a two-tensor into the right-hand side of the
//! Landau–Hall equation, which [`flow::integrate`] solves. Surfaces of
//! revolution, tubes and space forms have dedicated modules with closed-form
//! and root-scanning tools, and [`variational`] discretizes the
//! length-plus-flux functional whose critical points are the flowlines.

pub mod chart;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod flow;
pub mod force;
pub mod profile;
pub mod report;
pub mod revolution;
pub mod roots;
pub mod space_forms;
pub mod spline;
pub mod tubes;
pub mod variational;

pub use chart::{
    ChartPoint, Christoffel, Domain, MetricModel, MetricValue, Orientation, Signature,
    SurfaceChart, TangentVector,
};
pub use error::{GeomError, Result};
pub use flow::{integrate, Direction, FlowState, Method, StepPolicy, Termination, Trajectory};
pub use force::{lorentz_from_strength, lorentz_from_tensor, ForceOperator, Strength, TensorField};
pub use profile::{named_profile, ProfileCurve};
pub use revolution::{revolution_chart, FieldKind};
pub use tubes::{tube_chart, TubeSpec};
pub use variational::DiscreteCurve;
