//! Declarative run description: one TOML document with a schema string, a
//! surface, an optional field, a task and output settings. Unknown keys are
//! rejected.
//!
//! ```toml
//! schema = "magnetoflow/1"
//!
//! [surface]
//! kind = "torus"
//! r = 1.0
//! R = 2.0
//!
//! [field]
//! kind = "uniform"
//! mu = 0.3
//!
//! [task]
//! kind = "parallels"
//! ```

use magnetoflow::profile::{gmf_invariant_profile, ProfileCurve};
use magnetoflow::revolution::revolution_chart;
use magnetoflow::space_forms::{SpaceForm, SpaceFormKind};
use magnetoflow::tubes::{tube_chart, BaseCurvature, TubeSpec};
use magnetoflow::variational::MIN_NODES;
use magnetoflow::{lorentz_from_strength, lorentz_from_tensor, ForceOperator, Signature, Strength, SurfaceChart, TensorField};
use serde::Deserialize;

use crate::error::CliError;

pub const SCHEMA: &str = "magnetoflow/1";

pub const DEFAULT_RESOLUTION: usize = magnetoflow::roots::DEFAULT_RESOLUTION;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub schema: String,
    pub seed: Option<u64>,
    pub surface: Option<SurfaceSpec>,
    pub field: Option<FieldSpec>,
    pub task: TaskSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SphereChart {
    #[default]
    Polar,
    Stereographic,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceSpec {
    Plane {},
    LorentzPlane {},
    Sphere {
        radius: f64,
        #[serde(default)]
        chart: SphereChart,
    },
    Hyperbolic {
        curvature: f64,
    },
    Torus {
        r: f64,
        #[serde(rename = "R", alias = "big_r")]
        big_r: f64,
    },
    Catenoid {},
    Hyperboloid {},
    Cylinder {
        radius: f64,
    },
    Cone {
        a: f64,
        b: f64,
        #[serde(default = "default_cone_length")]
        t_max: f64,
    },
    Cycloid {
        a: f64,
    },
    Bugle {
        mu: f64,
    },
    Invariant {
        a: f64,
        b: f64,
        c: f64,
        m: f64,
    },
    Profile {
        t: Vec<f64>,
        f: Vec<f64>,
        h: Vec<f64>,
    },
    TubeCircle {
        #[serde(rename = "R", alias = "big_r")]
        big_r: f64,
        radius: f64,
    },
    TubePlane {
        curvature: f64,
        #[serde(default)]
        slope: f64,
        length: f64,
        radius: f64,
    },
    TubeHelix {
        curvature: f64,
        torsion: f64,
        radius: f64,
    },
}

fn default_cone_length() -> f64 {
    50.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    None {},
    Uniform {
        mu: f64,
    },
    Gmf {
        m: f64,
    },
    /// `F(u, v) = constant + u du + v dv`.
    Tensor {
        #[serde(default)]
        constant: [[f64; 2]; 2],
        #[serde(default)]
        du: [[f64; 2]; 2],
        #[serde(default)]
        dv: [[f64; 2]; 2],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodSpec {
    #[default]
    Rk4,
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionSpec {
    #[default]
    Forward,
    Backward,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    /// Circle of revolution `u = t`.
    Parallel {
        t: f64,
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
    /// Flowline of the spec's field, sampled every `stride` steps.
    Flowline {
        start: Option<[f64; 2]>,
        #[serde(default)]
        heading: f64,
        #[serde(default = "one")]
        energy: f64,
        span: f64,
        #[serde(default = "default_step")]
        step: f64,
        #[serde(default = "default_stride")]
        stride: usize,
    },
    Nodes {
        u: Vec<f64>,
        v: Vec<f64>,
        #[serde(default)]
        closed: bool,
    },
}

/// Normal variation `W = amplitude · shape · N`; `shape` is `cos(mode x)`
/// on closed curves and a bump vanishing to high order at the ends of open
/// ones.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub amplitude: f64,
    #[serde(default)]
    pub mode: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Formula {
    SphereRadius {
        r: f64,
        e: f64,
        mu: f64,
    },
    PlaneRadius {
        e: f64,
        mu: f64,
    },
    HyperbolicClass {
        curvature: f64,
        mu: f64,
    },
    TorusParallels {
        r: f64,
        #[serde(rename = "R", alias = "big_r")]
        big_r: f64,
        mu: f64,
    },
    Coupling {
        r: f64,
        #[serde(rename = "R", alias = "big_r")]
        big_r: f64,
        m: f64,
    },
    HelixCount {
        r: f64,
        kappa: f64,
        tau: f64,
        m: f64,
        #[serde(default = "default_resolution")]
        resolution: usize,
    },
    HelixCrossCheck {
        r: f64,
        kappa: f64,
        tau: f64,
        m: f64,
        #[serde(default = "default_resolution")]
        resolution: usize,
    },
    /// Range of uniform strengths admitting magnetic parallels on the
    /// spec's revolution surface.
    StrengthRange {
        #[serde(default = "default_resolution")]
        resolution: usize,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskSpec {
    Integrate {
        start: Option<[f64; 2]>,
        velocity: Option<[f64; 2]>,
        heading: Option<f64>,
        #[serde(alias = "e")]
        energy: Option<f64>,
        span: f64,
        #[serde(default = "default_step")]
        step: f64,
        #[serde(default)]
        method: MethodSpec,
        tolerance: Option<f64>,
        #[serde(default)]
        direction: DirectionSpec,
        ceiling: Option<f64>,
    },
    Parallels {
        #[serde(default = "default_resolution")]
        resolution: usize,
        /// Arclength position of the `v`-circle scanned on tubes.
        #[serde(default)]
        s: f64,
    },
    Variational {
        m: Option<f64>,
        curve: CurveSpec,
        perturbation: Option<PerturbationSpec>,
        /// Residual level below which the curve is reported critical.
        tolerance: Option<f64>,
    },
    Stability {
        m: Option<f64>,
        curve: CurveSpec,
    },
    Classify {
        #[serde(default = "one", alias = "e")]
        energy: f64,
    },
    Oracle {
        formula: Formula,
    },
    ReproducePaper {},
}

impl TaskSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TaskSpec::Integrate { .. } => "integrate",
            TaskSpec::Parallels { .. } => "parallels",
            TaskSpec::Variational { .. } => "variational",
            TaskSpec::Stability { .. } => "stability",
            TaskSpec::Classify { .. } => "classify",
            TaskSpec::Oracle { .. } => "oracle",
            TaskSpec::ReproducePaper {} => "reproduce-paper",
        }
    }

    /// Applies a command-line tolerance to the tasks that have one.
    pub fn override_tolerance(&mut self, value: f64) -> Result<(), CliError> {
        match self {
            TaskSpec::Integrate { tolerance, method, .. } => {
                *tolerance = Some(value);
                *method = MethodSpec::Adaptive;
                Ok(())
            }
            TaskSpec::Variational { tolerance, .. } => {
                *tolerance = Some(value);
                Ok(())
            }
            other => Err(CliError::validation(
                "--tolerance",
                format!("task `{}` has no tolerance", other.name()),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    /// File stem of the primary output.
    pub name: Option<String>,
}

fn default_nodes() -> usize {
    256
}

fn default_step() -> f64 {
    1e-3
}

fn default_stride() -> usize {
    10
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

fn one() -> f64 {
    1.0
}

/// A constructed surface.
#[derive(Debug, Clone)]
pub enum Surface {
    Revolution { profile: ProfileCurve, chart: SurfaceChart },
    Tube { spec: TubeSpec, chart: SurfaceChart },
    SpaceForm(SpaceForm),
    Lorentz(SurfaceChart),
}

impl Surface {
    pub fn chart(&self) -> &SurfaceChart {
        match self {
            Surface::Revolution { chart, .. } | Surface::Tube { chart, .. } | Surface::Lorentz(chart) => chart,
            Surface::SpaceForm(sf) => &sf.chart,
        }
    }

    pub fn is_flat_chart(&self) -> bool {
        matches!(self, Surface::Lorentz(_)) || matches!(self, Surface::SpaceForm(sf) if sf.kind == SpaceFormKind::Plane)
    }
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<Surface, CliError> {
        let bad = |e| CliError::invalid("surface", e);
        let revolution = |profile: ProfileCurve| -> Result<Surface, CliError> {
            let chart = revolution_chart(&profile).map_err(bad)?;
            Ok(Surface::Revolution { profile, chart })
        };
        let tube = |spec: TubeSpec| -> Result<Surface, CliError> {
            let chart = tube_chart(&spec).map_err(bad)?;
            Ok(Surface::Tube { spec, chart })
        };
        match self {
            SurfaceSpec::Plane {} => Ok(Surface::SpaceForm(SpaceForm::plane())),
            SurfaceSpec::LorentzPlane {} => Ok(Surface::Lorentz(SurfaceChart::lorentz_plane())),
            SurfaceSpec::Sphere { radius, chart } => {
                let mut sf = SpaceForm::sphere(*radius).map_err(bad)?;
                if *chart == SphereChart::Stereographic {
                    sf.chart = SurfaceChart::sphere_stereographic(*radius).map_err(bad)?;
                }
                Ok(Surface::SpaceForm(sf))
            }
            SurfaceSpec::Hyperbolic { curvature } => Ok(Surface::SpaceForm(SpaceForm::hyperbolic(*curvature).map_err(bad)?)),
            SurfaceSpec::Torus { r, big_r } => revolution(ProfileCurve::torus(*r, *big_r).map_err(bad)?),
            SurfaceSpec::Catenoid {} => revolution(ProfileCurve::catenoid()),
            SurfaceSpec::Hyperboloid {} => revolution(ProfileCurve::hyperboloid()),
            SurfaceSpec::Cylinder { radius } => revolution(ProfileCurve::cylinder(*radius).map_err(bad)?),
            SurfaceSpec::Cone { a, b, t_max } => revolution(ProfileCurve::cone(*a, *b, *t_max).map_err(bad)?),
            SurfaceSpec::Cycloid { a } => revolution(ProfileCurve::cycloid(*a).map_err(bad)?),
            SurfaceSpec::Bugle { mu } => revolution(ProfileCurve::bugle(*mu).map_err(bad)?),
            SurfaceSpec::Invariant { a, b, c, m } => revolution(gmf_invariant_profile(*a, *b, *c, *m).map_err(bad)?),
            SurfaceSpec::Profile { t, f, h } => revolution(ProfileCurve::table(t, f, h).map_err(bad)?),
            SurfaceSpec::TubeCircle { big_r, radius } => tube(TubeSpec::circle(*big_r, *radius).map_err(bad)?),
            SurfaceSpec::TubePlane {
                curvature,
                slope,
                length,
                radius,
            } => {
                let k = if *slope == 0.0 {
                    BaseCurvature::Constant(*curvature)
                } else {
                    BaseCurvature::Linear {
                        k0: *curvature,
                        k1: *slope,
                    }
                };
                tube(TubeSpec::plane(k, *length, *radius).map_err(bad)?)
            }
            SurfaceSpec::TubeHelix {
                curvature,
                torsion,
                radius,
            } => tube(TubeSpec::helix(*curvature, *torsion, *radius).map_err(bad)?),
        }
    }

    /// Torus parameters, when the surface is a torus of revolution.
    pub fn torus(&self) -> Option<(f64, f64)> {
        match *self {
            SurfaceSpec::Torus { r, big_r } => Some((r, big_r)),
            _ => None,
        }
    }
}

impl FieldSpec {
    pub fn force(&self, surface: &Surface) -> Result<ForceOperator, CliError> {
        let chart = surface.chart();
        match *self {
            FieldSpec::None {} => Ok(ForceOperator::zero()),
            FieldSpec::Uniform { mu } => {
                lorentz_from_strength(chart, Strength::Uniform(mu)).map_err(|e| CliError::invalid("field", e))
            }
            FieldSpec::Gmf { m } => {
                lorentz_from_strength(chart, Strength::Gaussian { m }).map_err(|e| CliError::invalid("field", e))
            }
            FieldSpec::Tensor { constant, du, dv } => {
                Ok(lorentz_from_tensor(chart, TensorField::Linear { constant, du, dv }))
            }
        }
    }
}

/// Parses and validates a spec document.
pub fn parse_runspec(text: &str) -> Result<RunSpec, CliError> {
    let spec: RunSpec = toml::from_str(text).map_err(|e| parse_error(text, &e))?;
    validate(&spec)?;
    Ok(spec)
}

fn parse_error(text: &str, err: &toml::de::Error) -> CliError {
    let (line, column) = match err.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        }
        None => (0, 0),
    };
    CliError::Parse {
        line,
        column,
        message: err.message().to_string(),
    }
}

fn finite(key: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::validation(key, "must be finite"))
    }
}

fn positive(key: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::validation(key, "must be positive and finite"))
    }
}

/// Mass of the variational tasks: the task value, else the field's.
pub fn task_mass(spec: &RunSpec, m: Option<f64>) -> Option<f64> {
    m.or(match spec.field {
        Some(FieldSpec::Gmf { m }) => Some(m),
        _ => None,
    })
}

pub fn validate(spec: &RunSpec) -> Result<(), CliError> {
    if spec.schema != SCHEMA {
        return Err(CliError::validation(
            "schema",
            format!("expected \"{SCHEMA}\", got \"{}\"", spec.schema),
        ));
    }
    if let Some(name) = &spec.output.name {
        if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
            return Err(CliError::validation("output.name", "must be a plain file stem"));
        }
    }
    let csv_ok = matches!(spec.task, TaskSpec::Integrate { .. } | TaskSpec::Parallels { .. });
    if spec.output.format == Format::Csv && !csv_ok {
        return Err(CliError::validation(
            "output.format",
            format!("task `{}` writes JSON only", spec.task.name()),
        ));
    }

    match spec.field {
        Some(FieldSpec::Uniform { mu }) => finite("field.mu", mu)?,
        Some(FieldSpec::Gmf { m }) => {
            if m == 0.0 || !m.is_finite() {
                return Err(CliError::validation(
                    "field.m",
                    "Gaussian field strength G/m needs a finite nonzero m",
                ));
            }
        }
        Some(FieldSpec::Tensor { constant, du, dv }) => {
            if [constant, du, dv].iter().flatten().flatten().any(|x| !x.is_finite()) {
                return Err(CliError::validation("field", "tensor entries must be finite"));
            }
        }
        _ => {}
    }

    let surface = spec.surface.as_ref().map(SurfaceSpec::build).transpose()?;
    if let (Some(s), Some(field)) = (&surface, &spec.field) {
        match field {
            FieldSpec::Tensor { .. } if !s.is_flat_chart() => {
                return Err(CliError::validation(
                    "field.kind",
                    "tensor fields are only supported on flat charts (plane, lorentz-plane)",
                ));
            }
            FieldSpec::Uniform { .. } | FieldSpec::Gmf { .. } if s.chart().signature() == Signature::Indefinite => {
                return Err(CliError::validation(
                    "field.kind",
                    "the lorentz plane takes tensor fields only",
                ));
            }
            _ => {}
        }
        field.force(s)?;
    }
    let need_surface = || {
        surface
            .as_ref()
            .ok_or_else(|| CliError::validation("surface", format!("task `{}` needs a surface", spec.task.name())))
    };

    match &spec.task {
        TaskSpec::Integrate {
            start,
            velocity,
            heading,
            energy,
            span,
            step,
            method,
            tolerance,
            ceiling,
            ..
        } => {
            let s = need_surface()?;
            if span.is_nan() || *span < 0.0 || span.is_infinite() {
                return Err(CliError::validation("task.span", "must be finite and nonnegative"));
            }
            positive("task.step", *step)?;
            if let Some(t) = tolerance {
                positive("task.tolerance", *t)?;
                if *method == MethodSpec::Rk4 {
                    return Err(CliError::validation(
                        "task.tolerance",
                        "tolerance applies to method = \"adaptive\"",
                    ));
                }
            }
            if let Some(c) = ceiling {
                positive("task.ceiling", *c)?;
            }
            if let Some(p) = start {
                finite("task.start", p[0])?;
                finite("task.start", p[1])?;
                if !s.chart().contains(magnetoflow::ChartPoint::new(p[0], p[1])) {
                    return Err(CliError::validation("task.start", "lies outside the chart domain"));
                }
            }
            match velocity {
                Some(v) => {
                    if heading.is_some() || energy.is_some() {
                        return Err(CliError::validation(
                            "task.velocity",
                            "give either velocity or heading/energy, not both",
                        ));
                    }
                    finite("task.velocity", v[0])?;
                    finite("task.velocity", v[1])?;
                }
                None => {
                    if s.chart().signature() == Signature::Indefinite {
                        return Err(CliError::validation(
                            "task.velocity",
                            "indefinite charts need an explicit velocity",
                        ));
                    }
                    positive("task.energy", energy.unwrap_or(1.0))?;
                    finite("task.heading", heading.unwrap_or(0.0))?;
                }
            }
        }
        TaskSpec::Parallels { resolution, s } => {
            if *resolution < 2 {
                return Err(CliError::validation("task.resolution", "must be at least 2"));
            }
            finite("task.s", *s)?;
            match (need_surface()?, &spec.field) {
                (Surface::Revolution { .. }, Some(FieldSpec::Uniform { .. } | FieldSpec::Gmf { .. })) => {}
                (Surface::Tube { .. }, Some(FieldSpec::Gmf { .. })) => {}
                (Surface::Tube { .. }, _) => {
                    return Err(CliError::validation("field", "tube parallels need a gmf field"));
                }
                (Surface::Revolution { .. }, _) => {
                    return Err(CliError::validation("field", "parallels need a uniform or gmf field"));
                }
                _ => {
                    return Err(CliError::validation(
                        "surface.kind",
                        "parallels need a revolution surface or a tube",
                    ));
                }
            }
        }
        TaskSpec::Variational {
            m,
            curve,
            perturbation,
            tolerance,
        } => {
            let s = need_surface()?;
            let m = task_mass(spec, *m).ok_or_else(|| CliError::validation("task.m", "missing (and no gmf field)"))?;
            finite("task.m", m)?;
            validate_curve(spec, s, curve)?;
            if let Some(p) = perturbation {
                finite("task.perturbation.amplitude", p.amplitude)?;
            }
            if let Some(t) = tolerance {
                positive("task.tolerance", *t)?;
            }
        }
        TaskSpec::Stability { m, curve } => {
            let s = need_surface()?;
            let m = task_mass(spec, *m).ok_or_else(|| CliError::validation("task.m", "missing (and no gmf field)"))?;
            if m == 0.0 || !m.is_finite() {
                return Err(CliError::validation("task.m", "stability requires m ≠ 0"));
            }
            validate_curve(spec, s, curve)?;
        }
        TaskSpec::Classify { energy } => {
            positive("task.energy", *energy)?;
            if !matches!(need_surface()?, Surface::SpaceForm(_)) {
                return Err(CliError::validation(
                    "surface.kind",
                    "classify needs plane, sphere or hyperbolic",
                ));
            }
            if !matches!(spec.field, Some(FieldSpec::Uniform { .. })) {
                return Err(CliError::validation("field", "classify needs a uniform field"));
            }
        }
        TaskSpec::Oracle { formula } => {
            if let Formula::StrengthRange { .. } = formula {
                if !matches!(need_surface()?, Surface::Revolution { .. }) {
                    return Err(CliError::validation(
                        "surface.kind",
                        "strength-range needs a revolution surface",
                    ));
                }
            }
        }
        TaskSpec::ReproducePaper {} => {}
    }
    Ok(())
}

fn validate_curve(spec: &RunSpec, surface: &Surface, curve: &CurveSpec) -> Result<(), CliError> {
    match curve {
        CurveSpec::Parallel { t, nodes } => {
            let polar = matches!(surface, Surface::Revolution { .. })
                || matches!(surface, Surface::SpaceForm(sf) if matches!(sf.kind, SpaceFormKind::Sphere { .. }) && sf.chart.name() == "sphere");
            if !polar {
                return Err(CliError::validation(
                    "task.curve.kind",
                    "parallels need a revolution surface or a polar sphere",
                ));
            }
            if *nodes < MIN_NODES {
                return Err(CliError::validation("task.curve.nodes", format!("at least {MIN_NODES} nodes")));
            }
            if !surface.chart().contains(magnetoflow::ChartPoint::new(*t, 0.0)) {
                return Err(CliError::validation("task.curve.t", "lies outside the chart domain"));
            }
        }
        CurveSpec::Flowline {
            start,
            heading,
            energy,
            span,
            step,
            stride,
        } => {
            if spec.field.is_none() {
                return Err(CliError::validation("field", "flowline curves need a field"));
            }
            if surface.chart().signature() == Signature::Indefinite {
                return Err(CliError::validation("surface.kind", "variational curves need a Riemannian chart"));
            }
            finite("task.curve.heading", *heading)?;
            positive("task.curve.energy", *energy)?;
            positive("task.curve.span", *span)?;
            positive("task.curve.step", *step)?;
            if *stride == 0 {
                return Err(CliError::validation("task.curve.stride", "must be at least 1"));
            }
            if let Some(p) = start {
                if !surface.chart().contains(magnetoflow::ChartPoint::new(p[0], p[1])) {
                    return Err(CliError::validation("task.curve.start", "lies outside the chart domain"));
                }
            }
        }
        CurveSpec::Nodes { u, v, .. } => {
            if u.len() != v.len() {
                return Err(CliError::validation("task.curve", "u and v must have equal length"));
            }
            if u.len() < MIN_NODES {
                return Err(CliError::validation("task.curve.u", format!("at least {MIN_NODES} nodes")));
            }
            if u.iter().chain(v).any(|x| !x.is_finite()) {
                return Err(CliError::validation("task.curve", "node coordinates must be finite"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expect_key(text: &str, key: &str) {
        match parse_runspec(text) {
            Err(CliError::Validation { key: k, .. }) => assert_eq!(k, key),
            other => panic!("expected validation error on {key}, got {other:?}"),
        }
    }

    #[test]
    fn minimal_spec_is_valid() {
        let spec = parse_runspec(
            r#"
            schema = "magnetoflow/1"
            surface = { kind = "sphere", radius = 1 }
            field = { kind = "uniform", mu = 1 }
            task = { kind = "integrate", e = 1, span = 10 }
            "#,
        )
        .unwrap();
        assert_eq!(spec.task.name(), "integrate");
    }

    #[test]
    fn zero_mass_is_rejected() {
        expect_key(
            r#"
            schema = "magnetoflow/1"
            surface = { kind = "torus", r = 1, R = 2 }
            field = { kind = "gmf", m = 0 }
            task = { kind = "parallels" }
            "#,
            "field.m",
        );
        expect_key(
            r#"
            schema = "magnetoflow/1"
            surface = { kind = "sphere", radius = 1 }
            task = { kind = "stability", m = 0.0, curve = { kind = "parallel", t = 1.0 } }
            "#,
            "task.m",
        );
    }

    #[test]
    fn fat_torus_is_rejected() {
        expect_key(
            r#"
            schema = "magnetoflow/1"
            surface = { kind = "torus", r = 2, R = 1 }
            field = { kind = "uniform", mu = 0.3 }
            task = { kind = "parallels" }
            "#,
            "surface",
        );
    }

    #[test]
    fn tensor_needs_flat_chart() {
        expect_key(
            r#"
            schema = "magnetoflow/1"
            surface = { kind = "sphere", radius = 1 }
            field = { kind = "tensor", constant = [[0, 1], [-1, 0]] }
            task = { kind = "integrate", span = 1 }
            "#,
            "field.kind",
        );
    }

    #[test]
    fn schema_string_is_checked() {
        expect_key(
            r#"
            schema = "magnetoflow/2"
            task = { kind = "reproduce-paper" }
            "#,
            "schema",
        );
    }

    #[test]
    fn unknown_keys_are_parse_errors_with_lines() {
        let text = "schema = \"magnetoflow/1\"\n[surface]\nkind = \"sphere\"\nradius = 1\ncolour = 3\n[task]\nkind = \"reproduce-paper\"\n";
        match parse_runspec(text) {
            Err(CliError::Parse { line, message, .. }) => {
                assert!(message.contains("colour"), "{message}");
                assert!((2..=5).contains(&line), "line {line}");
            }
            other => panic!("{other:?}"),
        }
        match parse_runspec("schema = \"magnetoflow/1\"\ntask = { kind = \"parallels\", resolution = 8, extra = 1 }\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_toml_reports_line() {
        match parse_runspec("schema = \"magnetoflow/1\"\n\n[task\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tolerance_override_targets_tasks_with_tolerances() {
        let mut task = TaskSpec::ReproducePaper {};
        assert!(task.override_tolerance(1e-9).is_err());
        let mut task = TaskSpec::Variational {
            m: Some(1.0),
            curve: CurveSpec::Parallel { t: 1.0, nodes: 64 },
            perturbation: None,
            tolerance: None,
        };
        task.override_tolerance(1e-4).unwrap();
        assert!(matches!(task, TaskSpec::Variational { tolerance: Some(t), .. } if t == 1e-4));
    }
}
