//! Executes a validated spec and writes its outputs.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use magnetoflow::chart::Axis;
use magnetoflow::experiments::{self, Outcome};
use magnetoflow::flow::{energy_drift, extendibility_probe, Extendibility};
use magnetoflow::report::{to_json_string, write_atomic, FieldSpec as ReportField, RootEntry, RootReport};
use magnetoflow::revolution::{
    coupling_check, gmf_parallels, strength_range, torus_closed_form, uniform_parallels, ParallelRoot,
};
use magnetoflow::space_forms::{hyperbolic_classify, plane_flowline_radius, sphere_flowline_radius, SpaceFormKind};
use magnetoflow::tubes::{helix_cross_check, helix_flowline_count, tube_gmf_roots};
use magnetoflow::variational::{stability_test, unit_normals, variational_report, DiscreteCurve, VariationalReport};
use magnetoflow::{
    integrate, ChartPoint, Direction, FlowState, GeomError, StepPolicy, SurfaceChart, TangentVector, Termination,
};
use serde::Serialize;

use crate::error::CliError;
use crate::runspec::{
    task_mass, CurveSpec, DirectionSpec, FieldSpec, Format, Formula, MethodSpec, PerturbationSpec, RunSpec, Surface,
    TaskSpec,
};

pub const DEFAULT_SEED: u64 = 20240607;

/// What a run produced.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    /// Human-readable lines for stdout.
    pub lines: Vec<String>,
    /// Set when the run finished but a numeric check failed.
    pub failure: Option<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    out: RunOutput,
}

impl<'a> Writer<'a> {
    fn put(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        write_atomic(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.out.files.push(path);
        Ok(())
    }

    fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let text = to_json_string(value).map_err(|e| CliError::Numeric(GeomError::BadParameters(e.to_string())))?;
        self.put(name, text.as_bytes())
    }
}

pub fn run(spec: &RunSpec, out: &Path, seed: Option<u64>) -> Result<RunOutput, CliError> {
    let mut w = Writer {
        dir: out,
        out: RunOutput::default(),
    };
    let stem = |default: &str| spec.output.name.clone().unwrap_or_else(|| default.to_string());
    match &spec.task {
        TaskSpec::Integrate { .. } => run_integrate(spec, &mut w, &stem("trajectory"))?,
        TaskSpec::Parallels { resolution, s } => run_parallels(spec, &mut w, &stem("roots"), *resolution, *s)?,
        TaskSpec::Variational {
            m,
            curve,
            perturbation,
            tolerance,
        } => {
            let m = task_mass(spec, *m).expect("validated");
            let curve = build_curve(spec, curve)?;
            let w_field = perturbation.map(|p| perturbation_field(&curve, p)).transpose()?;
            let report = variational_report(&curve, m, w_field.as_deref())?;
            let critical = tolerance.map(|t| report.el_residual_max <= t);
            w.json(&format!("{}.json", stem("variational")), &VariationalOut { m, critical, report })?;
        }
        TaskSpec::Stability { m, curve } => {
            let m = task_mass(spec, *m).expect("validated");
            let curve = build_curve(spec, curve)?;
            let report = stability_test(&curve, m)?;
            w.json(
                &format!("{}.json", stem("stability")),
                &StabilityOut {
                    m,
                    sign: format!("{:?}", report.sign),
                    values: report.values,
                },
            )?;
        }
        TaskSpec::Classify { energy } => {
            let report = classify(spec, *energy)?;
            w.out.lines.push(format!("tag {}", report.tag));
            w.json(&format!("{}.json", stem("classification")), &report)?;
        }
        TaskSpec::Oracle { formula } => run_oracle(spec, &mut w, &stem("oracle"), formula)?,
        TaskSpec::ReproducePaper {} => reproduce(&mut w, seed.or(spec.seed).unwrap_or(DEFAULT_SEED))?,
    }
    Ok(w.out)
}

fn surface(spec: &RunSpec) -> Result<Surface, CliError> {
    spec.surface
        .as_ref()
        .ok_or_else(|| CliError::validation("surface", "missing"))?
        .build()
}

fn force(spec: &RunSpec, s: &Surface) -> Result<magnetoflow::ForceOperator, CliError> {
    match &spec.field {
        Some(f) => f.force(s),
        None => FieldSpec::None {}.force(s),
    }
}

fn axis_default(a: &Axis) -> f64 {
    if a.periodic {
        a.min
    } else if a.min.is_finite() && a.max.is_finite() {
        0.5 * (a.min + a.max)
    } else if a.min.is_finite() {
        a.min + 1.0
    } else if a.max.is_finite() {
        a.max - 1.0
    } else {
        0.0
    }
}

/// Default launch point: the middle of bounded axes, the start of periodic
/// ones, one unit inside half-infinite ones and zero on unbounded ones.
fn default_start(chart: &SurfaceChart) -> ChartPoint {
    let d = chart.domain();
    ChartPoint::new(axis_default(&d.u), axis_default(&d.v))
}

/// Velocity of energy `e` at angle `heading` from `∂u`, measured toward `J∂u`.
fn heading_velocity(chart: &SurfaceChart, p: ChartPoint, heading: f64, energy: f64) -> Result<TangentVector, GeomError> {
    let g = chart.metric(p)?;
    let e1 = TangentVector::new(1.0 / g.g11.sqrt(), 0.0);
    let e2 = chart.complex_structure(p, e1)?;
    Ok(e1.scale(heading.cos()).add(e2.scale(heading.sin())).scale(energy.sqrt()))
}

#[derive(Serialize)]
struct IntegrateSummary {
    surface: String,
    samples: usize,
    termination: Termination,
    energy_drift: Option<f64>,
    extendibility: Option<Extendibility>,
}

fn run_integrate(spec: &RunSpec, w: &mut Writer, stem: &str) -> Result<(), CliError> {
    let TaskSpec::Integrate {
        start,
        velocity,
        heading,
        energy,
        span,
        step,
        method,
        tolerance,
        direction,
        ceiling,
    } = &spec.task
    else {
        unreachable!()
    };
    let s = surface(spec)?;
    let op = force(spec, &s)?;
    let chart = s.chart();
    let p = start.map_or_else(|| default_start(chart), |p| ChartPoint::new(p[0], p[1]));
    let v = match velocity {
        Some(v) => TangentVector::new(v[0], v[1]),
        None => heading_velocity(chart, p, heading.unwrap_or(0.0), energy.unwrap_or(1.0))?,
    };
    let mut policy = match method {
        MethodSpec::Rk4 => StepPolicy::rk4(*step, *span),
        MethodSpec::Adaptive => StepPolicy::adaptive(tolerance.unwrap_or(1e-10), *span),
    };
    policy = policy.with_direction(match direction {
        DirectionSpec::Forward => Direction::Forward,
        DirectionSpec::Backward => Direction::Backward,
    });
    if let Some(c) = ceiling {
        policy = policy.with_ceiling(*c);
    }
    let traj = integrate(chart, &op, FlowState::new(p, v, 0.0), &policy)?;

    match spec.output.format {
        Format::Csv => {
            let mut buf = Vec::new();
            traj.write_csv(&mut buf, Some(chart)).map_err(|e| CliError::io(stem, e))?;
            w.put(&format!("{stem}.csv"), &buf)?;
        }
        Format::Json => w.json(&format!("{stem}.json"), &traj)?,
    }
    let summary = IntegrateSummary {
        surface: chart.name().to_string(),
        samples: traj.samples.len(),
        termination: traj.termination,
        energy_drift: energy_drift(&traj).ok(),
        extendibility: (traj.termination != Termination::Completed)
            .then(|| extendibility_probe(&traj).ok())
            .flatten(),
    };
    w.out.lines.push(format!("termination {:?}", traj.termination));
    w.json("summary.json", &summary)
}

fn root_report(name: &str, field: ReportField, roots: &[ParallelRoot], regime: Option<String>) -> RootReport {
    RootReport {
        surface: name.to_string(),
        field,
        roots: roots
            .iter()
            .map(|r| RootEntry {
                t: r.t,
                residual: r.residual,
                bracket: r.bracket,
                tangent: r.tangent,
            })
            .collect(),
        regime,
    }
}

fn run_parallels(spec: &RunSpec, w: &mut Writer, stem: &str, resolution: usize, s_pos: f64) -> Result<(), CliError> {
    let s = surface(spec)?;
    let report = match (&s, spec.field.as_ref().expect("validated")) {
        (Surface::Revolution { profile, .. }, FieldSpec::Uniform { mu }) => {
            let roots = uniform_parallels(profile, *mu, resolution)?;
            let regime = match spec.surface.as_ref().and_then(|x| x.torus()) {
                Some((r, big_r)) => Some(format!("{:?}", torus_closed_form(r, big_r, *mu)?.regime)),
                None => None,
            };
            root_report(profile.name(), ReportField::Uniform(*mu), &roots, regime)
        }
        (Surface::Revolution { profile, .. }, FieldSpec::Gmf { m }) => {
            let roots = gmf_parallels(profile, *m, resolution)?;
            root_report(profile.name(), ReportField::Gmf(*m), &roots, None)
        }
        (Surface::Tube { .. }, FieldSpec::Gmf { m }) => {
            let Surface::Tube { spec: tube, .. } = &s else { unreachable!() };
            let roots = tube_gmf_roots(tube, *m, s_pos, resolution)?;
            root_report("tube", ReportField::Gmf(*m), &roots, None)
        }
        _ => unreachable!("validated"),
    };
    w.out.lines.push(format!("{} roots", report.roots.len()));
    match spec.output.format {
        Format::Json => w.json(&format!("{stem}.json"), &report),
        Format::Csv => {
            let mut text = String::from("t,residual,bracket_lo,bracket_hi,tangent\n");
            for r in &report.roots {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    magnetoflow::report::fmt_f64(r.t),
                    magnetoflow::report::fmt_f64(r.residual),
                    magnetoflow::report::fmt_f64(r.bracket.0),
                    magnetoflow::report::fmt_f64(r.bracket.1),
                    r.tangent
                ));
            }
            w.put(&format!("{stem}.csv"), text.as_bytes())
        }
    }
}

fn build_curve(spec: &RunSpec, curve: &CurveSpec) -> Result<DiscreteCurve, CliError> {
    let s = surface(spec)?;
    let chart = s.chart().clone();
    match curve {
        CurveSpec::Parallel { t, nodes } => Ok(DiscreteCurve::parallel(chart, *t, *nodes)?),
        CurveSpec::Nodes { u, v, closed } => {
            let nodes = u.iter().zip(v).map(|(&a, &b)| ChartPoint::new(a, b)).collect();
            Ok(DiscreteCurve::new(chart, nodes, *closed)?)
        }
        CurveSpec::Flowline {
            start,
            heading,
            energy,
            span,
            step,
            stride,
        } => {
            let op = force(spec, &s)?;
            let p = start.map_or_else(|| default_start(&chart), |p| ChartPoint::new(p[0], p[1]));
            let v = heading_velocity(&chart, p, *heading, *energy)?;
            let traj = integrate(&chart, &op, FlowState::new(p, v, 0.0), &StepPolicy::rk4(*step, *span))?;
            Ok(DiscreteCurve::from_trajectory(chart, &traj, *stride)?)
        }
    }
}

fn perturbation_field(curve: &DiscreteCurve, p: PerturbationSpec) -> Result<Vec<TangentVector>, CliError> {
    let n = curve.nodes().len();
    let closed = curve.is_closed();
    let k = p.mode as f64;
    Ok(unit_normals(curve)?
        .into_iter()
        .enumerate()
        .map(|(i, nrm)| {
            let shape = if closed {
                (k * 2.0 * PI * i as f64 / n as f64).cos()
            } else {
                // the end nodes stay fixed
                let x = (i as f64 - 1.0) / (n as f64 - 3.0);
                if x > 0.0 && x < 1.0 {
                    (PI * x).sin().powi(6) * (k * PI * x).cos()
                } else {
                    0.0
                }
            };
            nrm.scale(p.amplitude * shape)
        })
        .collect())
}

#[derive(Serialize)]
struct VariationalOut {
    m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical: Option<bool>,
    #[serde(flatten)]
    report: VariationalReport,
}

#[derive(Serialize)]
struct StabilityOut {
    m: f64,
    sign: String,
    values: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Classification {
    pub surface: &'static str,
    pub mu: f64,
    pub energy: f64,
    pub tag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

fn classify(spec: &RunSpec, energy: f64) -> Result<Classification, CliError> {
    let Some(FieldSpec::Uniform { mu }) = spec.field else {
        unreachable!("validated")
    };
    let Surface::SpaceForm(sf) = surface(spec)? else {
        unreachable!("validated")
    };
    let mut out = Classification {
        surface: "",
        mu,
        energy,
        tag: String::new(),
        ratio: None,
        radius: None,
    };
    match sf.kind {
        SpaceFormKind::Plane => {
            out.surface = "plane";
            if mu == 0.0 {
                out.tag = "StraightLine".into();
            } else {
                out.tag = "ClosedCircle".into();
                out.radius = Some(plane_flowline_radius(energy, mu)?);
            }
        }
        SpaceFormKind::Sphere { radius } => {
            out.surface = "sphere";
            out.tag = "ClosedCircle".into();
            out.radius = Some(sphere_flowline_radius(radius, energy, mu)?);
        }
        SpaceFormKind::Hyperbolic { curvature } => {
            out.surface = "hyperbolic";
            // the geodesic curvature of a flowline of energy e is μ/√e
            let class = hyperbolic_classify(curvature, mu / energy.sqrt())?;
            out.tag = format!("{:?}", class.tag);
            out.ratio = Some(class.ratio);
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct Scalar {
    value: f64,
}

fn run_oracle(spec: &RunSpec, w: &mut Writer, stem: &str, formula: &Formula) -> Result<(), CliError> {
    let bad = |e| CliError::invalid("task.formula", e);
    let name = format!("{stem}.json");
    match *formula {
        Formula::SphereRadius { r, e, mu } => w.json(&name, &Scalar {
            value: sphere_flowline_radius(r, e, mu).map_err(bad)?,
        }),
        Formula::PlaneRadius { e, mu } => w.json(&name, &Scalar {
            value: plane_flowline_radius(e, mu).map_err(bad)?,
        }),
        Formula::HyperbolicClass { curvature, mu } => w.json(&name, &hyperbolic_classify(curvature, mu).map_err(bad)?),
        Formula::TorusParallels { r, big_r, mu } => w.json(&name, &torus_closed_form(r, big_r, mu).map_err(bad)?),
        Formula::Coupling { r, big_r, m } => w.json(&name, &coupling_check(r, big_r, m).map_err(bad)?),
        Formula::HelixCount {
            r,
            kappa,
            tau,
            m,
            resolution,
        } => w.json(&name, &helix_flowline_count(r, kappa, tau, m, resolution)),
        Formula::HelixCrossCheck {
            r,
            kappa,
            tau,
            m,
            resolution,
        } => w.json(&name, &helix_cross_check(r, kappa, tau, m, resolution).map_err(bad)?),
        Formula::StrengthRange { resolution } => {
            let Surface::Revolution { profile, .. } = surface(spec)? else {
                unreachable!("validated")
            };
            w.json(&name, &strength_range(&profile, resolution).map_err(bad)?)
        }
    }
}

#[derive(Serialize)]
struct IndexEntry<'a> {
    id: u8,
    title: &'a str,
    passed: bool,
    file: String,
    artifacts: Vec<&'a str>,
}

#[derive(Serialize)]
struct Index<'a> {
    seed: u64,
    criteria: Vec<IndexEntry<'a>>,
}

fn reproduce(w: &mut Writer, seed: u64) -> Result<(), CliError> {
    let outcomes: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=experiments::CRITERIA)
            .map(|id| scope.spawn(move || experiments::run(id, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment thread panicked"))
            .collect()
    });
    let mut entries = Vec::new();
    for o in &outcomes {
        let file = format!("ac{:02}.json", o.id);
        w.json(&file, o)?;
        for a in &o.artifacts {
            w.put(&a.file, a.contents.as_bytes())?;
        }
        w.out.lines.push(o.summary());
        entries.push(IndexEntry {
            id: o.id,
            title: &o.title,
            passed: o.passed,
            file,
            artifacts: o.artifacts.iter().map(|a| a.file.as_str()).collect(),
        });
    }
    w.json("index.json", &Index { seed, criteria: entries })?;
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| format!("AC{:02}", o.id)).collect();
    if !failed.is_empty() {
        w.out.failure = Some(format!("criteria failed: {}", failed.join(", ")));
    }
    Ok(())
}
