//! Surfaces of revolution: charts, magnetic parallels for uniform and
//! Gaussian fields, the torus analysis and the coupling between the two.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::chart::{Axis, ChartPoint, Domain, MetricModel, MetricValue, Signature, SurfaceChart};
use crate::error::{GeomError, Result};
use crate::profile::ProfileCurve;
use crate::report::{FieldSpec, RootEntry, RootReport};
use crate::roots::{self, ENDPOINT_SHRINK};

/// Samples used to certify that a profile stays off the rotation axis.
const AXIS_CHECK_SAMPLES: usize = 512;
/// Band for the tangent regime of the torus analysis.
pub const TANGENT_REGIME_BAND: f64 = 1e-12;

/// Metric `(f'² + h'²) du² + f² dv²` in coordinates (profile parameter,
/// rotation angle).
#[derive(Debug, Clone)]
pub struct RevolutionMetric {
    pub profile: ProfileCurve,
}

impl MetricModel for RevolutionMetric {
    fn metric(&self, p: ChartPoint) -> MetricValue {
        let j = self.profile.jet(p.u);
        let g11 = if self.profile.is_arclength() {
            1.0
        } else {
            j.df * j.df + j.dh * j.dh
        };
        MetricValue::diagonal(g11, j.f * j.f)
    }

    fn metric_partials(&self, p: ChartPoint) -> Option<[MetricValue; 2]> {
        let j = self.profile.jet(p.u);
        let d11 = if self.profile.is_arclength() {
            0.0
        } else {
            2.0 * (j.df * j.d2f + j.dh * j.d2h)
        };
        Some([
            MetricValue::diagonal(d11, 2.0 * j.f * j.df),
            MetricValue::default(),
        ])
    }

    fn gauss_curvature(&self, p: ChartPoint) -> Option<f64> {
        Some(self.profile.gauss_curvature(p.u))
    }

    fn embed(&self, p: ChartPoint) -> Option<[f64; 3]> {
        let j = self.profile.jet(p.u);
        let (s, c) = p.v.sin_cos();
        Some([j.f * c, j.f * s, j.h])
    }
}

/// Chart `X(t, v) = (f(t) cos v, f(t) sin v, h(t))`, periodic in `v` (and
/// in `t` for closed profiles).
pub fn revolution_chart(profile: &ProfileCurve) -> Result<SurfaceChart> {
    let (lo, hi) = profile.domain();
    let (open_lo, open_hi) = profile.open_ends();
    for k in 0..=AXIS_CHECK_SAMPLES {
        if (k == 0 && open_lo) || (k == AXIS_CHECK_SAMPLES && open_hi) {
            continue;
        }
        let t = lo + (hi - lo) * k as f64 / AXIS_CHECK_SAMPLES as f64;
        if !(profile.jet(t).f > 0.0) {
            return Err(GeomError::AxisContact { t });
        }
    }
    let u_axis = if profile.is_periodic() {
        Axis::periodic(lo, hi)
    } else {
        Axis::bounded(lo, hi)
    };
    Ok(SurfaceChart::new(
        profile.name(),
        Domain::new(u_axis, Axis::periodic(0.0, 2.0 * PI)),
        Arc::new(RevolutionMetric {
            profile: profile.clone(),
        }),
        Signature::Riemannian,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum FieldKind {
    Uniform(f64),
    Gmf(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParallelRoot {
    pub t: f64,
    pub field: FieldKind,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub tangent: bool,
}

pub fn parallel_curvature(profile: &ProfileCurve, t: f64) -> Result<f64> {
    let (lo, hi) = profile.domain();
    let (open_lo, open_hi) = profile.open_ends();
    let inside = profile.is_periodic()
        || ((t > lo || (!open_lo && t == lo)) && (t < hi || (!open_hi && t == hi)));
    if !inside || !t.is_finite() {
        return Err(GeomError::OutOfDomain { u: t, v: 0.0 });
    }
    Ok(profile.parallel_curvature(t))
}

fn scan_profile<F: Fn(f64) -> f64>(
    profile: &ProfileCurve,
    g: F,
    resolution: usize,
    field: FieldKind,
) -> Result<Vec<ParallelRoot>> {
    if resolution < 2 {
        return Err(GeomError::BadParameters("scan resolution must be at least 2".into()));
    }
    let (lo, hi) = profile.scan_interval(ENDPOINT_SHRINK);
    Ok(roots::scan(&g, lo, hi, resolution, profile.is_periodic())
        .into_iter()
        .map(|r| ParallelRoot {
            t: r.t,
            field,
            residual: r.residual,
            bracket: r.bracket,
            tangent: r.tangent,
        })
        .collect())
}

/// Parallels of constant geodesic curvature `μ`: roots of `κ(t) − μ`.
pub fn uniform_parallels(profile: &ProfileCurve, mu: f64, resolution: usize) -> Result<Vec<ParallelRoot>> {
    scan_profile(
        profile,
        |t| profile.parallel_curvature(t) - mu,
        resolution,
        FieldKind::Uniform(mu),
    )
}

/// Parallels that are flowlines of the Gaussian field `G/m`: roots of
/// `G(t) − m κ(t)`.
pub fn gmf_parallels(profile: &ProfileCurve, m: f64, resolution: usize) -> Result<Vec<ParallelRoot>> {
    if m == 0.0 || !m.is_finite() {
        return Err(GeomError::BadParameters("m must be finite and nonzero".into()));
    }
    scan_profile(
        profile,
        |t| profile.gauss_curvature(t) - m * profile.parallel_curvature(t),
        resolution,
        FieldKind::Gmf(m),
    )
}

pub fn root_report(surface: &str, roots: &[ParallelRoot], regime: Option<String>) -> Option<RootReport> {
    let field = match roots.first()?.field {
        FieldKind::Uniform(v) => FieldSpec::Uniform(v),
        FieldKind::Gmf(v) => FieldSpec::Gmf(v),
    };
    Some(RootReport {
        surface: surface.to_string(),
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
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TorusRegime {
    Empty,
    SingleTangent,
    TwoRoots,
}

/// Closed-form magnetic parallels of the torus `(R + r cos θ, r sin θ)`,
/// `θ = s/r`, from `H_μ(θ) = Rμ + rμ cos θ + sin θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusAnalysis {
    pub r: f64,
    pub big_r: f64,
    pub rho: f64,
    pub mu: f64,
    pub regime: TorusRegime,
    /// Profile angles `θ ∈ [0, 2π)` in increasing order.
    pub roots: Vec<f64>,
    /// Direction angle of the diameter `D_μ` (through the tangent points
    /// of the extreme fields).
    pub diameter_angle: f64,
}

impl TorusAnalysis {
    /// `H_μ` at profile angle `θ`.
    pub fn h_mu(&self, theta: f64) -> f64 {
        self.big_r * self.mu + self.r * self.mu * theta.cos() + theta.sin()
    }

    /// Side of the diameter line on which the profile point at `θ` lies.
    pub fn side(&self, theta: f64) -> f64 {
        (theta - self.diameter_angle).sin().signum()
    }
}

pub fn torus_closed_form(r: f64, big_r: f64, mu: f64) -> Result<TorusAnalysis> {
    if !(r > 0.0 && r < big_r && big_r.is_finite()) {
        return Err(GeomError::BadTorusParameters { r, big_r });
    }
    let rho = 1.0 / (big_r * big_r - r * r).sqrt();
    // H_μ(θ) = Rμ + A sin(θ + φ') with A = √(1 + r²μ²); zeros where
    // cos(θ − φ) = −Rμ/A with φ = atan2(1, rμ).
    let amp = (1.0 + r * r * mu * mu).sqrt();
    let phi = 1f64.atan2(r * mu);
    let ratio = -big_r * mu / amp;
    let wrap = |x: f64| x.rem_euclid(2.0 * PI);
    let (regime, mut roots) = if (mu.abs() - rho).abs() <= TANGENT_REGIME_BAND {
        let theta = if mu > 0.0 { phi + PI } else { phi };
        (TorusRegime::SingleTangent, vec![wrap(theta)])
    } else if mu.abs() > rho {
        (TorusRegime::Empty, vec![])
    } else {
        let delta = ratio.clamp(-1.0, 1.0).acos();
        (TorusRegime::TwoRoots, vec![wrap(phi + delta), wrap(phi - delta)])
    };
    roots.sort_by(f64::total_cmp);
    Ok(TorusAnalysis {
        r,
        big_r,
        rho,
        mu,
        regime,
        roots,
        diameter_angle: phi,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub m: f64,
    /// Angles solving `cot θ = −r m`.
    pub gmf_roots: [f64; 2],
    /// Uniform-field roots for strength `−m`.
    pub uniform_roots: Vec<f64>,
    pub alternation: bool,
    /// Angular separation of the uniform roots, when there are two.
    pub uniform_separation: Option<f64>,
}

/// Compares the Gaussian-field parallels of a torus with the uniform-field
/// parallels of strength `−m`.
pub fn coupling_check(r: f64, big_r: f64, m: f64) -> Result<CouplingReport> {
    let uni = torus_closed_form(r, big_r, -m)?;
    // cot θ = −rm  ⇔  direction (cos θ, sin θ) ∥ (−rm, 1)
    let g0 = 1f64.atan2(-r * m).rem_euclid(2.0 * PI);
    let g1 = (g0 + PI).rem_euclid(2.0 * PI);
    let mut gmf_roots = [g0, g1];
    gmf_roots.sort_by(f64::total_cmp);

    let side = |theta: f64| (theta - gmf_roots[0]).sin();
    let (alternation, uniform_separation) = match uni.roots.as_slice() {
        [a, b] => {
            let d = (a - b).abs();
            (side(*a) * side(*b) < 0.0, Some(d.min(2.0 * PI - d)))
        }
        _ => (false, None),
    };
    Ok(CouplingReport {
        m,
        gmf_roots,
        uniform_roots: uni.roots,
        alternation,
        uniform_separation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrengthRange {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

/// Extremes of the parallel curvature over the profile: the range of
/// uniform strengths that admit magnetic parallels.
pub fn strength_range(profile: &ProfileCurve, resolution: usize) -> Result<StrengthRange> {
    if resolution < 2 {
        return Err(GeomError::BadParameters("scan resolution must be at least 2".into()));
    }
    let (lo, hi) = profile.scan_interval(ENDPOINT_SHRINK);
    let ((argmin, min), (argmax, max)) =
        roots::extrema(&|t| profile.parallel_curvature(t), lo, hi, resolution);
    Ok(StrengthRange {
        min,
        argmin,
        max,
        argmax,
    })
}
