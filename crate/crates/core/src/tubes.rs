//! Tubes of radius `r` around plane curves and helices, parametrized by
//! `X(s, v) = β(s) + r (cos v N(s) + sin v B(s))`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::chart::{Axis, ChartPoint, Domain, MetricModel, MetricValue, Orientation, Signature, SurfaceChart};
use crate::error::{GeomError, Result};
use crate::revolution::{FieldKind, ParallelRoot};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BaseCurvature {
    Constant(f64),
    /// `κ(s) = k0 + k1 s`.
    Linear { k0: f64, k1: f64 },
}

impl BaseCurvature {
    pub fn at(&self, s: f64) -> f64 {
        match *self {
            BaseCurvature::Constant(k) => k,
            BaseCurvature::Linear { k0, k1 } => k0 + k1 * s,
        }
    }

    pub fn derivative(&self) -> f64 {
        match *self {
            BaseCurvature::Constant(_) => 0.0,
            BaseCurvature::Linear { k1, .. } => k1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TubeBase {
    /// Plane curve of signed curvature `κ(s)`, `s ∈ [0, length]`.
    PlaneCurve {
        curvature: BaseCurvature,
        length: f64,
        periodic: bool,
    },
    Helix { curvature: f64, torsion: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeSpec {
    pub base: TubeBase,
    pub radius: f64,
}

impl TubeSpec {
    /// Tube around the circle of radius `big_r` (a torus of revolution).
    pub fn circle(big_r: f64, radius: f64) -> Result<Self> {
        if !(big_r > 0.0) {
            return Err(GeomError::NonpositiveInput("R"));
        }
        let spec = Self {
            base: TubeBase::PlaneCurve {
                curvature: BaseCurvature::Constant(1.0 / big_r),
                length: 2.0 * PI * big_r,
                periodic: true,
            },
            radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn plane(curvature: BaseCurvature, length: f64, radius: f64) -> Result<Self> {
        let spec = Self {
            base: TubeBase::PlaneCurve {
                curvature,
                length,
                periodic: false,
            },
            radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn helix(curvature: f64, torsion: f64, radius: f64) -> Result<Self> {
        let spec = Self {
            base: TubeBase::Helix { curvature, torsion },
            radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(GeomError::NonpositiveInput("radius"));
        }
        let r = self.radius;
        match self.base {
            TubeBase::PlaneCurve { curvature, length, .. } => {
                if !(length > 0.0 && length.is_finite()) {
                    return Err(GeomError::NonpositiveInput("length"));
                }
                // |κ| is extremal at the ends of a linear profile
                let worst = curvature.at(0.0).abs().max(curvature.at(length).abs());
                if !(r * worst < 1.0) {
                    return Err(GeomError::DegenerateTube);
                }
            }
            TubeBase::Helix { curvature, torsion } => {
                if !(curvature > 0.0) || !torsion.is_finite() {
                    return Err(GeomError::BadParameters("helix needs κ > 0 and finite τ".into()));
                }
                if !(r * curvature < 1.0) {
                    return Err(GeomError::DegenerateTube);
                }
            }
        }
        Ok(())
    }

    fn kappa(&self, s: f64) -> f64 {
        match self.base {
            TubeBase::PlaneCurve { curvature, .. } => curvature.at(s),
            TubeBase::Helix { curvature, .. } => curvature,
        }
    }

    fn torsion(&self) -> f64 {
        match self.base {
            TubeBase::PlaneCurve { .. } => 0.0,
            TubeBase::Helix { torsion, .. } => torsion,
        }
    }
}

/// Induced metric of a tube in coordinates `(s, v)`.
#[derive(Debug, Clone)]
pub struct TubeMetric {
    pub spec: TubeSpec,
}

impl MetricModel for TubeMetric {
    fn metric(&self, p: ChartPoint) -> MetricValue {
        let r = self.spec.radius;
        let tau = self.spec.torsion();
        let a = 1.0 - r * self.spec.kappa(p.u) * p.v.cos();
        MetricValue::new(a * a + r * r * tau * tau, r * r * tau, r * r)
    }

    fn metric_partials(&self, p: ChartPoint) -> Option<[MetricValue; 2]> {
        let r = self.spec.radius;
        let k = self.spec.kappa(p.u);
        let dk = match self.spec.base {
            TubeBase::PlaneCurve { curvature, .. } => curvature.derivative(),
            TubeBase::Helix { .. } => 0.0,
        };
        let (sv, cv) = p.v.sin_cos();
        let a = 1.0 - r * k * cv;
        Some([
            MetricValue::diagonal(-2.0 * a * r * dk * cv, 0.0),
            MetricValue::diagonal(2.0 * a * r * k * sv, 0.0),
        ])
    }

    fn gauss_curvature(&self, p: ChartPoint) -> Option<f64> {
        match self.spec.base {
            TubeBase::PlaneCurve { .. } => {
                let r = self.spec.radius;
                let k = self.spec.kappa(p.u);
                let cv = p.v.cos();
                Some(-k * cv / (r * (1.0 - r * k * cv)))
            }
            TubeBase::Helix { .. } => None,
        }
    }

    fn embed(&self, p: ChartPoint) -> Option<[f64; 3]> {
        let r = self.spec.radius;
        let (s, v) = (p.u, p.v);
        let (sv, cv) = v.sin_cos();
        match self.spec.base {
            TubeBase::PlaneCurve {
                curvature: BaseCurvature::Constant(k),
                ..
            } => {
                if k == 0.0 {
                    Some([s, r * cv, r * sv])
                } else {
                    let big_r = 1.0 / k;
                    let (st, ct) = (s / big_r).sin_cos();
                    let rad = big_r - r * cv;
                    Some([rad * ct, rad * st, r * sv])
                }
            }
            TubeBase::PlaneCurve { .. } => None,
            TubeBase::Helix { curvature, torsion } => {
                let d = curvature * curvature + torsion * torsion;
                let (a, b) = (curvature / d, torsion / d);
                let c = a.hypot(b);
                let (st, ct) = (s / c).sin_cos();
                let beta = [a * ct, a * st, b * s / c];
                let n = [-ct, -st, 0.0];
                let bn = [b * st / c, -b * ct / c, a / c];
                Some([
                    beta[0] + r * (cv * n[0] + sv * bn[0]),
                    beta[1] + r * (cv * n[1] + sv * bn[1]),
                    beta[2] + r * (cv * n[2] + sv * bn[2]),
                ])
            }
        }
    }
}

/// Chart of the tube. Its orientation is `−∂s ∧ ∂v`, under which the
/// `v`-constant curves carry the curvature returned by [`v_curve_curvature`].
pub fn tube_chart(spec: &TubeSpec) -> Result<SurfaceChart> {
    spec.validate()?;
    let s_axis = match spec.base {
        TubeBase::PlaneCurve { length, periodic: true, .. } => Axis::periodic(0.0, length),
        TubeBase::PlaneCurve { length, .. } => Axis::bounded(0.0, length),
        TubeBase::Helix { .. } => Axis::unbounded(),
    };
    Ok(SurfaceChart::new(
        "tube",
        Domain::new(s_axis, Axis::periodic(0.0, 2.0 * PI)),
        Arc::new(TubeMetric { spec: *spec }),
        Signature::Riemannian,
    )
    .with_orientation(Orientation::Negative))
}

/// Signed geodesic curvature of the curve `v = const` through `(s, v)`.
pub fn v_curve_curvature(spec: &TubeSpec, s: f64, v: f64) -> Result<f64> {
    spec.validate()?;
    let r = spec.radius;
    let k = spec.kappa(s);
    let (sv, cv) = v.sin_cos();
    let a = 1.0 - r * k * cv;
    if !(a > 0.0) {
        return Err(GeomError::DegenerateTube);
    }
    let tau = spec.torsion();
    Ok(k * sv / (a * a + r * r * tau * tau).sqrt())
}

/// `ϑ(v) = (1 − rκ cos v)² (cos²v − r²m² sin²v) + r²τ² cos²v`.
pub fn helix_theta(r: f64, kappa: f64, tau: f64, m: f64, v: f64) -> f64 {
    let (sv, cv) = v.sin_cos();
    let a = 1.0 - r * kappa * cv;
    a * a * (cv * cv - r * r * m * m * sv * sv) + r * r * tau * tau * cv * cv
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HelixCount {
    pub count: usize,
    pub roots: Vec<f64>,
}

/// Zeros of `ϑ` on `[0, 2π)` by scan and bisection.
pub fn helix_flowline_count(r: f64, kappa: f64, tau: f64, m: f64, resolution: usize) -> HelixCount {
    let roots: Vec<f64> = roots::scan(
        &|v| helix_theta(r, kappa, tau, m, v),
        0.0,
        2.0 * PI,
        resolution.max(2),
        true,
    )
    .into_iter()
    .map(|x| x.t)
    .collect();
    HelixCount {
        count: roots.len(),
        roots,
    }
}

/// Angles `v` at which the curve `v = const` through `s` is a flowline of
/// the Gaussian field `G/m`: roots of `G − m κ_v`.
pub fn tube_gmf_roots(spec: &TubeSpec, m: f64, s: f64, resolution: usize) -> Result<Vec<ParallelRoot>> {
    if m == 0.0 || !m.is_finite() {
        return Err(GeomError::BadParameters("m must be finite and nonzero".into()));
    }
    let chart = tube_chart(spec)?;
    let g = |v: f64| {
        let k = v_curve_curvature(spec, s, v).unwrap_or(f64::NAN);
        chart.gauss_curvature(ChartPoint::new(s, v)).unwrap_or(f64::NAN) - m * k
    };
    Ok(roots::scan(&g, 0.0, 2.0 * PI, resolution.max(2), true)
        .into_iter()
        .map(|x| ParallelRoot {
            t: x.t,
            field: FieldKind::Gmf(m),
            residual: x.residual,
            bracket: x.bracket,
            tangent: x.tangent,
        })
        .collect())
}

/// Comparison of the zeros of `ϑ` with the zeros of `G ∓ m κ_v` computed
/// from the numeric Gauss curvature of the helix tube.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HelixCrossCheck {
    pub theta_roots: Vec<f64>,
    /// Roots of `G − m κ_v`: flowlines traversed with increasing `s`.
    pub forward_roots: Vec<f64>,
    /// Roots of `G + m κ_v`: flowlines traversed with decreasing `s`.
    pub reverse_roots: Vec<f64>,
    /// Largest distance from a `ϑ` root to the nearest numeric root, and
    /// vice versa.
    pub max_mismatch: f64,
}

pub fn helix_cross_check(r: f64, kappa: f64, tau: f64, m: f64, resolution: usize) -> Result<HelixCrossCheck> {
    let spec = TubeSpec::helix(kappa, tau, r)?;
    let theta_roots = helix_flowline_count(r, kappa, tau, m, resolution).roots;
    let pick = |mass: f64| -> Result<Vec<f64>> {
        Ok(tube_gmf_roots(&spec, mass, 0.0, resolution)?
            .into_iter()
            .map(|x| x.t)
            .collect())
    };
    let forward_roots = pick(m)?;
    let reverse_roots = pick(-m)?;
    let numeric: Vec<f64> = forward_roots.iter().chain(&reverse_roots).cloned().collect();
    let circ = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    };
    let nearest = |x: f64, set: &[f64]| set.iter().map(|&y| circ(x, y)).fold(f64::INFINITY, f64::min);
    let mismatch = theta_roots
        .iter()
        .map(|&x| nearest(x, &numeric))
        .chain(numeric.iter().map(|&x| nearest(x, &theta_roots)))
        .fold(0.0, f64::max);
    Ok(HelixCrossCheck {
        theta_roots,
        forward_roots,
        reverse_roots,
        max_mismatch: mismatch,
    })
}
