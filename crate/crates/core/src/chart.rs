//! Oriented two-dimensional metric charts.
//!
//! A [`SurfaceChart`] couples a coordinate rectangle with a [`MetricModel`]
//! and derives the pointwise geometry every other module consumes:
//! Christoffel symbols of the Levi-Civita connection, Gauss curvature and
//! the complex structure `J` (rotation by +90 degrees compatible with the
//! metric and the chart orientation).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Determinant cutoff below which a metric is treated as degenerate.
pub const DEGENERACY_CUTOFF: f64 = 1e-14;
/// Relative step (times axis extent) for first derivatives of the metric.
pub const METRIC_FD_STEP: f64 = 1e-6;
/// Absolute step for the second derivatives behind the curvature path.
pub const CURVATURE_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub u: f64,
    pub v: f64,
}

impl ChartPoint {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn offset(self, t: TangentVector, scale: f64) -> Self {
        Self::new(self.u + scale * t.du, self.v + scale * t.dv)
    }

    /// Euclidean distance in chart coordinates.
    pub fn chart_distance(self, other: ChartPoint) -> f64 {
        (self.u - other.u).hypot(self.v - other.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TangentVector {
    pub du: f64,
    pub dv: f64,
}

impl TangentVector {
    pub const fn new(du: f64, dv: f64) -> Self {
        Self { du, dv }
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(s * self.du, s * self.dv)
    }

    pub fn add(self, o: TangentVector) -> Self {
        Self::new(self.du + o.du, self.dv + o.dv)
    }

    pub fn is_zero(self) -> bool {
        self.du == 0.0 && self.dv == 0.0
    }

    pub fn euclidean_norm(self) -> f64 {
        self.du.hypot(self.dv)
    }

    pub fn component(self, i: usize) -> f64 {
        if i == 0 {
            self.du
        } else {
            self.dv
        }
    }
}

/// Symmetric metric coefficients `g11 du² + 2 g12 du dv + g22 dv²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricValue {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl MetricValue {
    pub const fn new(g11: f64, g12: f64, g22: f64) -> Self {
        Self { g11, g12, g22 }
    }

    pub const fn diagonal(g11: f64, g22: f64) -> Self {
        Self::new(g11, 0.0, g22)
    }

    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn component(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.g11,
            (1, 1) => self.g22,
            _ => self.g12,
        }
    }

    pub fn inverse(&self) -> [[f64; 2]; 2] {
        let d = self.det();
        [[self.g22 / d, -self.g12 / d], [-self.g12 / d, self.g11 / d]]
    }

    pub fn inner(&self, a: TangentVector, b: TangentVector) -> f64 {
        self.g11 * a.du * b.du + self.g12 * (a.du * b.dv + a.dv * b.du) + self.g22 * a.dv * b.dv
    }

    /// Lowers the index of `a`: returns the covector `g(a, ·)`.
    pub fn lower(&self, a: TangentVector) -> [f64; 2] {
        [
            self.g11 * a.du + self.g12 * a.dv,
            self.g12 * a.du + self.g22 * a.dv,
        ]
    }

    fn scaled_sub(&self, other: &MetricValue, scale: f64) -> MetricValue {
        MetricValue::new(
            (self.g11 - other.g11) * scale,
            (self.g12 - other.g12) * scale,
            (self.g22 - other.g22) * scale,
        )
    }

    fn is_finite(&self) -> bool {
        self.g11.is_finite() && self.g12.is_finite() && self.g22.is_finite()
    }
}

/// One coordinate axis of a chart domain. Bounds are inclusive; a periodic
/// axis has period `max - min` and is never an escape route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub periodic: bool,
}

impl Axis {
    pub const fn bounded(min: f64, max: f64) -> Self {
        Self {
            min,
            max,
            periodic: false,
        }
    }

    pub const fn periodic(min: f64, max: f64) -> Self {
        Self {
            min,
            max,
            periodic: true,
        }
    }

    pub const fn unbounded() -> Self {
        Self::bounded(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn period(&self) -> Option<f64> {
        self.periodic.then(|| self.max - self.min)
    }

    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && (self.periodic || (x >= self.min && x <= self.max))
    }

    /// Extent used to scale finite-difference steps; infinite axes count as 1.
    pub fn extent(&self) -> f64 {
        let e = self.max - self.min;
        if e.is_finite() && e > 0.0 {
            e
        } else {
            1.0
        }
    }

    pub fn wrap(&self, x: f64) -> f64 {
        match self.period() {
            Some(p) => self.min + (x - self.min).rem_euclid(p),
            None => x,
        }
    }

    /// Distance from `x` to the nearest non-periodic bound.
    pub fn margin(&self, x: f64) -> f64 {
        if self.periodic {
            f64::INFINITY
        } else {
            (x - self.min).min(self.max - x)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub u: Axis,
    pub v: Axis,
}

impl Domain {
    pub const fn new(u: Axis, v: Axis) -> Self {
        Self { u, v }
    }

    pub const fn plane() -> Self {
        Self::new(Axis::unbounded(), Axis::unbounded())
    }

    pub fn contains(&self, p: ChartPoint) -> bool {
        self.u.contains(p.u) && self.v.contains(p.v)
    }

    pub fn wrap(&self, p: ChartPoint) -> ChartPoint {
        ChartPoint::new(self.u.wrap(p.u), self.v.wrap(p.v))
    }

    pub fn margin(&self, p: ChartPoint) -> f64 {
        self.u.margin(p.u).min(self.v.margin(p.v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Signature {
    Riemannian,
    Indefinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// Source of metric coefficients for a chart.
///
/// Only [`MetricModel::metric`] is required. Models that know their partial
/// derivatives or Gauss curvature in closed form override the optional
/// hooks; otherwise the chart falls back to central finite differences.
pub trait MetricModel: Send + Sync + fmt::Debug {
    fn metric(&self, p: ChartPoint) -> MetricValue;

    /// `[∂g/∂u, ∂g/∂v]` in closed form, when available.
    fn metric_partials(&self, _p: ChartPoint) -> Option<[MetricValue; 2]> {
        None
    }

    fn gauss_curvature(&self, _p: ChartPoint) -> Option<f64> {
        None
    }

    /// Ambient embedding in R³, when the chart comes from one.
    fn embed(&self, _p: ChartPoint) -> Option<[f64; 3]> {
        None
    }
}

/// Christoffel symbols `Γ^k_{ij}` stored as `gamma[k][i][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel(pub [[[f64; 2]; 2]; 2]);

impl Christoffel {
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.0[k][i][j]
    }

    /// `Γ^k_{ij} a^i b^j` for both k.
    pub fn contract(&self, a: TangentVector, b: TangentVector) -> TangentVector {
        let mut out = [0.0; 2];
        for (k, slot) in out.iter_mut().enumerate() {
            let g = &self.0[k];
            *slot = g[0][0] * a.du * b.du
                + g[0][1] * a.du * b.dv
                + g[1][0] * a.dv * b.du
                + g[1][1] * a.dv * b.dv;
        }
        TangentVector::new(out[0], out[1])
    }
}

#[derive(Clone)]
pub struct SurfaceChart {
    name: String,
    domain: Domain,
    model: Arc<dyn MetricModel>,
    orientation: Orientation,
    signature: Signature,
}

impl fmt::Debug for SurfaceChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceChart")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("orientation", &self.orientation)
            .field("signature", &self.signature)
            .field("model", &self.model)
            .finish()
    }
}

impl SurfaceChart {
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        model: Arc<dyn MetricModel>,
        signature: Signature,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            model,
            orientation: Orientation::Positive,
            signature,
        }
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn model(&self) -> &Arc<dyn MetricModel> {
        &self.model
    }

    pub fn contains(&self, p: ChartPoint) -> bool {
        self.domain.contains(p)
    }

    fn check_domain(&self, p: ChartPoint) -> Result<()> {
        if self.domain.contains(p) {
            Ok(())
        } else {
            Err(GeomError::OutOfDomain { u: p.u, v: p.v })
        }
    }

    fn check_metric(&self, g: MetricValue) -> Result<MetricValue> {
        let det = g.det();
        if !g.is_finite() || !det.is_finite() || det.abs() < DEGENERACY_CUTOFF {
            return Err(GeomError::DegenerateMetric { det });
        }
        if self.signature == Signature::Riemannian && (g.g11 <= 0.0 || det <= 0.0) {
            return Err(GeomError::DegenerateMetric { det });
        }
        Ok(g)
    }

    fn require_riemannian(&self) -> Result<()> {
        match self.signature {
            Signature::Riemannian => Ok(()),
            Signature::Indefinite => Err(GeomError::IndefiniteMetricUnsupported),
        }
    }

    pub fn metric(&self, p: ChartPoint) -> Result<MetricValue> {
        self.check_domain(p)?;
        self.check_metric(self.model.metric(p))
    }

    pub fn inner(&self, p: ChartPoint, a: TangentVector, b: TangentVector) -> Result<f64> {
        Ok(self.metric(p)?.inner(a, b))
    }

    pub fn norm(&self, p: ChartPoint, a: TangentVector) -> Result<f64> {
        Ok(self.inner(p, a, a)?.abs().sqrt())
    }

    fn fd_steps(&self) -> [f64; 2] {
        [
            METRIC_FD_STEP * self.domain.u.extent(),
            METRIC_FD_STEP * self.domain.v.extent(),
        ]
    }

    /// Central-difference partials of the metric, ignoring closed forms.
    pub fn metric_partials_fd(&self, p: ChartPoint) -> Result<[MetricValue; 2]> {
        self.check_domain(p)?;
        let [hu, hv] = self.fd_steps();
        let du = self
            .model
            .metric(ChartPoint::new(p.u + hu, p.v))
            .scaled_sub(&self.model.metric(ChartPoint::new(p.u - hu, p.v)), 0.5 / hu);
        let dv = self
            .model
            .metric(ChartPoint::new(p.u, p.v + hv))
            .scaled_sub(&self.model.metric(ChartPoint::new(p.u, p.v - hv)), 0.5 / hv);
        if !du.is_finite() || !dv.is_finite() {
            return Err(GeomError::DegenerateMetric { det: f64::NAN });
        }
        Ok([du, dv])
    }

    /// Metric partials, closed-form when the model supplies them.
    pub fn metric_partials(&self, p: ChartPoint) -> Result<[MetricValue; 2]> {
        match self.model.metric_partials(p) {
            Some(d) => {
                self.check_domain(p)?;
                Ok(d)
            }
            None => self.metric_partials_fd(p),
        }
    }

    fn christoffel_from(g: &MetricValue, d: &[MetricValue; 2]) -> Christoffel {
        let inv = g.inverse();
        // first kind: [ij, l] = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
        let mut first = [[[0.0; 2]; 2]; 2];
        for (i, row) in first.iter_mut().enumerate() {
            for (j, col) in row.iter_mut().enumerate() {
                for (l, slot) in col.iter_mut().enumerate() {
                    *slot = 0.5
                        * (d[i].component(j, l) + d[j].component(i, l) - d[l].component(i, j));
                }
            }
        }
        let mut gamma = [[[0.0; 2]; 2]; 2];
        for (k, plane) in gamma.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    plane[i][j] = inv[k][0] * first[i][j][0] + inv[k][1] * first[i][j][1];
                }
            }
        }
        // exact symmetry in (i, j)
        for plane in gamma.iter_mut() {
            let s = 0.5 * (plane[0][1] + plane[1][0]);
            plane[0][1] = s;
            plane[1][0] = s;
        }
        Christoffel(gamma)
    }

    pub fn christoffel(&self, p: ChartPoint) -> Result<Christoffel> {
        let g = self.metric(p)?;
        let d = self.metric_partials(p)?;
        Ok(Self::christoffel_from(&g, &d))
    }

    /// Christoffel symbols from finite-difference partials only.
    pub fn christoffel_fd(&self, p: ChartPoint) -> Result<Christoffel> {
        let g = self.metric(p)?;
        let d = self.metric_partials_fd(p)?;
        Ok(Self::christoffel_from(&g, &d))
    }

    /// Gauss curvature: the model's closed form when available, otherwise
    /// the finite-difference path of [`SurfaceChart::gauss_curvature_fd`].
    pub fn gauss_curvature(&self, p: ChartPoint) -> Result<f64> {
        self.require_riemannian()?;
        self.metric(p)?;
        match self.model.gauss_curvature(p) {
            Some(k) => Ok(k),
            None => self.gauss_curvature_fd(p),
        }
    }

    /// Brioschi's formula with all metric derivatives taken by central
    /// differences of step [`CURVATURE_FD_STEP`].
    pub fn gauss_curvature_fd(&self, p: ChartPoint) -> Result<f64> {
        self.require_riemannian()?;
        let g0 = self.metric(p)?;
        let h = CURVATURE_FD_STEP;
        let at = |du: f64, dv: f64| self.model.metric(ChartPoint::new(p.u + du, p.v + dv));
        let (gp0, gm0, g0p, g0m) = (at(h, 0.0), at(-h, 0.0), at(0.0, h), at(0.0, -h));
        let (gpp, gpm, gmp, gmm) = (at(h, h), at(h, -h), at(-h, h), at(-h, -h));

        let e = g0.g11;
        let f = g0.g12;
        let gg = g0.g22;
        let e_u = (gp0.g11 - gm0.g11) / (2.0 * h);
        let e_v = (g0p.g11 - g0m.g11) / (2.0 * h);
        let f_u = (gp0.g12 - gm0.g12) / (2.0 * h);
        let f_v = (g0p.g12 - g0m.g12) / (2.0 * h);
        let g_u = (gp0.g22 - gm0.g22) / (2.0 * h);
        let g_v = (g0p.g22 - g0m.g22) / (2.0 * h);
        let e_vv = (g0p.g11 - 2.0 * e + g0m.g11) / (h * h);
        let g_uu = (gp0.g22 - 2.0 * gg + gm0.g22) / (h * h);
        let f_uv = (gpp.g12 - gpm.g12 - gmp.g12 + gmm.g12) / (4.0 * h * h);

        let det3 = |m: [[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let m1 = [
            [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
            [f_v - 0.5 * g_u, e, f],
            [0.5 * g_v, f, gg],
        ];
        let m2 = [[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, e, f], [0.5 * g_u, f, gg]];
        let w = e * gg - f * f;
        let k = (det3(m1) - det3(m2)) / (w * w);
        if k.is_finite() {
            Ok(k)
        } else {
            Err(GeomError::DegenerateMetric { det: w })
        }
    }

    /// Coordinate matrix of `J` acting on column vectors `(du, dv)`.
    pub fn complex_structure_matrix(&self, p: ChartPoint) -> Result<[[f64; 2]; 2]> {
        self.require_riemannian()?;
        let g = self.metric(p)?;
        let s = self.orientation.sign() / g.det().sqrt();
        Ok([[-s * g.g12, -s * g.g22], [s * g.g11, s * g.g12]])
    }

    /// `J X`: same length as `X`, orthogonal to it, with `Ω₂(X, JX) = g(X, X)`.
    pub fn complex_structure(&self, p: ChartPoint, x: TangentVector) -> Result<TangentVector> {
        if x.is_zero() {
            return Err(GeomError::ZeroVector);
        }
        let j = self.complex_structure_matrix(p)?;
        Ok(apply(&j, x))
    }

    /// Area form `Ω₂(a, b)` for the chart orientation.
    pub fn area_form(&self, p: ChartPoint, a: TangentVector, b: TangentVector) -> Result<f64> {
        self.require_riemannian()?;
        let g = self.metric(p)?;
        Ok(self.orientation.sign() * g.det().sqrt() * (a.du * b.dv - a.dv * b.du))
    }

    pub fn embed(&self, p: ChartPoint) -> Option<[f64; 3]> {
        self.model.embed(p)
    }

    // ---- catalog of the flat and constant-curvature charts ----

    /// Euclidean plane, `g = du² + dv²`.
    pub fn flat() -> Self {
        Self::new(
            "plane",
            Domain::plane(),
            Arc::new(FlatMetric),
            Signature::Riemannian,
        )
    }

    /// Lorentzian plane, `g = du² − dv²`.
    pub fn lorentz_plane() -> Self {
        Self::new(
            "lorentz-plane",
            Domain::plane(),
            Arc::new(LorentzMetric),
            Signature::Indefinite,
        )
    }

    /// Round sphere of radius `r` in polar coordinates
    /// (`u` polar angle, `v` longitude): `g = r² du² + r² sin²u dv²`.
    pub fn sphere_polar(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(GeomError::NonpositiveInput("radius"));
        }
        Ok(Self::new(
            "sphere",
            Domain::new(Axis::bounded(0.0, PI), Axis::periodic(0.0, 2.0 * PI)),
            Arc::new(SpherePolar { radius }),
            Signature::Riemannian,
        ))
    }

    /// Round sphere of radius `r` stereographically projected from the south
    /// pole; the north pole sits at the origin.
    pub fn sphere_stereographic(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(GeomError::NonpositiveInput("radius"));
        }
        Ok(Self::new(
            "sphere-stereographic",
            Domain::plane(),
            Arc::new(SphereStereographic { radius }),
            Signature::Riemannian,
        ))
    }

    /// Upper half-plane with `g = (du² + dv²) / (G v²)`, curvature `−G`.
    pub fn hyperbolic_half_plane(curvature: f64) -> Result<Self> {
        if !(curvature > 0.0) {
            return Err(GeomError::NonpositiveCurvatureParameter);
        }
        Ok(Self::new(
            "hyperbolic",
            Domain::new(Axis::unbounded(), Axis::bounded(0.0, f64::INFINITY)),
            Arc::new(HalfPlane { curvature }),
            Signature::Riemannian,
        ))
    }
}

pub(crate) fn apply(m: &[[f64; 2]; 2], x: TangentVector) -> TangentVector {
    TangentVector::new(
        m[0][0] * x.du + m[0][1] * x.dv,
        m[1][0] * x.du + m[1][1] * x.dv,
    )
}

#[derive(Debug, Clone, Copy)]
pub struct FlatMetric;

impl MetricModel for FlatMetric {
    fn metric(&self, _p: ChartPoint) -> MetricValue {
        MetricValue::diagonal(1.0, 1.0)
    }

    fn metric_partials(&self, _p: ChartPoint) -> Option<[MetricValue; 2]> {
        Some([MetricValue::default(); 2])
    }

    fn gauss_curvature(&self, _p: ChartPoint) -> Option<f64> {
        Some(0.0)
    }

    fn embed(&self, p: ChartPoint) -> Option<[f64; 3]> {
        Some([p.u, p.v, 0.0])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LorentzMetric;

impl MetricModel for LorentzMetric {
    fn metric(&self, _p: ChartPoint) -> MetricValue {
        MetricValue::diagonal(1.0, -1.0)
    }

    fn metric_partials(&self, _p: ChartPoint) -> Option<[MetricValue; 2]> {
        Some([MetricValue::default(); 2])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpherePolar {
    pub radius: f64,
}

impl MetricModel for SpherePolar {
    fn metric(&self, p: ChartPoint) -> MetricValue {
        let r2 = self.radius * self.radius;
        let s = p.u.sin();
        MetricValue::diagonal(r2, r2 * s * s)
    }

    fn metric_partials(&self, p: ChartPoint) -> Option<[MetricValue; 2]> {
        let r2 = self.radius * self.radius;
        let (s, c) = p.u.sin_cos();
        Some([
            MetricValue::diagonal(0.0, 2.0 * r2 * s * c),
            MetricValue::default(),
        ])
    }

    fn gauss_curvature(&self, _p: ChartPoint) -> Option<f64> {
        Some(1.0 / (self.radius * self.radius))
    }

    fn embed(&self, p: ChartPoint) -> Option<[f64; 3]> {
        let (su, cu) = p.u.sin_cos();
        let (sv, cv) = p.v.sin_cos();
        let r = self.radius;
        Some([r * su * cv, r * su * sv, r * cu])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SphereStereographic {
    pub radius: f64,
}

impl MetricModel for SphereStereographic {
    fn metric(&self, p: ChartPoint) -> MetricValue {
        let q = 1.0 + p.u * p.u + p.v * p.v;
        let lambda = 4.0 * self.radius * self.radius / (q * q);
        MetricValue::diagonal(lambda, lambda)
    }

    fn metric_partials(&self, p: ChartPoint) -> Option<[MetricValue; 2]> {
        let q = 1.0 + p.u * p.u + p.v * p.v;
        let c = -16.0 * self.radius * self.radius / (q * q * q);
        Some([
            MetricValue::diagonal(c * p.u, c * p.u),
            MetricValue::diagonal(c * p.v, c * p.v),
        ])
    }

    fn gauss_curvature(&self, _p: ChartPoint) -> Option<f64> {
        Some(1.0 / (self.radius * self.radius))
    }

    fn embed(&self, p: ChartPoint) -> Option<[f64; 3]> {
        let rho2 = p.u * p.u + p.v * p.v;
        let q = 1.0 + rho2;
        let r = self.radius;
        Some([
            r * 2.0 * p.u / q,
            r * 2.0 * p.v / q,
            r * (1.0 - rho2) / q,
        ])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct HalfPlane {
    pub curvature: f64,
}

impl MetricModel for HalfPlane {
    fn metric(&self, p: ChartPoint) -> MetricValue {
        let lambda = 1.0 / (self.curvature * p.v * p.v);
        MetricValue::diagonal(lambda, lambda)
    }

    fn metric_partials(&self, p: ChartPoint) -> Option<[MetricValue; 2]> {
        let dl = -2.0 / (self.curvature * p.v * p.v * p.v);
        Some([MetricValue::default(), MetricValue::diagonal(dl, dl)])
    }

    fn gauss_curvature(&self, _p: ChartPoint) -> Option<f64> {
        Some(-self.curvature)
    }
}

/// Closure-backed metric for ad-hoc charts (finite-difference derivatives).
#[derive(Clone)]
pub struct FnMetric(pub Arc<dyn Fn(ChartPoint) -> MetricValue + Send + Sync>);

impl fmt::Debug for FnMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnMetric(..)")
    }
}

impl MetricModel for FnMetric {
    fn metric(&self, p: ChartPoint) -> MetricValue {
        (self.0)(p)
    }
}
