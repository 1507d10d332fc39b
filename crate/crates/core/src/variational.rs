//! Discrete curves and the action `F_m(γ) = ∫ (κ + m) ds`: curvature,
//! Euler–Lagrange residual `G − mκ`, first and second variations and the
//! stability test `N(G) − (G² + m²G)/m`.

use serde::Serialize;

use crate::chart::{ChartPoint, SurfaceChart, TangentVector};
use crate::error::{GeomError, Result};
use crate::flow::Trajectory;

pub const MIN_NODES: usize = 5;
/// Largest tolerated ratio between the longest and shortest segment.
pub const SPACING_RATIO: f64 = 10.0;
/// Relative step (times bounding-box diagonal) of first-variation differences.
pub const FIRST_VARIATION_STEP: f64 = 1e-5;
/// Relative step of second-variation differences.
pub const SECOND_VARIATION_STEP: f64 = 1e-3;
/// Step of the normal derivative of the Gauss curvature.
pub const NORMAL_DERIVATIVE_STEP: f64 = 1e-5;
/// Criticality gate for the stability test and the second variation.
pub const CRITICALITY_GATE: f64 = 1e-2;
/// Values of the stability test function inside this band have no sign.
pub const ZERO_BAND: f64 = 1e-9;

/// Offset picked up per lap of a closed curve on periodic axes.
fn closed_shift(chart: &SurfaceChart, nodes: &[ChartPoint]) -> [f64; 2] {
    let n = nodes.len();
    let dom = chart.domain();
    let periods = [dom.u.period(), dom.v.period()];
    let (last, prev, first) = (nodes[n - 1], nodes[n - 2], nodes[0]);
    let last = [last.u, last.v];
    let prev = [prev.u, prev.v];
    let first = [first.u, first.v];
    let mut shift = [0.0; 2];
    for k in 0..2 {
        if let Some(p) = periods[k] {
            let next = 2.0 * last[k] - prev[k];
            shift[k] = p * ((next - first[k]) / p).round();
        }
    }
    shift
}

/// Node-parameter derivatives `(x', x'')` of a node list, five-point
/// stencils, wrapped for closed curves and one-sided at open ends.
fn node_derivatives(
    chart: &SurfaceChart,
    nodes: &[ChartPoint],
    closed: bool,
) -> Result<Vec<(TangentVector, TangentVector)>> {
    let n = nodes.len();
    if n < MIN_NODES {
        return Err(GeomError::TooFewNodes { got: n, need: MIN_NODES });
    }
    let coords = |p: &ChartPoint| [p.u, p.v];
    let mut out = Vec::with_capacity(n);
    if closed {
        let shift = closed_shift(chart, nodes);
        let at = |i: isize, k: usize| {
            let lap = i.div_euclid(n as isize);
            let j = i.rem_euclid(n as isize) as usize;
            coords(&nodes[j])[k] + lap as f64 * shift[k]
        };
        for i in 0..n as isize {
            let mut d1 = [0.0; 2];
            let mut d2 = [0.0; 2];
            for k in 0..2 {
                let (m2, m1, c, p1, p2) = (at(i - 2, k), at(i - 1, k), at(i, k), at(i + 1, k), at(i + 2, k));
                d1[k] = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / 12.0;
                d2[k] = (-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / 12.0;
            }
            out.push((TangentVector::new(d1[0], d1[1]), TangentVector::new(d2[0], d2[1])));
        }
    } else {
        const D1: [[f64; 5]; 2] = [[-25.0, 48.0, -36.0, 16.0, -3.0], [-3.0, -10.0, 18.0, -6.0, 1.0]];
        const D2: [[f64; 5]; 2] = [[35.0, -104.0, 114.0, -56.0, 11.0], [11.0, -20.0, 6.0, 4.0, -1.0]];
        const C1: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
        const C2: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];
        for i in 0..n {
            let (base, w1, w2, sign): (usize, &[f64; 5], &[f64; 5], f64);
            let reversed;
            if i < 2 {
                base = 0;
                w1 = &D1[i];
                w2 = &D2[i];
                sign = 1.0;
                reversed = false;
            } else if i + 2 >= n {
                base = n - 5;
                let k = n - 1 - i;
                w1 = &D1[k];
                w2 = &D2[k];
                sign = -1.0;
                reversed = true;
            } else {
                base = i - 2;
                w1 = &C1;
                w2 = &C2;
                sign = 1.0;
                reversed = false;
            }
            let mut d1 = [0.0; 2];
            let mut d2 = [0.0; 2];
            for j in 0..5 {
                let node = if reversed { nodes[base + 4 - j] } else { nodes[base + j] };
                let x = coords(&node);
                for k in 0..2 {
                    d1[k] += sign * w1[j] * x[k] / 12.0;
                    d2[k] += w2[j] * x[k] / 12.0;
                }
            }
            out.push((TangentVector::new(d1[0], d1[1]), TangentVector::new(d2[0], d2[1])));
        }
    }
    Ok(out)
}

/// Per-node speed `|x'|_g` and signed geodesic curvature
/// `g(x'' + Γ(x', x'), J x') / |x'|³`.
fn speed_and_curvature(
    chart: &SurfaceChart,
    nodes: &[ChartPoint],
    closed: bool,
) -> Result<Vec<(f64, f64)>> {
    let derivs = node_derivatives(chart, nodes, closed)?;
    nodes
        .iter()
        .zip(derivs)
        .map(|(&p, (d1, d2))| {
            let g = chart.metric(p)?;
            let gamma = chart.christoffel(p)?;
            let acc = d2.add(gamma.contract(d1, d1));
            let jx = chart.complex_structure(p, d1)?;
            let speed = g.inner(d1, d1).sqrt();
            Ok((speed, g.inner(acc, jx) / speed.powi(3)))
        })
        .collect()
}

/// Signed geodesic curvature at every node of a raw node list.
pub fn stencil_curvature(chart: &SurfaceChart, nodes: &[ChartPoint], closed: bool) -> Result<Vec<f64>> {
    Ok(speed_and_curvature(chart, nodes, closed)?
        .into_iter()
        .map(|(_, k)| k)
        .collect())
}

#[derive(Debug, Clone)]
pub struct DiscreteCurve {
    chart: SurfaceChart,
    nodes: Vec<ChartPoint>,
    closed: bool,
    clamp: Option<[TangentVector; 2]>,
}

impl DiscreteCurve {
    /// Validates the node list and resamples it to uniform arclength when
    /// the spacing ratio exceeds [`SPACING_RATIO`].
    pub fn new(chart: SurfaceChart, nodes: Vec<ChartPoint>, closed: bool) -> Result<Self> {
        if nodes.len() < MIN_NODES {
            return Err(GeomError::TooFewNodes {
                got: nodes.len(),
                need: MIN_NODES,
            });
        }
        if nodes.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeomError::BadParameters("consecutive nodes coincide".into()));
        }
        let curve = Self::raw(chart, nodes, closed);
        let lens = curve.segment_lengths()?;
        let max = lens.iter().cloned().fold(0.0, f64::max);
        let min = lens.iter().cloned().fold(f64::INFINITY, f64::min);
        if max > SPACING_RATIO * min {
            return curve.resampled();
        }
        Ok(curve)
    }

    fn raw(chart: SurfaceChart, nodes: Vec<ChartPoint>, closed: bool) -> Self {
        Self {
            chart,
            nodes,
            closed,
            clamp: None,
        }
    }

    /// Closed parallel `u = t` sampled at `n` equally spaced angles.
    pub fn parallel(chart: SurfaceChart, t: f64, n: usize) -> Result<Self> {
        let v = chart.domain().v;
        let period = v.period().ok_or_else(|| {
            GeomError::BadParameters("parallels need a periodic second coordinate".into())
        })?;
        let nodes = (0..n)
            .map(|k| ChartPoint::new(t, v.min + period * k as f64 / n as f64))
            .collect();
        Self::new(chart, nodes, true)
    }

    /// Open curve through the trajectory samples, keeping every `stride`-th.
    pub fn from_trajectory(chart: SurfaceChart, traj: &Trajectory, stride: usize) -> Result<Self> {
        let nodes = traj.samples.iter().step_by(stride.max(1)).map(|s| s.point).collect();
        Self::new(chart, nodes, false)
    }

    pub fn with_clamp(mut self, start: TangentVector, end: TangentVector) -> Result<Self> {
        if self.closed {
            return Err(GeomError::BadParameters("closed curves carry no clamp data".into()));
        }
        self.clamp = Some([start, end]);
        Ok(self)
    }

    pub fn chart(&self) -> &SurfaceChart {
        &self.chart
    }

    pub fn nodes(&self) -> &[ChartPoint] {
        &self.nodes
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn clamp(&self) -> Option<[TangentVector; 2]> {
        self.clamp
    }

    fn segment_lengths(&self) -> Result<Vec<f64>> {
        let n = self.nodes.len();
        let segs = if self.closed { n } else { n - 1 };
        // chord length measured with the midpoint metric
        (0..segs)
            .map(|i| {
                let a = self.nodes[i];
                let b = self.node_at(i as isize + 1);
                let d = TangentVector::new(b.u - a.u, b.v - a.v);
                let mid = ChartPoint::new(0.5 * (a.u + b.u), 0.5 * (a.v + b.v));
                let g = self.chart.metric(mid).or_else(|_| self.chart.metric(a))?;
                Ok(g.inner(d, d).sqrt())
            })
            .collect()
    }

    /// Node `i` extended past the ends of a closed curve by whole laps.
    fn node_at(&self, i: isize) -> ChartPoint {
        let n = self.nodes.len() as isize;
        if !self.closed {
            return self.nodes[i.clamp(0, n - 1) as usize];
        }
        let shift = closed_shift(&self.chart, &self.nodes);
        let lap = i.div_euclid(n) as f64;
        let p = self.nodes[i.rem_euclid(n) as usize];
        ChartPoint::new(p.u + lap * shift[0], p.v + lap * shift[1])
    }

    fn resampled(&self) -> Result<Self> {
        let n = self.nodes.len();
        let lens = self.segment_lengths()?;
        let mut cum = vec![0.0];
        for l in &lens {
            cum.push(cum.last().unwrap() + l);
        }
        let total = *cum.last().unwrap();
        // arclength tangents by centered chords (one-sided at open ends)
        let tangent = |i: isize| -> TangentVector {
            let (lo, hi) = if self.closed {
                (i - 1, i + 1)
            } else {
                ((i - 1).max(0), (i + 1).min(n as isize - 1))
            };
            let (a, b) = (self.node_at(lo), self.node_at(hi));
            let arc = |k: isize| -> f64 {
                let laps = k.div_euclid(n as isize) as f64;
                laps * total + cum[k.rem_euclid(n as isize) as usize]
            };
            let ds = arc(hi) - arc(lo);
            TangentVector::new((b.u - a.u) / ds, (b.v - a.v) / ds)
        };
        let targets = if self.closed { n } else { n - 1 };
        let mut nodes = Vec::with_capacity(n);
        let mut seg = 0;
        for k in 0..n {
            let s = total * k as f64 / targets as f64;
            while seg + 1 < lens.len() && cum[seg + 1] < s {
                seg += 1;
            }
            let len = lens[seg];
            let a = self.node_at(seg as isize);
            let b = self.node_at(seg as isize + 1);
            let (ta, tb) = (tangent(seg as isize), tangent(seg as isize + 1));
            let x = ((s - cum[seg]) / len).clamp(0.0, 1.0);
            let (x2, x3) = (x * x, x * x * x);
            let h00 = 2.0 * x3 - 3.0 * x2 + 1.0;
            let h10 = (x3 - 2.0 * x2 + x) * len;
            let h01 = -2.0 * x3 + 3.0 * x2;
            let h11 = (x3 - x2) * len;
            nodes.push(ChartPoint::new(
                h00 * a.u + h10 * ta.du + h01 * b.u + h11 * tb.du,
                h00 * a.v + h10 * ta.dv + h01 * b.v + h11 * tb.dv,
            ));
        }
        Ok(Self::raw(self.chart.clone(), nodes, self.closed))
    }

    fn trapezoid_weight(&self, i: usize) -> f64 {
        if !self.closed && (i == 0 || i + 1 == self.nodes.len()) {
            0.5
        } else {
            1.0
        }
    }

    fn bounding_diagonal(&self) -> f64 {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &self.nodes {
            lo[0] = lo[0].min(p.u);
            lo[1] = lo[1].min(p.v);
            hi[0] = hi[0].max(p.u);
            hi[1] = hi[1].max(p.v);
        }
        (hi[0] - lo[0]).hypot(hi[1] - lo[1])
    }

    fn perturbed(&self, w: &[TangentVector], eps: f64) -> Self {
        let nodes = self
            .nodes
            .iter()
            .zip(w)
            .map(|(p, wi)| p.offset(*wi, eps))
            .collect();
        Self {
            nodes,
            ..self.clone()
        }
    }

    fn check_perturbation(&self, w: &[TangentVector]) -> Result<()> {
        if w.len() != self.nodes.len() {
            return Err(GeomError::BadPerturbation(format!(
                "{} vectors for {} nodes",
                w.len(),
                self.nodes.len()
            )));
        }
        if !self.closed {
            let n = w.len();
            if [0, 1, n - 2, n - 1].iter().any(|&i| !w[i].is_zero()) {
                return Err(GeomError::BadPerturbation(
                    "open curves need W to vanish on the two end nodes at each side".into(),
                ));
            }
        }
        Ok(())
    }
}

pub fn discrete_curvature(curve: &DiscreteCurve) -> Result<Vec<f64>> {
    stencil_curvature(&curve.chart, &curve.nodes, curve.closed)
}

/// Riemannian length by trapezoidal quadrature in the node parameter.
pub fn length(curve: &DiscreteCurve) -> Result<f64> {
    let sk = speed_and_curvature(&curve.chart, &curve.nodes, curve.closed)?;
    Ok(sk
        .iter()
        .enumerate()
        .map(|(i, (s, _))| curve.trapezoid_weight(i) * s)
        .sum())
}

pub fn functional_value(curve: &DiscreteCurve, m: f64) -> Result<f64> {
    let sk = speed_and_curvature(&curve.chart, &curve.nodes, curve.closed)?;
    Ok(sk
        .iter()
        .enumerate()
        .map(|(i, (s, k))| curve.trapezoid_weight(i) * (k + m) * s)
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualProfile {
    pub values: Vec<f64>,
    pub max: f64,
}

/// Euler–Lagrange residual `G − mκ` per node.
pub fn el_residual(curve: &DiscreteCurve, m: f64) -> Result<ResidualProfile> {
    let kappa = discrete_curvature(curve)?;
    let values = curve
        .nodes
        .iter()
        .zip(&kappa)
        .map(|(&p, k)| Ok(curve.chart.gauss_curvature(p)? - m * k))
        .collect::<Result<Vec<f64>>>()?;
    let max = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(ResidualProfile { values, max })
}

/// Central difference of `F_m` along `W` with step `1e-5` times the
/// bounding-box diagonal.
pub fn first_variation_fd(curve: &DiscreteCurve, m: f64, w: &[TangentVector]) -> Result<f64> {
    curve.check_perturbation(w)?;
    if w.iter().all(|x| x.is_zero()) {
        return Ok(0.0);
    }
    let eps = FIRST_VARIATION_STEP * curve.bounding_diagonal();
    let plus = functional_value(&curve.perturbed(w, eps), m)?;
    let minus = functional_value(&curve.perturbed(w, -eps), m)?;
    Ok((plus - minus) / (2.0 * eps))
}

/// Analytic first variation `∫ (G − mκ) g(N, W) ds` with `N = JT`.
pub fn first_variation_pairing(curve: &DiscreteCurve, m: f64, w: &[TangentVector]) -> Result<f64> {
    curve.check_perturbation(w)?;
    let derivs = node_derivatives(&curve.chart, &curve.nodes, curve.closed)?;
    let kappa = discrete_curvature(curve)?;
    let mut total = 0.0;
    for (i, &p) in curve.nodes.iter().enumerate() {
        let d1 = derivs[i].0;
        let g = curve.chart.metric(p)?;
        let speed = g.inner(d1, d1).sqrt();
        let normal = curve.chart.complex_structure(p, d1)?.scale(1.0 / speed);
        let omega = curve.chart.gauss_curvature(p)? - m * kappa[i];
        total += curve.trapezoid_weight(i) * omega * g.inner(normal, w[i]) * speed;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilitySign {
    AllPositive,
    AllNegative,
    MixedSign,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub values: Vec<f64>,
    pub sign: StabilitySign,
}

fn require_critical(curve: &DiscreteCurve, m: f64) -> Result<ResidualProfile> {
    let res = el_residual(curve, m)?;
    if !(res.max <= CRITICALITY_GATE) {
        return Err(GeomError::NotCritical { max_residual: res.max });
    }
    Ok(res)
}

/// Unit normals `N = JT` at the nodes.
pub fn unit_normals(curve: &DiscreteCurve) -> Result<Vec<TangentVector>> {
    let derivs = node_derivatives(&curve.chart, &curve.nodes, curve.closed)?;
    curve
        .nodes
        .iter()
        .zip(derivs)
        .map(|(&p, (d1, _))| {
            let speed = curve.chart.norm(p, d1)?;
            Ok(curve.chart.complex_structure(p, d1)?.scale(1.0 / speed))
        })
        .collect()
}

/// Evaluates `N(G) − (G² + m²G)/m` at every node and classifies its sign.
pub fn stability_test(curve: &DiscreteCurve, m: f64) -> Result<StabilityReport> {
    if m == 0.0 {
        return Err(GeomError::ZeroMass);
    }
    require_critical(curve, m)?;
    let normals = unit_normals(curve)?;
    let h = NORMAL_DERIVATIVE_STEP;
    let values = curve
        .nodes
        .iter()
        .zip(&normals)
        .map(|(&p, &n)| {
            let chart = &curve.chart;
            let dg = (chart.gauss_curvature(p.offset(n, h))? - chart.gauss_curvature(p.offset(n, -h))?) / (2.0 * h);
            let g = chart.gauss_curvature(p)?;
            Ok(dg - (g * g + m * m * g) / m)
        })
        .collect::<Result<Vec<f64>>>()?;
    let sign = if values.iter().all(|&v| v > ZERO_BAND) {
        StabilitySign::AllPositive
    } else if values.iter().all(|&v| v < -ZERO_BAND) {
        StabilitySign::AllNegative
    } else {
        StabilitySign::MixedSign
    };
    Ok(StabilityReport { values, sign })
}

/// Second central difference of `F_m` along `W` (step `1e-3` times the
/// bounding-box diagonal); the curve must pass the criticality gate.
pub fn second_variation_fd(curve: &DiscreteCurve, m: f64, w: &[TangentVector]) -> Result<f64> {
    require_critical(curve, m)?;
    curve.check_perturbation(w)?;
    if w.iter().all(|x| x.is_zero()) {
        return Ok(0.0);
    }
    let eps = SECOND_VARIATION_STEP * curve.bounding_diagonal();
    let f0 = functional_value(curve, m)?;
    let plus = functional_value(&curve.perturbed(w, eps), m)?;
    let minus = functional_value(&curve.perturbed(w, -eps), m)?;
    Ok((plus - 2.0 * f0 + minus) / (eps * eps))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationalReport {
    pub value: f64,
    pub length: f64,
    pub el_residual_profile: Vec<f64>,
    pub el_residual_max: f64,
    pub first_variation: Option<f64>,
    pub first_variation_pairing: Option<f64>,
    pub stability_sign: Option<StabilitySign>,
    pub stability_values: Option<Vec<f64>>,
}

/// Full report; the stability part is filled only for `m ≠ 0` on curves
/// passing the criticality gate.
pub fn variational_report(
    curve: &DiscreteCurve,
    m: f64,
    w: Option<&[TangentVector]>,
) -> Result<VariationalReport> {
    let res = el_residual(curve, m)?;
    let (first_variation, first_variation_pairing) = match w {
        Some(w) => (
            Some(first_variation_fd(curve, m, w)?),
            Some(first_variation_pairing(curve, m, w)?),
        ),
        None => (None, None),
    };
    let stability = if m != 0.0 && res.max <= CRITICALITY_GATE {
        Some(stability_test(curve, m)?)
    } else {
        None
    };
    Ok(VariationalReport {
        value: functional_value(curve, m)?,
        length: length(curve)?,
        el_residual_max: res.max,
        el_residual_profile: res.values,
        first_variation,
        first_variation_pairing,
        stability_sign: stability.as_ref().map(|s| s.sign),
        stability_values: stability.map(|s| s.values),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn flat_circle(radius: f64, n: usize) -> DiscreteCurve {
        let nodes = (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                ChartPoint::new(radius * a.cos(), radius * a.sin())
            })
            .collect();
        DiscreteCurve::new(SurfaceChart::flat(), nodes, true).unwrap()
    }

    #[test]
    fn open_stencils_are_exact_on_quartics() {
        let chart = SurfaceChart::flat();
        let f = |x: f64| 0.3 * x.powi(4) - x.powi(3) + 2.0 * x;
        let df = |x: f64| 1.2 * x.powi(3) - 3.0 * x.powi(2) + 2.0;
        let d2f = |x: f64| 3.6 * x.powi(2) - 6.0 * x;
        let nodes: Vec<ChartPoint> = (0..9).map(|i| ChartPoint::new(i as f64, f(i as f64))).collect();
        let d = node_derivatives(&chart, &nodes, false).unwrap();
        for (i, (d1, d2)) in d.iter().enumerate() {
            let x = i as f64;
            assert!((d1.du - 1.0).abs() < 1e-12);
            assert!((d1.dv - df(x)).abs() < 1e-9, "node {i}: {} vs {}", d1.dv, df(x));
            assert!((d2.dv - d2f(x)).abs() < 1e-9, "node {i}: {} vs {}", d2.dv, d2f(x));
        }
    }

    #[test]
    fn plane_circle_curvature_and_functional() {
        let c = flat_circle(0.5, 200);
        assert!(discrete_curvature(&c).unwrap().iter().all(|k| (k - 2.0).abs() < 1e-3));
        let c = flat_circle(1.0, 400);
        assert!((functional_value(&c, 0.0).unwrap() - 2.0 * PI).abs() < 1e-3);
        assert!((functional_value(&c, 1.0).unwrap() - 4.0 * PI).abs() < 2e-3);
    }

    #[test]
    fn geodesic_segment_functional_is_m_times_length() {
        let nodes: Vec<ChartPoint> = (0..11).map(|i| ChartPoint::new(0.1 * i as f64, 0.2 * i as f64)).collect();
        let c = DiscreteCurve::new(SurfaceChart::flat(), nodes, false).unwrap();
        let l = 5f64.sqrt();
        assert!((functional_value(&c, 2.5).unwrap() - 2.5 * l).abs() < 1e-6);
    }

    #[test]
    fn sphere_parallels() {
        let sphere = SurfaceChart::sphere_polar(1.0).unwrap();
        let eq = DiscreteCurve::parallel(sphere.clone(), PI / 2.0, 200).unwrap();
        assert!(discrete_curvature(&eq).unwrap().iter().all(|k| k.abs() < 1e-4));
        let lat = DiscreteCurve::parallel(sphere, PI / 3.0, 200).unwrap();
        let want = 1.0 / (PI / 3.0).tan();
        assert!(discrete_curvature(&lat).unwrap().iter().all(|k| (k - want).abs() < 1e-3));
    }

    #[test]
    fn too_few_nodes() {
        let nodes = vec![ChartPoint::new(0.0, 0.0), ChartPoint::new(1.0, 0.0)];
        assert!(matches!(
            DiscreteCurve::new(SurfaceChart::flat(), nodes, false),
            Err(GeomError::TooFewNodes { got: 2, need: 5 })
        ));
    }

    #[test]
    fn uneven_spacing_is_resampled() {
        let mut xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.01).collect();
        xs.extend((1..20).map(|i| 0.19 + i as f64 * 0.5));
        let nodes: Vec<ChartPoint> = xs.iter().map(|&x| ChartPoint::new(x, 0.0)).collect();
        let c = DiscreteCurve::new(SurfaceChart::flat(), nodes, false).unwrap();
        let lens = c.segment_lengths().unwrap();
        let max = lens.iter().cloned().fold(0.0, f64::max);
        let min = lens.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max <= SPACING_RATIO * min);
        assert!((length(&c).unwrap() - (0.19 + 9.5)).abs() < 1e-9);
    }

    #[test]
    fn zero_perturbation_gives_zero() {
        let c = flat_circle(1.0, 64);
        let w = vec![TangentVector::default(); 64];
        assert_eq!(first_variation_fd(&c, 1.0, &w).unwrap(), 0.0);
    }

    #[test]
    fn open_curve_perturbation_must_vanish_at_ends() {
        let nodes: Vec<ChartPoint> = (0..10).map(|i| ChartPoint::new(i as f64, 0.0)).collect();
        let c = DiscreteCurve::new(SurfaceChart::flat(), nodes, false).unwrap();
        let mut w = vec![TangentVector::default(); 10];
        w[1] = TangentVector::new(0.0, 1.0);
        assert!(matches!(first_variation_fd(&c, 1.0, &w), Err(GeomError::BadPerturbation(_))));
        assert!(matches!(first_variation_fd(&c, 1.0, &w[..5]), Err(GeomError::BadPerturbation(_))));
    }

    #[test]
    fn outward_pairing_on_plane_circle() {
        let c = flat_circle(1.0, 256);
        let w: Vec<TangentVector> = c.nodes().iter().map(|p| TangentVector::new(p.u, p.v)).collect();
        let fd = first_variation_fd(&c, 1.0, &w).unwrap();
        let an = first_variation_pairing(&c, 1.0, &w).unwrap();
        assert!((fd - 2.0 * PI).abs() < 1e-3 * 2.0 * PI, "{fd}");
        assert!((an - 2.0 * PI).abs() < 1e-3 * 2.0 * PI, "{an}");
    }

    #[test]
    fn stability_gates() {
        let sphere = SurfaceChart::sphere_polar(1.0).unwrap();
        let eq = DiscreteCurve::parallel(sphere, PI / 2.0, 100).unwrap();
        assert_eq!(stability_test(&eq, 0.0).unwrap_err(), GeomError::ZeroMass);
        assert!(matches!(stability_test(&eq, 1.0), Err(GeomError::NotCritical { .. })));
        let w = vec![TangentVector::default(); 100];
        assert!(matches!(second_variation_fd(&eq, 1.0, &w), Err(GeomError::NotCritical { .. })));
    }
}
