//! Integration of the Landau–Hall equation `∇_{γ'} γ' = Φ(γ')` in chart
//! coordinates, `ẍ^k = −Γ^k_ij ẋ^i ẋ^j + (Φ ẋ)^k`.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::chart::{ChartPoint, Domain, SurfaceChart, TangentVector};
use crate::error::{GeomError, Result};
use crate::force::ForceOperator;
use crate::report::fmt_f64;

pub const DEFAULT_NORM_CEILING: f64 = 1e8;
pub const DEFAULT_MIN_STEP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub point: ChartPoint,
    pub velocity: TangentVector,
    pub parameter: f64,
}

impl FlowState {
    pub fn new(point: ChartPoint, velocity: TangentVector, parameter: f64) -> Self {
        Self {
            point,
            velocity,
            parameter,
        }
    }

    fn to_array(self) -> [f64; 4] {
        [
            self.point.u,
            self.point.v,
            self.velocity.du,
            self.velocity.dv,
        ]
    }

    fn from_array(y: [f64; 4], t: f64) -> Self {
        Self::new(ChartPoint::new(y[0], y[1]), TangentVector::new(y[2], y[3]), t)
    }

    fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite()) && self.parameter.is_finite()
    }

    fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Method {
    /// Classical fixed-step Runge–Kutta.
    Rk4 { step: f64 },
    /// Dormand–Prince 5(4) with mixed absolute/relative error control.
    Adaptive {
        tolerance: f64,
        min_step: f64,
        max_step: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPolicy {
    pub method: Method,
    pub span: f64,
    pub direction: Direction,
    pub norm_ceiling: f64,
}

impl StepPolicy {
    pub fn rk4(step: f64, span: f64) -> Self {
        Self {
            method: Method::Rk4 { step },
            span,
            direction: Direction::Forward,
            norm_ceiling: DEFAULT_NORM_CEILING,
        }
    }

    pub fn adaptive(tolerance: f64, span: f64) -> Self {
        Self {
            method: Method::Adaptive {
                tolerance,
                min_step: DEFAULT_MIN_STEP,
                max_step: 0.1,
            },
            span,
            direction: Direction::Forward,
            norm_ceiling: DEFAULT_NORM_CEILING,
        }
    }

    pub fn backward(mut self) -> Self {
        self.direction = Direction::Backward;
        self
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_ceiling(mut self, ceiling: f64) -> Self {
        self.norm_ceiling = ceiling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(GeomError::InvalidPolicy(msg.to_string()));
        if !(self.span >= 0.0 && self.span.is_finite()) {
            return bad("span must be finite and nonnegative");
        }
        if !(self.norm_ceiling > 0.0) {
            return bad("norm ceiling must be positive");
        }
        match self.method {
            Method::Rk4 { step } if !(step > 0.0 && step.is_finite()) => bad("step must be positive"),
            Method::Adaptive {
                tolerance,
                min_step,
                max_step,
            } if !(tolerance > 0.0 && min_step > 0.0 && max_step >= min_step) => {
                bad("adaptive policy needs tolerance > 0 and 0 < min_step <= max_step")
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    DomainEscape { parameter: f64 },
    NormBlowup { parameter: f64 },
    StepUnderflow { parameter: f64 },
}

/// Integrated flowline. Samples are stored in integration order, so their
/// parameters increase for forward runs and decrease for backward runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<FlowState>,
    pub energies: Vec<f64>,
    pub termination: Termination,
    pub direction: Direction,
    pub domain: Domain,
    pub norm_ceiling: f64,
}

impl Trajectory {
    pub fn last(&self) -> Option<&FlowState> {
        self.samples.last()
    }

    pub fn points(&self) -> Vec<ChartPoint> {
        self.samples.iter().map(|s| s.point).collect()
    }

    /// Closest approach to `target` over samples with parameter offset from
    /// the start at least `min_offset`, using cubic Hermite interpolation
    /// between samples. Periodic axes are compared modulo their period.
    /// Returns `(parameter, chart distance)`.
    pub fn closest_approach(&self, target: ChartPoint, min_offset: f64) -> Option<(f64, f64)> {
        let t0 = self.samples.first()?.parameter;
        let mut best: Option<(f64, f64)> = None;
        for w in self.samples.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (b.parameter - t0).abs() < min_offset {
                continue;
            }
            let h = b.parameter - a.parameter;
            let dist = |s: f64| {
                let p = hermite(&a, &b, h, s);
                self.wrapped_distance(p, target)
            };
            // coarse sampling then golden-section refinement
            let n = 8;
            let (mut k_best, mut d_best) = (0, f64::INFINITY);
            for k in 0..=n {
                let d = dist(k as f64 / n as f64);
                if d < d_best {
                    k_best = k;
                    d_best = d;
                }
            }
            let lo = (k_best as f64 - 1.0).max(0.0) / n as f64;
            let hi = (k_best as f64 + 1.0).min(n as f64) / n as f64;
            let s = golden_min(&dist, lo, hi, 60);
            let d = dist(s).min(d_best);
            let param = a.parameter + s * h;
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((param, d));
            }
        }
        best
    }

    fn wrapped_distance(&self, p: ChartPoint, q: ChartPoint) -> f64 {
        let diff = |x: f64, y: f64, period: Option<f64>| match period {
            Some(per) => {
                let d = (x - y).rem_euclid(per);
                d.min(per - d)
            }
            None => (x - y).abs(),
        };
        diff(p.u, q.u, self.domain.u.period()).hypot(diff(p.v, q.v, self.domain.v.period()))
    }

    /// CSV with columns `t,u,v,du,dv,energy`, plus `kappa,gauss_curvature`
    /// when a chart is supplied.
    pub fn write_csv<W: Write>(&self, mut w: W, chart: Option<&SurfaceChart>) -> io::Result<()> {
        let extra = chart.map(|c| {
            let pts = self.points();
            let kappa = if pts.len() >= 5 {
                crate::variational::stencil_curvature(c, &pts, false)
                    .unwrap_or_else(|_| vec![f64::NAN; pts.len()])
            } else {
                vec![f64::NAN; pts.len()]
            };
            let gauss: Vec<f64> = pts
                .iter()
                .map(|&p| c.gauss_curvature(p).unwrap_or(f64::NAN))
                .collect();
            (kappa, gauss)
        });
        write!(w, "t,u,v,du,dv,energy")?;
        if extra.is_some() {
            write!(w, ",kappa,gauss_curvature")?;
        }
        writeln!(w)?;
        for (i, s) in self.samples.iter().enumerate() {
            write!(
                w,
                "{},{},{},{},{},{}",
                fmt_f64(s.parameter),
                fmt_f64(s.point.u),
                fmt_f64(s.point.v),
                fmt_f64(s.velocity.du),
                fmt_f64(s.velocity.dv),
                fmt_f64(self.energies[i])
            )?;
            if let Some((k, g)) = &extra {
                write!(w, ",{},{}", fmt_f64(k[i]), fmt_f64(g[i]))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

fn hermite(a: &FlowState, b: &FlowState, h: f64, s: f64) -> ChartPoint {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    ChartPoint::new(
        h00 * a.point.u + h10 * h * a.velocity.du + h01 * b.point.u + h11 * h * b.velocity.du,
        h00 * a.point.v + h10 * h * a.velocity.dv + h01 * b.point.v + h11 * h * b.velocity.dv,
    )
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Right-hand side `(u̇, v̇, ü, v̈)` of the first-order system.
pub fn lh_rhs(chart: &SurfaceChart, op: &ForceOperator, s: &FlowState) -> Result<[f64; 4]> {
    let acc = acceleration(chart, op, s.point, s.velocity)?;
    Ok([s.velocity.du, s.velocity.dv, acc.du, acc.dv])
}

fn acceleration(
    chart: &SurfaceChart,
    op: &ForceOperator,
    p: ChartPoint,
    x: TangentVector,
) -> Result<TangentVector> {
    let gamma = chart.christoffel(p)?;
    let force = op.apply(chart, p, x)?;
    let geo = gamma.contract(x, x);
    Ok(TangentVector::new(force.du - geo.du, force.dv - geo.dv))
}

fn rhs_array(chart: &SurfaceChart, op: &ForceOperator, y: &[f64; 4]) -> Result<[f64; 4]> {
    let acc = acceleration(
        chart,
        op,
        ChartPoint::new(y[0], y[1]),
        TangentVector::new(y[2], y[3]),
    )?;
    Ok([y[2], y[3], acc.du, acc.dv])
}

fn axpy(y: &[f64; 4], h: f64, terms: &[(f64, &[f64; 4])]) -> [f64; 4] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..4 {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn rk4_step(chart: &SurfaceChart, op: &ForceOperator, y: &[f64; 4], h: f64) -> Result<[f64; 4]> {
    let k1 = rhs_array(chart, op, y)?;
    let k2 = rhs_array(chart, op, &axpy(y, h, &[(0.5, &k1)]))?;
    let k3 = rhs_array(chart, op, &axpy(y, h, &[(0.5, &k2)]))?;
    let k4 = rhs_array(chart, op, &axpy(y, h, &[(1.0, &k3)]))?;
    Ok(axpy(
        y,
        h,
        &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)],
    ))
}

/// One Dormand–Prince step; returns the 5th-order solution and the
/// embedded error estimate.
fn dp45_step(
    chart: &SurfaceChart,
    op: &ForceOperator,
    y: &[f64; 4],
    h: f64,
) -> Result<([f64; 4], [f64; 4])> {
    let k1 = rhs_array(chart, op, y)?;
    let k2 = rhs_array(chart, op, &axpy(y, h, &[(1.0 / 5.0, &k1)]))?;
    let k3 = rhs_array(chart, op, &axpy(y, h, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]))?;
    let k4 = rhs_array(
        chart,
        op,
        &axpy(y, h, &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]),
    )?;
    let k5 = rhs_array(
        chart,
        op,
        &axpy(
            y,
            h,
            &[
                (19372.0 / 6561.0, &k1),
                (-25360.0 / 2187.0, &k2),
                (64448.0 / 6561.0, &k3),
                (-212.0 / 729.0, &k4),
            ],
        ),
    )?;
    let k6 = rhs_array(
        chart,
        op,
        &axpy(
            y,
            h,
            &[
                (9017.0 / 3168.0, &k1),
                (-355.0 / 33.0, &k2),
                (46732.0 / 5247.0, &k3),
                (49.0 / 176.0, &k4),
                (-5103.0 / 18656.0, &k5),
            ],
        ),
    )?;
    let y5 = axpy(
        y,
        h,
        &[
            (35.0 / 384.0, &k1),
            (500.0 / 1113.0, &k3),
            (125.0 / 192.0, &k4),
            (-2187.0 / 6784.0, &k5),
            (11.0 / 84.0, &k6),
        ],
    );
    let k7 = rhs_array(chart, op, &y5)?;
    let err = axpy(
        &[0.0; 4],
        h,
        &[
            (71.0 / 57600.0, &k1),
            (-71.0 / 16695.0, &k3),
            (71.0 / 1920.0, &k4),
            (-17253.0 / 339200.0, &k5),
            (22.0 / 525.0, &k6),
            (-1.0 / 40.0, &k7),
        ],
    );
    Ok((y5, err))
}

fn energy(chart: &SurfaceChart, s: &FlowState) -> f64 {
    chart
        .inner(s.point, s.velocity, s.velocity)
        .unwrap_or(f64::NAN)
}

/// Integrates from `s0` until the span is exhausted, the chart domain is
/// left, the state norm exceeds the ceiling or the adaptive step underflows.
pub fn integrate(
    chart: &SurfaceChart,
    op: &ForceOperator,
    s0: FlowState,
    policy: &StepPolicy,
) -> Result<Trajectory> {
    policy.validate()?;
    if !s0.is_finite() {
        return Err(GeomError::BadParameters("initial state must be finite".into()));
    }
    lh_rhs(chart, op, &s0)?;

    let sign = policy.direction.sign();
    let end = s0.parameter + sign * policy.span;
    let done_tol = 1e-12 * policy.span.max(1.0);
    let mut samples = vec![s0];
    let mut energies = vec![energy(chart, &s0)];
    let mut y = s0.to_array();
    let mut t = s0.parameter;

    let mut h_adapt = match policy.method {
        Method::Adaptive { max_step, .. } => (0.01f64).min(max_step).min(policy.span.max(1e-300)),
        Method::Rk4 { .. } => 0.0,
    };

    let termination = loop {
        let remaining = (end - t) * sign;
        if remaining <= done_tol {
            break Termination::Completed;
        }
        let (y_new, t_new) = match policy.method {
            Method::Rk4 { step } => {
                let h = step.min(remaining);
                match rk4_step(chart, op, &y, sign * h) {
                    Ok(yn) => {
                        let tn = if h == remaining { end } else { t + sign * h };
                        (yn, tn)
                    }
                    Err(_) => break Termination::DomainEscape { parameter: t },
                }
            }
            Method::Adaptive {
                tolerance,
                min_step,
                max_step,
            } => {
                let mut accepted = None;
                let mut escaped = false;
                while accepted.is_none() {
                    if h_adapt < min_step {
                        break;
                    }
                    let h = h_adapt.min(remaining);
                    match dp45_step(chart, op, &y, sign * h) {
                        Ok((yn, err)) => {
                            let mut acc = 0.0;
                            for i in 0..4 {
                                let sc = tolerance * (1.0 + y[i].abs().max(yn[i].abs()));
                                acc += (err[i] / sc).powi(2);
                            }
                            let e = (acc / 4.0).sqrt();
                            escaped = false;
                            if e.is_finite() && e <= 1.0 {
                                let tn = if h == remaining { end } else { t + sign * h };
                                accepted = Some((yn, tn));
                                let grow = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
                                h_adapt = (h * grow).min(max_step);
                            } else {
                                let shrink = if e.is_finite() { (0.9 * e.powf(-0.25)).clamp(0.1, 0.5) } else { 0.1 };
                                h_adapt = h * shrink;
                            }
                        }
                        Err(_) => {
                            escaped = true;
                            h_adapt = h * 0.25;
                        }
                    }
                }
                match accepted {
                    Some(a) => a,
                    None if escaped => break Termination::DomainEscape { parameter: t },
                    None => break Termination::StepUnderflow { parameter: t },
                }
            }
        };
        let state = FlowState::from_array(y_new, t_new);
        if !state.is_finite() || state.max_abs() > policy.norm_ceiling {
            if state.is_finite() {
                samples.push(state);
                energies.push(energy(chart, &state));
            }
            break Termination::NormBlowup { parameter: t_new };
        }
        if !chart.contains(state.point) || chart.metric(state.point).is_err() {
            break Termination::DomainEscape { parameter: t };
        }
        samples.push(state);
        energies.push(energy(chart, &state));
        y = y_new;
        t = t_new;
    };

    Ok(Trajectory {
        samples,
        energies,
        termination,
        direction: policy.direction,
        domain: *chart.domain(),
        norm_ceiling: policy.norm_ceiling,
    })
}

/// Largest relative deviation of the energy from its initial value
/// (absolute deviation when the initial energy vanishes).
pub fn energy_drift(traj: &Trajectory) -> Result<f64> {
    if traj.samples.len() < 2 {
        return Err(GeomError::EmptyTrajectory);
    }
    let e0 = traj.energies[0];
    let scale = if e0 == 0.0 { 1.0 } else { e0.abs() };
    Ok(traj
        .energies
        .iter()
        .map(|e| (e - e0).abs() / scale)
        .fold(0.0, f64::max))
}

/// Compares `β` (field `λF`, initial velocity `λv`, step `h`) with
/// `γ(λt)` (field `F`, initial velocity `v`, step `|λ|h`, run in the
/// direction of `sign λ`). Returns the largest chart distance between
/// corresponding samples.
pub fn rescale_check(
    chart: &SurfaceChart,
    op: &ForceOperator,
    s0: FlowState,
    lambda: f64,
    policy: &StepPolicy,
) -> Result<f64> {
    if !op.is_magnetic() {
        return Err(GeomError::BadParameters(
            "rescale check needs a magnetic operator".into(),
        ));
    }
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(GeomError::BadParameters("lambda must be finite and nonzero".into()));
    }
    let Method::Rk4 { step } = policy.method else {
        return Err(GeomError::InvalidPolicy(
            "rescale check compares samples on a fixed RK4 grid".into(),
        ));
    };
    let beta_op = op.scaled(lambda);
    let beta0 = FlowState::new(s0.point, s0.velocity.scale(lambda), s0.parameter);
    let beta = integrate(chart, &beta_op, beta0, policy)?;

    let dir = if lambda > 0.0 {
        policy.direction
    } else {
        match policy.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    };
    let gamma_policy = StepPolicy {
        method: Method::Rk4 {
            step: step * lambda.abs(),
        },
        span: policy.span * lambda.abs(),
        direction: dir,
        norm_ceiling: policy.norm_ceiling,
    };
    let gamma = integrate(chart, op, s0, &gamma_policy)?;

    Ok(beta
        .samples
        .iter()
        .zip(&gamma.samples)
        .map(|(b, g)| b.point.chart_distance(g.point))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extendibility {
    Extendible,
    VelocityDiverges,
    Inconclusive,
}

/// Classifies the end of a trajectory that stopped early.
///
/// `VelocityDiverges` requires a norm blow-up whose last velocity is past
/// the ceiling with velocity norms nondecreasing over the tail.
/// `Extendible` requires bounded tail velocities and a final point well
/// inside the chart domain. A limit point on the chart boundary is never
/// read as geometric incompleteness and yields `Inconclusive`.
pub fn extendibility_probe(traj: &Trajectory) -> Result<Extendibility> {
    if traj.termination == Termination::Completed {
        return Err(GeomError::WrongTermination);
    }
    let n = traj.samples.len();
    if n < 2 {
        return Err(GeomError::EmptyTrajectory);
    }
    let tail = &traj.samples[n.saturating_sub(16)..];
    let speeds: Vec<f64> = tail.iter().map(|s| s.velocity.euclidean_norm()).collect();
    let last = tail[tail.len() - 1];
    let last_speed = speeds[speeds.len() - 1];

    if matches!(traj.termination, Termination::NormBlowup { .. }) {
        let monotone = speeds.windows(2).all(|w| w[1] >= w[0]);
        if monotone && last_speed >= traj.norm_ceiling {
            return Ok(Extendibility::VelocityDiverges);
        }
        return Ok(Extendibility::Inconclusive);
    }

    let max_speed = speeds.iter().cloned().fold(0.0, f64::max);
    let min_speed = speeds.iter().cloned().fold(f64::INFINITY, f64::min);
    let bounded = max_speed < traj.norm_ceiling && max_speed <= 10.0 * min_speed.max(f64::MIN_POSITIVE);
    let prev = tail[tail.len() - 2];
    let step_len = last.point.chart_distance(prev.point);
    let interior = traj.domain.margin(last.point) > 10.0 * step_len;
    if bounded && interior {
        Ok(Extendibility::Extendible)
    } else {
        Ok(Extendibility::Inconclusive)
    }
}
