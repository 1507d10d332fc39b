//! Lorentz-force operators on a chart.

use std::fmt;
use std::sync::Arc;

use crate::chart::{apply, ChartPoint, Signature, SurfaceChart, TangentVector};
use crate::error::{GeomError, Result};

pub type Matrix2 = [[f64; 2]; 2];

/// Scalar magnetic strength `f` in `F = f Ω₂`.
#[derive(Clone)]
pub enum Strength {
    Uniform(f64),
    /// Gaussian magnetic field: `f = G / m`.
    Gaussian { m: f64 },
    Field(Arc<dyn Fn(ChartPoint) -> f64 + Send + Sync>),
}

impl fmt::Debug for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strength::Uniform(mu) => write!(f, "Uniform({mu})"),
            Strength::Gaussian { m } => write!(f, "Gaussian {{ m: {m} }}"),
            Strength::Field(_) => f.write_str("Field(..)"),
        }
    }
}

/// Covariant two-tensor `F_ij` as a function of position.
#[derive(Clone)]
pub enum TensorField {
    /// `F(p) = constant + u·du + v·dv` componentwise.
    Linear {
        constant: Matrix2,
        du: Matrix2,
        dv: Matrix2,
    },
    Field(Arc<dyn Fn(ChartPoint) -> Matrix2 + Send + Sync>),
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorField::Linear { constant, du, dv } => f
                .debug_struct("Linear")
                .field("constant", constant)
                .field("du", du)
                .field("dv", dv)
                .finish(),
            TensorField::Field(_) => f.write_str("Field(..)"),
        }
    }
}

impl TensorField {
    pub fn zero() -> Self {
        TensorField::Linear {
            constant: [[0.0; 2]; 2],
            du: [[0.0; 2]; 2],
            dv: [[0.0; 2]; 2],
        }
    }

    pub fn eval(&self, p: ChartPoint) -> Matrix2 {
        match self {
            TensorField::Linear { constant, du, dv } => {
                let mut out = *constant;
                for i in 0..2 {
                    for j in 0..2 {
                        out[i][j] += p.u * du[i][j] + p.v * dv[i][j];
                    }
                }
                out
            }
            TensorField::Field(f) => f(p),
        }
    }
}

#[derive(Debug, Clone)]
pub enum ForceKind {
    Magnetic(Strength),
    Tensor(TensorField),
}

/// A pointwise linear operator field `Φ` on a chart.
#[derive(Debug, Clone)]
pub struct ForceOperator {
    kind: ForceKind,
    scale: f64,
}

impl ForceOperator {
    pub fn zero() -> Self {
        Self {
            kind: ForceKind::Magnetic(Strength::Uniform(0.0)),
            scale: 1.0,
        }
    }

    pub fn kind(&self) -> &ForceKind {
        &self.kind
    }

    pub fn is_magnetic(&self) -> bool {
        matches!(self.kind, ForceKind::Magnetic(_))
    }

    /// The operator of the field `λF`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            kind: self.kind.clone(),
            scale: self.scale * lambda,
        }
    }

    /// Strength `f(p)` of a magnetic-kind operator.
    pub fn strength_at(&self, chart: &SurfaceChart, p: ChartPoint) -> Result<f64> {
        let base = match &self.kind {
            ForceKind::Magnetic(Strength::Uniform(mu)) => *mu,
            ForceKind::Magnetic(Strength::Gaussian { m }) => chart.gauss_curvature(p)? / m,
            ForceKind::Magnetic(Strength::Field(f)) => f(p),
            ForceKind::Tensor(_) => {
                return Err(GeomError::BadParameters(
                    "strength is defined only for magnetic operators".into(),
                ))
            }
        };
        Ok(self.scale * base)
    }

    /// Coordinate-frame matrix of `Φ` at `p` (acting on column vectors).
    pub fn matrix(&self, chart: &SurfaceChart, p: ChartPoint) -> Result<Matrix2> {
        match &self.kind {
            ForceKind::Magnetic(Strength::Uniform(mu)) if *mu == 0.0 => {
                chart.metric(p)?;
                Ok([[0.0; 2]; 2])
            }
            ForceKind::Magnetic(_) => {
                let f = self.strength_at(chart, p)?;
                let j = chart.complex_structure_matrix(p)?;
                Ok([[f * j[0][0], f * j[0][1]], [f * j[1][0], f * j[1][1]]])
            }
            ForceKind::Tensor(t) => {
                // g(ΦX, Y) = F(X, Y)  ⇒  Φ^k_i = g^{kl} F_il
                let inv = chart.metric(p)?.inverse();
                let f = t.eval(p);
                let mut phi = [[0.0; 2]; 2];
                for (k, row) in phi.iter_mut().enumerate() {
                    for (i, slot) in row.iter_mut().enumerate() {
                        *slot = self.scale * (inv[k][0] * f[i][0] + inv[k][1] * f[i][1]);
                    }
                }
                Ok(phi)
            }
        }
    }

    pub fn apply(
        &self,
        chart: &SurfaceChart,
        p: ChartPoint,
        x: TangentVector,
    ) -> Result<TangentVector> {
        Ok(apply(&self.matrix(chart, p)?, x))
    }
}

/// `Φ = f J` for a scalar strength `f`.
pub fn lorentz_from_strength(chart: &SurfaceChart, strength: Strength) -> Result<ForceOperator> {
    if chart.signature() != Signature::Riemannian {
        return Err(GeomError::IndefiniteMetricUnsupported);
    }
    if let Strength::Gaussian { m } = strength {
        if m == 0.0 || !m.is_finite() {
            return Err(GeomError::BadParameters(
                "Gaussian field needs a finite nonzero m".into(),
            ));
        }
    }
    Ok(ForceOperator {
        kind: ForceKind::Magnetic(strength),
        scale: 1.0,
    })
}

/// Operator solving `g(ΦX, Y) = F(X, Y)` for an arbitrary covariant tensor.
pub fn lorentz_from_tensor(_chart: &SurfaceChart, tensor: TensorField) -> ForceOperator {
    ForceOperator {
        kind: ForceKind::Tensor(tensor),
        scale: 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn frame_matrix(chart: &SurfaceChart, op: &ForceOperator, p: ChartPoint) -> Matrix2 {
        // orthonormal frame e1 = ∂u/|∂u|, e2 = J e1
        let e1 = TangentVector::new(1.0 / chart.norm(p, TangentVector::new(1.0, 0.0)).unwrap(), 0.0);
        let e2 = chart.complex_structure(p, e1).unwrap();
        let g = chart.metric(p).unwrap();
        let mut m = [[0.0; 2]; 2];
        for (col, e) in [e1, e2].into_iter().enumerate() {
            let y = op.apply(chart, p, e).unwrap();
            m[0][col] = g.inner(y, e1);
            m[1][col] = g.inner(y, e2);
        }
        m
    }

    #[test]
    fn zero_strength_gives_zero_operator() {
        let chart = SurfaceChart::sphere_polar(1.0).unwrap();
        let op = lorentz_from_strength(&chart, Strength::Uniform(0.0)).unwrap();
        assert_eq!(op.matrix(&chart, ChartPoint::new(1.0, 2.0)).unwrap(), [[0.0; 2]; 2]);
    }

    #[test]
    fn uniform_sphere_orthonormal_frame() {
        let chart = SurfaceChart::sphere_polar(1.0).unwrap();
        let mu = 0.7;
        let op = lorentz_from_strength(&chart, Strength::Uniform(mu)).unwrap();
        let m = frame_matrix(&chart, &op, ChartPoint::new(0.8, 1.3));
        let want = [[0.0, -mu], [mu, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[i][j] - want[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gaussian_strength_on_unit_sphere() {
        let chart = SurfaceChart::sphere_polar(1.0).unwrap();
        let op = lorentz_from_strength(&chart, Strength::Gaussian { m: 2.0 }).unwrap();
        for p in [ChartPoint::new(0.3, 0.0), ChartPoint::new(2.0, 5.0)] {
            assert_eq!(op.strength_at(&chart, p).unwrap(), 0.5);
        }
        assert!(lorentz_from_strength(&chart, Strength::Gaussian { m: 0.0 }).is_err());
    }

    #[test]
    fn remark_d_tensor() {
        let chart = SurfaceChart::flat();
        let tensor = TensorField::Linear {
            constant: [[0.0; 2]; 2],
            du: [[-2.0, 0.0], [0.0, 0.0]],
            dv: [[0.0; 2]; 2],
        };
        let op = lorentz_from_tensor(&chart, tensor);
        let p = ChartPoint::new(1.5, -0.4);
        let a = op.apply(&chart, p, TangentVector::new(1.0, 0.0)).unwrap();
        let b = op.apply(&chart, p, TangentVector::new(0.0, 1.0)).unwrap();
        assert_eq!(a, TangentVector::new(-3.0, 0.0));
        assert_eq!(b, TangentVector::new(0.0, 0.0));
    }

    #[test]
    fn lorentzian_tensor() {
        let chart = SurfaceChart::lorentz_plane();
        let tensor = TensorField::Linear {
            constant: [[0.0; 2]; 2],
            du: [[0.0, -1.0], [1.0, 0.0]],
            dv: [[0.0; 2]; 2],
        };
        let op = lorentz_from_tensor(&chart, tensor);
        let p = ChartPoint::new(2.5, 1.0);
        assert_eq!(
            op.apply(&chart, p, TangentVector::new(1.0, 0.0)).unwrap(),
            TangentVector::new(0.0, 2.5)
        );
        assert_eq!(
            op.apply(&chart, p, TangentVector::new(0.0, 1.0)).unwrap(),
            TangentVector::new(2.5, 0.0)
        );
        assert!(lorentz_from_strength(&chart, Strength::Uniform(1.0)).is_err());
    }

    #[test]
    fn scaled_operator() {
        let chart = SurfaceChart::sphere_polar(2.0).unwrap();
        let op = lorentz_from_strength(&chart, Strength::Uniform(1.5)).unwrap();
        let p = ChartPoint::new(PI / 4.0, 0.0);
        assert_eq!(op.scaled(-2.0).strength_at(&chart, p).unwrap(), -3.0);
    }
}
