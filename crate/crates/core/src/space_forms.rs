//! Flowlines on the plane, round spheres and hyperbolic planes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chart::{ChartPoint, SurfaceChart};
use crate::error::{GeomError, Result};

/// Width of the band `| |μ|/√G − 1 |` classified as a horocycle.
pub const HOROCYCLE_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpaceFormKind {
    Plane,
    Sphere { radius: f64 },
    Hyperbolic { curvature: f64 },
}

#[derive(Debug, Clone)]
pub struct SpaceForm {
    pub kind: SpaceFormKind,
    pub chart: SurfaceChart,
}

impl SpaceForm {
    pub fn plane() -> Self {
        Self {
            kind: SpaceFormKind::Plane,
            chart: SurfaceChart::flat(),
        }
    }

    pub fn sphere(radius: f64) -> Result<Self> {
        Ok(Self {
            kind: SpaceFormKind::Sphere { radius },
            chart: SurfaceChart::sphere_polar(radius)?,
        })
    }

    /// Half-plane model with curvature `−G`.
    pub fn hyperbolic(curvature: f64) -> Result<Self> {
        Ok(Self {
            kind: SpaceFormKind::Hyperbolic { curvature },
            chart: SurfaceChart::hyperbolic_half_plane(curvature)?,
        })
    }

    pub fn curvature(&self) -> f64 {
        match self.kind {
            SpaceFormKind::Plane => 0.0,
            SpaceFormKind::Sphere { radius } => 1.0 / (radius * radius),
            SpaceFormKind::Hyperbolic { curvature } => -curvature,
        }
    }

    /// Largest deviation of the finite-difference chart curvature from the
    /// declared constant over `samples` random interior points.
    pub fn curvature_deviation<R: Rng>(&self, rng: &mut R, samples: usize) -> Result<f64> {
        let k = self.curvature();
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let p = match self.kind {
                SpaceFormKind::Plane => ChartPoint::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
                SpaceFormKind::Sphere { .. } => ChartPoint::new(rng.gen_range(0.2..2.9), rng.gen_range(0.0..6.28)),
                SpaceFormKind::Hyperbolic { .. } => ChartPoint::new(rng.gen_range(-5.0..5.0), rng.gen_range(0.2..5.0)),
            };
            worst = worst.max((self.chart.gauss_curvature_fd(p)? - k).abs());
        }
        Ok(worst)
    }
}

/// Euclidean radius `r√e / √(e + r²μ²)` of a flowline on `S²(r)`.
pub fn sphere_flowline_radius(r: f64, e: f64, mu: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(GeomError::NonpositiveInput("r"));
    }
    if !(e > 0.0) {
        return Err(GeomError::NonpositiveInput("e"));
    }
    Ok(r * e.sqrt() / (e + r * r * mu * mu).sqrt())
}

/// Radius `√e / |μ|` of a flowline in the Euclidean plane.
pub fn plane_flowline_radius(e: f64, mu: f64) -> Result<f64> {
    if !(e > 0.0) {
        return Err(GeomError::NonpositiveInput("e"));
    }
    if mu == 0.0 {
        return Err(GeomError::ZeroStrength);
    }
    Ok(e.sqrt() / mu.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowlineTag {
    ClosedCircle,
    Horocycle,
    BoundaryCrossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowlineClass {
    pub tag: FlowlineTag,
    pub ratio: f64,
}

/// Classification of uniform-field flowlines on `H²(−G)` by `|μ|/√G`.
pub fn hyperbolic_classify(curvature: f64, mu: f64) -> Result<FlowlineClass> {
    if !(curvature > 0.0) {
        return Err(GeomError::NonpositiveCurvatureParameter);
    }
    let ratio = mu.abs() / curvature.sqrt();
    let tag = if (ratio - 1.0).abs() <= HOROCYCLE_BAND {
        FlowlineTag::Horocycle
    } else if ratio > 1.0 {
        FlowlineTag::ClosedCircle
    } else {
        FlowlineTag::BoundaryCrossing
    };
    Ok(FlowlineClass { tag, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sphere_radius_examples() {
        assert_eq!(sphere_flowline_radius(1.0, 1.0, 0.0).unwrap(), 1.0);
        assert!((sphere_flowline_radius(1.0, 1.0, 3f64.sqrt()).unwrap() - 0.5).abs() < 1e-15);
        assert!((sphere_flowline_radius(2.0, 4.0, 1.0).unwrap() - 4.0 / 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(sphere_flowline_radius(0.0, 1.0, 1.0), Err(GeomError::NonpositiveInput("r")));
    }

    #[test]
    fn plane_radius_examples() {
        assert_eq!(plane_flowline_radius(1.0, 2.0).unwrap(), 0.5);
        assert_eq!(plane_flowline_radius(4.0, 2.0).unwrap(), 1.0);
        assert_eq!(plane_flowline_radius(1.0, 0.0), Err(GeomError::ZeroStrength));
    }

    #[test]
    fn trichotomy() {
        assert_eq!(hyperbolic_classify(1.0, 1.5).unwrap().tag, FlowlineTag::ClosedCircle);
        assert_eq!(hyperbolic_classify(1.0, 1.0).unwrap().tag, FlowlineTag::Horocycle);
        let c = hyperbolic_classify(4.0, 1.0).unwrap();
        assert_eq!(c.tag, FlowlineTag::BoundaryCrossing);
        assert_eq!(c.ratio, 0.5);
        assert_eq!(hyperbolic_classify(0.0, 1.0), Err(GeomError::NonpositiveCurvatureParameter));
    }

    #[test]
    fn charts_have_declared_curvature() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for form in [
            SpaceForm::plane(),
            SpaceForm::sphere(1.7).unwrap(),
            SpaceForm::hyperbolic(2.5).unwrap(),
        ] {
            let dev = form.curvature_deviation(&mut rng, 20).unwrap();
            assert!(dev <= 1e-6 * form.curvature().abs().max(1.0), "{:?}: {dev}", form.kind);
        }
    }
}
