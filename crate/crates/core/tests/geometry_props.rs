mod common;

use magnetoflow::chart::{ChartPoint, SurfaceChart, TangentVector};
use magnetoflow::force::{lorentz_from_strength, Strength};
use magnetoflow::profile::ProfileCurve;
use magnetoflow::revolution::revolution_chart;
use magnetoflow::tubes::{tube_chart, TubeSpec};
use proptest::prelude::*;

/// Charts paired with a sampler mapping the unit square into their interior.
fn catalog() -> Vec<(SurfaceChart, fn(f64, f64) -> ChartPoint)> {
    vec![
        (SurfaceChart::flat(), |a, b| ChartPoint::new(10.0 * a - 5.0, 10.0 * b - 5.0)),
        (SurfaceChart::sphere_polar(1.3).unwrap(), |a, b| ChartPoint::new(0.2 + 2.7 * a, 6.2 * b)),
        (SurfaceChart::sphere_stereographic(0.8).unwrap(), |a, b| ChartPoint::new(6.0 * a - 3.0, 6.0 * b - 3.0)),
        (SurfaceChart::hyperbolic_half_plane(2.0).unwrap(), |a, b| ChartPoint::new(6.0 * a - 3.0, 0.1 + 3.0 * b)),
        (revolution_chart(&ProfileCurve::torus(1.0, 2.5).unwrap()).unwrap(), |a, b| ChartPoint::new(6.2 * a, 6.2 * b)),
        (revolution_chart(&ProfileCurve::catenoid()).unwrap(), |a, b| ChartPoint::new(6.0 * a - 3.0, 6.2 * b)),
        (tube_chart(&TubeSpec::helix(1.0, 0.7, 0.3).unwrap()).unwrap(), |a, b| ChartPoint::new(8.0 * a - 4.0, 6.2 * b)),
    ]
}

proptest! {
    #![proptest_config(common::config(100))]

    #[test]
    fn magnetic_force_is_orthogonal_to_velocity(
        a in 0.0..1.0f64, b in 0.0..1.0f64, du in -3.0..3.0f64, dv in -3.0..3.0f64, mu in -5.0..5.0f64,
    ) {
        for (chart, sample) in catalog() {
            let p = sample(a, b);
            let x = TangentVector::new(du, dv);
            let op = lorentz_from_strength(&chart, Strength::Uniform(mu)).unwrap();
            let fx = op.apply(&chart, p, x).unwrap();
            let lhs = chart.inner(p, fx, x).unwrap().abs();
            prop_assert!(lhs <= 1e-10 * chart.inner(p, x, x).unwrap().max(f64::MIN_POSITIVE), "{}: {lhs}", chart.name());
        }
    }

    #[test]
    fn complex_structure_squares_to_minus_identity(
        a in 0.0..1.0f64, b in 0.0..1.0f64, du in -3.0..3.0f64, dv in -3.0..3.0f64,
    ) {
        prop_assume!(du.abs() + dv.abs() > 1e-6);
        for (chart, sample) in catalog() {
            let p = sample(a, b);
            let x = TangentVector::new(du, dv);
            let jjx = chart.complex_structure(p, chart.complex_structure(p, x).unwrap()).unwrap();
            prop_assert!((jjx.du + du).abs() <= 1e-12 * (1.0 + du.abs()), "{}", chart.name());
            prop_assert!((jjx.dv + dv).abs() <= 1e-12 * (1.0 + dv.abs()), "{}", chart.name());
        }
    }

    #[test]
    fn christoffels_symmetric_and_match_finite_differences(a in 0.0..1.0f64, b in 0.0..1.0f64) {
        for (chart, sample) in catalog() {
            let p = sample(a, b);
            let closed = chart.christoffel(p).unwrap();
            let fd = chart.christoffel_fd(p).unwrap();
            let scale = closed.0.iter().flatten().flatten().fold(1e-3f64, |m, x| m.max(x.abs()));
            for k in 0..2 {
                prop_assert_eq!(closed.get(k, 0, 1), closed.get(k, 1, 0));
                for i in 0..2 {
                    for j in 0..2 {
                        let diff = (closed.get(k, i, j) - fd.get(k, i, j)).abs();
                        prop_assert!(diff <= 1e-5 * scale, "{} Γ^{k}_{i}{j}: {diff}", chart.name());
                    }
                }
            }
        }
    }

    #[test]
    fn torus_curvature_closed_form_matches_brioschi(
        t in 0.0..6.28f64, v in 0.0..6.28f64, r in 0.3..1.0f64, big_r in 1.5..4.0f64,
    ) {
        let chart = revolution_chart(&ProfileCurve::torus(r, big_r).unwrap()).unwrap();
        let p = ChartPoint::new(t * r, v);
        let closed = chart.gauss_curvature(p).unwrap();
        let fd = chart.gauss_curvature_fd(p).unwrap();
        // the curvature vanishes on the top and bottom circles; measure
        // relative to the curvature scale 1/r² there
        let scale = closed.abs().max(1.0 / (r * big_r));
        prop_assert!((closed - fd).abs() <= 1e-5 * scale, "{closed} vs {fd}");
    }
}
