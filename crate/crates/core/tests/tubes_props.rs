mod common;

use std::f64::consts::PI;

use magnetoflow::chart::ChartPoint;
use magnetoflow::profile::ProfileCurve;
use magnetoflow::revolution::{gmf_parallels, parallel_curvature, revolution_chart};
use magnetoflow::roots::DEFAULT_RESOLUTION;
use magnetoflow::tubes::{helix_flowline_count, tube_chart, tube_gmf_roots, v_curve_curvature, BaseCurvature, TubeSpec};
use proptest::prelude::*;

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

proptest! {
    #![proptest_config(common::config(20))]

    #[test]
    fn plane_tube_roots_solve_cot_equation(
        k in 0.1..2.0f64, band in 0.05..0.95f64, m in 0.1..3.0f64, neg in any::<bool>(), s in 0.0..1.0f64,
    ) {
        let r = band / k;
        let m = if neg { -m } else { m };
        let spec = TubeSpec::plane(BaseCurvature::Constant(k), 5.0, r).unwrap();
        let roots = tube_gmf_roots(&spec, m, 5.0 * s, DEFAULT_RESOLUTION).unwrap();
        prop_assert_eq!(roots.len(), 2);
        let v0 = 1f64.atan2(-r * m);
        for x in roots {
            prop_assert!(circ_dist(x.t, v0).min(circ_dist(x.t, v0 + PI)) <= 1e-9);
        }
    }

    #[test]
    fn circle_tube_is_the_torus(big_r in 1.0..5.0f64, frac in 0.05..0.9f64, m in 0.1..3.0f64, v in 0.0..6.28f64, s in 0.0..1.0f64) {
        let r = frac * big_r;
        let spec = TubeSpec::circle(big_r, r).unwrap();
        let tube = tube_chart(&spec).unwrap();
        let profile = ProfileCurve::torus(r, big_r).unwrap();
        let torus = revolution_chart(&profile).unwrap();
        // (s, v) ↦ (θ, φ) = (π − v, s/R)
        let theta = (PI - v).rem_euclid(2.0 * PI);
        let s = 2.0 * PI * big_r * s;
        let gt = tube.gauss_curvature(ChartPoint::new(s, v)).unwrap();
        let gr = torus.gauss_curvature(ChartPoint::new(r * theta, s / big_r)).unwrap();
        prop_assert!((gt - gr).abs() <= 1e-9 * (1.0 + gr.abs()));
        // the tube chart carries the opposite orientation
        let kt = v_curve_curvature(&spec, s, v).unwrap();
        let kr = parallel_curvature(&profile, r * theta).unwrap();
        prop_assert!((kt + kr).abs() <= 1e-9 * (1.0 + kr.abs()));

        let tube_roots: Vec<f64> = tube_gmf_roots(&spec, m, s, DEFAULT_RESOLUTION).unwrap().iter().map(|x| x.t).collect();
        let mut mapped: Vec<f64> = gmf_parallels(&profile, -m, DEFAULT_RESOLUTION)
            .unwrap()
            .iter()
            .map(|x| (PI - x.t / r).rem_euclid(2.0 * PI))
            .collect();
        mapped.sort_by(f64::total_cmp);
        prop_assert_eq!(tube_roots.len(), mapped.len());
        for (a, b) in tube_roots.iter().zip(&mapped) {
            prop_assert!(circ_dist(*a, *b) <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn helix_tubes_have_at_least_four_flowlines(
        k in 0.1..3.0f64, band in 0.02..0.95f64, tau in 0.01..3.0f64, m in 0.001..5.0f64, neg in any::<bool>(),
    ) {
        let r = band / k;
        let m = if neg { -m } else { m };
        prop_assert!(helix_flowline_count(r, k, tau, m, DEFAULT_RESOLUTION).count >= 4);
    }
}
