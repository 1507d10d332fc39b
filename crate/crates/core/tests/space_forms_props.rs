mod common;

use std::f64::consts::PI;

use magnetoflow::chart::{Axis, ChartPoint, Domain, SurfaceChart, TangentVector};
use magnetoflow::fit::fit_circle_3d;
use magnetoflow::flow::{integrate, FlowState, StepPolicy, Termination};
use magnetoflow::force::{lorentz_from_strength, Strength};
use magnetoflow::space_forms::{hyperbolic_classify, sphere_flowline_radius, FlowlineTag};
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(20))]

    #[test]
    fn integrated_sphere_orbits_have_predicted_radius(
        r in 0.5..2.0f64, e in 0.25..4.0f64, mu in -5.0..5.0f64, dir in 0.0..6.28f64,
    ) {
        // orbits start at the north pole; keep them clear of the projection pole
        prop_assume!((e.sqrt() / (r * mu).abs()).atan() < 80f64.to_radians());
        let chart = SurfaceChart::sphere_stereographic(r).unwrap();
        let op = lorentz_from_strength(&chart, Strength::Uniform(mu)).unwrap();
        let speed = e.sqrt() / (2.0 * r);
        let s0 = FlowState::new(ChartPoint::new(0.0, 0.0), TangentVector::new(speed * dir.cos(), speed * dir.sin()), 0.0);
        let predicted = sphere_flowline_radius(r, e, mu).unwrap();
        let period = 2.0 * PI * predicted / e.sqrt();
        let traj = integrate(&chart, &op, s0, &StepPolicy::rk4(period / 4000.0, period)).unwrap();
        let pts: Vec<[f64; 3]> = traj.samples.iter().filter_map(|s| chart.embed(s.point)).collect();
        let fitted = fit_circle_3d(&pts).unwrap().radius;
        prop_assert!((fitted - predicted).abs() <= 1e-5 * predicted, "{fitted} vs {predicted}");
    }

    #[test]
    fn hyperbolic_orbits_behave_as_classified(g in 0.3..3.0f64, ratio in 0.2..2.5f64) {
        prop_assume!((ratio - 1.0).abs() > 0.05);
        let mu = ratio * g.sqrt();
        let floor = 1e-3;
        let chart = SurfaceChart::hyperbolic_half_plane(g)
            .unwrap()
            .with_domain(Domain::new(Axis::unbounded(), Axis::bounded(floor, f64::INFINITY)));
        let op = lorentz_from_strength(&chart, Strength::Uniform(mu)).unwrap();
        let start = ChartPoint::new(0.0, 1.0);
        // unit speed, turning toward the boundary
        let s0 = FlowState::new(start, TangentVector::new(-g.sqrt(), 0.0), 0.0);
        let traj = integrate(&chart, &op, s0, &StepPolicy::adaptive(1e-12, 400.0)).unwrap();
        match hyperbolic_classify(g, mu).unwrap().tag {
            FlowlineTag::ClosedCircle => {
                let (_, d) = traj.closest_approach(start, 0.5).unwrap();
                prop_assert!(d <= 1e-5, "return distance {d}");
            }
            FlowlineTag::BoundaryCrossing => {
                prop_assert!(matches!(traj.termination, Termination::DomainEscape { .. }), "{:?}", traj.termination);
            }
            FlowlineTag::Horocycle => unreachable!(),
        }
    }

    #[test]
    fn classification_ignores_field_sign(g in 0.01..10.0f64, mu in -10.0..10.0f64) {
        prop_assert_eq!(hyperbolic_classify(g, mu).unwrap(), hyperbolic_classify(g, -mu).unwrap());
    }
}

#[test]
fn horocycle_is_classified_on_the_band() {
    assert_eq!(hyperbolic_classify(4.0, 2.0).unwrap().tag, FlowlineTag::Horocycle);
    assert_eq!(hyperbolic_classify(4.0, -2.0).unwrap().tag, FlowlineTag::Horocycle);
    assert_eq!(hyperbolic_classify(4.0, 2.0 + 1e-9).unwrap().tag, FlowlineTag::ClosedCircle);
}
