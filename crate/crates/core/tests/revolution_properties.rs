use egf_core::flow_engine::Scheme;
use egf_core::revolution_geometry::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn closed_form_is_increasing(a in 0.01f64..50.0, d in 0.001f64..5.0, c in -3.0f64..3.0) {
        prop_assert!(closed_form_gamma(a + d, c).unwrap() > closed_form_gamma(a, c).unwrap());
        prop_assert!((closed_form_gamma(a, c + 1.0).unwrap() - closed_form_gamma(a, c).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn curvature_is_negative(x in -1e3f64..1e3) {
        let k = sectional_curvature_profile(x);
        prop_assert!((-0.25..0.0).contains(&k));
    }
}

#[test]
fn constant_lambda_profile_is_unit_speed_after_reparameterization() {
    let p = integrate_constant_lambda(0.5f64, 10.0, 1e-3, 0.0).unwrap();
    let q = reparameterize_arclength(&p, 0.0);
    assert!(profile_metric(&q).iter().all(|(g00, _)| (g00 - 1.0).abs() <= 1e-6));
    assert!(q.param.windows(2).all(|w| w[1] > w[0]));
    // Arclength against the exact integral ∫√(1 + f'²) dx₀ = ∫√(1 + (dx₀/dx₁)²) dx₁.
    let exact_len = {
        let m = 200_000;
        let h = 9.5 / m as f64;
        (0..m)
            .map(|i| {
                let y = 0.5 + (i as f64 + 0.5) * h;
                (1.0 + (4.0 + y * y) / (y * y)).sqrt() * h
            })
            .sum::<f64>()
    };
    assert!((q.param.last().unwrap() - exact_len).abs() < 1e-5);
}

#[test]
fn constant_lambda_profile_is_logarithmic_near_the_axis() {
    let near = closed_form_gamma(1e-8, 0.0).unwrap();
    let nearer = closed_form_gamma(1e-9, 0.0).unwrap();
    assert!((near - nearer - 2.0 * 10f64.ln()).abs() < 1e-6);
}

#[test]
fn cone_error_halves_under_refinement() {
    let run = |nodes| {
        cone_flow_check(&ConeFlowSetup {
            beta: std::f64::consts::FRAC_PI_6,
            a: 2.0,
            b: 6.0,
            nodes,
            t_end: 1.0,
            cfl: 0.9,
            scheme: Scheme::Upwind,
        })
        .unwrap()
        .lambda_error
    };
    let (e1, e2) = (run(200), run(400));
    assert!(e2 / e1 < 0.6 && e2 / e1 > 0.4, "{e1} {e2}");
}
