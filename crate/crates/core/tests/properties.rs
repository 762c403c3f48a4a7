use proptest::prelude::*;

use axiswirl::axis_ode::{
    closed_form_state, closed_form_theta, integrate, integrate_interval, lower_bound_lambda,
    AxisState, IntegratorConfig, PressureForcing, ThetaValue,
};
use axiswirl::euler::{init_field, profiles, EulerSolver, Grid2D};
use axiswirl::lemma::{full_report, IdentityKind, SyntheticField, DEFAULT_H};
use axiswirl::scenario::parse_config;

/// Horizon used by the closed-form properties: 0.9 of the singular time, else 10.
fn safe_horizon(l0: f64, w0: f64) -> f64 {
    if w0 == 0.0 && l0 > 0.0 {
        0.9 * 2.0 / l0
    } else {
        10.0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn state_and_theta_forms_agree(l0 in -3.0f64..3.0, w0 in -3.0f64..3.0, frac in 0.0f64..1.0) {
        let t = frac * safe_horizon(l0, w0);
        let s = closed_form_state(l0, w0, t).unwrap();
        let th = closed_form_theta(ThetaValue::new(l0, w0), t).unwrap();
        let scale = th.modulus().max(1e-300);
        prop_assert!((s.lambda - th.re).abs() <= 1e-12 * scale);
        prop_assert!((s.omega_bar - th.im).abs() <= 1e-12 * scale);
    }

    #[test]
    fn integrator_tracks_closed_form(l0 in -3.0f64..3.0, w0 in -3.0f64..3.0) {
        let tol = 1e-10;
        let horizon = safe_horizon(l0, w0).min(5.0);
        let rec = integrate(
            AxisState::new(l0, w0).unwrap(),
            &PressureForcing::Constant(0.0),
            horizon,
            &IntegratorConfig::default().with_tolerance(tol),
        ).unwrap();
        for s in &rec.samples {
            let e = closed_form_state(l0, w0, s.t).unwrap();
            let scale = e.lambda.hypot(e.omega_bar).max(1.0);
            let err = (s.state.lambda - e.lambda).hypot(s.state.omega_bar - e.omega_bar);
            prop_assert!(err <= 10.0 * tol * scale, "t = {}, err {err:e}", s.t);
        }
    }

    #[test]
    fn nonnegative_forcing_stays_above_the_bound(
        l0 in 0.2f64..3.0, mean in 0.0f64..1.0, amp_frac in 0.0f64..1.0, freq in 0.1f64..5.0,
    ) {
        let amp = amp_frac * mean;
        let forcing = PressureForcing::function(move |t| mean + amp * (freq * t).sin());
        let rec = integrate(AxisState::new(l0, 0.0).unwrap(), &forcing, 3.0 / l0, &IntegratorConfig::default()).unwrap();
        for s in rec.samples.iter().filter(|s| s.t < 2.0 / l0 && s.state.lambda < 1e6) {
            prop_assert!(s.state.lambda >= lower_bound_lambda(l0, s.t).unwrap() - 1e-6);
        }
    }

    #[test]
    fn closed_form_then_backwards_returns(l0 in -2.0f64..2.0, w0 in 0.1f64..2.0, t in 0.1f64..1.0) {
        let mid = closed_form_state(l0, w0, t).unwrap();
        let cfg = IntegratorConfig::default().with_tolerance(1e-12);
        let back = integrate_interval(mid, &PressureForcing::Constant(0.0), t, 0.0, &cfg).unwrap();
        let end = back.last().state;
        prop_assert!((end.lambda - l0).abs() < 1e-8 && (end.omega_bar - w0).abs() < 1e-8);
    }

    #[test]
    fn non_positive_horizons_are_rejected(h in -10.0f64..=0.0) {
        let text = format!("mode = \"integrate\"\nlambda0 = 1.0\nomega0 = 0.0\nhorizon = {h:?}\n");
        let err = parse_config(&text).unwrap_err();
        prop_assert_eq!(err.field(), Some("horizon"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_swirling_cells_converge_at_second_order(
        alpha in 0.5f64..2.0, beta in 0.5f64..2.0, k in 1.0f64..3.0, c in 0.5f64..2.0, z in -3.0f64..3.0,
    ) {
        let field = SyntheticField::swirling_cell(
            alpha,
            move |z| (k * z).sin() + c,
            move |z| k * (k * z).cos(),
            beta,
            move |z| c + (k * z).cos(),
            move |r, z| (c + z.sin()) * (-r * r).exp(),
        ).unwrap();
        for line in full_report(&field, &[z], DEFAULT_H).unwrap() {
            match (line.identity.kind(), line.order) {
                (IdentityKind::Rotation, _) => prop_assert!(line.residual <= 1e-12),
                (_, Some(o)) => prop_assert!(o >= 1.7, "{} order {o}", line.identity),
                (_, None) => prop_assert!(line.residual <= 1e-12),
            }
        }
    }

    #[test]
    fn solver_keeps_divergence_and_parity(a in -1.5f64..1.5, b in -1.5f64..1.5) {
        let grid = Grid2D::new(24, 16, 6.0, 2.0 * std::f64::consts::PI).unwrap();
        let solver = EulerSolver::new(grid);
        let mut field = init_field(grid, &profiles::smooth_generic(a, b)).unwrap();
        let dt = 0.5 * solver.stable_dt(&field).min(0.05);
        for _ in 0..5 {
            field = solver.step(&field, dt).unwrap();
            prop_assert!(field.max_divergence() <= 1e-12);
            prop_assert!(field.axis_parity_defect() <= 1e-12);
        }
    }
}
