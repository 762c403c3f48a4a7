//! The lemma checker (Cartesian finite differences of analytic profiles) and the PDE
//! solver's axis extraction (limit stencils on the (r, z) grid) share no code. Where
//! both can represent a field they must agree up to their own discretization errors,
//! each estimated by halving its step.

use std::f64::consts::PI;

use axiswirl::euler::{init_field, profiles, AxisDiagnostics, EulerSolver, Grid2D};
use axiswirl::lemma::{axis_values, AxisValues, SyntheticField};

fn solver_axis(profile: &axiswirl::euler::AnalyticProfile, n: usize) -> AxisDiagnostics {
    let grid = Grid2D::new(n, n, 6.0, 2.0 * PI).unwrap();
    let field = init_field(grid, profile).unwrap();
    EulerSolver::new(grid).diagnose(&field).unwrap().1
}

/// `|a - b| <= 2 (err_a + err_b)`, with each error taken as the change under halving.
fn agree(name: &str, lemma: (f64, f64), pde: (f64, f64)) {
    let budget = 2.0 * ((lemma.0 - lemma.1).abs() + (pde.0 - pde.1).abs()) + 1e-12;
    let diff = (lemma.1 - pde.1).abs();
    assert!(
        diff <= budget,
        "{name}: lemma {} vs solver {}, budget {budget:e}",
        lemma.1,
        pde.1
    );
}

#[test]
fn strain_and_swirl_agree_on_generic_data() {
    let (a, b) = (1.0, 1.0);
    let s = move |z: f64| a * (z.sin() + 0.3 * (2.0 * z).cos());
    let ds = move |z: f64| a * (z.cos() - 0.6 * (2.0 * z).sin());
    let lemma_field = SyntheticField::swirling_cell(
        1.0,
        s,
        ds,
        1.0,
        move |z| b * (1.0 + 0.5 * z.cos()),
        |_, _| 0.0,
    )
    .unwrap();
    let profile = profiles::smooth_generic(a, b);
    let (coarse, fine) = (solver_axis(&profile, 64), solver_axis(&profile, 128));

    // every other fine node coincides with a coarse one
    for j in (0..64).step_by(7) {
        let z = coarse.z[j];
        assert_eq!(fine.z[2 * j], z);
        let l1: AxisValues = axis_values(&lemma_field, z, 2e-3);
        let l2 = axis_values(&lemma_field, z, 1e-3);
        agree(
            "lambda",
            (l1.lambda, l2.lambda),
            (coarse.lambda[j], fine.lambda[2 * j]),
        );
        agree(
            "omega_bar",
            (l1.omega_bar, l2.omega_bar),
            (coarse.omega_bar[j], fine.omega_bar[2 * j]),
        );
    }
}

#[test]
fn pressure_curvature_agrees_on_pure_swirl() {
    // v_theta = omega r exp(-r^2) balances p = -omega^2 exp(-2 r^2) / 4
    let omega = 1.3;
    let lemma_field = SyntheticField::new(
        |_, _| 0.0,
        move |r, _| omega * r * (-r * r).exp(),
        |_, _| 0.0,
        move |r, _| -0.25 * omega * omega * (-2.0 * r * r).exp(),
        true,
    )
    .unwrap();
    let profile = profiles::rigid_swirl(omega, 1.0);
    let (coarse, fine) = (solver_axis(&profile, 64), solver_axis(&profile, 128));
    for j in [0, 20, 41] {
        let z = coarse.z[j];
        assert_eq!(fine.z[2 * j], z);
        let (l1, l2) = (
            axis_values(&lemma_field, z, 2e-3),
            axis_values(&lemma_field, z, 1e-3),
        );
        agree(
            "q_rr",
            (l1.q_rr, l2.q_rr),
            (coarse.q_rr[j], fine.q_rr[2 * j]),
        );
        agree(
            "omega_bar",
            (l1.omega_bar, l2.omega_bar),
            (coarse.omega_bar[j], fine.omega_bar[2 * j]),
        );
        assert!((l2.q_rr - omega * omega).abs() < 1e-5);
    }
}
