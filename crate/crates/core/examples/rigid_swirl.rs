//! Pure swirl is an exact steady state: the solver must keep it to rounding, and the
//! axis pressure curvature must approach `omega^2` at second order in the grid.

use axiswirl::euler::{init_field, profiles, EulerSolver, Grid2D};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let omega = 1.3;
    let profile = profiles::rigid_swirl(omega, 1.0);
    for n in [32, 64, 128] {
        let grid = Grid2D::new(n, 16, 6.0, 2.0 * std::f64::consts::PI)?;
        let solver = EulerSolver::new(grid);
        let initial = init_field(grid, &profile)?;
        let mut field = initial.clone();
        for _ in 0..100 {
            field = solver.step(&field, 0.01)?;
        }
        let drift = (&field.v_theta - &initial.v_theta)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let (_, axis) = solver.diagnose(&field)?;
        let q_err = axis
            .q_rr
            .iter()
            .fold(0.0f64, |m, q| m.max((q - omega * omega).abs()));
        println!(
            "nr = {n:>3}: swirl drift after 100 steps {drift:.1e}, |q_rr - omega^2| {q_err:.3e} ({:.2} dr^2)",
            q_err / grid.dr().powi(2)
        );
    }
    Ok(())
}
