//! Runs the axisymmetric vorticity/stream-function solver and checks that axis
//! particles obey the reduced ODEs, with residuals shrinking under refinement.
//!
//! ```text
//! cargo run --release --example axisym_solver
//! ```

use axiswirl::euler::{
    ode_consistency_report, profiles, run_simulation, Grid2D, SimulationOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let profile = profiles::smooth_generic(1.0, 1.0);
    let mut previous: Option<[f64; 4]> = None;
    for (n, dt) in [(32, 0.04), (64, 0.02), (128, 0.01)] {
        let grid = Grid2D::new(n, n, 6.0, 2.0 * std::f64::consts::PI)?;
        let opts = SimulationOptions {
            horizon: 0.5,
            dt: Some(dt),
            ..Default::default()
        };
        let run = run_simulation(grid, &profile, &opts)?;
        let rep = ode_consistency_report(&run, 0.5)?;
        let now = [
            rep.strain.max,
            rep.axial.max,
            rep.vorticity.max,
            run.max_trace_residual(),
        ];
        println!(
            "{n:>4}^2 dt {dt}: strain {:.2e} axial {:.2e} vorticity {:.2e} trace {:.2e} | div {:.1e} energy drift {:.1e}",
            now[0], now[1], now[2], now[3], run.max_divergence, run.energy_drift()
        );
        if let Some(prev) = previous {
            let ratios: Vec<String> = prev
                .iter()
                .zip(now)
                .map(|(p, c)| format!("{:.2}", p / c))
                .collect();
            println!("        refinement ratios {}", ratios.join(" "));
        }
        previous = Some(now);
    }
    Ok(())
}
