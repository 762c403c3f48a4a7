//! Closed-form axis dynamics without pressure: where the solution is singular, how close
//! it gets when a little vorticity is present, and the conserved first integral.
//!
//! ```text
//! cargo run --example closed_form
//! ```

use axiswirl::axis_ode::{blowup_time, closed_form_state, invariant_q, near_blowup_time};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>8} {:>8} {:>10} {:>12}",
        "lambda0", "omega0", "t_blow", "peak |theta|"
    );
    for (l0, w0) in [(1.0, 0.0), (2.0, 0.0), (2.0, 0.01), (2.0, 1.0), (-1.0, 0.0)] {
        let t_blow = blowup_time(l0, w0).map_or("none".into(), |t| format!("{t:.4}"));
        let peak =
            near_blowup_time(l0, w0).map_or("-".into(), |n| format!("{:.3e}", n.peak_modulus));
        println!("{l0:>8} {w0:>8} {t_blow:>10} {peak:>12}");
    }

    // with omega0 != 0 the state stays bounded and (lambda^2 + omega^2) / omega is constant
    let (l0, w0) = (1.5, 0.5);
    let q0 = invariant_q(closed_form_state(l0, w0, 0.0)?)?;
    println!("\nlambda0 = {l0}, omega0 = {w0}, first integral {q0:.6}");
    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "t", "lambda", "omega_bar", "Q - Q0"
    );
    for k in 0..=8 {
        let t = 0.5 * k as f64;
        let s = closed_form_state(l0, w0, t)?;
        println!(
            "{t:>6.2} {:>12.6} {:>12.6} {:>12.2e}",
            s.lambda,
            s.omega_bar,
            invariant_q(s)? - q0
        );
    }
    Ok(())
}
