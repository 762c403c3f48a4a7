//! Adaptive RK4 on the unforced axis system, checked against the closed form: the
//! singular time `2 / lambda0` when the axis vorticity vanishes, and long-time decay
//! when it does not.

use axiswirl::axis_ode::{
    blowup_time, closed_form_state, integrate, AxisState, IntegratorConfig, PressureForcing,
    TerminalStatus,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = IntegratorConfig::default().with_tolerance(1e-10);
    let unforced = PressureForcing::Constant(0.0);

    for l0 in [0.5, 1.0, 2.0, 4.0] {
        let rec = integrate(AxisState::new(l0, 0.0)?, &unforced, 10.0, &config)?;
        let predicted = blowup_time(l0, 0.0).expect("positive strain, no vorticity");
        match rec.terminal_status {
            TerminalStatus::BlowUpDetected { t_blow } => println!(
                "lambda0 = {l0}: blow-up at {t_blow:.6} (predicted {predicted:.6}, {} steps)",
                rec.samples.len() - 1
            ),
            other => println!("lambda0 = {l0}: unexpected {other:?}"),
        }
    }

    // a small vorticity is enough to prevent the singularity
    for w0 in [0.01, 0.1, 1.0] {
        let rec = integrate(AxisState::new(2.0, w0)?, &unforced, 100.0, &config)?;
        let end = rec.last();
        let exact = closed_form_state(2.0, w0, end.t)?;
        println!(
            "omega0 = {w0}: t = {:.1}, lambda = {:.6e} (exact {:.6e}), peak |lambda| {:.3e}",
            end.t,
            end.state.lambda,
            exact.lambda,
            rec.samples
                .iter()
                .map(|s| s.state.lambda.abs())
                .fold(0.0, f64::max)
        );
    }
    Ok(())
}
