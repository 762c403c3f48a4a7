//! A nonnegative radial pressure curvature only speeds up the blow-up. Compares
//! several forcings against the comparison bound `2 lambda0 / (2 - lambda0 t)`.

use axiswirl::axis_ode::{
    hypothesis_violation_time, integrate, lower_bound_lambda, AxisState, HypothesisThresholds,
    IntegratorConfig, Interpolation, PressureForcing, TabulatedForcing, TerminalStatus,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let l0 = 1.0;
    let config = IntegratorConfig::default();
    let thresholds = HypothesisThresholds::for_lambda0(l0).expect("lambda0 > 0");
    println!(
        "thresholds: statement {}, proof {}",
        thresholds.statement, thresholds.proof
    );

    let table = TabulatedForcing::new(
        vec![0.0, 0.5, 1.0, 1.5, 2.0, 3.0],
        vec![0.0, 0.4, 0.1, 0.6, 0.2, 0.0],
        Interpolation::MonotoneCubic,
    )?;
    let forcings = [
        ("none", PressureForcing::Constant(0.0)),
        ("constant 0.5", PressureForcing::Constant(0.5)),
        (
            "0.3 (1 + sin t)",
            PressureForcing::function(|t| 0.3 * (1.0 + t.sin())),
        ),
        ("tabulated", PressureForcing::Tabulated(table)),
        (
            "cos 3t (turns negative)",
            PressureForcing::function(|t| (3.0 * t).cos()),
        ),
    ];

    for (name, forcing) in &forcings {
        let rec = integrate(AxisState::new(l0, 0.0)?, forcing, 3.0, &config)?;
        let worst_margin = rec
            .samples
            .iter()
            // right at the singularity the comparison is meaningless in floating point
            .filter(|s| s.state.lambda < 1e6)
            .filter_map(|s| {
                lower_bound_lambda(l0, s.t)
                    .ok()
                    .map(|b| s.state.lambda / b - 1.0)
            })
            .fold(f64::INFINITY, f64::min);
        let q: Vec<(f64, f64)> = rec.samples.iter().map(|s| (s.t, s.q)).collect();
        let t_neg = hypothesis_violation_time(&q);
        let end = match rec.terminal_status {
            TerminalStatus::BlowUpDetected { t_blow } => format!("blow-up at {t_blow:.4}"),
            s => format!("{s:?}"),
        };
        println!(
            "{name:>24}: {end}, min(lambda / bound - 1) = {worst_margin:+.2e}, q < 0 from {}",
            if t_neg.is_finite() {
                format!("{t_neg:.3}")
            } else {
                "never".into()
            }
        );
    }
    Ok(())
}
