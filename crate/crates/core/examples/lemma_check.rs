//! Checks every on-axis identity on the synthetic presets and prints the worst line of
//! each kind with its convergence order.

use axiswirl::lemma::{full_report, IdentityKind, SyntheticField, DEFAULT_H};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = [-1.3, 0.0, 0.4, 2.2];
    let mut suspects = 0;
    for (name, field) in SyntheticField::presets() {
        let report = full_report(&field, &z, DEFAULT_H)?;
        println!("{name}");
        for kind in [
            IdentityKind::AxisLimit,
            IdentityKind::FiniteRadius,
            IdentityKind::Rotation,
        ] {
            let worst = report
                .iter()
                .filter(|l| l.identity.kind() == kind)
                .max_by(|a, b| a.residual.total_cmp(&b.residual))
                .expect("every kind has identities");
            let min_order = report
                .iter()
                .filter(|l| l.identity.kind() == kind)
                .filter_map(|l| l.order)
                .fold(f64::INFINITY, f64::min);
            println!(
                "  {kind:?}: worst {} at z = {} residual {:.2e}, lowest order {}",
                worst.identity,
                worst.z,
                worst.residual,
                if min_order.is_finite() {
                    format!("{min_order:.2}")
                } else {
                    "exact".into()
                }
            );
        }
        suspects += report.iter().filter(|l| l.suspect).count();
    }
    println!("suspect lines: {suspects}");

    // a radial velocity that does not vanish on the axis is caught
    let broken =
        SyntheticField::new_unchecked(|_, _| 1.0, |_, _| 0.0, |_, _| 0.0, |_, _| 0.0, false);
    let flagged = full_report(&broken, &[0.0], DEFAULT_H)?
        .into_iter()
        .filter(|l| l.suspect)
        .count();
    println!("negative control: {flagged} suspect line(s)");
    Ok(())
}
