use serde::{Deserialize, Serialize};

use super::diagnostics::check_trace_identity;
use super::particle::{advect_axis_particle, AxisVelocityHistory, PeriodicCubic};
use super::{
    init_field, AxisDiagnostics, AxisymField, AxisymProfile, EulerError, EulerSolver, Grid2D,
    PressureField,
};
use crate::axis_ode::{forced_rhs, forced_rhs_axial, AxisState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationOptions {
    pub horizon: f64,
    /// Fixed time step. When absent, the largest step that divides the horizon evenly
    /// and stays below 80% of the initial CFL limit.
    pub dt: Option<f64>,
    pub cfl: f64,
    /// RK4 substeps per stored frame when advecting axis particles.
    pub particle_substeps: usize,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            horizon: 0.5,
            dt: None,
            cfl: 0.5,
            particle_substeps: 4,
        }
    }
}

/// Stored state after every step.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Frame {
    pub diagnostics: AxisDiagnostics,
    pub axis_velocity: Vec<f64>,
    pub energy: f64,
    /// Max over the axis of the trace-identity residual.
    pub trace_residual: f64,
}

impl Frame {
    pub fn t(&self) -> f64 {
        self.diagnostics.t
    }
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub grid: Grid2D,
    pub dt: f64,
    pub frames: Vec<Frame>,
    pub final_field: AxisymField,
    pub final_pressure: PressureField,
    pub max_divergence: f64,
    pub max_parity_defect: f64,
    pub max_pressure_residual: f64,
    particle_substeps: usize,
}

impl SimulationRun {
    pub fn velocity_history(&self) -> AxisVelocityHistory {
        let mut h = AxisVelocityHistory::new(self.grid.z_period);
        for f in &self.frames {
            h.push(f.t(), f.axis_velocity.clone())
                .expect("frames are stored at increasing times");
        }
        h
    }

    pub fn max_trace_residual(&self) -> f64 {
        self.frames
            .iter()
            .map(|f| f.trace_residual)
            .fold(0.0, f64::max)
    }

    /// `max |E(t) / E(0) - 1|`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.frames[0].energy;
        if e0 == 0.0 {
            return 0.0;
        }
        self.frames
            .iter()
            .map(|f| (f.energy / e0 - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn run_simulation(
    grid: Grid2D,
    profile: &dyn AxisymProfile,
    options: &SimulationOptions,
) -> Result<SimulationRun, EulerError> {
    run_simulation_with(grid, profile, options, |_, _| Ok(()))
}

/// Like [`run_simulation`], calling `observer` with every stored state, the initial
/// one included.
pub fn run_simulation_with(
    grid: Grid2D,
    profile: &dyn AxisymProfile,
    options: &SimulationOptions,
    mut observer: impl FnMut(&AxisymField, &PressureField) -> Result<(), EulerError>,
) -> Result<SimulationRun, EulerError> {
    if !(options.horizon > 0.0) || !options.horizon.is_finite() {
        return Err(EulerError::InvalidInput(format!(
            "horizon must be positive, got {}",
            options.horizon
        )));
    }
    if !(options.cfl > 0.0) {
        return Err(EulerError::InvalidInput(format!(
            "cfl must be positive, got {}",
            options.cfl
        )));
    }
    let solver = EulerSolver::new(grid).with_cfl(options.cfl);
    let mut field = init_field(grid, profile)?;

    let (steps, dt) = match options.dt {
        Some(dt) if dt > 0.0 && dt.is_finite() => {
            let n = (options.horizon / dt).round().max(1.0) as usize;
            (n, dt)
        }
        Some(dt) => {
            return Err(EulerError::InvalidInput(format!(
                "dt must be positive, got {dt}"
            )))
        }
        None => {
            let limit = (0.8 * solver.stable_dt(&field)).min(options.horizon);
            let n = (options.horizon / limit).ceil() as usize;
            (n, options.horizon / n as f64)
        }
    };

    let mut frames = Vec::with_capacity(steps + 1);
    let mut max_divergence = 0.0f64;
    let mut max_parity_defect = 0.0f64;
    let mut max_pressure_residual = 0.0f64;
    let mut record = |field: &AxisymField| -> Result<PressureField, EulerError> {
        let (pressure, diagnostics) = solver.diagnose(field)?;
        max_divergence = max_divergence.max(field.max_divergence());
        max_parity_defect = max_parity_defect.max(field.axis_parity_defect());
        max_pressure_residual = max_pressure_residual.max(pressure.residual);
        let trace_residual = check_trace_identity(&diagnostics)
            .into_iter()
            .fold(0.0, f64::max);
        frames.push(Frame {
            diagnostics,
            axis_velocity: field.axis_velocity(),
            energy: field.energy(),
            trace_residual,
        });
        observer(field, &pressure)?;
        Ok(pressure)
    };

    let mut pressure = record(&field)?;
    for k in 0..steps {
        let next = solver.step(&field, dt)?;
        // pin the clock to k dt so frame times do not accumulate rounding
        field = AxisymField {
            t: (k + 1) as f64 * dt,
            ..next
        };
        pressure = record(&field)?;
    }

    Ok(SimulationRun {
        grid,
        dt,
        frames,
        final_field: field,
        final_pressure: pressure,
        max_divergence,
        max_parity_defect,
        max_pressure_residual,
        particle_substeps: options.particle_substeps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max: f64,
    /// Root mean square over time (trapezoid rule).
    pub l2: f64,
}

impl ResidualStats {
    fn from_series(t: &[f64], r: &[f64]) -> Self {
        let max = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let span = t.last().copied().unwrap_or(0.0) - t.first().copied().unwrap_or(0.0);
        let l2 = if span > 0.0 {
            let integral: f64 = t
                .windows(2)
                .zip(r.windows(2))
                .map(|(tw, rw)| 0.5 * (tw[1] - tw[0]) * (rw[0] * rw[0] + rw[1] * rw[1]))
                .sum();
            (integral / span).sqrt()
        } else {
            max
        };
        Self { max, l2 }
    }
}

/// Values along one axis particle path, with their time derivatives and the residuals
/// of the reduced equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencySample {
    pub t: f64,
    pub x3: f64,
    pub lambda: f64,
    pub omega_bar: f64,
    pub q_rr: f64,
    pub p_33: f64,
    pub dlambda_dt: f64,
    pub domega_dt: f64,
    /// `dlambda/dt - (lambda^2/2 - omega_bar^2/2 + 2 q_rr)`
    pub strain_residual: f64,
    /// `dlambda/dt - (-lambda^2 - p_33)`
    pub axial_residual: f64,
    /// `domega_bar/dt - lambda omega_bar`
    pub vorticity_residual: f64,
    /// `2 q_rr + p_33 + 3/2 lambda^2 - omega_bar^2 / 2`
    pub trace_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub a: f64,
    pub samples: Vec<ConsistencySample>,
    pub strain: ResidualStats,
    pub axial: ResidualStats,
    pub vorticity: ResidualStats,
    pub trace: ResidualStats,
}

/// Follows the axis particle that starts at `a` and compares the time derivatives of
/// the sampled `lambda` and `omega_bar` with the reduced equations driven by the
/// sampled pressure curvatures. `strain_residual - axial_residual = -trace_residual`
/// holds for every sample.
pub fn ode_consistency_report(
    run: &SimulationRun,
    a: f64,
) -> Result<ConsistencyReport, EulerError> {
    if run.frames.len() < 3 {
        return Err(EulerError::InvalidInput(
            "consistency report needs at least three stored frames".into(),
        ));
    }
    let path = advect_axis_particle(a, &run.velocity_history(), run.particle_substeps);
    let interp = PeriodicCubic::new(run.grid.z_period);
    let t: Vec<f64> = run.frames.iter().map(Frame::t).collect();
    let along = |pick: fn(&AxisDiagnostics) -> &Vec<f64>| -> Vec<f64> {
        run.frames
            .iter()
            .zip(&path)
            .map(|(f, &x)| interp.eval(pick(&f.diagnostics), x))
            .collect()
    };
    let lambda = along(|d| &d.lambda);
    let omega = along(|d| &d.omega_bar);
    let q = along(|d| &d.q_rr);
    let p33 = along(|d| &d.p_33);
    let dl = time_derivative(&t, &lambda);
    let dw = time_derivative(&t, &omega);

    let samples: Vec<ConsistencySample> = (0..t.len())
        .map(|k| {
            let s = AxisState {
                lambda: lambda[k],
                omega_bar: omega[k],
            };
            let rhs = forced_rhs(s, q[k]);
            ConsistencySample {
                t: t[k],
                x3: path[k],
                lambda: lambda[k],
                omega_bar: omega[k],
                q_rr: q[k],
                p_33: p33[k],
                dlambda_dt: dl[k],
                domega_dt: dw[k],
                strain_residual: dl[k] - rhs.lambda,
                axial_residual: dl[k] - forced_rhs_axial(s, p33[k]),
                vorticity_residual: dw[k] - rhs.omega_bar,
                trace_residual: 2.0 * q[k] + p33[k] + 1.5 * lambda[k].powi(2)
                    - 0.5 * omega[k].powi(2),
            }
        })
        .collect();
    let stats = |pick: fn(&ConsistencySample) -> f64| {
        let r: Vec<f64> = samples.iter().map(pick).collect();
        ResidualStats::from_series(&t, &r)
    };
    Ok(ConsistencyReport {
        a,
        strain: stats(|s| s.strain_residual),
        axial: stats(|s| s.axial_residual),
        vorticity: stats(|s| s.vorticity_residual),
        trace: stats(|s| s.trace_residual),
        samples,
    })
}

/// Second-order differences on a possibly nonuniform grid: centered three-point in the
/// interior, one-sided three-point at the ends.
fn time_derivative(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut d = vec![0.0; n];
    #[allow(clippy::needless_range_loop)]
    for k in 0..n {
        let c = k.clamp(1, n - 2);
        let (h1, h2) = (t[c] - t[c - 1], t[c + 1] - t[c]);
        let (fm, f0, fp) = (f[c - 1], f[c], f[c + 1]);
        d[k] = if k == 0 {
            -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * fm + (h1 + h2) / (h1 * h2) * f0
                - h1 / (h2 * (h1 + h2)) * fp
        } else if k == n - 1 {
            h2 / (h1 * (h1 + h2)) * fm - (h1 + h2) / (h1 * h2) * f0
                + (2.0 * h2 + h1) / (h2 * (h1 + h2)) * fp
        } else {
            -h2 / (h1 * (h1 + h2)) * fm + (h2 - h1) / (h1 * h2) * f0 + h1 / (h2 * (h1 + h2)) * fp
        };
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axis_ode::closed_form_state;
    use crate::euler::profiles;
    use std::f64::consts::PI;

    #[test]
    fn time_derivative_is_exact_for_quadratics() {
        let t = [0.0, 0.1, 0.25, 0.3, 0.5, 0.9];
        let f: Vec<f64> = t.iter().map(|t| 1.0 + 2.0 * t - 3.0 * t * t).collect();
        for (d, t) in time_derivative(&t, &f).iter().zip(t) {
            assert!((d - (2.0 - 6.0 * t)).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_swirl_report_is_quiet() {
        let g = Grid2D::new(32, 32, 6.0, 2.0 * PI).unwrap();
        let opts = SimulationOptions {
            horizon: 0.2,
            dt: Some(0.05),
            ..Default::default()
        };
        let run = run_simulation(g, &profiles::rigid_swirl(1.0, 1.0), &opts).unwrap();
        assert_eq!(run.frames.len(), 5);
        let rep = ode_consistency_report(&run, 1.0).unwrap();
        for s in &rep.samples {
            assert!(s.dlambda_dt.abs() < 1e-12 && s.domega_dt.abs() < 1e-12);
            assert!(s.x3 == 1.0 && s.lambda == 0.0);
        }
        assert!(rep.vorticity.max < 1e-12);
        // the remaining residuals are the O(dr^2) discretization error of q_rr
        assert!(rep.strain.max < 0.15, "{}", rep.strain.max);
    }

    #[test]
    fn residual_difference_is_the_trace_residual() {
        let g = Grid2D::new(32, 32, 6.0, 2.0 * PI).unwrap();
        let opts = SimulationOptions {
            horizon: 0.1,
            ..Default::default()
        };
        let run = run_simulation(g, &profiles::smooth_generic(1.0, 1.0), &opts).unwrap();
        let rep = ode_consistency_report(&run, 0.5).unwrap();
        for s in &rep.samples {
            let d = s.strain_residual - s.axial_residual + s.trace_residual;
            assert!(d.abs() < 1e-10 * (1.0 + s.dlambda_dt.abs()), "{d}");
        }
    }

    #[test]
    fn invariants_hold_during_a_short_run() {
        let g = Grid2D::new(128, 128, 6.0, 2.0 * PI).unwrap();
        let opts = SimulationOptions {
            horizon: 0.5,
            ..Default::default()
        };
        let run = run_simulation(g, &profiles::smooth_generic(1.0, 1.0), &opts).unwrap();
        assert!(run.max_divergence <= 1e-12, "{}", run.max_divergence);
        assert!(run.max_parity_defect <= 1e-12);
        assert!(run.energy_drift() <= 1e-3, "{}", run.energy_drift());
        assert!((run.final_field.t - 0.5).abs() < 1e-14);
    }

    #[test]
    fn strain_free_stagnation_point_tracks_closed_form() {
        // choose the swirl so that q_rr vanishes at the stagnation point z = 0
        let g = Grid2D::new(64, 64, 6.0, 2.0 * PI).unwrap();
        let solver = EulerSolver::new(g);
        let q_at = |b: f64| {
            let f = init_field(g, &profiles::stagnation_swirl(1.0, b)).unwrap();
            solver.diagnose(&f).unwrap().1.q_rr[0]
        };
        let (q0, q1) = (q_at(0.0), q_at(1.0));
        let b = (-q0 / (q1 - q0)).sqrt();
        assert!(q_at(b).abs() < 1e-10);

        // q_rr grows from zero, so the departure from the unforced closed form starts
        // out quadratic in time
        let opts = SimulationOptions {
            horizon: 0.16,
            dt: Some(0.01),
            ..Default::default()
        };
        let run = run_simulation(g, &profiles::stagnation_swirl(1.0, b), &opts).unwrap();
        let rep = ode_consistency_report(&run, 0.0).unwrap();
        let s0 = &rep.samples[0];
        let dev = |k: usize| {
            let s = &rep.samples[k];
            assert!(s.x3.min(2.0 * PI - s.x3) < 1e-12);
            let want = closed_form_state(s0.lambda, s0.omega_bar, s.t).unwrap();
            (s.lambda - want.lambda).abs()
        };
        let (d8, d16) = (dev(8), dev(16));
        assert!(d16 < 0.05, "{d16}");
        assert!(d16 / d8 > 3.0, "{}", d16 / d8);
    }
}
