use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Mode, ScenarioConfig, ScenarioError};
use crate::axis_ode::{
    blowup_time, closed_form_state, hypothesis_violation_time, integrate, invariant_q, AxisState,
    HypothesisThresholds, TerminalStatus, TrajectorySample,
};
use crate::euler::{
    ode_consistency_report, run_simulation_with, write_axis_csv, write_snapshot, SimulationOptions,
    SnapshotFormat,
};
use crate::lemma::full_report;

/// Header of `closed_form.csv` and `trajectory.csv`.
pub const INTEGRATE_CSV_HEADER: [&str; 5] = ["t", "x3", "lambda", "omega_bar", "q"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummaryStatus {
    CompletedHorizon,
    BlowUpDetected,
    StepFailure,
    /// A lemma check flagged at least one identity.
    Suspect,
}

/// Written as `summary.json` next to the other artifacts of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub mode: Mode,
    pub terminal_status: SummaryStatus,
    /// Singular time of the unforced closed form.
    pub t_blow_predicted: Option<f64>,
    pub t_blow_observed: Option<f64>,
    /// `|observed - predicted| / predicted`.
    pub blowup_discrepancy: Option<f64>,
    /// First time the radial pressure curvature turned negative; absent if it never did.
    pub t_hypothesis_violated: Option<f64>,
    pub hypothesis_thresholds: Option<HypothesisThresholds>,
    pub max_residuals: BTreeMap<String, f64>,
    /// File names relative to the output directory, `summary.json` excluded.
    pub artifacts: Vec<String>,
}

impl RunSummary {
    fn new(mode: Mode) -> Self {
        Self {
            mode,
            terminal_status: SummaryStatus::CompletedHorizon,
            t_blow_predicted: None,
            t_blow_observed: None,
            blowup_discrepancy: None,
            t_hypothesis_violated: None,
            hypothesis_thresholds: None,
            max_residuals: BTreeMap::new(),
            artifacts: Vec::new(),
        }
    }

    fn set_blowup(&mut self, predicted: Option<f64>, observed: Option<f64>) {
        self.t_blow_predicted = predicted;
        self.t_blow_observed = observed;
        self.blowup_discrepancy = match (predicted, observed) {
            (Some(p), Some(o)) => Some((o - p).abs() / p),
            _ => None,
        };
    }
}

/// Executes a validated scenario, writing its artifacts and `summary.json` into
/// `out_dir` (created if needed).
pub fn run(config: &ScenarioConfig, out_dir: &Path) -> Result<RunSummary, ScenarioError> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;
    let summary = match config.mode() {
        Mode::ClosedForm => run_closed_form(config, out_dir)?,
        Mode::Integrate => run_integrate(config, out_dir)?,
        Mode::PdeSim => run_pde(config, out_dir)?,
        Mode::CheckLemma => run_lemma(config, out_dir)?,
    };
    let file = fs::File::create(out_dir.join("summary.json"))?;
    serde_json::to_writer_pretty(file, &summary)?;
    Ok(summary)
}

fn write_samples(path: &Path, samples: &[TrajectorySample]) -> Result<(), ScenarioError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(INTEGRATE_CSV_HEADER)?;
    for s in samples {
        w.write_record(
            [s.t, s.x3, s.state.lambda, s.state.omega_bar, s.q]
                .iter()
                .map(f64::to_string),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `max |Q(t) / Q(0) - 1|` over the samples, when `Q` is defined.
fn first_integral_drift(samples: &[TrajectorySample]) -> Option<f64> {
    let q0 = invariant_q(samples.first()?.state).ok()?;
    samples
        .iter()
        .map(|s| invariant_q(s.state).map(|q| (q / q0 - 1.0).abs()))
        .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))
        .ok()
}

fn run_closed_form(config: &ScenarioConfig, out: &Path) -> Result<RunSummary, ScenarioError> {
    let (l0, w0) = (
        config.lambda0.unwrap_or_default(),
        config.omega0.unwrap_or_default(),
    );
    let t_end = config.t.unwrap_or_default();
    let t_blow = blowup_time(l0, w0);
    let n = config.samples;

    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let t = t_end * k as f64 / (n - 1) as f64;
        if t_blow.is_some_and(|tb| t >= tb) {
            break;
        }
        let state = closed_form_state(l0, w0, t)?;
        samples.push(TrajectorySample {
            t,
            x3: config.label,
            state,
            q: 0.0,
        });
    }
    write_samples(&out.join("closed_form.csv"), &samples)?;

    let mut summary = RunSummary::new(Mode::ClosedForm);
    summary.artifacts.push("closed_form.csv".into());
    summary.set_blowup(t_blow, None);
    summary.hypothesis_thresholds = HypothesisThresholds::for_lambda0(l0);
    if t_blow.is_some_and(|tb| tb <= t_end) {
        summary.terminal_status = SummaryStatus::BlowUpDetected;
    }
    if let Some(d) = first_integral_drift(&samples) {
        summary
            .max_residuals
            .insert("first_integral_drift".into(), d);
    }
    Ok(summary)
}

fn run_integrate(config: &ScenarioConfig, out: &Path) -> Result<RunSummary, ScenarioError> {
    let (l0, w0) = (
        config.lambda0.unwrap_or_default(),
        config.omega0.unwrap_or_default(),
    );
    let forcing = config.forcing.build()?;
    let record = integrate(
        AxisState::new(l0, w0)?,
        &forcing,
        config.horizon.unwrap_or_default(),
        &config.integrator.build(),
    )?
    .with_label(config.label);
    write_samples(&out.join("trajectory.csv"), &record.samples)?;

    let mut summary = RunSummary::new(Mode::Integrate);
    summary.artifacts.push("trajectory.csv".into());
    summary.hypothesis_thresholds = HypothesisThresholds::for_lambda0(l0);
    let observed = match record.terminal_status {
        TerminalStatus::CompletedHorizon => None,
        TerminalStatus::BlowUpDetected { t_blow } => {
            summary.terminal_status = SummaryStatus::BlowUpDetected;
            Some(t_blow)
        }
        TerminalStatus::StepFailure { t } => {
            summary.terminal_status = SummaryStatus::StepFailure;
            summary.max_residuals.insert("step_failure_time".into(), t);
            None
        }
    };
    summary.set_blowup(blowup_time(l0, w0), observed);
    let q: Vec<(f64, f64)> = record.samples.iter().map(|s| (s.t, s.q)).collect();
    summary.t_hypothesis_violated = Some(hypothesis_violation_time(&q)).filter(|t| t.is_finite());

    if config.forcing.is_zero() {
        let mut worst = 0.0f64;
        for s in &record.samples {
            if let Ok(exact) = closed_form_state(l0, w0, s.t) {
                let scale = exact.lambda.hypot(exact.omega_bar).max(1.0);
                let err =
                    (s.state.lambda - exact.lambda).hypot(s.state.omega_bar - exact.omega_bar);
                worst = worst.max(err / scale);
            }
        }
        summary
            .max_residuals
            .insert("closed_form_relative_error".into(), worst);
        if let Some(d) = first_integral_drift(&record.samples) {
            summary
                .max_residuals
                .insert("first_integral_drift".into(), d);
        }
    }
    Ok(summary)
}

fn run_pde(config: &ScenarioConfig, out: &Path) -> Result<RunSummary, ScenarioError> {
    let grid = config.grid.expect("validated").build()?;
    let pde = &config.pde;
    let options = SimulationOptions {
        horizon: config.horizon.unwrap_or_default(),
        dt: pde.dt,
        cfl: pde.cfl,
        particle_substeps: pde.particle_substeps,
    };
    let format = config.output.format;
    let ext = match format {
        SnapshotFormat::Csv => "csv",
        SnapshotFormat::Binary => "bin",
    };
    let snapshot_name = |k: usize| format!("snapshot_{k:05}.{ext}");

    let mut artifacts = Vec::new();
    let mut step = 0usize;
    let mut last_written = None;
    let run = run_simulation_with(grid, &pde.profile.build(), &options, |field, pressure| {
        if step == 0 || pde.snapshot_every.is_some_and(|n| step.is_multiple_of(n)) {
            let name = snapshot_name(step);
            write_snapshot(&out.join(&name), field, pressure, format)?;
            artifacts.push(name);
            last_written = Some(step);
        }
        step += 1;
        Ok(())
    })?;
    let last = step - 1;
    if last_written != Some(last) {
        let name = snapshot_name(last);
        write_snapshot(
            &out.join(&name),
            &run.final_field,
            &run.final_pressure,
            format,
        )?;
        artifacts.push(name);
    }

    write_axis_csv(
        &out.join("axis.csv"),
        run.frames.iter().map(|f| &f.diagnostics),
    )?;
    artifacts.push("axis.csv".into());

    let mut summary = RunSummary::new(Mode::PdeSim);
    let mut worst = BTreeMap::<String, f64>::new();
    let mut bump = |key: &str, v: f64| {
        let e = worst.entry(key.to_string()).or_insert(0.0);
        *e = e.max(v);
    };
    let mut table = csv::Writer::from_path(out.join("consistency.csv"))?;
    table.write_record(["a", "residual", "max", "l2"])?;
    let mut paths = csv::Writer::from_path(out.join("particles.csv"))?;
    paths.write_record([
        "a",
        "t",
        "x3",
        "lambda",
        "omega_bar",
        "q_rr",
        "p_33",
        "strain_residual",
        "axial_residual",
        "vorticity_residual",
        "trace_residual",
    ])?;
    let mut violation = f64::INFINITY;
    for &a in &pde.particles {
        let report = ode_consistency_report(&run, a)?;
        for (name, stats) in [
            ("strain", report.strain),
            ("axial", report.axial),
            ("vorticity", report.vorticity),
            ("trace", report.trace),
        ] {
            table.write_record([a, 0.0, stats.max, stats.l2].iter().enumerate().map(
                |(i, v)| {
                    if i == 1 {
                        name.to_string()
                    } else {
                        v.to_string()
                    }
                },
            ))?;
            bump(&format!("{name}_max"), stats.max);
            bump(&format!("{name}_l2"), stats.l2);
        }
        for s in &report.samples {
            paths.write_record(
                [
                    a,
                    s.t,
                    s.x3,
                    s.lambda,
                    s.omega_bar,
                    s.q_rr,
                    s.p_33,
                    s.strain_residual,
                    s.axial_residual,
                    s.vorticity_residual,
                    s.trace_residual,
                ]
                .iter()
                .map(f64::to_string),
            )?;
        }
        let q: Vec<(f64, f64)> = report.samples.iter().map(|s| (s.t, s.q_rr)).collect();
        violation = violation.min(hypothesis_violation_time(&q));
    }
    table.flush()?;
    paths.flush()?;
    artifacts.push("consistency.csv".into());
    artifacts.push("particles.csv".into());

    bump("axis_trace_identity", run.max_trace_residual());
    bump("divergence", run.max_divergence);
    bump("parity_defect", run.max_parity_defect);
    bump("pressure_solve", run.max_pressure_residual);
    bump("energy_drift", run.energy_drift());
    summary.max_residuals = worst;
    summary.t_hypothesis_violated = Some(violation).filter(|t| t.is_finite());
    summary.artifacts = artifacts;
    Ok(summary)
}

fn run_lemma(config: &ScenarioConfig, out: &Path) -> Result<RunSummary, ScenarioError> {
    let settings = &config.lemma;
    let mut summary = RunSummary::new(Mode::CheckLemma);
    for (name, field) in settings.selected() {
        let report = full_report(&field, &settings.z, settings.h)?;
        let file = format!("lemma_{name}.json");
        serde_json::to_writer_pretty(fs::File::create(out.join(&file))?, &report)?;
        summary.artifacts.push(file);

        let min_order = report
            .iter()
            .filter_map(|l| l.order)
            .fold(f64::INFINITY, f64::min);
        if min_order.is_finite() {
            summary
                .max_residuals
                .insert(format!("{name}.min_order"), min_order);
        }
        for line in &report {
            let key = format!("{name}.{}", line.identity);
            let e = summary.max_residuals.entry(key).or_insert(0.0);
            *e = e.max(line.residual);
        }
        if report.iter().any(|l| l.suspect) {
            summary.terminal_status = SummaryStatus::Suspect;
        }
    }
    Ok(summary)
}
