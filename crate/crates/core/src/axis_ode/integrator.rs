//! Explicit RK4 along one axis particle path, with step-doubling error control.

use serde::{Deserialize, Serialize};

use super::{forced_rhs, AxisOdeError, AxisState, PressureForcing};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepMode {
    /// Step doubling: one full step against two half steps, accepted result
    /// extrapolated with the Richardson correction.
    Adaptive,
    /// Plain RK4 with a constant step (the last step is shortened to land on the end).
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub mode: StepMode,
    /// Mixed absolute/relative tolerance per step.
    pub tolerance: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Blow-up is declared once `max(|lambda|, |omega_bar|)` exceeds this.
    pub blowup_threshold: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            mode: StepMode::Adaptive,
            tolerance: 1e-10,
            initial_step: 1e-3,
            min_step: 1e-14,
            max_step: 0.1,
            blowup_threshold: 1e9,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn fixed(step: f64) -> Self {
        Self {
            mode: StepMode::Fixed(step),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), AxisOdeError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(AxisOdeError::Config(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("tolerance", self.tolerance)?;
        positive("initial_step", self.initial_step)?;
        positive("min_step", self.min_step)?;
        positive("max_step", self.max_step)?;
        positive("blowup_threshold", self.blowup_threshold)?;
        if let StepMode::Fixed(h) = self.mode {
            positive("fixed step", h)?;
        }
        if self.min_step > self.max_step {
            return Err(AxisOdeError::Config("min_step exceeds max_step".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x3: f64,
    pub state: AxisState,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TerminalStatus {
    CompletedHorizon,
    BlowUpDetected { t_blow: f64 },
    StepFailure { t: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub samples: Vec<TrajectorySample>,
    pub terminal_status: TerminalStatus,
    pub rejected_steps: usize,
}

impl TrajectoryRecord {
    pub fn last(&self) -> &TrajectorySample {
        self.samples
            .last()
            .expect("trajectory always holds the initial sample")
    }

    /// Attaches the axis label `a` to every sample (the reduced system is Lagrangian,
    /// so the label is the only position information it carries).
    pub fn with_label(mut self, a: f64) -> Self {
        for s in &mut self.samples {
            s.x3 = a;
        }
        self
    }

    pub fn lambda_series(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.state.lambda)).collect()
    }
}

/// Integrates the forced system on `[0, horizon]`.
pub fn integrate(
    state0: AxisState,
    forcing: &PressureForcing,
    horizon: f64,
    config: &IntegratorConfig,
) -> Result<TrajectoryRecord, AxisOdeError> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(AxisOdeError::Config(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    integrate_interval(state0, forcing, 0.0, horizon, config)
}

/// Integrates from `t_start` to `t_end`, forward or backward in time.
pub fn integrate_interval(
    state0: AxisState,
    forcing: &PressureForcing,
    t_start: f64,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<TrajectoryRecord, AxisOdeError> {
    config.validate()?;
    let state0 = AxisState::new(state0.lambda, state0.omega_bar)?;
    if !t_start.is_finite() || !t_end.is_finite() || t_start == t_end {
        return Err(AxisOdeError::Config(format!(
            "invalid interval [{t_start}, {t_end}]"
        )));
    }
    forcing.validate_on(t_start, t_end)?;

    let dir = (t_end - t_start).signum();
    let span = (t_end - t_start).abs();
    let mut t = t_start;
    let mut y = [state0.lambda, state0.omega_bar];
    let mut samples = vec![TrajectorySample {
        t,
        x3: 0.0,
        state: state0,
        q: forcing.eval(t),
    }];
    let mut rejected = 0usize;
    let mut h = match config.mode {
        StepMode::Adaptive => config.initial_step.min(config.max_step),
        StepMode::Fixed(h) => h,
    };

    let status = loop {
        let remaining = span - (t - t_start).abs();
        if remaining <= 1e-14 * span.max(1.0) {
            break TerminalStatus::CompletedHorizon;
        }
        if samples.len() > config.max_steps {
            break TerminalStatus::StepFailure { t };
        }
        let step = h.min(remaining);
        let hit_end = step == remaining;

        let y_new = match config.mode {
            StepMode::Fixed(_) => {
                let y_new = rk4_step(forcing, t, y, dir * step);
                if !y_new.iter().all(|v| v.is_finite()) {
                    break TerminalStatus::StepFailure { t };
                }
                y_new
            }
            StepMode::Adaptive => {
                let full = rk4_step(forcing, t, y, dir * step);
                let half = rk4_step(forcing, t, y, dir * 0.5 * step);
                let two_half = rk4_step(forcing, t + dir * 0.5 * step, half, dir * 0.5 * step);
                let mut err = 0.0f64;
                let mut y_new = [0.0; 2];
                let mut finite = true;
                for i in 0..2 {
                    let diff = (two_half[i] - full[i]) / 15.0;
                    y_new[i] = two_half[i] + diff;
                    let scale = config.tolerance * (1.0 + y[i].abs().max(y_new[i].abs()));
                    finite &= y_new[i].is_finite() && diff.is_finite();
                    err = err.max(diff.abs() / scale);
                }
                if !finite || err > 1.0 {
                    rejected += 1;
                    let factor = if finite {
                        (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0)
                    } else {
                        MIN_FACTOR
                    };
                    h = step * factor;
                    if h < config.min_step {
                        break TerminalStatus::StepFailure { t };
                    }
                    continue;
                }
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                // a shortened final step says nothing about the attainable step size
                if !hit_end {
                    h = (step * factor).min(config.max_step);
                }
                y_new
            }
        };

        t = if hit_end { t_end } else { t + dir * step };
        y = y_new;
        let state = AxisState {
            lambda: y[0],
            omega_bar: y[1],
        };
        samples.push(TrajectorySample {
            t,
            x3: 0.0,
            state,
            q: forcing.eval(t),
        });
        if state.magnitude() > config.blowup_threshold {
            break TerminalStatus::BlowUpDetected { t_blow: t };
        }
        if let StepMode::Adaptive = config.mode {
            if h < config.min_step {
                break TerminalStatus::StepFailure { t };
            }
        }
    };

    Ok(TrajectoryRecord {
        samples,
        terminal_status: status,
        rejected_steps: rejected,
    })
}

fn rhs(forcing: &PressureForcing, t: f64, y: [f64; 2]) -> [f64; 2] {
    let d = forced_rhs(
        AxisState {
            lambda: y[0],
            omega_bar: y[1],
        },
        forcing.eval(t),
    );
    [d.lambda, d.omega_bar]
}

fn rk4_step(forcing: &PressureForcing, t: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let axpy = |a: [f64; 2], s: f64, b: [f64; 2]| [a[0] + s * b[0], a[1] + s * b[1]];
    let k1 = rhs(forcing, t, y);
    let k2 = rhs(forcing, t + 0.5 * h, axpy(y, 0.5 * h, k1));
    let k3 = rhs(forcing, t + 0.5 * h, axpy(y, 0.5 * h, k2));
    let k4 = rhs(forcing, t + h, axpy(y, h, k3));
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}
