use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::axis_ode::{
    IntegratorConfig, Interpolation, PressureForcing, StepMode, TabulatedForcing,
};
use crate::euler::{profiles, AnalyticProfile, Grid2D, SnapshotFormat};
use crate::lemma::{SyntheticField, DEFAULT_H};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    ClosedForm,
    Integrate,
    PdeSim,
    CheckLemma,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ClosedForm => "closed_form",
            Self::Integrate => "integrate",
            Self::PdeSim => "pde_sim",
            Self::CheckLemma => "check_lemma",
        })
    }
}

/// A parsed scenario. Which fields are required depends on the mode; see
/// [`ScenarioConfig::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub mode: Option<Mode>,
    pub lambda0: Option<f64>,
    pub omega0: Option<f64>,
    /// Evaluation time of the closed form.
    pub t: Option<f64>,
    pub horizon: Option<f64>,
    /// Axis label `a` attached to ODE trajectories.
    #[serde(default)]
    pub label: f64,
    /// Number of closed-form rows written on `[0, t]`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub forcing: ForcingSettings,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    pub grid: Option<GridSettings>,
    #[serde(default)]
    pub pde: PdeSettings,
    #[serde(default)]
    pub lemma: LemmaSettings,
    #[serde(default)]
    pub output: OutputSettings,
}

fn default_samples() -> usize {
    201
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingSettings {
    Constant {
        value: f64,
    },
    /// `mean + amplitude * sin(frequency * t + phase)`
    Sine {
        mean: f64,
        amplitude: f64,
        #[serde(default = "one")]
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    Table {
        t: Vec<f64>,
        q: Vec<f64>,
        #[serde(default)]
        interpolation: Interpolation,
    },
}

impl Default for ForcingSettings {
    fn default() -> Self {
        Self::Constant { value: 0.0 }
    }
}

impl ForcingSettings {
    pub fn build(&self) -> Result<PressureForcing, ScenarioError> {
        Ok(match *self {
            Self::Constant { value } => PressureForcing::Constant(value),
            Self::Sine {
                mean,
                amplitude,
                frequency,
                phase,
            } => {
                PressureForcing::function(move |t| mean + amplitude * (frequency * t + phase).sin())
            }
            Self::Table {
                ref t,
                ref q,
                interpolation,
            } => PressureForcing::Tabulated(
                TabulatedForcing::new(t.clone(), q.clone(), interpolation)
                    .map_err(|e| ScenarioError::invalid("forcing", e.to_string()))?,
            ),
        })
    }

    /// True when the forcing is identically zero, so the closed form applies.
    pub fn is_zero(&self) -> bool {
        match self {
            Self::Constant { value } => *value == 0.0,
            Self::Sine {
                mean, amplitude, ..
            } => *mean == 0.0 && *amplitude == 0.0,
            Self::Table { q, .. } => q.iter().all(|&v| v == 0.0),
        }
    }
}

fn one() -> f64 {
    1.0
}

/// Integrator settings; `fixed_step` switches from adaptive to fixed-step RK4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSettings {
    pub tolerance: f64,
    pub fixed_step: Option<f64>,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub blowup_threshold: f64,
    pub max_steps: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        Self {
            tolerance: d.tolerance,
            fixed_step: None,
            initial_step: d.initial_step,
            min_step: d.min_step,
            max_step: d.max_step,
            blowup_threshold: d.blowup_threshold,
            max_steps: d.max_steps,
        }
    }
}

impl IntegratorSettings {
    pub fn build(&self) -> IntegratorConfig {
        IntegratorConfig {
            mode: self.fixed_step.map_or(StepMode::Adaptive, StepMode::Fixed),
            tolerance: self.tolerance,
            initial_step: self.initial_step,
            min_step: self.min_step,
            max_step: self.max_step,
            blowup_threshold: self.blowup_threshold,
            max_steps: self.max_steps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSettings {
    pub nr: usize,
    pub nz: usize,
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(default = "default_z_period")]
    pub z_period: f64,
}

fn default_r_max() -> f64 {
    6.0
}

fn default_z_period() -> f64 {
    2.0 * std::f64::consts::PI
}

impl GridSettings {
    pub fn build(&self) -> Result<Grid2D, ScenarioError> {
        Grid2D::new(self.nr, self.nz, self.r_max, self.z_period)
            .map_err(|e| ScenarioError::invalid("grid", e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSettings {
    SmoothGeneric { a: f64, b: f64 },
    RigidSwirl { omega: f64, width: f64 },
    StagnationSwirl { a: f64, b: f64 },
}

impl ProfileSettings {
    pub fn build(&self) -> AnalyticProfile {
        match *self {
            Self::SmoothGeneric { a, b } => profiles::smooth_generic(a, b),
            Self::RigidSwirl { omega, width } => profiles::rigid_swirl(omega, width),
            Self::StagnationSwirl { a, b } => profiles::stagnation_swirl(a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PdeSettings {
    pub profile: ProfileSettings,
    pub dt: Option<f64>,
    pub cfl: f64,
    /// Axis labels `a` of the tracked particles.
    pub particles: Vec<f64>,
    pub particle_substeps: usize,
    /// Write a field snapshot every this many steps; the initial and final fields are
    /// always written.
    pub snapshot_every: Option<usize>,
}

impl Default for PdeSettings {
    fn default() -> Self {
        Self {
            profile: ProfileSettings::SmoothGeneric { a: 1.0, b: 1.0 },
            dt: None,
            cfl: 0.5,
            particles: vec![0.5, 2.0],
            particle_substeps: 4,
            snapshot_every: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaSettings {
    /// Preset names to check; all presets when empty.
    pub fields: Vec<String>,
    pub z: Vec<f64>,
    pub h: f64,
}

impl Default for LemmaSettings {
    fn default() -> Self {
        Self {
            fields: Vec::new(),
            z: vec![-1.3, 0.0, 0.4, 2.2],
            h: DEFAULT_H,
        }
    }
}

impl LemmaSettings {
    pub fn selected(&self) -> Vec<(&'static str, SyntheticField)> {
        SyntheticField::presets()
            .into_iter()
            .filter(|(name, _)| self.fields.is_empty() || self.fields.iter().any(|f| f == name))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSettings {
    pub dir: Option<PathBuf>,
    pub format: SnapshotFormat,
}

/// Parses and validates a scenario; the document must name its mode.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let config = deserialize(text)?;
    config.validate()?;
    Ok(config)
}

/// Like [`parse_config`] for a mode chosen elsewhere (a CLI subcommand): a missing
/// `mode` is filled in, a conflicting one is rejected.
pub fn parse_config_for(text: &str, mode: Mode) -> Result<ScenarioConfig, ScenarioError> {
    let mut config = deserialize(text)?;
    match config.mode {
        None => config.mode = Some(mode),
        Some(m) if m != mode => {
            return Err(ScenarioError::invalid(
                "mode",
                format!("file declares `{m}` but `{mode}` was requested"),
            ))
        }
        Some(_) => {}
    }
    config.validate()?;
    Ok(config)
}

fn deserialize(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    toml::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e
            .span()
            .map(|s| 1 + text[..s.start.min(text.len())].matches('\n').count()),
        message: e.message().to_string(),
    })
}

impl ScenarioConfig {
    /// The mode; only `None` before validation.
    pub fn mode(&self) -> Mode {
        self.mode.expect("validated config has a mode")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mode = self
            .mode
            .ok_or_else(|| ScenarioError::invalid("mode", "missing"))?;
        let finite = |name: &str, v: Option<f64>| match v {
            Some(x) if !x.is_finite() => {
                Err(ScenarioError::invalid(name, format!("{x} is not finite")))
            }
            _ => Ok(()),
        };
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ScenarioError::invalid(
                    name,
                    format!("must be positive, got {v}"),
                ))
            }
        };
        let required = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| ScenarioError::invalid(name, format!("required in {mode} mode")))
        };

        finite("lambda0", self.lambda0)?;
        finite("omega0", self.omega0)?;
        finite("t", self.t)?;
        finite("label", Some(self.label))?;
        if let Some(h) = self.horizon {
            positive("horizon", h)?;
        }

        match mode {
            Mode::ClosedForm => {
                required("lambda0", self.lambda0)?;
                required("omega0", self.omega0)?;
                let t = required("t", self.t)?;
                if t < 0.0 {
                    return Err(ScenarioError::invalid(
                        "t",
                        format!("must be non-negative, got {t}"),
                    ));
                }
                if self.samples < 2 {
                    return Err(ScenarioError::invalid("samples", "need at least 2"));
                }
            }
            Mode::Integrate => {
                required("lambda0", self.lambda0)?;
                required("omega0", self.omega0)?;
                let horizon = required("horizon", self.horizon)?;
                self.validate_integrator()?;
                self.forcing
                    .build()?
                    .validate_on(0.0, horizon)
                    .map_err(|e| ScenarioError::invalid("forcing", e.to_string()))?;
            }
            Mode::PdeSim => {
                let grid = self
                    .grid
                    .ok_or_else(|| ScenarioError::invalid("grid", "required in pde_sim mode"))?;
                grid.build()?;
                required("horizon", self.horizon)?;
                if let Some(dt) = self.pde.dt {
                    positive("pde.dt", dt)?;
                }
                positive("pde.cfl", self.pde.cfl)?;
                if self.pde.particles.is_empty() {
                    return Err(ScenarioError::invalid(
                        "pde.particles",
                        "need at least one label",
                    ));
                }
                for &a in &self.pde.particles {
                    finite("pde.particles", Some(a))?;
                }
                if self.pde.particle_substeps == 0 {
                    return Err(ScenarioError::invalid(
                        "pde.particle_substeps",
                        "must be positive",
                    ));
                }
                if self.pde.snapshot_every == Some(0) {
                    return Err(ScenarioError::invalid(
                        "pde.snapshot_every",
                        "must be positive",
                    ));
                }
                let values = match self.pde.profile {
                    ProfileSettings::SmoothGeneric { a, b }
                    | ProfileSettings::StagnationSwirl { a, b } => [a, b],
                    ProfileSettings::RigidSwirl { omega, width } => {
                        positive("pde.profile.width", width)?;
                        [omega, width]
                    }
                };
                for v in values {
                    finite("pde.profile", Some(v))?;
                }
            }
            Mode::CheckLemma => {
                positive("lemma.h", self.lemma.h)?;
                if self.lemma.z.is_empty() {
                    return Err(ScenarioError::invalid(
                        "lemma.z",
                        "need at least one sample",
                    ));
                }
                for &z in &self.lemma.z {
                    finite("lemma.z", Some(z))?;
                }
                let known: Vec<&str> = SyntheticField::presets().iter().map(|p| p.0).collect();
                if let Some(bad) = self
                    .lemma
                    .fields
                    .iter()
                    .find(|f| !known.contains(&f.as_str()))
                {
                    return Err(ScenarioError::invalid(
                        "lemma.fields",
                        format!("unknown preset `{bad}`; known: {}", known.join(", ")),
                    ));
                }
            }
        }
        Ok(())
    }

    fn validate_integrator(&self) -> Result<(), ScenarioError> {
        let s = &self.integrator;
        for (name, v) in [
            ("integrator.tolerance", s.tolerance),
            ("integrator.initial_step", s.initial_step),
            ("integrator.min_step", s.min_step),
            ("integrator.max_step", s.max_step),
            ("integrator.blowup_threshold", s.blowup_threshold),
            ("integrator.fixed_step", s.fixed_step.unwrap_or(1.0)),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ScenarioError::invalid(
                    name,
                    format!("must be positive, got {v}"),
                ));
            }
        }
        if s.min_step > s.max_step {
            return Err(ScenarioError::invalid(
                "integrator.min_step",
                "exceeds max_step",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_closed_form() {
        let c =
            parse_config("mode = \"closed_form\"\nlambda0 = 1.0\nomega0 = 0.5\nt = 2.0\n").unwrap();
        assert_eq!(c.mode(), Mode::ClosedForm);
        assert_eq!(c.samples, 201);
        assert_eq!(c.forcing, ForcingSettings::Constant { value: 0.0 });
    }

    #[test]
    fn parse_errors_carry_the_line() {
        let err = parse_config("mode = \"integrate\"\nlambda0 = 1.0\nomega0 = = 2\n").unwrap_err();
        assert!(
            matches!(err, ScenarioError::Parse { line: Some(3), .. }),
            "{err}"
        );
        let err = parse_config("mode = \"integrate\"\n\nbogus = 1\n").unwrap_err();
        assert!(
            matches!(err, ScenarioError::Parse { line: Some(3), .. }),
            "{err}"
        );
    }

    #[test]
    fn validation_names_the_field() {
        let cases = [
            ("mode = \"integrate\"\nlambda0 = 1.0\nomega0 = 0.0\nhorizon = -1.0\n", "horizon"),
            ("mode = \"integrate\"\nlambda0 = 1.0\nhorizon = 1.0\n", "omega0"),
            ("mode = \"pde_sim\"\nhorizon = 0.5\n", "grid"),
            ("lambda0 = 1.0\n", "mode"),
            ("mode = \"check_lemma\"\n[lemma]\nfields = [\"nope\"]\n", "lemma.fields"),
            (
                "mode = \"integrate\"\nlambda0 = 1.0\nomega0 = 0.0\nhorizon = 2.0\n[forcing]\nkind = \"table\"\nt = [0.0, 1.0]\nq = [0.0, 0.0]\n",
                "forcing",
            ),
        ];
        for (text, field) in cases {
            let err = parse_config(text).unwrap_err();
            assert_eq!(err.field(), Some(field), "{text}: {err}");
        }
    }

    #[test]
    fn subcommand_mode_fills_or_conflicts() {
        let c = parse_config_for("", Mode::CheckLemma).unwrap();
        assert_eq!(c.mode(), Mode::CheckLemma);
        let err = parse_config_for("mode = \"pde_sim\"\n", Mode::CheckLemma).unwrap_err();
        assert_eq!(err.field(), Some("mode"));
    }

    #[test]
    fn sine_forcing_builds() {
        let forcing = ForcingSettings::Sine {
            mean: 0.3,
            amplitude: 0.3,
            frequency: 1.0,
            phase: 0.0,
        };
        let f = forcing.build().unwrap();
        assert!((f.eval(std::f64::consts::FRAC_PI_2) - 0.6).abs() < 1e-15);
        assert!(!forcing.is_zero());
    }
}
