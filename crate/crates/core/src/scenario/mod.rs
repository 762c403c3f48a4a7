//! Scenario files: a TOML document naming a mode and its parameters, executed into
//! CSV/JSON artifacts plus a [`RunSummary`].
//!
//! ```toml
//! mode = "integrate"
//! lambda0 = 2.0
//! omega0 = 0.0
//! horizon = 10.0
//!
//! [forcing]
//! kind = "sine"
//! mean = 0.3
//! amplitude = 0.3
//! ```

mod config;
mod run;

pub use config::{
    parse_config, parse_config_for, ForcingSettings, GridSettings, IntegratorSettings,
    LemmaSettings, Mode, OutputSettings, PdeSettings, ProfileSettings, ScenarioConfig,
};
pub use run::{run, RunSummary, SummaryStatus, INTEGRATE_CSV_HEADER};

use thiserror::Error;

use crate::axis_ode::AxisOdeError;
use crate::euler::EulerError;
use crate::lemma::LemmaError;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{}", match .line {
        Some(l) => format!("config parse error at line {l}: {message}"),
        None => format!("config parse error: {message}"),
    })]
    Parse {
        line: Option<usize>,
        message: String,
    },
    #[error("invalid config field `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error(transparent)]
    Ode(#[from] AxisOdeError),
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    Lemma(#[from] LemmaError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ScenarioError {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// The offending field of a validation error.
    pub fn field(&self) -> Option<&str> {
        match self {
            Self::Validation { field, .. } => Some(field),
            _ => None,
        }
    }
}
