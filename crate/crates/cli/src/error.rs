use std::path::PathBuf;

use egf_core::cohomology_solver::CohomologyError;
use egf_core::flow_engine::FlowError;
use egf_core::revolution_geometry::RevolutionError;
use egf_core::soliton_lab::SolitonError;
use egf_core::sym_curvature::CurvatureError;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;
pub const EXIT_RESONANCE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Soliton(#[from] SolitonError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Revolution(#[from] RevolutionError),
}

impl CliError {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        let flow = |e: &FlowError| match e {
            FlowError::BlowUp { .. } | FlowError::NoProgress { .. } | FlowError::ShockFormed { .. } => EXIT_BLOWUP,
            _ => EXIT_VALIDATION,
        };
        match self {
            Self::Validation { .. } => EXIT_VALIDATION,
            Self::Io { .. } | Self::Csv(_) | Self::Json(_) => EXIT_IO,
            Self::Flow(e) => flow(e),
            Self::Revolution(RevolutionError::Flow(e)) => flow(e),
            Self::Cohomology(CohomologyError::Resonance { .. }) => EXIT_RESONANCE,
            Self::Curvature(_) | Self::Soliton(_) | Self::Cohomology(_) | Self::Revolution(_) => EXIT_VALIDATION,
        }
    }
}
