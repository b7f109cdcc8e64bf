use std::process::ExitCode;

use slicereg::geocheck::GeoError;
use slicereg::maps::MapError;
use slicereg::series::SeriesError;
use slicereg::verify::VerifyError;
use thiserror::Error;

/// Pass.
pub const EXIT_PASS: u8 = 0;
/// A bound or check was evaluated and failed.
pub const EXIT_FAIL: u8 = 1;
/// Malformed input or flags.
pub const EXIT_INPUT: u8 = 2;
/// Input outside the mathematical domain of the operation.
pub const EXIT_DOMAIN: u8 = 3;
/// A theorem hypothesis failed its sampled check.
pub const EXIT_HYPOTHESIS: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Hypothesis(_) => EXIT_HYPOTHESIS,
        })
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::Empty | SeriesError::NonFinite { .. } | SeriesError::DegreeMismatch { .. } => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::Series(s) => s.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<GeoError> for CliError {
    fn from(e: GeoError) -> Self {
        match e {
            GeoError::InvalidGrid(_) => CliError::Input(e.to_string()),
            GeoError::Series(s) => s.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::HypothesisFailed(_)
            | VerifyError::PrerequisiteNotMet(_)
            | VerifyError::SchwarzViolation { .. } => CliError::Hypothesis(e.to_string()),
            VerifyError::InvalidTail => CliError::Input(e.to_string()),
            VerifyError::Series(s) => s.into(),
            VerifyError::Geo(g) => g.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
