//! Simulated device, app bundles, intent resolution, scenario runs and the
//! bundled fixture corpus.

mod bundle;
mod device;
pub mod fixtures;
mod scenario;

use thiserror::Error;

use crate::axml::AxmlError;
use crate::dialogue::DeviceError;
use crate::featdex::FeatdexError;
use crate::lang::LangError;
use crate::manifest::ManifestError;
use crate::screen::ScreenError;

pub use bundle::{AppBundle, Bindings, ManifestSource, ScreensFile, Transition};
pub use device::{AppSummary, SimDevice, HOME_SCREEN_ID};
pub use scenario::{run_scenario, ScenarioOptions, ScenarioReport, ScenarioScript, UtteranceOutcome};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: invalid JSON: {message}")]
    Json { path: String, message: String },
    #[error(transparent)]
    Axml(#[from] AxmlError),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Featdex(#[from] FeatdexError),
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Screen(#[from] ScreenError),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
}

impl HarnessError {
    pub(crate) fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub(crate) fn json(path: &std::path::Path, e: serde_json::Error) -> Self {
        HarnessError::Json {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
