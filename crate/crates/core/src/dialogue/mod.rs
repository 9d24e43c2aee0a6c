//! Dialogue manager: resolves parsed commands against the current screen or
//! the feature index, queues them in order, executes them on a device and
//! validates each step by diffing the screen.

mod feedback;
mod matching;
mod session;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::featdex::FeatureIndex;
use crate::lang::Direction;
use crate::manifest::LaunchIntent;
use crate::screen::ScreenTree;

pub use feedback::feedback_text;
pub use matching::{match_target, MatchContext, Resolution};
pub use session::{ActionRequest, DialogueConfig, DialogueSession, EnqueueError, ExecutionResult, Status};

/// Failures of device operations.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DeviceError {
    #[error("package {package} is not installed")]
    PackageNotInstalled { package: String },
    #[error("{package} has no activity {activity}")]
    ActivityNotFound { package: String, activity: String },
    #[error("no node {node_id} on screen {screen_id}")]
    UnknownNode { node_id: String, screen_id: String },
    #[error("node {node_id} does not accept {operation}")]
    Unsupported { node_id: String, operation: String },
}

/// Why a command could not be matched or executed.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DialogueError {
    #[error("could not find {target}")]
    TargetNotFound { target: String },
    #[error("{target} matches several elements: {}", candidates.join(", "))]
    AmbiguousTarget { target: String, candidates: Vec<String> },
    #[error("no text field to type into")]
    NoEditableField,
    #[error("nothing to scroll")]
    NoScrollable,
    #[error("device error: {error}")]
    Device { error: DeviceError },
    #[error("the action queue is empty")]
    EmptyQueue,
}

impl DialogueError {
    pub fn code(&self) -> &'static str {
        match self {
            DialogueError::TargetNotFound { .. } => "TargetNotFound",
            DialogueError::AmbiguousTarget { .. } => "AmbiguousTarget",
            DialogueError::NoEditableField => "NoEditableField",
            DialogueError::NoScrollable => "NoScrollable",
            DialogueError::Device { .. } => "DeviceError",
            DialogueError::EmptyQueue => "EmptyQueue",
        }
    }
}

impl From<DeviceError> for DialogueError {
    fn from(error: DeviceError) -> Self {
        DialogueError::Device { error }
    }
}

/// What the dialogue manager needs from a device. Every mutating call
/// leaves a fresh snapshot behind `current_screen`.
pub trait Device {
    fn current_screen(&self) -> &ScreenTree;
    /// Feature index over the installed apps.
    fn feature_index(&self) -> &FeatureIndex;
    fn tap(&mut self, node_id: &str) -> Result<(), DeviceError>;
    fn input_text(&mut self, node_id: &str, text: &str) -> Result<(), DeviceError>;
    fn scroll(&mut self, node_id: &str, direction: Direction) -> Result<(), DeviceError>;
    fn launch(&mut self, intent: &LaunchIntent) -> Result<(), DeviceError>;
}
