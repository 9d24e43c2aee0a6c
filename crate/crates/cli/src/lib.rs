//! Command-line front end and HTTP service for the voxnav engine.

pub mod cli;
pub mod service;

pub use cli::{run, Cli, CliError, Cmd};
pub use service::{router, AppState, CommandRequest, CommandResponse, ErrorBody, ScreenSnapshot, ServiceEvent};
