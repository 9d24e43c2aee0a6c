//! Voice-command navigation engine.
//!
//! Natural-language commands are parsed into meaning representations and
//! executed against a simulated device. App capabilities come from binary
//! manifests: deep links and exported components are extracted, given
//! keywords, and ranked so a command like "open my recipes in world cuisines"
//! lands directly on the right screen.

pub mod axml;
pub mod manifest;
pub mod featdex;
pub mod lang;
pub mod screen;
pub mod dialogue;
pub mod harness;
pub mod text;

pub use axml::{decode_manifest, encode_manifest, XmlDocument};
pub use dialogue::{Device, DialogueConfig, DialogueSession, ExecutionResult, Status};
pub use featdex::{EvalCase, EvalReport, FeatureIndex, ScoringConfig};
pub use harness::{AppBundle, AppSummary, ScenarioReport, ScenarioScript, SimDevice};
pub use lang::{Command, CommandParser, Lexicon, MeaningRepresentation, RuleParser};
pub use manifest::{AppPackage, LaunchIntent};
pub use screen::{ScreenTree, TooltipMap, UiNode};
