//! Simulated accessibility trees: interactive element discovery, label
//! resolution, numbered tooltips for unlabeled elements, and screen diffs.

mod diff;
mod labels;
mod tree;

use thiserror::Error;

pub use diff::{diff_screens, ChangeSet};
pub use labels::{assign_tooltips, collect_interactive, resolve_label, InteractiveElement, LabelSource, TooltipMap};
pub use tree::{center_distance, overlaps, Bounds, ScreenTree, UiNode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScreenError {
    #[error("duplicate node id {0:?}")]
    DuplicateId(String),
    #[error("node {0:?} has inverted bounds")]
    InvalidBounds(String),
    #[error("node {0:?} lies outside the root bounds")]
    OutsideRoot(String),
    #[error("no node with id {0:?}")]
    UnknownNode(String),
}
