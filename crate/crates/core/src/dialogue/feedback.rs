use super::session::{ExecutionResult, Status};
use super::DialogueError;

/// Spoken confirmation for a step.
pub fn feedback_text(result: &ExecutionResult) -> String {
    let action = result.action.as_str().to_lowercase();
    match &result.status {
        Status::Executed => format!("done — {action} {}", result.target),
        Status::NoEffect => "nothing happened".to_string(),
        Status::Rejected { reason } => match reason {
            DialogueError::AmbiguousTarget { target, candidates } => {
                format!("could not find {target}; candidates: {}", candidates.join(", "))
            }
            DialogueError::TargetNotFound { .. } => format!("could not find {}", result.target),
            DialogueError::NoEditableField => "could not find a text field".to_string(),
            DialogueError::NoScrollable => "could not find anything to scroll".to_string(),
            DialogueError::Device { error } => format!("could not {action} {}: {error}", result.target),
            DialogueError::EmptyQueue => "nothing to do".to_string(),
        },
    }
}
