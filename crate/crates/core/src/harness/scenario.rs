use serde::{Deserialize, Serialize};

use crate::dialogue::{Device, DialogueSession, ExecutionResult, Status};
use crate::lang::CommandParser;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioScript {
    pub name: String,
    pub utterances: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_final_screen: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioOptions {
    /// Keep going after an utterance fails to parse or ends in a rejection.
    pub continue_after_reject: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtteranceOutcome {
    pub utterance: String,
    /// Canonical MR text when parsing succeeded.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parse_error: Option<String>,
    pub results: Vec<ExecutionResult>,
}

impl UtteranceOutcome {
    pub fn failed(&self) -> bool {
        self.parse_error.is_some() || self.results.iter().any(|r| r.status.is_rejected())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub steps: Vec<UtteranceOutcome>,
    pub final_screen: String,
    /// Number of executed actions.
    pub step_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expectation_met: Option<bool>,
}

impl ScenarioReport {
    pub fn transcript(&self) -> impl Iterator<Item = &ExecutionResult> {
        self.steps.iter().flat_map(|s| s.results.iter())
    }

    pub fn completed(&self) -> bool {
        !self.steps.iter().any(UtteranceOutcome::failed) && self.expectation_met != Some(false)
    }
}

/// Parses each utterance against the current screen's labels, queues it and
/// runs the queue dry. Stops after the first failed utterance unless the
/// options say otherwise.
pub fn run_scenario<D: Device>(
    session: &mut DialogueSession<D>,
    script: &ScenarioScript,
    parser: &dyn CommandParser,
    options: ScenarioOptions,
) -> ScenarioReport {
    let mut steps = Vec::with_capacity(script.utterances.len());
    for utterance in &script.utterances {
        let schema = session.screen_schema();
        let outcome = match parser.parse(utterance, &schema) {
            Err(e) => UtteranceOutcome {
                utterance: utterance.clone(),
                mr: None,
                parse_error: Some(e.to_string()),
                results: Vec::new(),
            },
            Ok(mr) => {
                let mut results = match session.enqueue(&mr) {
                    Ok(_) => Vec::new(),
                    Err(e) => e.rejected.clone(),
                };
                let executed = session.run_until_idle();
                results.splice(0..0, executed);
                UtteranceOutcome {
                    utterance: utterance.clone(),
                    mr: Some(mr.to_string()),
                    parse_error: None,
                    results,
                }
            }
        };
        let failed = outcome.failed();
        steps.push(outcome);
        if failed && !options.continue_after_reject {
            break;
        }
    }
    let final_screen = session.device().current_screen().screen_id.clone();
    let step_count = steps
        .iter()
        .flat_map(|s| &s.results)
        .filter(|r| r.status == Status::Executed)
        .count();
    ScenarioReport {
        name: script.name.clone(),
        expectation_met: script.expected_final_screen.as_ref().map(|s| *s == final_screen),
        steps,
        final_screen,
        step_count,
    }
}
