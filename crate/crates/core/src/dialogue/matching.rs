use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::DialogueError;
use crate::featdex::{resolve, FeatdexError, FeatureIndex, ScoringConfig};
use crate::lang::{ActionKind, Command, Direction, Lexicon, Target};
use crate::manifest::LaunchIntent;
use crate::screen::{collect_interactive, InteractiveElement, ScreenTree, TooltipMap};
use crate::text;

/// How a command will be carried out. Node-bound variants remember the
/// screen they were resolved on so stale references can be refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Resolution {
    NodeRef { node_id: String, screen_id: String },
    Intent { intent: LaunchIntent },
    Scroll { node_id: String, direction: Direction, screen_id: String },
    Input { node_id: String, text: String, screen_id: String },
}

impl Resolution {
    pub fn screen_id(&self) -> Option<&str> {
        match self {
            Resolution::NodeRef { screen_id, .. }
            | Resolution::Scroll { screen_id, .. }
            | Resolution::Input { screen_id, .. } => Some(screen_id),
            Resolution::Intent { .. } => None,
        }
    }

    pub fn node_id(&self) -> Option<&str> {
        match self {
            Resolution::NodeRef { node_id, .. }
            | Resolution::Scroll { node_id, .. }
            | Resolution::Input { node_id, .. } => Some(node_id),
            Resolution::Intent { .. } => None,
        }
    }
}

/// Everything target matching reads.
pub struct MatchContext<'a> {
    pub screen: &'a ScreenTree,
    pub tooltips: &'a TooltipMap,
    pub lexicon: &'a Lexicon,
    pub index: &'a FeatureIndex,
    pub scoring: &'a ScoringConfig,
    /// Editable node that last received a press, if still on screen.
    pub focus: Option<&'a str>,
    pub max_phrase_chars: usize,
}

fn truncate(s: &str, max: usize) -> String {
    s.chars().take(max).collect()
}

pub fn match_target(command: &Command, ctx: &MatchContext<'_>) -> Result<Resolution, DialogueError> {
    let screen_id = ctx.screen.screen_id.clone();
    match (command.action(), command.target()) {
        (ActionKind::Open, Target::App { app, feature }) => {
            let intent = resolve(ctx.index, app, feature.as_deref(), ctx.scoring).map_err(|e| match e {
                FeatdexError::AmbiguousApp { candidates, .. } => DialogueError::AmbiguousTarget {
                    target: app.clone(),
                    candidates,
                },
                _ => DialogueError::TargetNotFound { target: app.clone() },
            })?;
            Ok(Resolution::Intent { intent })
        }
        (ActionKind::Press, Target::Tooltip { number }) => ctx
            .tooltips
            .node_for(*number)
            .map(|id| Resolution::NodeRef {
                node_id: id.to_string(),
                screen_id,
            })
            .ok_or_else(|| DialogueError::TargetNotFound {
                target: format!("number {number}"),
            }),
        (ActionKind::Press, Target::Button { label }) => {
            let elements = collect_interactive(ctx.screen);
            let node_id = match_label(label, &elements, ctx.lexicon, ctx.max_phrase_chars)?;
            Ok(Resolution::NodeRef { node_id, screen_id })
        }
        (ActionKind::Enter, Target::Text { literal }) => {
            let editable: Vec<&str> = ctx
                .screen
                .preorder()
                .into_iter()
                .filter(|n| n.editable)
                .map(|n| n.id.as_str())
                .collect();
            let node = match editable.as_slice() {
                [only] => *only,
                [] => return Err(DialogueError::NoEditableField),
                many => ctx
                    .focus
                    .filter(|f| many.contains(f))
                    .ok_or(DialogueError::NoEditableField)?,
            };
            Ok(Resolution::Input {
                node_id: node.to_string(),
                text: literal.clone(),
                screen_id,
            })
        }
        (ActionKind::Swipe, Target::Direction { direction }) => {
            let mut queue = VecDeque::from([&ctx.screen.root]);
            while let Some(n) = queue.pop_front() {
                if n.scrollable {
                    return Ok(Resolution::Scroll {
                        node_id: n.id.clone(),
                        direction: *direction,
                        screen_id,
                    });
                }
                queue.extend(n.children.iter());
            }
            Err(DialogueError::NoScrollable)
        }
        _ => unreachable!("commands pair actions with matching targets"),
    }
}

fn pick<'e>(
    phrase: &str,
    scored: impl Iterator<Item = ((usize, u64), &'e InteractiveElement)>,
) -> Result<Option<String>, DialogueError> {
    let mut best: Option<(usize, u64)> = None;
    let mut winners: Vec<&InteractiveElement> = Vec::new();
    for (score, e) in scored {
        if score.0 == 0 {
            continue;
        }
        match best {
            Some(b) if score < b => {}
            Some(b) if score == b => winners.push(e),
            _ => {
                best = Some(score);
                winners = vec![e];
            }
        }
    }
    match winners.as_slice() {
        [] => Ok(None),
        [one] => Ok(Some(one.node_id.clone())),
        many => Err(DialogueError::AmbiguousTarget {
            target: phrase.to_string(),
            candidates: many.iter().filter_map(|e| e.label.clone()).collect(),
        }),
    }
}

/// Exact normalized match, then token overlap, then overlap after one-hop
/// synonym expansion. Overlap ranks by matched count, then by the share of
/// the label covered.
fn match_label(
    label: &str,
    elements: &[InteractiveElement],
    lexicon: &Lexicon,
    max_chars: usize,
) -> Result<String, DialogueError> {
    let phrase = text::normalize(&truncate(label, max_chars));
    let labeled: Vec<(&InteractiveElement, String)> = elements
        .iter()
        .filter_map(|e| e.label.as_ref().map(|l| (e, text::normalize(&truncate(l, max_chars)))))
        .collect();
    let exact = labeled
        .iter()
        .filter(|(_, l)| *l == phrase)
        .map(|(e, _)| ((1, 0), *e));
    if let Some(id) = pick(&phrase, exact)? {
        return Ok(id);
    }
    let base: BTreeSet<String> = text::tokens(&phrase).into_iter().collect();
    let mut expanded = base.clone();
    for t in &base {
        for s in lexicon.synonyms_of(t) {
            expanded.extend(text::tokens(s));
        }
    }
    for query in [&base, &expanded] {
        let scored = labeled.iter().map(|(e, l)| {
            let toks = text::tokens(l);
            let hits = toks.iter().filter(|t| query.contains(*t)).count();
            let share = if toks.is_empty() { 0 } else { (hits as u64 * 1_000_000) / toks.len() as u64 };
            ((hits, share), *e)
        });
        if let Some(id) = pick(&phrase, scored)? {
            return Ok(id);
        }
    }
    Err(DialogueError::TargetNotFound { target: phrase })
}
