use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::feedback::feedback_text;
use super::matching::{match_target, MatchContext, Resolution};
use super::{Device, DialogueError};
use crate::featdex::ScoringConfig;
use crate::lang::{ActionKind, Command, Lexicon, MeaningRepresentation};
use crate::screen::{assign_tooltips, collect_interactive, diff_screens, ChangeSet, TooltipMap};

#[derive(Debug, Clone, PartialEq)]
pub struct DialogueConfig {
    /// Target phrases are compared on at most this many characters.
    pub max_phrase_chars: usize,
    pub scoring: ScoringConfig,
}

impl Default for DialogueConfig {
    fn default() -> Self {
        Self {
            max_phrase_chars: 50,
            scoring: ScoringConfig::default(),
        }
    }
}

/// A queued command. `resolution` is `None` when matching waits until the
/// command reaches the head of the queue, because an earlier command in
/// the queue may change the screen first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRequest {
    pub command: Command,
    pub resolution: Option<Resolution>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Executed,
    NoEffect,
    Rejected { reason: DialogueError },
}

impl Status {
    pub fn is_rejected(&self) -> bool {
        matches!(self, Status::Rejected { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionResult {
    pub command: String,
    pub action: ActionKind,
    pub target: String,
    pub resolution: Option<Resolution>,
    #[serde(flatten)]
    pub status: Status,
    pub changes: ChangeSet,
    pub feedback: String,
    pub screen_before: String,
    pub screen_after: String,
}

impl ExecutionResult {
    fn new(
        command: &Command,
        resolution: Option<Resolution>,
        status: Status,
        changes: ChangeSet,
        before: String,
        after: String,
    ) -> Self {
        let mut r = Self {
            command: command.to_string(),
            action: command.action(),
            target: command.target().spoken(),
            resolution,
            status,
            changes,
            feedback: String::new(),
            screen_before: before,
            screen_after: after,
        };
        r.feedback = feedback_text(&r);
        r
    }

    fn rejected(command: &Command, reason: DialogueError, screen: &str) -> Self {
        Self::new(
            command,
            None,
            Status::Rejected { reason },
            ChangeSet::default(),
            screen.to_string(),
            screen.to_string(),
        )
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }
}

/// A command of an MR failed to resolve. Commands before it stay queued;
/// it and every later command are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("command {command_index}: {error}")]
pub struct EnqueueError {
    pub command_index: usize,
    pub error: DialogueError,
    pub queued: usize,
    pub rejected: Vec<ExecutionResult>,
}

pub struct DialogueSession<D: Device> {
    device: D,
    lexicon: Lexicon,
    config: DialogueConfig,
    queue: VecDeque<ActionRequest>,
    tooltips: TooltipMap,
    focus: Option<(String, String)>,
    transcript: Vec<ExecutionResult>,
    rejections: Vec<ExecutionResult>,
}

fn is_navigational(action: ActionKind) -> bool {
    matches!(action, ActionKind::Open | ActionKind::Press)
}

impl<D: Device> DialogueSession<D> {
    pub fn new(device: D, lexicon: Lexicon, config: DialogueConfig) -> Self {
        let tooltips = assign_tooltips(&collect_interactive(device.current_screen()));
        Self {
            device,
            lexicon,
            config,
            queue: VecDeque::new(),
            tooltips,
            focus: None,
            transcript: Vec::new(),
            rejections: Vec::new(),
        }
    }

    pub fn device(&self) -> &D {
        &self.device
    }

    /// Mutable device access for setup. Refreshes tooltips afterwards.
    pub fn with_device<R>(&mut self, f: impl FnOnce(&mut D) -> R) -> R {
        let r = f(&mut self.device);
        self.refresh();
        r
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn tooltips(&self) -> &TooltipMap {
        &self.tooltips
    }

    pub fn queue(&self) -> &VecDeque<ActionRequest> {
        &self.queue
    }

    pub fn transcript(&self) -> &[ExecutionResult] {
        &self.transcript
    }

    /// Commands refused at enqueue time, in order.
    pub fn rejections(&self) -> &[ExecutionResult] {
        &self.rejections
    }

    /// Button labels on the current screen, for use as a parsing schema.
    pub fn screen_schema(&self) -> Vec<String> {
        let mut labels: Vec<String> = collect_interactive(self.device.current_screen())
            .into_iter()
            .filter_map(|e| e.label)
            .collect();
        labels.dedup();
        labels
    }

    fn refresh(&mut self) {
        let screen = self.device.current_screen();
        self.tooltips = assign_tooltips(&collect_interactive(screen));
        if let Some((screen_id, node_id)) = &self.focus {
            if *screen_id != screen.screen_id || screen.find(node_id).is_none() {
                self.focus = None;
            }
        }
    }

    fn resolve_now(&self, command: &Command) -> Result<Resolution, DialogueError> {
        let ctx = MatchContext {
            screen: self.device.current_screen(),
            tooltips: &self.tooltips,
            lexicon: &self.lexicon,
            index: self.device.feature_index(),
            scoring: &self.config.scoring,
            focus: self.focus.as_ref().map(|(_, n)| n.as_str()),
            max_phrase_chars: self.config.max_phrase_chars,
        };
        match_target(command, &ctx)
    }

    /// Queues every command of `mr` in order. Commands are resolved now
    /// unless an earlier queued command may navigate away first; tooltip
    /// numbers and app launches always resolve now. On failure the earlier
    /// commands stay queued and the failing command and all later ones are
    /// recorded as rejected.
    pub fn enqueue(&mut self, mr: &MeaningRepresentation) -> Result<usize, Box<EnqueueError>> {
        let mut pending_nav = self
            .queue
            .iter()
            .any(|r| is_navigational(r.command.action()));
        let mut queued = 0;
        let commands = mr.commands();
        for (i, command) in commands.iter().enumerate() {
            let eager = !pending_nav
                || command.action() == ActionKind::Open
                || matches!(command.target(), crate::lang::Target::Tooltip { .. });
            let resolution = if eager {
                match self.resolve_now(command) {
                    Ok(r) => Some(r),
                    Err(e) => {
                        let screen = self.device.current_screen().screen_id.clone();
                        let mut rejected = vec![ExecutionResult::rejected(command, e.clone(), &screen)];
                        for later in &commands[i + 1..] {
                            rejected.push(ExecutionResult::rejected(later, e.clone(), &screen));
                        }
                        self.rejections.extend(rejected.iter().cloned());
                        return Err(Box::new(EnqueueError {
                            command_index: i,
                            error: e,
                            queued,
                            rejected,
                        }));
                    }
                }
            } else {
                None
            };
            pending_nav |= is_navigational(command.action());
            self.queue.push_back(ActionRequest {
                command: command.clone(),
                resolution,
            });
            queued += 1;
        }
        Ok(queued)
    }

    fn apply(&mut self, resolution: &Resolution) -> Result<(), DialogueError> {
        let screen = self.device.current_screen();
        if let (Some(screen_id), Some(node_id)) = (resolution.screen_id(), resolution.node_id()) {
            if screen.screen_id != screen_id || screen.find(node_id).is_none() {
                return Err(DialogueError::TargetNotFound {
                    target: node_id.to_string(),
                });
            }
        }
        match resolution {
            Resolution::NodeRef { node_id, .. } => {
                let editable = screen.find(node_id).is_some_and(|n| n.editable);
                let screen_id = screen.screen_id.clone();
                self.device.tap(node_id)?;
                if editable {
                    self.focus = Some((screen_id, node_id.clone()));
                }
            }
            Resolution::Input { node_id, text, .. } => self.device.input_text(node_id, text)?,
            Resolution::Scroll { node_id, direction, .. } => self.device.scroll(node_id, *direction)?,
            Resolution::Intent { intent } => self.device.launch(intent)?,
        }
        Ok(())
    }

    /// Executes the head of the queue and records the outcome.
    pub fn step(&mut self) -> Result<ExecutionResult, DialogueError> {
        let request = self.queue.pop_front().ok_or(DialogueError::EmptyQueue)?;
        let before = self.device.current_screen().clone();
        let resolution = match request.resolution {
            Some(r) => Ok(r),
            None => self.resolve_now(&request.command),
        };
        let result = match resolution {
            Err(e) => ExecutionResult::rejected(&request.command, e, &before.screen_id),
            Ok(resolution) => match self.apply(&resolution) {
                Err(e) => {
                    let after = self.device.current_screen().screen_id.clone();
                    let mut r = ExecutionResult::rejected(&request.command, e, &after);
                    r.screen_before = before.screen_id.clone();
                    r.resolution = Some(resolution);
                    r
                }
                Ok(()) => {
                    let after = self.device.current_screen();
                    let changes = diff_screens(&before, after);
                    let status = if changes.is_empty() {
                        Status::NoEffect
                    } else {
                        Status::Executed
                    };
                    ExecutionResult::new(
                        &request.command,
                        Some(resolution),
                        status,
                        changes,
                        before.screen_id.clone(),
                        after.screen_id.clone(),
                    )
                }
            },
        };
        self.refresh();
        self.transcript.push(result.clone());
        Ok(result)
    }

    /// Drops every queued command without running it.
    pub fn clear_queue(&mut self) -> usize {
        let n = self.queue.len();
        self.queue.clear();
        n
    }

    /// Steps until the queue is empty or a step is rejected; a rejection
    /// drops the rest of the queue.
    pub fn run_until_idle(&mut self) -> Vec<ExecutionResult> {
        let mut out = Vec::new();
        while let Ok(result) = self.step() {
            let rejected = result.status.is_rejected();
            out.push(result);
            if rejected {
                self.clear_queue();
                break;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::dialogue::DeviceError;
    use crate::featdex::FeatureIndex;
    use crate::lang::Direction;
    use crate::manifest::LaunchIntent;
    use crate::screen::{Bounds, ScreenTree, UiNode};

    struct MockDevice {
        screens: BTreeMap<String, ScreenTree>,
        transitions: BTreeMap<(String, String), String>,
        current: ScreenTree,
        index: FeatureIndex,
    }

    impl MockDevice {
        fn new() -> Self {
            let r = || UiNode::new("root", "frame", Bounds::new(0, 0, 1000, 1000));
            let btn = |id: &str, y: i32, text: &str| {
                UiNode::new(id, "button", Bounds::new(0, y, 400, y + 50)).with_text(text).clickable()
            };
            let home = ScreenTree::new(
                "home",
                r().with_child(btn("settings", 0, "Settings"))
                    .with_child(btn("logo", 100, "Logo"))
                    .with_child(UiNode::new("gear", "image", Bounds::new(900, 0, 950, 50)).clickable())
                    .with_child(UiNode::new("list", "list", Bounds::new(0, 200, 1000, 1000)).scrollable()),
            )
            .unwrap();
            let settings = ScreenTree::new(
                "settings",
                r().with_child(btn("back", 0, "Back"))
                    .with_child(UiNode::new("name", "input", Bounds::new(0, 100, 400, 150)).editable()),
            )
            .unwrap();
            let screens: BTreeMap<String, ScreenTree> =
                [home.clone(), settings].into_iter().map(|s| (s.screen_id.clone(), s)).collect();
            let transitions = BTreeMap::from([
                (("home".into(), "settings".into()), "settings".into()),
                (("home".into(), "gear".into()), "settings".into()),
                (("settings".into(), "back".into()), "home".into()),
            ]);
            Self {
                screens,
                transitions,
                current: home,
                index: FeatureIndex::empty(),
            }
        }
    }

    impl Device for MockDevice {
        fn current_screen(&self) -> &ScreenTree {
            &self.current
        }

        fn feature_index(&self) -> &FeatureIndex {
            &self.index
        }

        fn tap(&mut self, node_id: &str) -> Result<(), DeviceError> {
            if let Some(next) = self.transitions.get(&(self.current.screen_id.clone(), node_id.to_string())) {
                self.current = self.screens[next].clone();
            }
            Ok(())
        }

        fn input_text(&mut self, node_id: &str, text: &str) -> Result<(), DeviceError> {
            self.current.find_mut(node_id).unwrap().text = Some(text.to_string());
            Ok(())
        }

        fn scroll(&mut self, node_id: &str, direction: Direction) -> Result<(), DeviceError> {
            let n = self.current.find_mut(node_id).unwrap();
            n.scroll_offset = match direction {
                Direction::Down | Direction::Right => n.scroll_offset + 1,
                _ => (n.scroll_offset - 1).max(0),
            };
            Ok(())
        }

        fn launch(&mut self, _: &LaunchIntent) -> Result<(), DeviceError> {
            Ok(())
        }
    }

    fn session() -> DialogueSession<MockDevice> {
        DialogueSession::new(MockDevice::new(), Lexicon::default(), DialogueConfig::default())
    }

    fn mr(cmds: Vec<Command>) -> MeaningRepresentation {
        MeaningRepresentation::new(cmds).unwrap()
    }

    #[test]
    fn executes_in_order_with_validation() {
        let mut s = session();
        let n = s
            .enqueue(&mr(vec![
                Command::swipe(Direction::Down),
                Command::press("settings"),
                Command::enter("fish"),
            ]))
            .unwrap();
        assert_eq!(n, 3);
        assert_eq!(s.queue().len(), 3);
        assert!(s.queue()[2].resolution.is_none(), "follows a navigation, so deferred");
        let results = s.run_until_idle();
        let statuses: Vec<&Status> = results.iter().map(|r| &r.status).collect();
        assert_eq!(statuses, [&Status::Executed, &Status::Executed, &Status::Executed]);
        assert_eq!(results[1].screen_after, "settings");
        assert!(results[2].changes.text_changed.contains("name"));
        assert_eq!(results[1].feedback, "done — press settings");
        assert_eq!(s.transcript().len(), 3);
    }

    #[test]
    fn no_effect_when_nothing_changes() {
        let mut s = session();
        s.enqueue(&mr(vec![Command::press("logo")])).unwrap();
        let r = s.step().unwrap();
        assert_eq!(r.status, Status::NoEffect);
        assert!(r.changes.is_empty());
        assert_eq!(r.feedback, "nothing happened");
    }

    #[test]
    fn scroll_up_at_top_is_no_effect() {
        let mut s = session();
        s.enqueue(&mr(vec![Command::swipe(Direction::Up)])).unwrap();
        assert_eq!(s.step().unwrap().status, Status::NoEffect);
    }

    #[test]
    fn enqueue_failure_keeps_earlier_commands() {
        let mut s = session();
        let err = s
            .enqueue(&mr(vec![
                Command::swipe(Direction::Down),
                Command::press("missing"),
                Command::swipe(Direction::Up),
            ]))
            .unwrap_err();
        assert_eq!(err.command_index, 1);
        assert_eq!(err.queued, 1);
        assert_eq!(err.rejected.len(), 2);
        assert_eq!(s.queue().len(), 1);
        assert_eq!(s.rejections().len(), 2);
        assert_eq!(err.rejected[0].feedback, "could not find missing");
    }

    #[test]
    fn rejection_aborts_the_queue() {
        let mut s = session();
        s.enqueue(&mr(vec![
            Command::press("settings"),
            Command::press("nowhere"),
            Command::press("back"),
        ]))
        .unwrap();
        let results = s.run_until_idle();
        assert_eq!(results.len(), 2);
        assert_eq!(results[0].status, Status::Executed);
        assert!(results[1].status.is_rejected());
        assert!(s.queue().is_empty());
        assert_eq!(s.transcript().len(), 2);
    }

    #[test]
    fn stale_tooltip_is_refused() {
        let mut s = session();
        assert_eq!(s.tooltips().node_for(1), Some("gear"));
        s.enqueue(&mr(vec![Command::press("settings"), Command::press_number(1)]))
            .unwrap();
        let results = s.run_until_idle();
        assert_eq!(results[0].status, Status::Executed);
        let Status::Rejected { reason } = &results[1].status else {
            panic!("stale tooltip must be rejected");
        };
        assert_eq!(reason.code(), "TargetNotFound");
    }

    #[test]
    fn empty_queue() {
        let mut s = session();
        assert_eq!(s.step().unwrap_err(), DialogueError::EmptyQueue);
        assert!(s.run_until_idle().is_empty());
        assert!(s.transcript().is_empty());
    }

    #[test]
    fn transcript_lines_are_json() {
        let mut s = session();
        s.enqueue(&mr(vec![Command::press("settings")])).unwrap();
        let r = s.step().unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["status"], "executed");
        assert_eq!(v["screen_before"], "home");
        assert_eq!(v["screen_after"], "settings");
        assert_eq!(v["command"], "( PRESS , ' settings ' )");
    }

    #[test]
    fn ambiguity_feedback_lists_candidates() {
        let err = DialogueError::AmbiguousTarget {
            target: "burger".into(),
            candidates: vec!["healthy burger".into(), "classic burger".into()],
        };
        let r = ExecutionResult::rejected(&Command::press("burger"), err, "s");
        assert_eq!(r.feedback, "could not find burger; candidates: healthy burger, classic burger");
    }
}
