//! Meaning representations and their canonical text form.
//!
//! A command renders as `( ACTION , ' arg ' [, ' arg2 ' ] )`; chains join
//! commands with ` ; `. Quoted arguments escape `\` and `'` with a
//! backslash. Tooltip targets render as `#N` and directions as bare
//! upper-case words.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::LangError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ActionKind {
    Open,
    Press,
    Enter,
    Swipe,
}

impl ActionKind {
    pub const ALL: [ActionKind; 4] = [ActionKind::Open, ActionKind::Press, ActionKind::Enter, ActionKind::Swipe];

    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::Open => "OPEN",
            ActionKind::Press => "PRESS",
            ActionKind::Enter => "ENTER",
            ActionKind::Swipe => "SWIPE",
        }
    }

    pub fn parse(s: &str) -> Option<ActionKind> {
        ActionKind::ALL.into_iter().find(|a| a.as_str().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "UP",
            Direction::Down => "DOWN",
            Direction::Left => "LEFT",
            Direction::Right => "RIGHT",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.as_str().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Target {
    App { app: String, feature: Option<String> },
    Button { label: String },
    Tooltip { number: u32 },
    Text { literal: String },
    Direction { direction: Direction },
}

impl Target {
    /// Which action this target type belongs to.
    pub fn action(&self) -> ActionKind {
        match self {
            Target::App { .. } => ActionKind::Open,
            Target::Button { .. } | Target::Tooltip { .. } => ActionKind::Press,
            Target::Text { .. } => ActionKind::Enter,
            Target::Direction { .. } => ActionKind::Swipe,
        }
    }

    /// Canonical argument text, without the surrounding action.
    pub fn canonical(&self) -> String {
        match self {
            Target::App { app, feature: None } => quote(app),
            Target::App {
                app,
                feature: Some(feature),
            } => format!("{} , {}", quote(app), quote(feature)),
            Target::Button { label } => quote(label),
            Target::Tooltip { number } => format!("#{number}"),
            Target::Text { literal } => quote(literal),
            Target::Direction { direction } => direction.as_str().to_string(),
        }
    }

    /// Short human rendering for feedback messages.
    pub fn spoken(&self) -> String {
        match self {
            Target::App { app, feature: None } => app.to_lowercase(),
            Target::App {
                app,
                feature: Some(feature),
            } => format!("{} in {}", feature.to_lowercase(), app.to_lowercase()),
            Target::Button { label } => label.to_lowercase(),
            Target::Tooltip { number } => format!("number {number}"),
            Target::Text { literal } => literal.clone(),
            Target::Direction { direction } => direction.as_str().to_lowercase(),
        }
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 4);
    out.push_str("' ");
    for c in s.chars() {
        if c == '\\' || c == '\'' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push_str(" '");
    out
}

/// One action-target pair. The target type always agrees with the action.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Command {
    action: ActionKind,
    target: Target,
}

impl Command {
    pub fn new(action: ActionKind, target: Target) -> Result<Self, LangError> {
        if target.action() != action {
            return Err(LangError::MalformedMrText(format!(
                "{action} cannot take a {} target",
                target.action()
            )));
        }
        Ok(Self { action, target })
    }

    pub fn open(app: impl Into<String>, feature: Option<&str>) -> Self {
        Self {
            action: ActionKind::Open,
            target: Target::App {
                app: app.into(),
                feature: feature.map(str::to_string),
            },
        }
    }

    pub fn press(label: impl Into<String>) -> Self {
        Self {
            action: ActionKind::Press,
            target: Target::Button { label: label.into() },
        }
    }

    pub fn press_number(number: u32) -> Self {
        Self {
            action: ActionKind::Press,
            target: Target::Tooltip { number },
        }
    }

    pub fn enter(literal: impl Into<String>) -> Self {
        Self {
            action: ActionKind::Enter,
            target: Target::Text { literal: literal.into() },
        }
    }

    pub fn swipe(direction: Direction) -> Self {
        Self {
            action: ActionKind::Swipe,
            target: Target::Direction { direction },
        }
    }

    pub fn action(&self) -> ActionKind {
        self.action
    }

    pub fn target(&self) -> &Target {
        &self.target
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "( {} , {} )", self.action, self.target.canonical())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeaningRepresentation {
    commands: Vec<Command>,
}

impl MeaningRepresentation {
    pub fn new(commands: Vec<Command>) -> Result<Self, LangError> {
        if commands.is_empty() {
            return Err(LangError::MalformedMrText("empty command list".into()));
        }
        Ok(Self { commands })
    }

    pub fn single(command: Command) -> Self {
        Self { commands: vec![command] }
    }

    pub fn commands(&self) -> &[Command] {
        &self.commands
    }

    pub fn into_commands(self) -> Vec<Command> {
        self.commands
    }
}

impl fmt::Display for MeaningRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.commands.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub fn serialize_mr(mr: &MeaningRepresentation) -> String {
    mr.to_string()
}

/// Parses canonical MR text. Whitespace between syntactic tokens is
/// flexible; quoted arguments keep their content exactly.
pub fn parse_mr_text(text: &str) -> Result<MeaningRepresentation, LangError> {
    let mut p = MrParser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let mut commands = vec![p.command()?];
    loop {
        p.skip_ws();
        if p.eof() {
            break;
        }
        p.expect(';')?;
        commands.push(p.command()?);
    }
    MeaningRepresentation::new(commands)
}

enum Arg {
    Quoted(String),
    Bare(String),
}

struct MrParser {
    chars: Vec<char>,
    pos: usize,
}

impl MrParser {
    fn err(&self, what: &str) -> LangError {
        LangError::MalformedMrText(format!("{what} at character {}", self.pos))
    }

    fn eof(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<(), LangError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '#' || c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn arg(&mut self) -> Result<Arg, LangError> {
        self.skip_ws();
        if self.peek() != Some('\'') {
            let w = self.word();
            if w.is_empty() {
                return Err(self.err("expected an argument"));
            }
            return Ok(Arg::Bare(w));
        }
        self.pos += 1;
        let mut content = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err("unterminated quoted argument")),
                Some('\\') => {
                    self.pos += 1;
                    let escaped = self.peek().ok_or_else(|| self.err("dangling escape"))?;
                    content.push(escaped);
                    self.pos += 1;
                }
                Some('\'') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => {
                    content.push(c);
                    self.pos += 1;
                }
            }
        }
        let inner = content.strip_prefix(' ').unwrap_or(&content);
        let inner = inner.strip_suffix(' ').unwrap_or(inner);
        if inner.is_empty() {
            return Err(self.err("empty quoted argument"));
        }
        Ok(Arg::Quoted(inner.to_string()))
    }

    fn command(&mut self) -> Result<Command, LangError> {
        self.expect('(')?;
        self.skip_ws();
        let action_word = self.word();
        let action = ActionKind::parse(&action_word).ok_or_else(|| self.err(&format!("unknown action {action_word:?}")))?;
        self.expect(',')?;
        let mut args = vec![self.arg()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                    args.push(self.arg()?);
                }
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or ')'")),
            }
        }
        let target = match (action, args.as_mut_slice()) {
            (ActionKind::Open, [Arg::Quoted(app)]) => Target::App {
                app: std::mem::take(app),
                feature: None,
            },
            (ActionKind::Open, [Arg::Quoted(app), Arg::Quoted(feature)]) => Target::App {
                app: std::mem::take(app),
                feature: Some(std::mem::take(feature)),
            },
            (ActionKind::Press, [Arg::Quoted(label)]) => Target::Button {
                label: std::mem::take(label),
            },
            (ActionKind::Press, [Arg::Bare(n)]) => {
                let number = n
                    .strip_prefix('#')
                    .and_then(|d| d.parse::<u32>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| self.err("expected a tooltip number like #1"))?;
                Target::Tooltip { number }
            }
            (ActionKind::Enter, [Arg::Quoted(literal)]) => Target::Text {
                literal: std::mem::take(literal),
            },
            (ActionKind::Swipe, [Arg::Bare(d)]) => Target::Direction {
                direction: Direction::parse(d).ok_or_else(|| self.err(&format!("unknown direction {d:?}")))?,
            },
            _ => return Err(self.err(&format!("bad arguments for {action}"))),
        };
        Command::new(action, target)
    }
}
