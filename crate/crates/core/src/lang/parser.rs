use std::collections::BTreeSet;

use super::clean::{bare_prefix, clean_word, split_chain, tokenize_and_clean, Token};
use super::lexicon::Lexicon;
use super::mr::{ActionKind, Command, Direction, MeaningRepresentation};
use super::{LangError, ParseError, ParseErrorKind};

const FEATURE_APP_DELIMITERS: [&str; 3] = ["in", "on", "from"];
const TOOLTIP_KEYWORDS: [&str; 2] = ["number", "num"];
const NUMBER_WORDS: [&str; 20] = [
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve", "thirteen",
    "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
];

/// Any backend mapping an utterance plus on-screen labels to an MR.
pub trait CommandParser: Send + Sync {
    fn parse(&self, utterance: &str, schema: &[String]) -> Result<MeaningRepresentation, ParseError>;
}

/// Deterministic lexicon-driven parser.
#[derive(Debug, Clone, Default)]
pub struct RuleParser {
    lexicon: Lexicon,
}

impl RuleParser {
    pub fn new(lexicon: Lexicon) -> Self {
        Self { lexicon }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }
}

impl CommandParser for RuleParser {
    fn parse(&self, utterance: &str, schema: &[String]) -> Result<MeaningRepresentation, ParseError> {
        parse(utterance, schema, &self.lexicon)
    }
}

pub fn parse(utterance: &str, schema: &[String], lexicon: &Lexicon) -> Result<MeaningRepresentation, ParseError> {
    let tokens = tokenize_and_clean(utterance, lexicon).map_err(|e| match e {
        LangError::EmptyUtterance => ParseError::new(0, ParseErrorKind::EmptyUtterance),
        other => ParseError::new(0, ParseErrorKind::NoActionPhrase(other.to_string())),
    })?;
    let mut commands: Vec<Command> = Vec::new();
    for (i, span) in split_chain(&tokens, lexicon).iter().enumerate() {
        // the screen a command after OPEN or PRESS runs on is not known yet
        let unseen_screen = commands
            .iter()
            .any(|c| matches!(c.action(), ActionKind::Open | ActionKind::Press));
        commands.push(parse_command_on(span, schema, lexicon, unseen_screen).map_err(|kind| ParseError::new(i, kind))?);
    }
    Ok(MeaningRepresentation::new(commands).expect("nonempty token list yields a span"))
}

fn join(tokens: &[Token]) -> String {
    tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ")
}

pub fn parse_command(span: &[Token], schema: &[String], lexicon: &Lexicon) -> Result<Command, ParseErrorKind> {
    parse_command_on(span, schema, lexicon, false)
}

/// With `unseen_screen`, a PRESS matching no schema label keeps its spoken
/// words, since the schema describes a screen the command will not run on.
fn parse_command_on(
    span: &[Token],
    schema: &[String],
    lexicon: &Lexicon,
    unseen_screen: bool,
) -> Result<Command, ParseErrorKind> {
    let phrase = join(span);
    let (action, consumed) = lexicon
        .match_action(&bare_prefix(span))
        .ok_or_else(|| ParseErrorKind::NoActionPhrase(phrase.clone()))?;
    let rest = &span[consumed..];
    if rest.is_empty() {
        return Err(ParseErrorKind::MissingTarget(action));
    }
    match action {
        ActionKind::Enter => Ok(Command::enter(join(rest))),
        ActionKind::Swipe => rest
            .iter()
            .filter_map(Token::bare)
            .find_map(Direction::parse)
            .map(Command::swipe)
            .ok_or_else(|| ParseErrorKind::BadDirection(join(rest))),
        ActionKind::Open => {
            let split = rest
                .iter()
                .enumerate()
                .rev()
                .find(|(i, t)| {
                    *i > 0 && *i + 1 < rest.len() && t.bare().is_some_and(|w| FEATURE_APP_DELIMITERS.contains(&w))
                })
                .map(|(i, _)| i);
            Ok(match split {
                Some(p) => Command::open(join(&rest[p + 1..]), Some(&join(&rest[..p]))),
                None => Command::open(join(rest), None),
            })
        }
        ActionKind::Press => {
            if let Some(number) = tooltip_number(rest) {
                return match number {
                    0 => Err(ParseErrorKind::BadTooltipNumber(join(rest))),
                    n => Ok(Command::press_number(n)),
                };
            }
            match best_schema_label(rest, schema, lexicon) {
                Some(label) => Ok(Command::press(label)),
                None if unseen_screen => Ok(Command::press(join(rest))),
                None => Err(ParseErrorKind::NoSchemaMatch(join(rest))),
            }
        }
    }
}

fn number_value(word: &str) -> Option<u32> {
    if let Ok(n) = word.parse::<u32>() {
        return Some(n);
    }
    NUMBER_WORDS.iter().position(|w| *w == word).map(|i| i as u32 + 1)
}

/// `number N`, `number #N` or `#N`, with nothing else in the span.
fn tooltip_number(rest: &[Token]) -> Option<u32> {
    let words: Vec<&str> = rest.iter().map(|t| t.bare()).collect::<Option<_>>()?;
    let n = match words.as_slice() {
        [kw, n] if TOOLTIP_KEYWORDS.contains(kw) => n.strip_prefix('#').unwrap_or(n),
        [n] => n.strip_prefix('#')?,
        _ => return None,
    };
    number_value(n)
}

fn match_words(text: &str, lexicon: &Lexicon) -> BTreeSet<String> {
    text.split_whitespace()
        .map(clean_word)
        .filter(|w| !w.is_empty() && !lexicon.is_filler(w))
        .collect()
}

/// Highest token overlap, then shortest label, then lexicographic.
pub fn best_schema_label(rest: &[Token], schema: &[String], lexicon: &Lexicon) -> Option<String> {
    let query: BTreeSet<String> = rest.iter().flat_map(|t| match_words(&t.text, lexicon)).collect();
    schema
        .iter()
        .map(|label| {
            let overlap = match_words(label, lexicon).intersection(&query).count();
            (overlap, label)
        })
        .filter(|(overlap, _)| *overlap > 0)
        .min_by(|(oa, la), (ob, lb)| {
            ob.cmp(oa)
                .then_with(|| la.chars().count().cmp(&lb.chars().count()))
                .then_with(|| la.cmp(lb))
        })
        .map(|(_, label)| label.clone())
}
