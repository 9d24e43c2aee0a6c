//! Command language: meaning representations, the rule-based parser,
//! grammar-driven data synthesis and parser metrics.

mod clean;
mod lexicon;
mod metrics;
mod mr;
mod paraphrase;
mod parser;
mod scfg;

use thiserror::Error;

pub use clean::{bare_prefix, chain_segments, clean_word, split_chain, tokenize_and_clean, Token};
pub use lexicon::Lexicon;
pub use metrics::{
    evaluate_parser, load_replay_set, load_test_set, write_test_set, LabelTally, ParserMetrics, ReplayParser, TestCase,
};
pub use mr::{parse_mr_text, serialize_mr, ActionKind, Command, Direction, MeaningRepresentation, Target};
pub use paraphrase::paraphrase_lexical;
pub use parser::{best_schema_label, parse, parse_command, CommandParser, RuleParser};
pub use scfg::{expand_scfg, sample_screen_buttons, Grammar, ScfgRule, SynthConfig, SynthPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty utterance")]
    EmptyUtterance,
    #[error("no action phrase in {0:?}")]
    NoActionPhrase(String),
    #[error("{0} needs a target")]
    MissingTarget(ActionKind),
    #[error("no on-screen label matches {0:?}")]
    NoSchemaMatch(String),
    #[error("no direction in {0:?}")]
    BadDirection(String),
    #[error("tooltip numbers start at 1, got {0:?}")]
    BadTooltipNumber(String),
}

impl ParseErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            ParseErrorKind::EmptyUtterance => "EmptyUtterance",
            ParseErrorKind::NoActionPhrase(_) => "NoActionPhrase",
            ParseErrorKind::MissingTarget(_) => "MissingTarget",
            ParseErrorKind::NoSchemaMatch(_) => "NoSchemaMatch",
            ParseErrorKind::BadDirection(_) => "BadDirection",
            ParseErrorKind::BadTooltipNumber(_) => "BadTooltipNumber",
        }
    }
}

/// A parse failure and the index of the chained command that caused it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("command {command_index}: {kind}")]
pub struct ParseError {
    pub command_index: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(command_index: usize, kind: ParseErrorKind) -> Self {
        Self { command_index, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("empty utterance")]
    EmptyUtterance,
    #[error("malformed MR text: {0}")]
    MalformedMrText(String),
    #[error("invalid lexicon: {0}")]
    InvalidLexicon(String),
    #[error("grammar line {line}: {reason}")]
    GrammarSyntax { line: usize, reason: String },
    #[error("grammar never terminates from {0}")]
    GrammarCycle(String),
    #[error("grammar references undefined symbol ${0}")]
    UnknownSymbol(String),
    #[error("rule for ${nonterminal} binds different slots on each side")]
    UnboundSlot { nonterminal: String },
    #[error("need {needed} buttons but the pool has {available}")]
    PoolTooSmall { needed: usize, available: usize },
    #[error("test set line {line}: {reason}")]
    TestSetSyntax { line: usize, reason: String },
    #[error("empty test set")]
    EmptyTestSet,
    #[error(transparent)]
    Parse(#[from] ParseError),
}
