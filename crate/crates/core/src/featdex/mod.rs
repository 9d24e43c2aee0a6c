//! Feature index: app matching, keyword relevance scoring, ranking with a
//! launcher fallback, and the hit-rate@k evaluation.

mod eval;
mod index;
mod rank;

use thiserror::Error;

pub use eval::{evaluate_hit_rate, CaseOutcome, EvalCase, EvalReport, ScreenOracle};
pub use index::{build_index, build_index_from_descriptors, match_app, AppEntry, FeatureIndex};
pub use rank::{
    query_tokens, rank_features, recommend, resolve, score_feature, RankedMatch, RankedMatches, RelevanceScore,
    ScoringConfig, QUERY_STOPLIST,
};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FeatdexError {
    #[error("two installed apps normalize to the label {0:?}")]
    DuplicateAppLabel(String),
    #[error("{0} has no component that can serve as launcher")]
    MissingLauncher(String),
    #[error("no installed app matches {0:?}")]
    UnknownApp(String),
    #[error("{phrase:?} matches several apps equally well: {}", candidates.join(", "))]
    AmbiguousApp { phrase: String, candidates: Vec<String> },
    #[error("empty app phrase")]
    EmptyPhrase,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("device oracle unavailable: {0}")]
    OracleUnavailable(String),
    #[error("scoring weights must be finite and non-negative")]
    InvalidConfig,
}

pub type Result<T> = std::result::Result<T, FeatdexError>;
