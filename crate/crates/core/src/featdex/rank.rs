use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::index::{match_app, AppEntry, FeatureIndex};
use super::{FeatdexError, Result};
use crate::manifest::{KeywordSet, LaunchIntent};
use crate::text;

/// Words command templates wrap around feature names.
pub const QUERY_STOPLIST: [&str; 9] = ["the", "a", "an", "in", "on", "from", "page", "tab", "open"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringConfig {
    pub w_count: f64,
    pub w_fraction: f64,
    pub deep_link_bonus: f64,
    pub fallback_threshold: f64,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        Self {
            w_count: 1.0,
            w_fraction: 1.0,
            deep_link_bonus: 0.5,
            fallback_threshold: 0.5,
        }
    }
}

impl ScoringConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if ok(self.w_count) && ok(self.w_fraction) && ok(self.deep_link_bonus) && ok(self.fallback_threshold) {
            Ok(())
        } else {
            Err(FeatdexError::InvalidConfig)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelevanceScore {
    pub matched_count: usize,
    /// Share of query tokens found among the keywords.
    pub matched_fraction: f64,
    pub has_deep_link: bool,
    pub total: f64,
}

/// Normalized feature-phrase tokens with the stoplist removed.
pub fn query_tokens(phrase: &str) -> Vec<String> {
    text::tokens(phrase)
        .into_iter()
        .filter(|t| !QUERY_STOPLIST.contains(&t.as_str()))
        .collect()
}

pub fn score_feature(
    keywords: &KeywordSet,
    query: &[String],
    has_deep_link: bool,
    cfg: &ScoringConfig,
) -> RelevanceScore {
    let matched_count = query.iter().filter(|t| keywords.contains(t)).count();
    let matched_fraction = if query.is_empty() {
        0.0
    } else {
        matched_count as f64 / query.len() as f64
    };
    let bonus = if has_deep_link { cfg.deep_link_bonus } else { 0.0 };
    RelevanceScore {
        matched_count,
        matched_fraction,
        has_deep_link,
        total: cfg.w_count * matched_count as f64 + cfg.w_fraction * matched_fraction + bonus,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedMatch {
    pub intent: LaunchIntent,
    pub score: RelevanceScore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedMatches {
    pub entries: Vec<RankedMatch>,
    pub k: usize,
}

/// Score descending, then deep links first, then activity name, then the
/// intent description so the order is total.
fn rank_order(a: &RankedMatch, b: &RankedMatch) -> Ordering {
    b.score
        .total
        .partial_cmp(&a.score.total)
        .unwrap_or(Ordering::Equal)
        .then_with(|| b.score.has_deep_link.cmp(&a.score.has_deep_link))
        .then_with(|| a.intent.source_component.cmp(&b.intent.source_component))
        .then_with(|| a.intent.describe().cmp(&b.intent.describe()))
}

/// Top-k intents of one app for a feature phrase. Only intents sharing at
/// least one keyword with the phrase are candidates.
pub fn rank_features(entry: &AppEntry, feature_phrase: &str, k: usize, cfg: &ScoringConfig) -> Result<RankedMatches> {
    if k == 0 {
        return Err(FeatdexError::InvalidK);
    }
    cfg.validate()?;
    let query = query_tokens(feature_phrase);
    let mut entries: Vec<RankedMatch> = entry
        .intents
        .iter()
        .map(|intent| RankedMatch {
            score: score_feature(&intent.keywords, &query, intent.is_deep_link(), cfg),
            intent: intent.clone(),
        })
        .filter(|m| m.score.matched_count > 0)
        .collect();
    entries.sort_by(rank_order);
    entries.truncate(k);
    Ok(RankedMatches { entries, k })
}

/// The intents a user would be offered, best first: ranked matches at or
/// above the fallback threshold, or the launcher alone when none qualify.
pub fn recommend(
    index: &FeatureIndex,
    app_phrase: &str,
    feature_phrase: Option<&str>,
    k: usize,
    cfg: &ScoringConfig,
) -> Result<Vec<LaunchIntent>> {
    let entry = match_app(index, app_phrase)?;
    let ranked = match feature_phrase {
        Some(phrase) => rank_features(entry, phrase, k, cfg)?.entries,
        None if k == 0 => return Err(FeatdexError::InvalidK),
        None => Vec::new(),
    };
    let picks: Vec<LaunchIntent> = ranked
        .into_iter()
        .filter(|m| m.score.total >= cfg.fallback_threshold)
        .map(|m| m.intent)
        .collect();
    if picks.is_empty() {
        Ok(vec![entry.launcher.clone()])
    } else {
        Ok(picks)
    }
}

/// Best intent for a command, falling back to the app's launcher.
pub fn resolve(
    index: &FeatureIndex,
    app_phrase: &str,
    feature_phrase: Option<&str>,
    cfg: &ScoringConfig,
) -> Result<LaunchIntent> {
    let mut picks = recommend(index, app_phrase, feature_phrase, 1, cfg)?;
    Ok(picks.swap_remove(0))
}
