use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::index::FeatureIndex;
use super::rank::{recommend, ScoringConfig};
use super::{FeatdexError, Result};
use crate::manifest::LaunchIntent;

/// Answers which screen an intent opens, without side effects.
pub trait ScreenOracle {
    fn screen_for(&self, intent: &LaunchIntent) -> std::result::Result<String, String>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCase {
    pub id: String,
    pub command_text: String,
    pub app_phrase: String,
    pub feature_phrase: String,
    pub ground_truth_screen_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub id: String,
    /// 1-based rank of the first recommended intent that opens the ground
    /// truth screen.
    pub first_hit_rank: Option<usize>,
    pub opened_screens: Vec<String>,
}

impl CaseOutcome {
    pub fn hit_at(&self, k: usize) -> bool {
        self.first_hit_rank.is_some_and(|r| r <= k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub cases: Vec<CaseOutcome>,
    pub hits: BTreeMap<usize, usize>,
    /// Percentage of cases hit within the top k.
    pub hit_rate: BTreeMap<usize, f64>,
}

impl EvalReport {
    pub fn from_outcomes(cases: Vec<CaseOutcome>, ks: &[usize]) -> Self {
        let mut hits = BTreeMap::new();
        let mut hit_rate = BTreeMap::new();
        for &k in ks {
            let h = cases.iter().filter(|c| c.hit_at(k)).count();
            hits.insert(k, h);
            let rate = if cases.is_empty() {
                0.0
            } else {
                (h as f64 * 100.0) / cases.len() as f64
            };
            hit_rate.insert(k, rate);
        }
        Self { cases, hits, hit_rate }
    }

    /// One row per case: id followed by a 0/1 column per k.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["case_id".to_string()];
        header.extend(self.hits.keys().map(|k| format!("hit@{k}")));
        w.write_record(&header).expect("in-memory csv");
        for c in &self.cases {
            let mut row = vec![c.id.clone()];
            row.extend(self.hits.keys().map(|&k| u8::from(c.hit_at(k)).to_string()));
            w.write_record(&row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }

    pub fn summary_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .hits
            .iter()
            .map(|(k, h)| {
                serde_json::json!({
                    "k": k,
                    "success": h,
                    "fail": self.cases.len() - h,
                    "percentage": self.hit_rate[k],
                })
            })
            .collect();
        serde_json::json!({ "cases": self.cases.len(), "hit_rate": rows })
    }
}

/// Runs every case through app matching and ranking, asks the oracle which
/// screen each of the top-k intents opens, and records the first hit.
/// Cases whose app cannot be resolved count as misses.
pub fn evaluate_hit_rate(
    index: &FeatureIndex,
    cases: &[EvalCase],
    ks: &[usize],
    oracle: &dyn ScreenOracle,
    cfg: &ScoringConfig,
) -> Result<EvalReport> {
    let max_k = ks.iter().copied().max().ok_or(FeatdexError::InvalidK)?;
    if ks.contains(&0) {
        return Err(FeatdexError::InvalidK);
    }
    let mut outcomes = Vec::with_capacity(cases.len());
    for case in cases {
        let feature = Some(case.feature_phrase.as_str()).filter(|f| !f.trim().is_empty());
        let intents = match recommend(index, &case.app_phrase, feature, max_k, cfg) {
            Ok(intents) => intents,
            Err(FeatdexError::UnknownApp(_) | FeatdexError::AmbiguousApp { .. } | FeatdexError::EmptyPhrase) => {
                Vec::new()
            }
            Err(e) => return Err(e),
        };
        let mut opened = Vec::with_capacity(intents.len());
        for intent in &intents {
            opened.push(oracle.screen_for(intent).map_err(FeatdexError::OracleUnavailable)?);
        }
        let first_hit_rank = opened
            .iter()
            .position(|s| *s == case.ground_truth_screen_id)
            .map(|i| i + 1);
        outcomes.push(CaseOutcome {
            id: case.id.clone(),
            first_hit_rank,
            opened_screens: opened,
        });
    }
    Ok(EvalReport::from_outcomes(outcomes, ks))
}
