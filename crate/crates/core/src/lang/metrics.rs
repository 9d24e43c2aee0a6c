use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::mr::{parse_mr_text, MeaningRepresentation};
use super::parser::CommandParser;
use super::{LangError, ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub utterance: String,
    pub expected: MeaningRepresentation,
    pub schema: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTally {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl LabelTally {
    /// Ground-truth frequency of the label.
    pub fn support(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn f1(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_;
        if denom == 0 {
            0.0
        } else {
            2.0 * self.tp as f64 / denom as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParserMetrics {
    pub cases: usize,
    pub em_accuracy: f64,
    pub target_f1: f64,
    pub action_f1: f64,
    /// Cases whose predicted targets all equal the expected ones.
    pub all_targets_correct: f64,
    pub action_tallies: BTreeMap<String, LabelTally>,
    pub target_tallies: BTreeMap<String, LabelTally>,
}

impl ParserMetrics {
    pub fn table_header() -> String {
        format!("{:<20} {:>8} {:>10} {:>10}", "Model", "EM", "Target F1", "Action F1")
    }

    pub fn table_row(&self, name: &str) -> String {
        format!(
            "{:<20} {:>8.2} {:>10.2} {:>10.2}",
            name, self.em_accuracy, self.target_f1, self.action_f1
        )
    }
}

fn tally(tallies: &mut BTreeMap<String, LabelTally>, gold: Option<String>, pred: Option<String>) {
    match (gold, pred) {
        (Some(g), Some(p)) if g == p => tallies.entry(g).or_default().tp += 1,
        (g, p) => {
            if let Some(g) = g {
                tallies.entry(g).or_default().fn_ += 1;
            }
            if let Some(p) = p {
                tallies.entry(p).or_default().fp += 1;
            }
        }
    }
}

/// Support-weighted mean F1 over labels seen in the ground truth.
fn weighted_f1(tallies: &BTreeMap<String, LabelTally>) -> f64 {
    let total: usize = tallies.values().map(LabelTally::support).sum();
    if total == 0 {
        return 0.0;
    }
    let sum: f64 = tallies.values().map(|t| t.f1() * t.support() as f64).sum();
    100.0 * sum / total as f64
}

/// Scores `parser` on `cases`. Commands align by position; a failed parse
/// counts as an empty prediction.
pub fn evaluate_parser(parser: &dyn CommandParser, cases: &[TestCase]) -> Result<ParserMetrics, LangError> {
    if cases.is_empty() {
        return Err(LangError::EmptyTestSet);
    }
    let mut exact = 0usize;
    let mut targets_ok = 0usize;
    let mut action_tallies = BTreeMap::new();
    let mut target_tallies = BTreeMap::new();
    for case in cases {
        let predicted = parser.parse(&case.utterance, &case.schema).ok();
        let pred_cmds = predicted.as_ref().map(|m| m.commands()).unwrap_or(&[]);
        let gold_cmds = case.expected.commands();
        if predicted.as_ref().is_some_and(|p| p.to_string() == case.expected.to_string()) {
            exact += 1;
        }
        if pred_cmds.len() == gold_cmds.len() && pred_cmds.iter().zip(gold_cmds).all(|(p, g)| p.target() == g.target()) {
            targets_ok += 1;
        }
        for i in 0..gold_cmds.len().max(pred_cmds.len()) {
            let g = gold_cmds.get(i);
            let p = pred_cmds.get(i);
            tally(
                &mut action_tallies,
                g.map(|c| c.action().to_string()),
                p.map(|c| c.action().to_string()),
            );
            tally(
                &mut target_tallies,
                g.map(|c| c.target().canonical()),
                p.map(|c| c.target().canonical()),
            );
        }
    }
    let pct = |n: usize| 100.0 * n as f64 / cases.len() as f64;
    Ok(ParserMetrics {
        cases: cases.len(),
        em_accuracy: pct(exact),
        target_f1: weighted_f1(&target_tallies),
        action_f1: weighted_f1(&action_tallies),
        all_targets_correct: pct(targets_ok),
        action_tallies,
        target_tallies,
    })
}

/// Reads `utterance<TAB>canonical MR<TAB>label;label` lines. Blank lines and
/// lines starting with `#` are skipped; the schema column may be omitted.
pub fn load_test_set(text: &str) -> Result<Vec<TestCase>, LangError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let utterance = cols.next().unwrap_or_default().trim().to_string();
        let mr = cols.next().ok_or_else(|| LangError::TestSetSyntax {
            line: n + 1,
            reason: "missing MR column".into(),
        })?;
        let expected = parse_mr_text(mr).map_err(|e| LangError::TestSetSyntax {
            line: n + 1,
            reason: e.to_string(),
        })?;
        let schema = cols
            .next()
            .map(|s| s.split(';').map(str::trim).filter(|l| !l.is_empty()).map(str::to_string).collect())
            .unwrap_or_default();
        out.push(TestCase {
            utterance,
            expected,
            schema,
        });
    }
    Ok(out)
}

pub fn write_test_set(cases: &[TestCase]) -> String {
    let mut out = String::new();
    for c in cases {
        let _ = writeln!(out, "{}\t{}\t{}", c.utterance, c.expected, c.schema.join(";"));
    }
    out
}

/// Answers with recorded predictions, for scoring saved model outputs.
/// Utterances without a recording fail to parse.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplayParser {
    predictions: BTreeMap<String, MeaningRepresentation>,
}

impl ReplayParser {
    pub fn new(predictions: BTreeMap<String, MeaningRepresentation>) -> Self {
        Self { predictions }
    }
}

impl CommandParser for ReplayParser {
    fn parse(&self, utterance: &str, _schema: &[String]) -> Result<MeaningRepresentation, ParseError> {
        self.predictions
            .get(utterance)
            .cloned()
            .ok_or_else(|| ParseError::new(0, ParseErrorKind::NoActionPhrase(utterance.to_string())))
    }
}

/// Reads `utterance<TAB>gold MR<TAB>predicted MR<TAB>label;label` lines. An
/// empty prediction column records a failed parse.
pub fn load_replay_set(text: &str) -> Result<(Vec<TestCase>, ReplayParser), LangError> {
    let mut gold_lines = String::new();
    let mut predictions = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            // keeps line numbers aligned for errors from the gold parse
            gold_lines.push('\n');
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 3 {
            return Err(LangError::TestSetSyntax {
                line: n + 1,
                reason: "expected utterance, gold and predicted columns".into(),
            });
        }
        let utterance = cols[0].trim();
        if !cols[2].trim().is_empty() {
            let predicted = parse_mr_text(cols[2]).map_err(|e| LangError::TestSetSyntax {
                line: n + 1,
                reason: e.to_string(),
            })?;
            predictions.insert(utterance.to_string(), predicted);
        }
        let _ = writeln!(gold_lines, "{utterance}\t{}\t{}", cols[1], cols.get(3).copied().unwrap_or(""));
    }
    Ok((load_test_set(&gold_lines)?, ReplayParser::new(predictions)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::mr::Command;
    use crate::lang::{ParseError, ParseErrorKind, RuleParser};

    struct Fixed(Vec<Option<MeaningRepresentation>>, std::sync::atomic::AtomicUsize);

    impl CommandParser for Fixed {
        fn parse(&self, _: &str, _: &[String]) -> Result<MeaningRepresentation, ParseError> {
            let i = self.1.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
            self.0[i]
                .clone()
                .ok_or_else(|| ParseError::new(0, ParseErrorKind::EmptyUtterance))
        }
    }

    fn case(mr: MeaningRepresentation) -> TestCase {
        TestCase {
            utterance: String::new(),
            expected: mr,
            schema: vec![],
        }
    }

    #[test]
    fn perfect_predictions() {
        let cases = load_test_set("tap save\t( PRESS , ' Save ' )\tSave;Cancel\nswipe up\t( SWIPE , UP )\n").unwrap();
        let m = evaluate_parser(&RuleParser::default(), &cases).unwrap();
        assert_eq!((m.em_accuracy, m.target_f1, m.action_f1), (100.0, 100.0, 100.0));
        assert!(m.table_row("rule").contains("100.00"));
    }

    #[test]
    fn hand_computed_small_case() {
        let save = MeaningRepresentation::single(Command::press("Save"));
        let cancel = MeaningRepresentation::single(Command::press("Cancel"));
        let cases = vec![case(save.clone()), case(save.clone()), case(cancel.clone())];
        let parser = Fixed(vec![Some(save.clone()), Some(cancel.clone()), None], Default::default());
        let m = evaluate_parser(&parser, &cases).unwrap();
        // Save: tp1 fn1 -> f1 2/3, support 2. Cancel: fp1 fn1 -> 0, support 1.
        assert!((m.target_f1 - 100.0 * (2.0 / 3.0 * 2.0) / 3.0).abs() < 1e-9);
        // PRESS: tp2 fn1 -> 0.8.
        assert!((m.action_f1 - 80.0).abs() < 1e-9);
        assert!((m.em_accuracy - 100.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn table_layout() {
        let m = ParserMetrics {
            cases: 1,
            em_accuracy: 91.09,
            target_f1: 93.05,
            action_f1: 97.03,
            all_targets_correct: 100.0,
            action_tallies: BTreeMap::new(),
            target_tallies: BTreeMap::new(),
        };
        let row = m.table_row("VoicifyParser");
        let nums: Vec<&str> = row.split_whitespace().skip(1).collect();
        assert_eq!(nums, ["91.09", "93.05", "97.03"]);
        assert_eq!(ParserMetrics::table_header().split_whitespace().count(), 6);
    }

    #[test]
    fn test_set_round_trip_and_errors() {
        let cases = load_test_set("# c\ntap x\t( PRESS , ' X ' )\tX;Y\n").unwrap();
        assert_eq!(load_test_set(&write_test_set(&cases)).unwrap(), cases);
        assert!(matches!(load_test_set("tap x\n"), Err(LangError::TestSetSyntax { line: 1, .. })));
        assert!(matches!(load_test_set("tap x\t( NOPE )\n"), Err(LangError::TestSetSyntax { .. })));
        assert!(matches!(evaluate_parser(&RuleParser::default(), &[]), Err(LangError::EmptyTestSet)));
    }
}
