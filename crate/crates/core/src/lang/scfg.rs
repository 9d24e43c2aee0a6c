//! Synchronous grammar expansion into (utterance, MR) pairs.
//!
//! Grammar files hold one definition per line:
//!
//! ```text
//! $ROOT ::= "$CMD:1 then $CMD:2" => "$CMD:1 ; $CMD:2"
//! $CMD  ::= "tap $BTN" => "( PRESS , ' $BTN ' )"
//! $BTN  := "Settings"
//! $DIR  := "down" => "DOWN"
//! ```
//!
//! `::=` defines a nonterminal rule, `:=` a slot filler. A filler with one
//! form uses its lowercase for the utterance and the form itself for the MR.
//! `$NAME:n` distinguishes repeated references to the same symbol.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mr::{parse_mr_text, MeaningRepresentation, Target};
use super::LangError;

const DEFAULT_GRAMMAR: &str = include_str!("../../data/default_grammar.scfg");
const START_SYMBOL: &str = "ROOT";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScfgRule {
    pub nonterminal: String,
    pub utterance: String,
    pub mr: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotFiller {
    pub utterance: String,
    pub mr: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthPair {
    pub utterance: String,
    pub mr: MeaningRepresentation,
    pub screen_buttons: Option<Vec<String>>,
}

impl SynthPair {
    /// The schema to parse this pair against.
    pub fn schema(&self) -> &[String] {
        self.screen_buttons.as_deref().unwrap_or(&[])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthConfig {
    /// Beyond this depth only minimum-height rules are chosen.
    pub max_depth: usize,
    /// Buttons sampled per pair that contains a PRESS label target.
    pub screen_size: usize,
    /// Slot whose fillers form the button pool.
    pub button_slot: String,
    /// Expansion attempts allowed per requested pair.
    pub attempts_per_pair: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            max_depth: 6,
            screen_size: 5,
            button_slot: "BTN".into(),
            attempts_per_pair: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct SymRef {
    name: String,
    tag: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Literal(String),
    Ref(SymRef),
}

fn segments(template: &str) -> Vec<Segment> {
    let chars: Vec<char> = template.chars().collect();
    let mut out = Vec::new();
    let mut lit = String::new();
    let mut i = 0;
    while i < chars.len() {
        let starts_ref = chars[i] == '$' && chars.get(i + 1).is_some_and(|c| c.is_ascii_uppercase());
        if !starts_ref {
            lit.push(chars[i]);
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && (chars[j].is_ascii_uppercase() || chars[j].is_ascii_digit() || chars[j] == '_') {
            j += 1;
        }
        let name: String = chars[i + 1..j].iter().collect();
        let mut tag = None;
        if chars.get(j) == Some(&':') && chars.get(j + 1).is_some_and(char::is_ascii_digit) {
            let mut k = j + 1;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            tag = chars[j + 1..k].iter().collect::<String>().parse().ok();
            j = k;
        }
        if !lit.is_empty() {
            out.push(Segment::Literal(std::mem::take(&mut lit)));
        }
        out.push(Segment::Ref(SymRef { name, tag }));
        i = j;
    }
    if !lit.is_empty() {
        out.push(Segment::Literal(lit));
    }
    out
}

fn refs(template: &str) -> BTreeSet<SymRef> {
    segments(template)
        .into_iter()
        .filter_map(|s| match s {
            Segment::Ref(r) => Some(r),
            Segment::Literal(_) => None,
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Grammar {
    rules: Vec<ScfgRule>,
    slots: BTreeMap<String, Vec<SlotFiller>>,
}

impl Grammar {
    pub fn new(rules: Vec<ScfgRule>, slots: BTreeMap<String, Vec<SlotFiller>>) -> Result<Self, LangError> {
        let g = Self { rules, slots };
        g.validate()?;
        Ok(g)
    }

    pub fn default_grammar() -> Self {
        Self::parse(DEFAULT_GRAMMAR).expect("bundled grammar is valid")
    }

    pub fn rules(&self) -> &[ScfgRule] {
        &self.rules
    }

    pub fn fillers(&self, slot: &str) -> &[SlotFiller] {
        self.slots.get(slot).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn parse(text: &str) -> Result<Self, LangError> {
        let mut rules = Vec::new();
        let mut slots: BTreeMap<String, Vec<SlotFiller>> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |reason: &str| LangError::GrammarSyntax {
                line: n + 1,
                reason: reason.to_string(),
            };
            let (lhs, rhs, is_rule) = if let Some((l, r)) = line.split_once("::=") {
                (l, r, true)
            } else if let Some((l, r)) = line.split_once(":=") {
                (l, r, false)
            } else {
                return Err(syntax("expected '::=' or ':='"));
            };
            let name = lhs
                .trim()
                .strip_prefix('$')
                .filter(|s| !s.is_empty() && s.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_'))
                .ok_or_else(|| syntax("left side must be $NAME in upper case"))?;
            let (first, after) = quoted(rhs.trim()).map_err(|e| syntax(&e))?;
            let after = after.trim();
            let second = if after.is_empty() {
                None
            } else {
                let arrow = after.strip_prefix("=>").ok_or_else(|| syntax("expected '=>'"))?;
                let (s, tail) = quoted(arrow.trim()).map_err(|e| syntax(&e))?;
                if !tail.trim().is_empty() {
                    return Err(syntax("trailing text"));
                }
                Some(s)
            };
            if is_rule {
                let mr = second.ok_or_else(|| syntax("rule needs an MR template"))?;
                rules.push(ScfgRule {
                    nonterminal: name.to_string(),
                    utterance: first,
                    mr,
                });
            } else {
                let filler = match second {
                    Some(mr) => SlotFiller { utterance: first, mr },
                    None => SlotFiller {
                        utterance: first.to_lowercase(),
                        mr: first,
                    },
                };
                slots.entry(name.to_string()).or_default().push(filler);
            }
        }
        Self::new(rules, slots)
    }

    fn nonterminals(&self) -> BTreeSet<&str> {
        self.rules.iter().map(|r| r.nonterminal.as_str()).collect()
    }

    fn validate(&self) -> Result<(), LangError> {
        let nts = self.nonterminals();
        for name in self.slots.keys() {
            if nts.contains(name.as_str()) {
                return Err(LangError::GrammarSyntax {
                    line: 0,
                    reason: format!("${name} is both a rule and a slot"),
                });
            }
        }
        for rule in &self.rules {
            let u = refs(&rule.utterance);
            if u != refs(&rule.mr) {
                return Err(LangError::UnboundSlot {
                    nonterminal: rule.nonterminal.clone(),
                });
            }
            for r in &u {
                if !nts.contains(r.name.as_str()) && !self.slots.contains_key(&r.name) {
                    return Err(LangError::UnknownSymbol(r.name.clone()));
                }
            }
        }
        Ok(())
    }

    fn start(&self) -> Option<&str> {
        if self.rules.iter().any(|r| r.nonterminal == START_SYMBOL) {
            Some(START_SYMBOL)
        } else {
            self.rules.first().map(|r| r.nonterminal.as_str())
        }
    }

    /// Minimum derivation height per rule; `None` for rules that can never
    /// finish expanding.
    fn rule_heights(&self) -> Vec<Option<usize>> {
        let mut nt_height: BTreeMap<&str, usize> = BTreeMap::new();
        let mut heights = vec![None; self.rules.len()];
        loop {
            let mut changed = false;
            for (i, rule) in self.rules.iter().enumerate() {
                let mut h = Some(0usize);
                for r in refs(&rule.utterance) {
                    let sub = if self.slots.contains_key(&r.name) {
                        Some(0)
                    } else {
                        nt_height.get(r.name.as_str()).copied()
                    };
                    h = match (h, sub) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        _ => None,
                    };
                }
                if let Some(h) = h.map(|x| x + 1) {
                    if heights[i].is_none_or(|old| h < old) {
                        heights[i] = Some(h);
                        let entry = nt_height.entry(rule.nonterminal.as_str()).or_insert(usize::MAX);
                        *entry = (*entry).min(h);
                        changed = true;
                    }
                }
            }
            if !changed {
                return heights;
            }
        }
    }
}

fn quoted(s: &str) -> Result<(String, &str), String> {
    let body = s.strip_prefix('"').ok_or("expected a quoted string")?;
    let mut out = String::new();
    let mut chars = body.char_indices();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => {
                let (_, e) = chars.next().ok_or("dangling escape")?;
                out.push(e);
            }
            '"' => return Ok((out, &body[i + 1..])),
            c => out.push(c),
        }
    }
    Err("unterminated string".into())
}

fn escape_mr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c == '\\' || c == '\'' {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

struct Expander<'g> {
    grammar: &'g Grammar,
    heights: Vec<Option<usize>>,
    max_depth: usize,
}

impl Expander<'_> {
    fn expand_nt(&self, nt: &str, depth: usize, rng: &mut ChaCha8Rng) -> (String, String) {
        let candidates: Vec<(usize, usize)> = self
            .grammar
            .rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.nonterminal == nt)
            .filter_map(|(i, _)| self.heights[i].map(|h| (i, h)))
            .collect();
        let pool: Vec<usize> = if depth >= self.max_depth {
            let min = candidates.iter().map(|&(_, h)| h).min().expect("productive nonterminal");
            candidates.iter().filter(|&&(_, h)| h == min).map(|&(i, _)| i).collect()
        } else {
            candidates.iter().map(|&(i, _)| i).collect()
        };
        let rule = &self.grammar.rules[*pool.choose(rng).expect("productive nonterminal")];
        let mut bound: BTreeMap<SymRef, (String, String)> = BTreeMap::new();
        for r in refs(&rule.utterance) {
            let value = if let Some(fillers) = self.grammar.slots.get(&r.name) {
                let f = fillers.choose(rng).expect("slot has fillers");
                (f.utterance.clone(), escape_mr(&f.mr))
            } else {
                self.expand_nt(&r.name, depth + 1, rng)
            };
            bound.insert(r, value);
        }
        let render = |template: &str, side: fn(&(String, String)) -> &String| {
            segments(template)
                .into_iter()
                .map(|s| match s {
                    Segment::Literal(l) => l,
                    Segment::Ref(r) => side(&bound[&r]).clone(),
                })
                .collect::<String>()
        };
        (render(&rule.utterance, |v| &v.0), render(&rule.mr, |v| &v.1))
    }
}

/// Draws `n` distinct labels from `pool`, always keeping `required`. The
/// result order is shuffled so required labels carry no positional hint.
pub fn sample_screen_buttons(
    pool: &[String],
    n: usize,
    seed: u64,
    required: &[String],
) -> Result<Vec<String>, LangError> {
    let mut distinct: Vec<&String> = Vec::new();
    for label in pool {
        if !distinct.contains(&label) {
            distinct.push(label);
        }
    }
    let mut chosen: Vec<String> = Vec::new();
    for r in required {
        if !chosen.contains(r) {
            chosen.push(r.clone());
        }
    }
    if n > distinct.len() || chosen.len() > n {
        return Err(LangError::PoolTooSmall {
            needed: n.max(chosen.len()),
            available: distinct.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rest: Vec<&String> = distinct.into_iter().filter(|l| !chosen.contains(l)).collect();
    rest.shuffle(&mut rng);
    let missing = n - chosen.len();
    chosen.extend(rest.into_iter().take(missing).cloned());
    chosen.shuffle(&mut rng);
    Ok(chosen)
}

fn button_labels(mr: &MeaningRepresentation) -> Vec<String> {
    mr.commands()
        .iter()
        .filter_map(|c| match c.target() {
            Target::Button { label } => Some(label.clone()),
            _ => None,
        })
        .collect()
}

/// Expands up to `budget` distinct pairs. Fewer are returned when the
/// grammar's language is smaller than the budget.
pub fn expand_scfg(grammar: &Grammar, budget: usize, seed: u64, config: &SynthConfig) -> Result<Vec<SynthPair>, LangError> {
    let Some(start) = grammar.start() else {
        return Ok(Vec::new());
    };
    let heights = grammar.rule_heights();
    let productive = grammar
        .rules
        .iter()
        .zip(&heights)
        .any(|(r, h)| r.nonterminal == start && h.is_some());
    if !productive {
        return Err(LangError::GrammarCycle(start.to_string()));
    }
    let expander = Expander {
        grammar,
        heights,
        max_depth: config.max_depth,
    };
    let mut pool: Vec<String> = grammar.fillers(&config.button_slot).iter().map(|f| f.mr.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let attempts = budget.saturating_mul(config.attempts_per_pair.max(1));
    for _ in 0..attempts {
        if out.len() >= budget {
            break;
        }
        let (utt, mr_text) = expander.expand_nt(start, 0, &mut rng);
        let utterance = utt.split_whitespace().collect::<Vec<_>>().join(" ");
        let mr = parse_mr_text(&mr_text)?;
        let sample_seed: u64 = rng.gen();
        if !seen.insert((utterance.clone(), mr.to_string())) {
            continue;
        }
        let truth = button_labels(&mr);
        let screen_buttons = if truth.is_empty() {
            None
        } else {
            for t in &truth {
                if !pool.contains(t) {
                    pool.push(t.clone());
                }
            }
            let n = config.screen_size.min(pool.len()).max(truth.len());
            Some(sample_screen_buttons(&pool, n, sample_seed, &truth)?)
        };
        out.push(SynthPair {
            utterance,
            mr,
            screen_buttons,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::mr::Command;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("Label {i}")).collect()
    }

    #[test]
    fn single_expansion() {
        let g = Grammar::parse("$CMD ::= \"tap $BTN\" => \"( PRESS , ' $BTN ' )\"\n$BTN := \"Settings\"\n").unwrap();
        let pairs = expand_scfg(&g, 10, 1, &SynthConfig::default()).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].utterance, "tap settings");
        assert_eq!(pairs[0].mr, MeaningRepresentation::single(Command::press("Settings")));
        assert_eq!(pairs[0].screen_buttons.as_deref(), Some(&["Settings".to_string()][..]));
    }

    #[test]
    fn empty_grammar_yields_nothing() {
        let g = Grammar::parse("# nothing\n").unwrap();
        assert!(expand_scfg(&g, 10, 1, &SynthConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn cycle_is_detected() {
        let g = Grammar::parse("$A ::= \"x $B\" => \"$B\"\n$B ::= \"y $A\" => \"$A\"\n").unwrap();
        assert!(matches!(
            expand_scfg(&g, 1, 0, &SynthConfig::default()),
            Err(LangError::GrammarCycle(_))
        ));
    }

    #[test]
    fn recursion_terminates_under_depth_limit() {
        let g = Grammar::parse(concat!(
            "$ROOT ::= \"$ROOT:1 then $ROOT:2\" => \"$ROOT:1 ; $ROOT:2\"\n",
            "$ROOT ::= \"swipe $DIR\" => \"( SWIPE , $DIR )\"\n",
            "$DIR := \"up\" => \"UP\"\n$DIR := \"down\" => \"DOWN\"\n",
        ))
        .unwrap();
        let pairs = expand_scfg(&g, 50, 3, &SynthConfig::default()).unwrap();
        assert_eq!(pairs.len(), 50);
        assert!(pairs.iter().all(|p| p.mr.commands().len() <= 1 << 7));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(Grammar::parse("CMD ::= \"x\" => \"y\""), Err(LangError::GrammarSyntax { line: 1, .. })));
        assert!(matches!(Grammar::parse("$CMD ::= \"x\""), Err(LangError::GrammarSyntax { .. })));
        assert!(matches!(Grammar::parse("$CMD ::= \"x $Q\" => \"$Q\""), Err(LangError::UnknownSymbol(_))));
        assert!(matches!(
            Grammar::parse("$CMD ::= \"x $Q\" => \"y\"\n$Q := \"q\""),
            Err(LangError::UnboundSlot { .. })
        ));
        assert!(matches!(Grammar::parse("$CMD ::= \"x"), Err(LangError::GrammarSyntax { .. })));
    }

    #[test]
    fn filler_quotes_are_escaped_in_mr() {
        let g = Grammar::parse("$CMD ::= \"type $T\" => \"( ENTER , ' $T ' )\"\n$T := \"don't\"\n").unwrap();
        let pairs = expand_scfg(&g, 1, 0, &SynthConfig::default()).unwrap();
        assert_eq!(pairs[0].mr, MeaningRepresentation::single(Command::enter("don't")));
    }

    #[test]
    fn expansion_is_deterministic() {
        let g = Grammar::default_grammar();
        let cfg = SynthConfig::default();
        assert_eq!(expand_scfg(&g, 40, 9, &cfg).unwrap(), expand_scfg(&g, 40, 9, &cfg).unwrap());
        assert_ne!(expand_scfg(&g, 40, 9, &cfg).unwrap(), expand_scfg(&g, 40, 10, &cfg).unwrap());
    }

    #[test]
    fn sampling_contract() {
        let pool = labels(10);
        let s = sample_screen_buttons(&pool, 5, 7, &[]).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.iter().collect::<BTreeSet<_>>().len(), 5);
        assert_eq!(s, sample_screen_buttons(&pool, 5, 7, &[]).unwrap());
        let truth = vec!["Label 3".to_string()];
        for seed in 0..20 {
            assert!(sample_screen_buttons(&pool, 5, seed, &truth).unwrap().contains(&truth[0]));
        }
        assert!(matches!(
            sample_screen_buttons(&pool, 11, 0, &[]),
            Err(LangError::PoolTooSmall { needed: 11, available: 10 })
        ));
    }
}
