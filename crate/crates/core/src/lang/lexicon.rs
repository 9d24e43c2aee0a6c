use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::mr::ActionKind;
use super::LangError;

const DEFAULT_LEXICON: &str = include_str!("../../data/default_lexicon.toml");

/// Action phrases, the synonym thesaurus, fillers and chain delimiters.
/// Immutable once built; every entry is lowercase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    actions: BTreeMap<ActionKind, Vec<String>>,
    #[serde(default)]
    synonyms: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    fillers: Vec<String>,
    #[serde(default)]
    chain_delimiters: Vec<String>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Self::from_toml(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }
}

impl Lexicon {
    pub fn new(
        actions: BTreeMap<ActionKind, Vec<String>>,
        synonyms: BTreeMap<String, Vec<String>>,
        fillers: Vec<String>,
        chain_delimiters: Vec<String>,
    ) -> Result<Self, LangError> {
        let lex = Self {
            actions,
            synonyms,
            fillers,
            chain_delimiters,
        };
        lex.validate()?;
        Ok(lex)
    }

    pub fn from_toml(text: &str) -> Result<Self, LangError> {
        let lex: Lexicon = toml::from_str(text).map_err(|e| LangError::InvalidLexicon(e.to_string()))?;
        lex.validate()?;
        Ok(lex)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("lexicon serializes")
    }

    fn validate(&self) -> Result<(), LangError> {
        let mut seen: BTreeMap<&str, ActionKind> = BTreeMap::new();
        for action in ActionKind::ALL {
            let phrases = self.phrases(action);
            if phrases.is_empty() {
                return Err(LangError::InvalidLexicon(format!("{action} has no phrases")));
            }
            for p in phrases {
                check_lower(p)?;
                if p.split_whitespace().collect::<Vec<_>>().join(" ") != *p {
                    return Err(LangError::InvalidLexicon(format!("phrase {p:?} has irregular spacing")));
                }
                if let Some(other) = seen.insert(p, action) {
                    return Err(LangError::InvalidLexicon(format!(
                        "phrase {p:?} used by both {other} and {action}"
                    )));
                }
            }
        }
        for (head, list) in &self.synonyms {
            check_lower(head)?;
            for s in list {
                check_lower(s)?;
            }
        }
        for w in self.fillers.iter().chain(&self.chain_delimiters) {
            check_lower(w)?;
        }
        Ok(())
    }

    pub fn phrases(&self, action: ActionKind) -> &[String] {
        self.actions.get(&action).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_filler(&self, word: &str) -> bool {
        self.fillers.iter().any(|f| f == word)
    }

    pub fn is_delimiter(&self, word: &str) -> bool {
        self.chain_delimiters.iter().any(|d| d == word)
    }

    pub fn fillers(&self) -> &[String] {
        &self.fillers
    }

    /// One-hop synonyms of `word`, excluding `word` itself.
    pub fn synonyms_of(&self, word: &str) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        if let Some(list) = self.synonyms.get(word) {
            out.extend(list.iter().map(String::as_str));
        }
        for (head, list) in &self.synonyms {
            if list.iter().any(|s| s == word) {
                out.insert(head.as_str());
            }
        }
        out.remove(word);
        out
    }

    /// Returns a copy with the given phrases removed from the action sets.
    /// Used to measure robustness to phrasings the parser was not given.
    pub fn without_phrases(&self, withheld: &[&str]) -> Result<Self, LangError> {
        let mut lex = self.clone();
        for list in lex.actions.values_mut() {
            list.retain(|p| !withheld.contains(&p.as_str()));
        }
        lex.validate()?;
        Ok(lex)
    }

    /// Longest action phrase that prefixes `words`. When none matches, the
    /// longest one-hop synonym of any action phrase is tried instead; a
    /// synonym shared by two actions matches neither.
    pub fn match_action(&self, words: &[&str]) -> Option<(ActionKind, usize)> {
        let literal = ActionKind::ALL
            .into_iter()
            .flat_map(|a| self.phrases(a).iter().map(move |p| (a, p.as_str())));
        if let Some(hit) = longest_prefix(literal, words) {
            return Some(hit);
        }
        let mut via_synonym: BTreeMap<&str, BTreeSet<ActionKind>> = BTreeMap::new();
        for action in ActionKind::ALL {
            for phrase in self.phrases(action) {
                for syn in self.synonyms_of(phrase) {
                    via_synonym.entry(syn).or_default().insert(action);
                }
            }
        }
        let unambiguous = via_synonym
            .into_iter()
            .filter(|(_, actions)| actions.len() == 1)
            .map(|(syn, actions)| (*actions.first().expect("nonempty"), syn));
        longest_prefix(unambiguous, words)
    }
}

fn longest_prefix<'a>(candidates: impl Iterator<Item = (ActionKind, &'a str)>, words: &[&str]) -> Option<(ActionKind, usize)> {
    let mut best: Option<(ActionKind, usize)> = None;
    for (action, phrase) in candidates {
        let parts: Vec<&str> = phrase.split(' ').collect();
        if parts.len() <= words.len()
            && parts.iter().zip(words).all(|(p, w)| p == w)
            && best.is_none_or(|(_, n)| parts.len() > n)
        {
            best = Some((action, parts.len()));
        }
    }
    best
}

fn check_lower(s: &str) -> Result<(), LangError> {
    if s.is_empty() || s.to_lowercase() != s {
        return Err(LangError::InvalidLexicon(format!("entry {s:?} must be nonempty lowercase")));
    }
    Ok(())
}
