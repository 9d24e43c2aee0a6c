use serde::{Deserialize, Serialize};

use super::{simple_name, ManifestError, Result};

/// Tokens that class-name splitting produces constantly and that say nothing
/// about the feature behind an intent.
pub const BOILERPLATE_TOKENS: [&str; 6] = ["activity", "fragment", "screen", "main", "app", "ui"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeywordOrigin {
    ActivityName,
    PathPrefix,
    ActionName,
    /// App label; only used to seed a launcher whose own name is all
    /// boilerplate.
    Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Keyword {
    pub token: String,
    pub origin: KeywordOrigin,
}

/// Ordered, deduplicated lowercase keywords.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KeywordSet {
    entries: Vec<Keyword>,
}

impl KeywordSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a token unless it is empty, boilerplate or already present.
    pub fn push(&mut self, token: &str, origin: KeywordOrigin) -> bool {
        let token = token.to_lowercase();
        if token.is_empty() || BOILERPLATE_TOKENS.contains(&token.as_str()) || self.contains(&token) {
            return false;
        }
        self.entries.push(Keyword { token, origin });
        true
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.iter().any(|k| k.token == token)
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|k| k.token.as_str())
    }

    pub fn entries(&self) -> &[Keyword] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Where keywords for one intent come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeywordSource<'a> {
    pub activity_name: &'a str,
    pub path_prefix: Option<&'a str>,
    pub action_name: Option<&'a str>,
}

/// Splits a Java identifier on camel-case boundaries, digits and underscores.
/// Acronyms stay together: `URLSearchView` gives `URL`, `Search`, `View`.
pub fn split_identifier(name: &str) -> Vec<String> {
    let chars: Vec<char> = name.chars().collect();
    let mut words = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphabetic() {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            continue;
        }
        if c.is_uppercase() && !current.is_empty() {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || (prev.is_uppercase() && next_lower) {
                words.push(std::mem::take(&mut current));
            }
        }
        current.push(c);
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
}

/// Derives the keyword set for an intent: activity simple name split into
/// words, deep-link path segments, and the action name suffix.
pub fn derive_keywords(source: KeywordSource<'_>) -> Result<KeywordSet> {
    let mut set = KeywordSet::new();
    for word in split_identifier(simple_name(source.activity_name)) {
        set.push(&word, KeywordOrigin::ActivityName);
    }
    if let Some(path) = source.path_prefix {
        for seg in path.split(['/', '-']) {
            set.push(seg, KeywordOrigin::PathPrefix);
        }
    }
    if let Some(action) = source.action_name {
        let suffix = action.rsplit('.').next().unwrap_or(action);
        set.push(suffix, KeywordOrigin::ActionName);
    }
    if set.is_empty() {
        return Err(ManifestError::EmptyKeywordSet(source.activity_name.to_string()));
    }
    Ok(set)
}
