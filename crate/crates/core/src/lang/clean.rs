use std::fmt;

use serde::{Deserialize, Serialize};

use super::lexicon::Lexicon;
use super::LangError;

/// A cleaned word. Quoted tokens hold a double-quoted span verbatim and are
/// exempt from lowercasing, punctuation stripping and filler removal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub quoted: bool,
}

impl Token {
    pub fn word(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            quoted: false,
        }
    }

    pub fn quoted(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            quoted: true,
        }
    }

    /// Text usable for keyword matching; `None` for quoted spans.
    pub fn bare(&self) -> Option<&str> {
        (!self.quoted).then_some(self.text.as_str())
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.quoted {
            write!(f, "\"{}\"", self.text)
        } else {
            f.write_str(&self.text)
        }
    }
}

/// Lowercases and trims surrounding punctuation. Internal punctuation such
/// as the hyphen in "4-digit" survives, and a leading `#` is kept.
pub fn clean_word(raw: &str) -> String {
    let lower = raw.to_lowercase();
    let keep = |c: char| c.is_alphanumeric();
    let start = lower
        .char_indices()
        .find(|&(_, c)| keep(c) || c == '#')
        .map(|(i, _)| i);
    let Some(start) = start else {
        return String::new();
    };
    let end = lower
        .char_indices()
        .rev()
        .find(|&(_, c)| keep(c))
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(start);
    if end <= start {
        return String::new();
    }
    lower[start..end].to_string()
}

fn is_open_quote(c: char) -> bool {
    matches!(c, '"' | '\u{201c}')
}

fn is_close_quote(c: char) -> bool {
    matches!(c, '"' | '\u{201d}')
}

pub fn tokenize_and_clean(utterance: &str, lexicon: &Lexicon) -> Result<Vec<Token>, LangError> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    let mut chars = utterance.chars();
    let flush = |word: &mut String, tokens: &mut Vec<Token>| {
        let cleaned = clean_word(word);
        word.clear();
        if !cleaned.is_empty() && !lexicon.is_filler(&cleaned) {
            tokens.push(Token::word(cleaned));
        }
    };
    while let Some(c) = chars.next() {
        if is_open_quote(c) {
            flush(&mut word, &mut tokens);
            let mut span = String::new();
            for q in chars.by_ref() {
                if is_close_quote(q) {
                    break;
                }
                span.push(q);
            }
            let span = span.trim();
            if !span.is_empty() {
                tokens.push(Token::quoted(span));
            }
        } else if c.is_whitespace() {
            flush(&mut word, &mut tokens);
        } else {
            word.push(c);
        }
    }
    flush(&mut word, &mut tokens);
    if tokens.is_empty() {
        return Err(LangError::EmptyUtterance);
    }
    Ok(tokens)
}

/// Leading bare words of `tokens`, stopping at the first quoted token.
pub fn bare_prefix(tokens: &[Token]) -> Vec<&str> {
    tokens.iter().map_while(Token::bare).collect()
}

/// Index ranges of the command spans inside `tokens`. A delimiter splits
/// only when the words after it begin with a recognised action.
pub fn chain_segments(tokens: &[Token], lexicon: &Lexicon) -> Vec<std::ops::Range<usize>> {
    let mut segments = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < tokens.len() {
        let is_split = i > start
            && tokens[i].bare().is_some_and(|w| lexicon.is_delimiter(w))
            && lexicon.match_action(&bare_prefix(&tokens[i + 1..])).is_some();
        if is_split {
            let mut end = i;
            while end > start && tokens[end - 1].bare().is_some_and(|w| lexicon.is_delimiter(w)) {
                end -= 1;
            }
            if end > start {
                segments.push(start..end);
            }
            start = i + 1;
        }
        i += 1;
    }
    if start < tokens.len() {
        segments.push(start..tokens.len());
    }
    segments
}

pub fn split_chain(tokens: &[Token], lexicon: &Lexicon) -> Vec<Vec<Token>> {
    chain_segments(tokens, lexicon)
        .into_iter()
        .map(|r| tokens[r].to_vec())
        .collect()
}
