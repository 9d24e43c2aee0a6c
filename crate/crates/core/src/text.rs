//! Text normalization shared by app matching, keyword scoring and target
//! matching.

/// Lowercases, drops apostrophes, turns every other punctuation character
/// into a space and collapses whitespace.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        if c == '\'' || c == '\u{2019}' {
            continue;
        }
        if c.is_alphanumeric() {
            out.extend(c.to_lowercase());
        } else {
            out.push(' ');
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Normalized whitespace tokens, deduplicated in first-seen order.
pub fn tokens(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for t in normalize(text).split(' ').filter(|t| !t.is_empty()) {
        if !out.iter().any(|o| o == t) {
            out.push(t.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        assert_eq!(normalize("  World-Cuisines!! "), "world cuisines");
        assert_eq!(normalize("Chef's   Table"), "chefs table");
        assert_eq!(normalize(""), "");
        assert_eq!(tokens("my recipes, My Recipes"), ["my", "recipes"]);
    }
}
