use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::clean::{bare_prefix, chain_segments, tokenize_and_clean, Token};
use super::lexicon::Lexicon;
use super::scfg::SynthPair;

/// Rewrites the action phrase of each chained command with every phrase
/// the lexicon lists for that action, one command at a time. The original
/// pair comes first; the remaining variants are ordered by `seed`.
pub fn paraphrase_lexical(pair: &SynthPair, lexicon: &Lexicon, seed: u64) -> Vec<SynthPair> {
    let Ok(tokens) = tokenize_and_clean(&pair.utterance, lexicon) else {
        return vec![pair.clone()];
    };
    let render = |tokens: &[Token]| tokens.iter().map(Token::to_string).collect::<Vec<_>>().join(" ");
    let mut variants: Vec<String> = Vec::new();
    for seg in chain_segments(&tokens, lexicon) {
        let Some((action, consumed)) = lexicon.match_action(&bare_prefix(&tokens[seg.clone()])) else {
            continue;
        };
        for phrase in lexicon.phrases(action) {
            let mut rewritten: Vec<Token> = tokens[..seg.start].to_vec();
            rewritten.extend(phrase.split(' ').map(Token::word));
            rewritten.extend_from_slice(&tokens[seg.start + consumed..]);
            let text = render(&rewritten);
            if text != pair.utterance && !variants.contains(&text) {
                variants.push(text);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    variants.shuffle(&mut rng);
    std::iter::once(pair.clone())
        .chain(variants.into_iter().map(|utterance| SynthPair {
            utterance,
            mr: pair.mr.clone(),
            screen_buttons: pair.screen_buttons.clone(),
        }))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::lang::mr::{ActionKind, Command, MeaningRepresentation};

    fn press_settings() -> SynthPair {
        SynthPair {
            utterance: "tap settings".into(),
            mr: MeaningRepresentation::single(Command::press("Settings")),
            screen_buttons: Some(vec!["Settings".into()]),
        }
    }

    #[test]
    fn every_press_phrase_appears() {
        let out = paraphrase_lexical(&press_settings(), &Lexicon::default(), 1);
        let utts: BTreeSet<&str> = out.iter().map(|p| p.utterance.as_str()).collect();
        let expected: BTreeSet<&str> = [
            "tap settings",
            "click settings",
            "press settings",
            "touch settings",
            "hit settings",
            "select settings",
        ]
        .into();
        assert_eq!(utts, expected);
        assert_eq!(out[0], press_settings());
        assert!(out.iter().all(|p| p.mr == press_settings().mr));
    }

    #[test]
    fn one_phrase_per_action_is_identity() {
        let actions: BTreeMap<ActionKind, Vec<String>> = ActionKind::ALL
            .into_iter()
            .map(|a| (a, vec![a.as_str().to_lowercase()]))
            .collect();
        let lex = Lexicon::new(actions, BTreeMap::new(), vec![], vec!["then".into()]).unwrap();
        let pair = SynthPair {
            utterance: "press settings".into(),
            ..press_settings()
        };
        assert_eq!(paraphrase_lexical(&pair, &lex, 3), vec![pair]);
    }

    #[test]
    fn chained_commands_vary_one_at_a_time() {
        let pair = SynthPair {
            utterance: "swipe up then type fish and chips".into(),
            mr: MeaningRepresentation::new(vec![
                Command::swipe(crate::lang::Direction::Up),
                Command::enter("fish and chips"),
            ])
            .unwrap(),
            screen_buttons: None,
        };
        let out = paraphrase_lexical(&pair, &Lexicon::default(), 0);
        let utts: BTreeSet<&str> = out.iter().map(|p| p.utterance.as_str()).collect();
        assert_eq!(
            utts,
            [
                "swipe up then type fish and chips",
                "scroll up then type fish and chips",
                "swipe up then enter fish and chips",
            ]
            .into()
        );
    }
}
