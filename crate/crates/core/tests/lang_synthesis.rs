use proptest::prelude::*;
use voxnav_core::lang::{
    evaluate_parser, expand_scfg, ActionKind, paraphrase_lexical, parse, parse_mr_text, serialize_mr, CommandParser, Grammar,
    Lexicon, RuleParser, SynthConfig, SynthPair, Target, TestCase,
};

fn corpus(budget: usize, seed: u64) -> Vec<SynthPair> {
    expand_scfg(&Grammar::default_grammar(), budget, seed, &SynthConfig::default()).unwrap()
}

#[test]
fn default_grammar_is_self_consistent() {
    let lex = Lexicon::default();
    let pairs = corpus(600, 11);
    assert_eq!(pairs.len(), 600);
    for p in &pairs {
        let got = parse(&p.utterance, p.schema(), &lex).unwrap_or_else(|e| panic!("{:?}: {e}", p.utterance));
        assert_eq!(got, p.mr, "{}", p.utterance);
        assert_eq!(parse_mr_text(&serialize_mr(&p.mr)).unwrap(), p.mr);
    }
}

#[test]
fn paraphrases_reparse_to_the_same_mr() {
    let lex = Lexicon::default();
    for p in corpus(200, 5) {
        for v in paraphrase_lexical(&p, &lex, 1) {
            assert_eq!(parse(&v.utterance, v.schema(), &lex).unwrap(), v.mr, "{}", v.utterance);
        }
    }
}

#[test]
fn withholding_one_phrase_per_action_keeps_mean_em_high() {
    let full = Lexicon::default();
    let cases: Vec<TestCase> = corpus(150, 21)
        .iter()
        .flat_map(|p| paraphrase_lexical(p, &full, 2))
        .map(|p| TestCase {
            schema: p.schema().to_vec(),
            utterance: p.utterance,
            expected: p.mr,
        })
        .collect();
    let mut ems = Vec::new();
    for o in full.phrases(ActionKind::Open) {
        for p in full.phrases(ActionKind::Press) {
            for s in full.phrases(ActionKind::Swipe) {
                for e in full.phrases(ActionKind::Enter) {
                    let reduced = full.without_phrases(&[o, p, s, e]).unwrap();
                    let m = evaluate_parser(&RuleParser::new(reduced), &cases).unwrap();
                    assert!(m.em_accuracy <= m.all_targets_correct);
                    ems.push(m.em_accuracy);
                }
            }
        }
    }
    assert_eq!(ems.len(), 96);
    let mean = ems.iter().sum::<f64>() / ems.len() as f64;
    assert!(mean >= 90.0, "mean EM {mean}");
    assert!(ems.iter().any(|&e| e < 100.0), "some withheld phrase should cost accuracy");
}

#[test]
fn button_targets_stay_in_schema() {
    let parser = RuleParser::default();
    for p in corpus(300, 8) {
        let mr = parser.parse(&p.utterance, p.schema()).unwrap();
        for c in mr.commands() {
            if let Target::Button { label } = c.target() {
                assert!(p.schema().contains(label));
            }
        }
    }
}

fn word() -> impl Strategy<Value = String> {
    "[a-z]{1,8}"
}

proptest! {
    #[test]
    fn enter_copies_remainder(words in proptest::collection::vec(word(), 1..8)) {
        let lex = Lexicon::default();
        let text = words.join(" ");
        let utterance = format!("Enter {text}");
        if let Ok(mr) = parse(&utterance, &[], &lex) {
            if mr.commands().len() == 1 {
                let kept: Vec<&str> = words
                    .iter()
                    .map(String::as_str)
                    .filter(|w| !lex.fillers().iter().any(|f| f == w))
                    .collect();
                prop_assert_eq!(mr.commands()[0].target(), &Target::Text { literal: kept.join(" ") });
            }
        }
    }

    #[test]
    fn press_never_leaves_schema(
        query in proptest::collection::vec(word(), 1..4),
        schema in proptest::collection::vec("[A-Za-z]{1,6}( [a-z]{1,6}){0,2}", 1..6),
    ) {
        let utterance = format!("tap {}", query.join(" "));
        if let Ok(mr) = parse(&utterance, &schema, &Lexicon::default()) {
            for c in mr.commands() {
                if let Target::Button { label } = c.target() {
                    prop_assert!(schema.contains(label));
                }
            }
        }
    }
}
