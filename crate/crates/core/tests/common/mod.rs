//! Helpers shared by integration test targets. Each target uses a subset.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use voxnav_core::axml::{AttrValue, Namespace, XmlAttribute, XmlDocument, XmlElement, XmlNode};
use voxnav_core::featdex::{recommend, AppEntry, EvalCase, FeatureIndex, ScoringConfig, ScreenOracle};
use voxnav_core::manifest::LaunchIntent;

pub const ANDROID_NS: &str = "http://schemas.android.com/apk/res/android";

const NAMES: [&str; 10] = [
    "activity",
    "intent-filter",
    "action",
    "category",
    "data",
    "service",
    "meta-data",
    "provider",
    "receiver",
    "uses-permission",
];
const ATTRS: [&str; 8] = ["name", "exported", "scheme", "host", "pathPrefix", "label", "priority", "theme"];
const TEXT: [&str; 8] = [
    "com.example.app",
    ".MainActivity",
    "https",
    "www.youtube.com",
    "/browse",
    "Écran d'accueil",
    "日本語のラベル",
    "a \"quoted\" <value> & more",
];

fn random_value(rng: &mut ChaCha8Rng) -> AttrValue {
    match rng.gen_range(0..6) {
        0 => AttrValue::Bool(rng.gen()),
        1 => AttrValue::IntDec(rng.gen()),
        2 => AttrValue::IntHex(rng.gen()),
        3 => {
            let len = rng.gen_range(0..24);
            AttrValue::String((0..len).map(|_| rng.gen_range('!'..='~')).collect())
        }
        _ => AttrValue::String(TEXT.choose(rng).unwrap().to_string()),
    }
}

fn random_element(rng: &mut ChaCha8Rng, depth: usize) -> XmlElement {
    let mut e = XmlElement::new(*NAMES.choose(rng).unwrap());
    let mut names: Vec<&str> = ATTRS.to_vec();
    names.shuffle(rng);
    for name in names.into_iter().take(rng.gen_range(0..5)) {
        e.attributes.push(XmlAttribute {
            namespace: rng.gen_bool(0.7).then(|| ANDROID_NS.to_string()),
            name: name.to_string(),
            value: random_value(rng),
        });
    }
    if depth > 0 {
        for _ in 0..rng.gen_range(0..4) {
            if rng.gen_bool(0.15) {
                e.children.push(XmlNode::Text(TEXT.choose(rng).unwrap().to_string()));
            } else {
                e.children.push(XmlNode::Element(random_element(rng, depth - 1)));
            }
        }
    }
    e
}

/// A manifest-shaped document with random elements, attributes and text.
pub fn random_document(rng: &mut ChaCha8Rng) -> XmlDocument {
    let mut root = XmlElement::new("manifest");
    root.attributes.push(XmlAttribute {
        namespace: None,
        name: "package".into(),
        value: AttrValue::String(format!("com.random.app{}", rng.gen_range(0..1000))),
    });
    let depth = rng.gen_range(1..5);
    for _ in 0..rng.gen_range(1..6) {
        root.children.push(XmlNode::Element(random_element(rng, depth)));
    }
    let mut doc = XmlDocument::new(root);
    doc.namespaces.push(Namespace {
        prefix: "android".into(),
        uri: ANDROID_NS.into(),
    });
    doc
}

const STOP: [&str; 9] = ["the", "a", "an", "in", "on", "from", "page", "tab", "open"];

/// Lowercase alphanumeric words, first occurrence only, stop words removed.
fn oracle_tokens(phrase: &str) -> Vec<String> {
    let cleaned: String = phrase
        .chars()
        .filter(|c| *c != '\'' && *c != '\u{2019}')
        .map(|c| if c.is_alphanumeric() { c.to_lowercase().next().unwrap() } else { ' ' })
        .collect();
    let mut out: Vec<String> = Vec::new();
    for w in cleaned.split_whitespace() {
        if !STOP.contains(&w) && !out.iter().any(|o| o == w) {
            out.push(w.to_string());
        }
    }
    out
}

/// Exhaustive ranking: score every intent, keep those sharing a keyword,
/// then repeatedly take the best remaining one.
pub fn brute_force_rank(entry: &AppEntry, phrase: &str, k: usize, cfg: &ScoringConfig) -> Vec<LaunchIntent> {
    let query = oracle_tokens(phrase);
    let mut pool: Vec<(f64, bool, &LaunchIntent)> = Vec::new();
    for intent in &entry.intents {
        let kws: Vec<&str> = intent.keywords.tokens().collect();
        let count = query.iter().filter(|q| kws.contains(&q.as_str())).count();
        if count == 0 {
            continue;
        }
        let deep = intent.is_deep_link();
        let total = cfg.w_count * count as f64
            + cfg.w_fraction * (count as f64 / query.len() as f64)
            + if deep { cfg.deep_link_bonus } else { 0.0 };
        pool.push((total, deep, intent));
    }
    let better = |a: &(f64, bool, &LaunchIntent), b: &(f64, bool, &LaunchIntent)| {
        if a.0 != b.0 {
            return a.0 > b.0;
        }
        if a.1 != b.1 {
            return a.1;
        }
        if a.2.source_component != b.2.source_component {
            return a.2.source_component < b.2.source_component;
        }
        a.2.describe() < b.2.describe()
    };
    let mut out = Vec::new();
    while out.len() < k && !pool.is_empty() {
        let mut best = 0;
        for i in 1..pool.len() {
            if better(&pool[i], &pool[best]) {
                best = i;
            }
        }
        out.push(pool.remove(best).2.clone());
    }
    out
}

/// One to four words drawn from the app's keywords plus noise words.
pub fn random_query(rng: &mut ChaCha8Rng, entry: &AppEntry) -> String {
    let mut vocab: Vec<String> = entry
        .intents
        .iter()
        .flat_map(|i| i.keywords.tokens().map(str::to_string))
        .collect();
    vocab.extend(["the", "page", "weather", "music", "list", "settings", "zzz"].map(String::from));
    vocab.sort();
    vocab.dedup();
    let n = rng.gen_range(1..=4);
    (0..n).map(|_| vocab.choose(rng).unwrap().clone()).collect::<Vec<_>>().join(" ")
}

/// Cases built from the ranker's own top-3 output: `first` hit at rank 1,
/// `later` hit only at rank 2 or 3, `misses` whose truth is opened by none.
pub fn engineered_cases(
    index: &FeatureIndex,
    oracle: &dyn ScreenOracle,
    first: usize,
    later: usize,
    misses: usize,
) -> Vec<EvalCase> {
    let cfg = ScoringConfig::default();
    let mut hits1 = Vec::new();
    let mut hits23 = Vec::new();
    for entry in index.apps.values() {
        let mut words: Vec<String> = entry
            .intents
            .iter()
            .flat_map(|i| i.keywords.tokens().map(str::to_string))
            .collect();
        words.sort();
        words.dedup();
        let label = entry.package.label.to_lowercase();
        let mut phrases: Vec<String> = words.clone();
        for a in &words {
            for b in &words {
                if a < b {
                    phrases.push(format!("{a} {b}"));
                }
            }
        }
        for phrase in phrases {
            let picks = recommend(index, &label, Some(&phrase), 3, &cfg).unwrap();
            let screens: Vec<String> = picks.iter().map(|i| oracle.screen_for(i).unwrap()).collect();
            let case = |truth: &str| EvalCase {
                id: String::new(),
                command_text: format!("open {phrase} in {label}"),
                app_phrase: label.clone(),
                feature_phrase: phrase.clone(),
                ground_truth_screen_id: truth.to_string(),
            };
            hits1.push(case(&screens[0]));
            if let Some(s) = screens.iter().skip(1).find(|s| **s != screens[0]) {
                hits23.push(case(s));
            }
        }
    }
    assert!(hits1.len() >= first + misses && hits23.len() >= later, "fixture too small");
    let mut out: Vec<EvalCase> = hits1[..first].to_vec();
    out.extend_from_slice(&hits23[..later]);
    for c in &hits1[first..first + misses] {
        out.push(EvalCase {
            ground_truth_screen_id: "unreachable_screen".into(),
            ..c.clone()
        });
    }
    for (i, c) in out.iter_mut().enumerate() {
        c.id = format!("e{i:02}");
    }
    out
}
