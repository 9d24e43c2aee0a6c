mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voxnav_core::dialogue::Device;
use voxnav_core::featdex::{rank_features, ScoringConfig};
use voxnav_core::harness::fixtures::bundles;
use voxnav_core::harness::SimDevice;

#[test]
fn ranking_matches_brute_force_on_every_fixture_app() {
    let device = SimDevice::with_bundles(bundles().into_iter().map(|(_, b)| b)).unwrap();
    let cfg = ScoringConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    for entry in device.feature_index().apps.values() {
        assert!(entry.intents.len() <= 50);
        for _ in 0..200 {
            let query = common::random_query(&mut rng, entry);
            let k = rng.gen_range(1..=entry.intents.len() + 1);
            let got: Vec<_> = rank_features(entry, &query, k, &cfg)
                .unwrap()
                .entries
                .into_iter()
                .map(|m| m.intent)
                .collect();
            assert_eq!(got, common::brute_force_rank(entry, &query, k, &cfg), "{query:?} k={k}");
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
}

#[test]
fn oracle_agrees_under_other_weights() {
    let device = SimDevice::with_bundles(bundles().into_iter().map(|(_, b)| b)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for entry in device.feature_index().apps.values() {
        for _ in 0..50 {
            let cfg = ScoringConfig {
                w_count: rng.gen_range(0.0..3.0),
                w_fraction: rng.gen_range(0.0..3.0),
                deep_link_bonus: rng.gen_range(0.0..2.0),
                fallback_threshold: 0.5,
            };
            let query = common::random_query(&mut rng, entry);
            let got: Vec<_> = rank_features(entry, &query, 3, &cfg)
                .unwrap()
                .entries
                .into_iter()
                .map(|m| m.intent)
                .collect();
            assert_eq!(got, common::brute_force_rank(entry, &query, 3, &cfg));
        }
    }
}
