use voxnav_core::axml::decode_manifest;
use voxnav_core::dialogue::{Device, DeviceError, DialogueConfig, DialogueSession, Status};
use voxnav_core::featdex::{evaluate_hit_rate, ScoringConfig};
use voxnav_core::harness::fixtures::{
    broken_links, bundles, fixtures_dir, hit_rate_cases, load_bundles, scenarios, APPS_DIR,
};
use voxnav_core::harness::{
    run_scenario, AppBundle, HarnessError, ManifestSource, ScenarioOptions, ScenarioScript, SimDevice, HOME_SCREEN_ID,
};
use voxnav_core::lang::{Lexicon, RuleParser};
use voxnav_core::manifest::{collect_intents, extract_package, IntentKind, LaunchIntent};
use voxnav_core::screen::{assign_tooltips, collect_interactive};

fn device() -> SimDevice {
    SimDevice::with_bundles(bundles().into_iter().map(|(_, b)| b)).unwrap()
}

fn bundle(name: &str) -> AppBundle {
    bundles().into_iter().find(|(n, _)| *n == name).unwrap().1
}

fn session() -> DialogueSession<SimDevice> {
    DialogueSession::new(device(), Lexicon::default(), DialogueConfig::default())
}

fn script(name: &str) -> ScenarioScript {
    scenarios().into_iter().find(|s| s.name == name).unwrap()
}

fn deep(pkg: &str, uri: &str) -> LaunchIntent {
    LaunchIntent {
        package_name: pkg.into(),
        kind: IntentKind::DeepLink { uri: uri.into() },
        keywords: Default::default(),
        source_component: String::new(),
    }
}

fn explicit(pkg: &str, activity: &str) -> LaunchIntent {
    LaunchIntent {
        package_name: pkg.into(),
        kind: IntentKind::Explicit {
            package_name: pkg.into(),
            activity_name: activity.into(),
            action_name: None,
        },
        keywords: Default::default(),
        source_component: activity.into(),
    }
}

#[test]
fn checked_in_bundles_load_and_install() {
    let loaded = load_bundles(&fixtures_dir().join(APPS_DIR)).unwrap();
    assert_eq!(loaded.len(), 5);
    let d = SimDevice::with_bundles(loaded).unwrap();
    assert_eq!(d.app_summaries().len(), 5);
    assert!(matches!(bundle("fast_notepad").manifest, ManifestSource::Xml(_)));
}

#[test]
fn install_two_then_reinstall() {
    let mut d = SimDevice::new();
    d.install(bundle("timer")).unwrap();
    d.install(bundle("youtube")).unwrap();
    assert_eq!(d.feature_index().len(), 2);

    // the new version drops one deep link and adds another
    let mut updated = bundle("youtube");
    let ManifestSource::Binary(bytes) = &updated.manifest else { panic!() };
    let xml = voxnav_core::axml::to_xml_string(&decode_manifest(bytes).unwrap())
        .replace("/feed/history", "/feed/trending");
    updated.manifest = ManifestSource::Xml(xml);
    d.install(updated).unwrap();
    assert_eq!(d.feature_index().len(), 2);
    let links = d.app_summary("com.google.android.youtube").unwrap().deep_links;
    assert!(links.contains(&"https://www.youtube.com/feed/trending".to_string()));
    assert!(!links.contains(&"https://www.youtube.com/feed/history".to_string()));
}

#[test]
fn corrupt_manifest_leaves_device_unchanged() {
    let mut d = device();
    let before_index = serde_json::to_string(d.feature_index()).unwrap();
    let before_screen = d.current_screen().clone();
    let mut broken = bundle("timer");
    broken.manifest = ManifestSource::Binary(vec![3, 0, 8, 0, 0xff, 0, 0, 0, 1, 2]);
    assert!(matches!(d.install(broken), Err(HarnessError::Axml(_))));
    assert_eq!(serde_json::to_string(d.feature_index()).unwrap(), before_index);
    assert_eq!(d.current_screen(), &before_screen);
}

#[test]
fn launcher_must_open_entry_screen() {
    let mut b = bundle("timer");
    b.bindings.entry_screen = "tm_alarm".into();
    assert!(matches!(SimDevice::new().install(b), Err(HarnessError::InvalidBundle(_))));
}

#[test]
fn video_manifest_yields_browse_link_and_search_intent() {
    let ManifestSource::Binary(bytes) = &bundle("youtube").manifest else { panic!() };
    let pkg = extract_package(&decode_manifest(bytes).unwrap()).unwrap();
    let intents = collect_intents(&pkg).intents;
    assert!(intents
        .iter()
        .any(|i| i.kind == IntentKind::DeepLink { uri: "https://www.youtube.com/browse".into() }));
    assert!(intents.iter().any(|i| matches!(&i.kind,
        IntentKind::Explicit { action_name: Some(a), .. } if a == "android.intent.action.SEARCH")));
}

#[test]
fn deep_links_resolve_by_longest_prefix() {
    let mut d = device();
    let yt = "com.google.android.youtube";
    let screen = d.launch_intent(&deep(yt, "https://www.youtube.com/browse")).unwrap();
    assert_eq!(screen.screen_id, "yt_browse");
    for (uri, want) in [
        ("https://www.youtube.com/feed/history", "yt_history"),
        ("https://www.youtube.com/feed/historyX", "yt_history"),
        ("https://www.youtube.com/feed/trending", "yt_library"),
        ("https://www.youtube.com/browse/music?x=1", "yt_browse"),
    ] {
        assert_eq!(d.resolve_intent(&deep(yt, uri)).unwrap().1, want, "{uri}");
    }
}

#[test]
fn resolution_ignores_binding_order() {
    let mut reversed = bundle("youtube");
    let links: Vec<_> = reversed.bindings.deep_links.clone().into_iter().rev().collect();
    reversed.bindings.deep_links = links.into_iter().collect();
    let a = SimDevice::with_bundles([bundle("youtube")]).unwrap();
    let b = SimDevice::with_bundles([reversed]).unwrap();
    for uri in ["https://www.youtube.com/feed/subscriptions", "https://www.youtube.com/feed/x"] {
        let i = deep("com.google.android.youtube", uri);
        assert_eq!(a.resolve_intent(&i), b.resolve_intent(&i));
    }
}

#[test]
fn broken_links_fall_back_to_entry() {
    let d = device();
    let cases = broken_links();
    assert_eq!(cases.len(), 10);
    for c in cases {
        let (_, screen) = d.resolve_intent(&deep(&c.package_name, &c.uri)).unwrap();
        assert_eq!(screen, c.expected_screen, "{}", c.uri);
    }
}

#[test]
fn intent_errors() {
    let mut d = device();
    assert_eq!(
        d.launch_intent(&explicit("com.simpletimer.app", "com.simpletimer.app.Unknown")).unwrap_err(),
        DeviceError::ActivityNotFound {
            package: "com.simpletimer.app".into(),
            activity: "com.simpletimer.app.Unknown".into(),
        }
    );
    assert!(matches!(
        d.launch_intent(&deep("org.absent", "https://x.org/a")),
        Err(DeviceError::PackageNotInstalled { .. })
    ));
    assert_eq!(d.current_screen().screen_id, HOME_SCREEN_ID);
}

#[test]
fn overlays_hold_typed_text_and_scroll() {
    let mut d = device();
    d.launch_intent(&explicit("com.worldcuisines.recipes", "com.worldcuisines.recipes.SearchActivity"))
        .unwrap();
    d.input_text("query", "pho").unwrap();
    assert_eq!(d.current_screen().find("query").unwrap().text.as_deref(), Some("pho"));
    assert!(matches!(d.input_text("find", "x"), Err(DeviceError::Unsupported { .. })));
    d.tap("back").unwrap();
    assert_eq!(d.current_screen().screen_id, "wc_home");
    d.scroll("feed", voxnav_core::lang::Direction::Down).unwrap();
    d.scroll("feed", voxnav_core::lang::Direction::Down).unwrap();
    d.scroll("feed", voxnav_core::lang::Direction::Up).unwrap();
    assert_eq!(d.current_screen().find("feed").unwrap().scroll_offset, 1);
    d.tap("search_bar").unwrap();
    assert_eq!(d.current_screen().find("query").unwrap().text.as_deref(), Some("pho"));
    assert!(matches!(d.tap("nope"), Err(DeviceError::UnknownNode { .. })));
}

#[test]
fn home_icons_launch_apps() {
    let mut d = device();
    d.tap("icon:com.simpletimer.app").unwrap();
    assert_eq!(d.foreground(), Some(("com.simpletimer.app", "tm_home")));
    d.go_home();
    assert_eq!(d.current_screen().screen_id, HOME_SCREEN_ID);
}

#[test]
fn video_home_has_one_tooltip_top_right() {
    let mut d = device();
    d.tap("icon:com.google.android.youtube").unwrap();
    let screen = d.current_screen();
    let tips = assign_tooltips(&collect_interactive(screen));
    assert_eq!(tips.len(), 1);
    let node = screen.find(tips.node_for(1).unwrap()).unwrap();
    assert!(node.bounds.left > 540 && node.bounds.top < 200);
}

#[test]
fn direct_invocation_skips_three_steps() {
    let opts = ScenarioOptions::default();
    let parser = RuleParser::default();
    let tap = run_scenario(&mut session(), &script("saved_recipes_tap_path"), &parser, opts);
    let direct = run_scenario(&mut session(), &script("saved_recipes_direct"), &parser, opts);
    assert!(tap.completed() && direct.completed(), "{tap:#?}\n{direct:#?}");
    assert_eq!((tap.step_count, direct.step_count), (4, 1));
    assert_eq!(tap.final_screen, direct.final_screen);
}

#[test]
fn every_scenario_meets_its_expectation() {
    let parser = RuleParser::default();
    for s in scenarios() {
        let report = run_scenario(&mut session(), &s, &parser, ScenarioOptions::default());
        assert_eq!(report.expectation_met, Some(true), "{}: {report:#?}", s.name);
        for r in report.transcript() {
            assert_eq!(r.status == Status::Executed, !r.changes.is_empty(), "{}: {}", s.name, r.command);
        }
        let again = run_scenario(&mut session(), &s, &parser, ScenarioOptions::default());
        assert_eq!(report.step_count, again.step_count);
    }
}

#[test]
fn chained_open_press_executes_two_steps() {
    let report = run_scenario(
        &mut session(),
        &script("chained_open_press"),
        &RuleParser::default(),
        ScenarioOptions::default(),
    );
    assert_eq!(report.step_count, 2);
}

#[test]
fn three_chained_commands_run_in_order() {
    let report = run_scenario(
        &mut session(),
        &script("three_command_chain"),
        &RuleParser::default(),
        ScenarioOptions::default(),
    );
    let actions: Vec<String> = report.transcript().map(|r| r.action.to_string()).collect();
    assert_eq!(actions, ["OPEN", "PRESS", "ENTER"]);
    // tapping a text field only moves focus, so the screen does not change
    let statuses: Vec<Status> = report.transcript().map(|r| r.status.clone()).collect();
    assert_eq!(statuses, [Status::Executed, Status::NoEffect, Status::Executed]);
    assert_eq!(report.final_screen, "uc_length");
}

#[test]
fn rejection_aborts_the_rest() {
    let s = script("abort_on_reject");
    let parser = RuleParser::default();
    let report = run_scenario(&mut session(), &s, &parser, ScenarioOptions::default());
    let statuses: Vec<_> = report.transcript().map(|r| r.status.is_rejected()).collect();
    assert_eq!(statuses, [false, false, true]);
    assert_eq!(report.steps.len(), 2, "third utterance must not run");
    assert_eq!(report.final_screen, "tm_running");

    let keep_going = ScenarioOptions {
        continue_after_reject: true,
    };
    let report = run_scenario(&mut session(), &s, &parser, keep_going);
    assert_eq!(report.steps.len(), 3);
    assert_eq!(report.steps[2].results[0].status, Status::NoEffect);
}

#[test]
fn empty_script_gives_empty_report() {
    let s = ScenarioScript {
        name: "empty".into(),
        utterances: vec![],
        expected_final_screen: None,
    };
    let report = run_scenario(&mut session(), &s, &RuleParser::default(), ScenarioOptions::default());
    assert!(report.steps.is_empty());
    assert_eq!(report.step_count, 0);
    assert_eq!(report.final_screen, HOME_SCREEN_ID);
}

#[test]
fn parse_failures_are_recorded() {
    let s = ScenarioScript {
        name: "bad".into(),
        utterances: vec!["hello there".into(), "open timer".into()],
        expected_final_screen: None,
    };
    let report = run_scenario(&mut session(), &s, &RuleParser::default(), ScenarioOptions::default());
    assert_eq!(report.steps.len(), 1);
    assert!(report.steps[0].parse_error.is_some());
}

#[test]
fn hit_rate_corpus() {
    let d = device();
    let cases = hit_rate_cases();
    assert_eq!(cases.len(), 50);
    let report = evaluate_hit_rate(d.feature_index(), &cases, &[1, 3], &d, &ScoringConfig::default()).unwrap();
    assert!(report.hits[&1] <= report.hits[&3]);
    assert_eq!((report.hits[&1], report.hits[&3]), (40, 41), "{}", report.to_csv());
}
