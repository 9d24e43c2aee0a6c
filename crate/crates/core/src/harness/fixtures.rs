//! Generator for the bundled fixture corpus: five app bundles modeled on a
//! recipe app, a timer, a unit converter, a notepad and a video app, plus
//! the hit-rate cases, scenarios and broken deep links that exercise them.
//! Files under `fixtures/` are written by [`write_all`] and must match it.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::bundle::{pretty, read_json, AppBundle, Bindings, ManifestSource, ScreensFile, Transition};
use super::scenario::ScenarioScript;
use super::{HarnessError, Result};
use crate::axml::{encode_manifest, parse_xml_text};
use crate::featdex::EvalCase;
use crate::screen::{Bounds, ScreenTree, UiNode};

pub const APPS_DIR: &str = "apps";
pub const SCENARIOS_DIR: &str = "scenarios";
pub const HIT_RATE_FILE: &str = "hit_rate_cases.json";
pub const BROKEN_LINKS_FILE: &str = "broken_links.json";

/// Directory the fixtures ship in.
pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// A deep link no binding accepts, and the entry screen it must fall back to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrokenLinkCase {
    pub package_name: String,
    pub uri: String,
    pub expected_screen: String,
}

const W: i32 = 1080;
const H: i32 = 1920;
const ROW: i32 = 110;
const GAP: i32 = 10;

/// Vertical screen layout with a title bar. Icons added to the title bar
/// carry no text, so they are the elements that get tooltip numbers.
struct Layout {
    id: String,
    root: UiNode,
    bar_icons: Vec<UiNode>,
    y: i32,
    transitions: Vec<Transition>,
}

impl Layout {
    fn new(id: &str, title: &str) -> Self {
        let title_box = UiNode::new("title_box", "group", Bounds::new(40, 40, 700, 140))
            .with_child(UiNode::new("title", "text", Bounds::new(40, 40, 700, 140)).with_text(title));
        Self {
            id: id.into(),
            root: UiNode::new("root", "frame", Bounds::new(0, 0, W, H)).with_child(title_box),
            bar_icons: Vec::new(),
            y: 180,
            transitions: Vec::new(),
        }
    }

    fn link(&mut self, node: &str, target: Option<&str>) {
        if let Some(t) = target {
            self.transitions.push(Transition {
                screen: self.id.clone(),
                node: node.into(),
                target: t.into(),
            });
        }
    }

    /// Unlabeled icon in the title bar; slot 0 is rightmost.
    fn icon(mut self, id: &str, target: Option<&str>) -> Self {
        let slot = self.bar_icons.len() as i32;
        let right = W - 40 - slot * 130;
        self.bar_icons
            .push(UiNode::new(id, "image_button", Bounds::new(right - 96, 32, right, 128)).clickable());
        self.link(id, target);
        self
    }

    fn button(mut self, id: &str, text: &str, target: Option<&str>) -> Self {
        let b = Bounds::new(40, self.y, W - 40, self.y + ROW);
        self.root = self.root.with_child(UiNode::new(id, "button", b).with_text(text).clickable());
        self.y += ROW + GAP;
        self.link(id, target);
        self
    }

    /// Equal-width clickable cells in one row.
    fn tabs(mut self, cells: &[(&str, &str, Option<&str>)]) -> Self {
        let w = (W - 80) / cells.len() as i32;
        let mut row = UiNode::new(format!("{}_tabs", cells[0].0), "tab_row", Bounds::new(40, self.y, W - 40, self.y + ROW));
        for (i, (id, text, target)) in cells.iter().enumerate() {
            let left = 40 + i as i32 * w;
            row = row.with_child(
                UiNode::new(*id, "tab", Bounds::new(left, self.y, left + w, self.y + ROW))
                    .with_text(*text)
                    .clickable(),
            );
            self.link(id, *target);
        }
        self.root = self.root.with_child(row);
        self.y += ROW + GAP;
        self
    }

    /// A caption and an empty text field; the field takes its label from
    /// the caption.
    fn field(mut self, id: &str, caption: &str) -> Self {
        let y = self.y;
        let group = UiNode::new(format!("{id}_group"), "group", Bounds::new(40, y, W - 40, y + 190))
            .with_child(UiNode::new(format!("{id}_caption"), "text", Bounds::new(40, y, W - 40, y + 60)).with_text(caption))
            .with_child(UiNode::new(id, "edit_text", Bounds::new(40, y + 70, W - 40, y + 190)).editable());
        self.root = self.root.with_child(group);
        self.y += 190 + GAP;
        self
    }

    fn text(mut self, id: &str, text: &str) -> Self {
        let b = Bounds::new(40, self.y, W - 40, self.y + 80);
        self.root = self.root.with_child(UiNode::new(id, "text", b).with_text(text));
        self.y += 80 + GAP;
        self
    }

    /// Scrollable list of cards. Each card is clickable and labeled by the
    /// text it contains.
    fn list(mut self, id: &str, cards: &[(&str, &str, Option<&str>)]) -> Self {
        let top = self.y;
        let bottom = top + cards.len() as i32 * (ROW + GAP) + GAP;
        let mut list = UiNode::new(id, "recycler", Bounds::new(0, top, W, bottom)).scrollable();
        for (i, (card_id, text, target)) in cards.iter().enumerate() {
            let y = top + GAP + i as i32 * (ROW + GAP);
            let b = Bounds::new(40, y, W - 40, y + ROW);
            list = list.with_child(
                UiNode::new(*card_id, "card", b)
                    .clickable()
                    .with_child(UiNode::new(format!("{card_id}_text"), "text", b).with_text(*text)),
            );
            self.link(card_id, *target);
        }
        self.root = self.root.with_child(list);
        self.y = bottom + GAP;
        self
    }

    fn back(self, target: &str) -> Self {
        self.button("back", "Back", Some(target))
    }

    fn build(mut self) -> (ScreenTree, Vec<Transition>) {
        assert!(self.y <= H, "screen {} overflows", self.id);
        if !self.bar_icons.is_empty() {
            let mut bar = UiNode::new("bar_actions", "group", Bounds::new(720, 20, W - 20, 140));
            bar.children = std::mem::take(&mut self.bar_icons);
            self.root = self.root.with_child(bar);
        }
        let tree = ScreenTree::new(self.id, self.root).expect("fixture screens are well formed");
        (tree, self.transitions)
    }
}

const LAUNCHER_FILTER: &str = r#"<intent-filter><action android:name="android.intent.action.MAIN"/><category android:name="android.intent.category.LAUNCHER"/></intent-filter>"#;

fn action_filter(action: &str) -> String {
    format!(
        r#"<intent-filter><action android:name="{action}"/><category android:name="android.intent.category.DEFAULT"/></intent-filter>"#
    )
}

/// VIEW filter with BROWSABLE and DEFAULT, one `<data>` per (scheme, host, pathPrefix).
fn link_filter(links: &[(&str, &str, &str)]) -> String {
    let mut s = String::from(
        r#"<intent-filter><action android:name="android.intent.action.VIEW"/><category android:name="android.intent.category.DEFAULT"/><category android:name="android.intent.category.BROWSABLE"/>"#,
    );
    for (scheme, host, path) in links {
        s.push_str(&format!(
            r#"<data android:scheme="{scheme}" android:host="{host}" android:pathPrefix="{path}"/>"#
        ));
    }
    s.push_str("</intent-filter>");
    s
}

fn activity(name: &str, exported: bool, filters: &[String]) -> String {
    format!(
        r#"<activity android:name="{name}" android:exported="{exported}">{}</activity>"#,
        filters.concat()
    )
}

fn manifest_xml(package: &str, label: &str, activities: &[String]) -> String {
    format!(
        r#"<?xml version="1.0" encoding="utf-8"?>
<manifest xmlns:android="http://schemas.android.com/apk/res/android" package="{package}" android:versionCode="7" android:versionName="1.4.0">
<uses-sdk android:minSdkVersion="24" android:targetSdkVersion="33"/>
<uses-permission android:name="android.permission.INTERNET"/>
<application android:label="{label}" android:icon="@mipmap/ic_launcher" android:allowBackup="true">
{}
</application>
</manifest>
"#,
        activities.join("\n")
    )
}

fn binary(xml: &str) -> ManifestSource {
    let doc = parse_xml_text(xml).expect("fixture manifest parses");
    ManifestSource::Binary(encode_manifest(&doc).expect("fixture manifest encodes"))
}

fn assemble(manifest: ManifestSource, layouts: Vec<Layout>, entry: &str, activities: &[(&str, &str)], deep_links: &[(&str, &str)]) -> AppBundle {
    let mut screens = Vec::new();
    let mut transitions = Vec::new();
    for l in layouts {
        let (tree, t) = l.build();
        screens.push(tree);
        transitions.extend(t);
    }
    let owned = |pairs: &[(&str, &str)]| pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    AppBundle::new(
        manifest,
        ScreensFile { screens, transitions },
        Bindings {
            entry_screen: entry.into(),
            activities: owned(activities),
            deep_links: owned(deep_links),
        },
    )
    .expect("fixture bundle is consistent")
}

fn world_cuisines() -> AppBundle {
    const P: &str = "com.worldcuisines.recipes";
    const HOST: &str = "worldcuisines.app";
    let xml = manifest_xml(
        P,
        "World Cuisines",
        &[
            activity(".MainActivity", true, &[LAUNCHER_FILTER.into()]),
            activity(".ProfileActivity", true, &[]),
            activity(
                ".MyRecipesActivity",
                true,
                &[link_filter(&[("https", HOST, "/my-recipes"), ("https", HOST, "/saved-recipes")])],
            ),
            activity(".RecipeDetailActivity", true, &[link_filter(&[("https", HOST, "/recipe")])]),
            activity(".SearchActivity", true, &[action_filter("android.intent.action.SEARCH")]),
            activity(".SettingsActivity", true, &[]),
            activity(".ShoppingListActivity", true, &[link_filter(&[("https", HOST, "/shopping-list")])]),
            activity(".NutritionFactsActivity", false, &[]),
            activity(".onboarding.WelcomeActivity", false, &[]),
        ],
    );
    let screens = vec![
        Layout::new("wc_home", "World Cuisines")
            .icon("settings_icon", Some("wc_settings"))
            .button("search_bar", "Search recipes", Some("wc_search"))
            .list(
                "feed",
                &[
                    ("card_burger", "Healthy Burger", Some("wc_recipe_detail")),
                    ("card_pasta", "Pasta Carbonara", None),
                    ("card_curry", "Vegan Curry", None),
                    ("card_pho", "Beef Pho", None),
                ],
            )
            .tabs(&[
                ("nav_home", "Home", None),
                ("nav_shopping", "Shopping List", Some("wc_shopping_list")),
                ("nav_profile", "Profile", Some("wc_profile")),
            ]),
        Layout::new("wc_profile", "Profile")
            .back("wc_home")
            .button("edit_profile", "Edit Profile", None)
            .button("my_recipes", "My Recipes", Some("wc_my_recipes"))
            .button("settings", "Settings", Some("wc_settings"))
            .button("log_out", "Log Out", None),
        Layout::new("wc_my_recipes", "My Recipes")
            .back("wc_profile")
            .tabs(&[("tab_saved", "Saved", Some("wc_saved_recipes")), ("tab_created", "Created", None)])
            .list(
                "created_list",
                &[("card_lasagna", "Grandma's Lasagna", None), ("card_tofu", "Spicy Tofu", None)],
            ),
        Layout::new("wc_saved_recipes", "Saved Recipes")
            .back("wc_my_recipes")
            .list(
                "saved_list",
                &[
                    ("saved_burger", "Healthy Burger", Some("wc_recipe_detail")),
                    ("saved_pho", "Beef Pho", None),
                ],
            ),
        Layout::new("wc_recipe_detail", "Healthy Burger")
            .icon("favorite_icon", None)
            .back("wc_home")
            .text("summary", "A lean beef burger with avocado")
            .button("nutrition", "Nutrition Facts", Some("wc_nutrition"))
            .button("add_to_list", "Add to Shopping List", None)
            .button("start_cooking", "Start Cooking", None),
        Layout::new("wc_nutrition", "Nutrition Facts")
            .back("wc_recipe_detail")
            .text("calories", "Calories 450")
            .text("protein", "Protein 32 g"),
        Layout::new("wc_search", "Search")
            .back("wc_home")
            .field("query", "Recipe name")
            .button("find", "Find", None),
        Layout::new("wc_settings", "Settings")
            .back("wc_home")
            .button("dark_mode", "Dark Mode", None)
            .button("notifications", "Notifications", None)
            .button("units", "Units", None),
        Layout::new("wc_shopping_list", "Shopping List")
            .back("wc_home")
            .field("new_item", "New item")
            .button("add_item", "Add Item", None)
            .list("items", &[("item_tomatoes", "Tomatoes", None), ("item_basil", "Basil", None)]),
    ];
    let a = |n: &str| format!("{P}.{n}");
    let acts = [
        (a("MainActivity"), "wc_home"),
        (a("ProfileActivity"), "wc_profile"),
        (a("MyRecipesActivity"), "wc_my_recipes"),
        (a("RecipeDetailActivity"), "wc_recipe_detail"),
        (a("SearchActivity"), "wc_search"),
        (a("SettingsActivity"), "wc_settings"),
        (a("ShoppingListActivity"), "wc_shopping_list"),
    ];
    let acts: Vec<(&str, &str)> = acts.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    assemble(
        binary(&xml),
        screens,
        "wc_home",
        &acts,
        &[
            ("https://worldcuisines.app/my-recipes", "wc_my_recipes"),
            ("https://worldcuisines.app/saved-recipes", "wc_saved_recipes"),
            ("https://worldcuisines.app/recipe", "wc_recipe_detail"),
            ("https://worldcuisines.app/shopping-list", "wc_shopping_list"),
        ],
    )
}

fn timer() -> AppBundle {
    const P: &str = "com.simpletimer.app";
    let xml = manifest_xml(
        P,
        "Timer",
        &[
            activity(".MainActivity", true, &[LAUNCHER_FILTER.into()]),
            activity(".StopwatchActivity", true, &[link_filter(&[("timer", "simpletimer", "/stopwatch")])]),
            activity(
                ".AlarmActivity",
                true,
                &[
                    action_filter("android.intent.action.SET_ALARM"),
                    link_filter(&[("timer", "simpletimer", "/alarm")]),
                ],
            ),
            activity(".TimerSettingsActivity", true, &[]),
            activity(".LapHistoryActivity", true, &[]),
            activity(".RunningTimerActivity", false, &[]),
        ],
    );
    let screens = vec![
        Layout::new("tm_home", "Timer")
            .icon("more_icon", Some("tm_settings"))
            .field("minutes", "Minutes")
            .button("start_timer", "Start Timer", Some("tm_running"))
            .button("reset", "Reset", None)
            .tabs(&[
                ("tab_stopwatch", "Stopwatch", Some("tm_stopwatch")),
                ("tab_alarm", "Alarm", Some("tm_alarm")),
            ]),
        Layout::new("tm_running", "Timer running")
            .text("remaining", "04:59")
            .button("pause", "Pause", None)
            .button("cancel", "Cancel", Some("tm_home")),
        Layout::new("tm_stopwatch", "Stopwatch")
            .back("tm_home")
            .button("start", "Start", None)
            .button("lap", "Lap", None)
            .button("laps", "Lap History", Some("tm_laps")),
        Layout::new("tm_alarm", "Alarm")
            .back("tm_home")
            .field("alarm_time", "Alarm time")
            .button("save_alarm", "Save Alarm", Some("tm_home")),
        Layout::new("tm_settings", "Timer Settings")
            .back("tm_home")
            .button("sound", "Sound", None)
            .button("vibrate", "Vibrate", None),
        Layout::new("tm_laps", "Lap History")
            .back("tm_stopwatch")
            .list("lap_list", &[("lap_1", "Lap 1 00:42", None), ("lap_2", "Lap 2 00:45", None)]),
    ];
    let a = |n: &str| format!("{P}.{n}");
    let acts = [
        (a("MainActivity"), "tm_home"),
        (a("StopwatchActivity"), "tm_stopwatch"),
        (a("AlarmActivity"), "tm_alarm"),
        (a("TimerSettingsActivity"), "tm_settings"),
        (a("LapHistoryActivity"), "tm_laps"),
    ];
    let acts: Vec<(&str, &str)> = acts.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    assemble(
        binary(&xml),
        screens,
        "tm_home",
        &acts,
        &[
            ("timer://simpletimer/stopwatch", "tm_stopwatch"),
            ("timer://simpletimer/alarm", "tm_alarm"),
        ],
    )
}

fn unit_converter() -> AppBundle {
    const P: &str = "com.unitconverter.pro";
    const HOST: &str = "unitconverter.pro";
    let xml = manifest_xml(
        P,
        "Unit Converter",
        &[
            activity(".MainActivity", true, &[LAUNCHER_FILTER.into()]),
            activity(".LengthActivity", true, &[link_filter(&[("https", HOST, "/length")])]),
            activity(".WeightActivity", true, &[link_filter(&[("https", HOST, "/weight")])]),
            activity(".TemperatureActivity", true, &[]),
            activity(".CurrencyActivity", true, &[]),
            activity(".ConversionHistoryActivity", true, &[]),
            activity(".FavoritesActivity", false, &[]),
        ],
    );
    let converter = |id: &str, title: &str, from: &str, to: &str| {
        Layout::new(id, title)
            .back("uc_home")
            .field("from_value", from)
            .field("to_value", to)
            .button("convert", "Convert", None)
            .button("swap", "Swap Units", None)
    };
    let screens = vec![
        Layout::new("uc_home", "Unit Converter")
            .icon("history_icon", Some("uc_history"))
            .button("length", "Length", Some("uc_length"))
            .button("weight", "Weight", Some("uc_weight"))
            .button("temperature", "Temperature", Some("uc_temperature"))
            .button("currency", "Currency", Some("uc_currency"))
            .button("favorites", "Favorites", Some("uc_favorites")),
        converter("uc_length", "Length", "From", "To"),
        converter("uc_weight", "Weight", "From", "To"),
        converter("uc_temperature", "Temperature", "Celsius", "Fahrenheit"),
        converter("uc_currency", "Currency", "Amount", "Converted amount"),
        Layout::new("uc_history", "Conversion History")
            .back("uc_home")
            .list("history_list", &[("h1", "12 in = 30.48 cm", None), ("h2", "5 kg = 11.02 lb", None)]),
        Layout::new("uc_favorites", "Favorites")
            .back("uc_home")
            .list("fav_list", &[("f1", "Miles to kilometers", None)]),
    ];
    let a = |n: &str| format!("{P}.{n}");
    let acts = [
        (a("MainActivity"), "uc_home"),
        (a("LengthActivity"), "uc_length"),
        (a("WeightActivity"), "uc_weight"),
        (a("TemperatureActivity"), "uc_temperature"),
        (a("CurrencyActivity"), "uc_currency"),
        (a("ConversionHistoryActivity"), "uc_history"),
    ];
    let acts: Vec<(&str, &str)> = acts.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    assemble(
        binary(&xml),
        screens,
        "uc_home",
        &acts,
        &[
            ("https://unitconverter.pro/length", "uc_length"),
            ("https://unitconverter.pro/weight", "uc_weight"),
        ],
    )
}

/// Ships its manifest as plain XML.
fn fast_notepad() -> AppBundle {
    const P: &str = "com.fastnotepad.notes";
    let xml = manifest_xml(
        P,
        "Fast Notepad",
        &[
            activity(".NotesListActivity", true, &[LAUNCHER_FILTER.into()]),
            activity(
                ".EditNoteActivity",
                true,
                &[
                    action_filter("android.intent.action.INSERT"),
                    link_filter(&[("notepad", "fastnotepad", "/new")]),
                ],
            ),
            activity(".SearchActivity", true, &[action_filter("android.intent.action.SEARCH")]),
            activity(".SettingsActivity", true, &[]),
            activity(".TrashActivity", true, &[]),
            activity(".ChecklistActivity", true, &[link_filter(&[("notepad", "fastnotepad", "/checklist")])]),
        ],
    );
    let screens = vec![
        Layout::new("fn_notes", "Fast Notepad")
            .icon("search_icon", Some("fn_search"))
            .button("new_note", "New Note", Some("fn_new_note"))
            .list(
                "notes",
                &[("note_groceries", "Groceries", None), ("note_meeting", "Meeting notes", None)],
            )
            .tabs(&[
                ("tab_checklist", "Checklist", Some("fn_checklist")),
                ("tab_trash", "Trash", Some("fn_trash")),
                ("tab_settings", "Settings", Some("fn_settings")),
            ]),
        Layout::new("fn_new_note", "New Note")
            .back("fn_notes")
            .field("note_title", "Title")
            .field("note_body", "Note body")
            .button("save", "Save", Some("fn_notes"))
            .button("discard", "Discard", Some("fn_notes")),
        Layout::new("fn_search", "Search notes")
            .back("fn_notes")
            .field("search_query", "Search text"),
        Layout::new("fn_settings", "Settings")
            .back("fn_notes")
            .button("font_size", "Font Size", None)
            .button("theme", "Theme", None),
        Layout::new("fn_trash", "Trash")
            .back("fn_notes")
            .button("empty_trash", "Empty Trash", None)
            .list("trash_list", &[("trashed_1", "Old draft", None)]),
        Layout::new("fn_checklist", "Checklist")
            .back("fn_notes")
            .field("new_task", "New task")
            .button("add_task", "Add Task", None),
    ];
    let a = |n: &str| format!("{P}.{n}");
    let acts = [
        (a("NotesListActivity"), "fn_notes"),
        (a("EditNoteActivity"), "fn_new_note"),
        (a("SearchActivity"), "fn_search"),
        (a("SettingsActivity"), "fn_settings"),
        (a("TrashActivity"), "fn_trash"),
        (a("ChecklistActivity"), "fn_checklist"),
    ];
    let acts: Vec<(&str, &str)> = acts.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    assemble(
        ManifestSource::Xml(xml),
        screens,
        "fn_notes",
        &acts,
        &[
            ("notepad://fastnotepad/new", "fn_new_note"),
            ("notepad://fastnotepad/checklist", "fn_checklist"),
        ],
    )
}

/// Manifest shaped like the video app excerpt: a URL activity exposing the
/// browse deep link and a search activity declaring the SEARCH action.
fn youtube() -> AppBundle {
    const P: &str = "com.google.android.youtube";
    const APP: &str = "com.google.android.apps.youtube.app";
    const HOST: &str = "www.youtube.com";
    let xml = manifest_xml(
        P,
        "YouTube",
        &[
            activity(&format!("{APP}.WatchWhileActivity"), true, &[LAUNCHER_FILTER.into()]),
            activity(
                "com.google.android.youtube.UrlActivity",
                true,
                &[link_filter(&[
                    ("https", HOST, "/browse"),
                    ("https", HOST, "/feed/subscriptions"),
                    ("https", HOST, "/feed/history"),
                ])],
            ),
            activity(
                &format!("{APP}.SearchActivity"),
                true,
                &[action_filter("android.intent.action.SEARCH")],
            ),
            activity(&format!("{APP}.settings.SettingsActivity"), true, &[]),
            activity(&format!("{APP}.watch.WatchActivity"), false, &[]),
        ],
    );
    let screens = vec![
        Layout::new("yt_home", "YouTube")
            .icon("search_icon", Some("yt_search"))
            .list(
                "videos",
                &[
                    ("video_1", "Lofi beats to study to", Some("yt_watch")),
                    ("video_2", "Cooking pasta in 10 minutes", Some("yt_watch")),
                    ("video_3", "Learn Rust in one hour", Some("yt_watch")),
                ],
            )
            .tabs(&[
                ("tab_home", "Home", None),
                ("tab_subscriptions", "Subscriptions", Some("yt_subscriptions")),
                ("tab_library", "Library", Some("yt_library")),
            ]),
        Layout::new("yt_search", "Search YouTube")
            .back("yt_home")
            .field("search_query", "Search"),
        Layout::new("yt_browse", "Browse")
            .back("yt_home")
            .list(
                "channels",
                &[("ch_music", "Music", None), ("ch_gaming", "Gaming", None), ("ch_news", "News", None)],
            ),
        Layout::new("yt_subscriptions", "Subscriptions")
            .back("yt_home")
            .list("subs", &[("sub_1", "Rust Weekly", None)]),
        Layout::new("yt_history", "History")
            .back("yt_library")
            .button("clear_history", "Clear watch history", None),
        Layout::new("yt_library", "Library")
            .back("yt_home")
            .button("history", "History", Some("yt_history"))
            .button("watch_later", "Watch Later", None),
        Layout::new("yt_settings", "Settings")
            .back("yt_home")
            .button("clear_browsing", "Clear browsing data", None)
            .button("autoplay", "Autoplay", None),
        Layout::new("yt_watch", "Now playing")
            .back("yt_home")
            .button("like", "Like", None)
            .button("subscribe", "Subscribe", None),
    ];
    let acts = [
        (format!("{APP}.WatchWhileActivity"), "yt_home"),
        ("com.google.android.youtube.UrlActivity".to_string(), "yt_browse"),
        (format!("{APP}.SearchActivity"), "yt_search"),
        (format!("{APP}.settings.SettingsActivity"), "yt_settings"),
    ];
    let acts: Vec<(&str, &str)> = acts.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    assemble(
        binary(&xml),
        screens,
        "yt_home",
        &acts,
        &[
            ("https://www.youtube.com/browse", "yt_browse"),
            ("https://www.youtube.com/feed", "yt_library"),
            ("https://www.youtube.com/feed/subscriptions", "yt_subscriptions"),
            ("https://www.youtube.com/feed/history", "yt_history"),
        ],
    )
}

/// Bundles keyed by directory name.
pub fn bundles() -> Vec<(&'static str, AppBundle)> {
    vec![
        ("fast_notepad", fast_notepad()),
        ("timer", timer()),
        ("unit_converter", unit_converter()),
        ("world_cuisines", world_cuisines()),
        ("youtube", youtube()),
    ]
}

pub fn hit_rate_cases() -> Vec<EvalCase> {
    let rows: [(&str, &str, &str); 50] = [
        ("World Cuisines", "my recipes", "wc_my_recipes"),
        ("World Cuisines", "saved recipes", "wc_saved_recipes"),
        ("World Cuisines", "profile", "wc_profile"),
        ("World Cuisines", "settings", "wc_settings"),
        ("World Cuisines", "search", "wc_search"),
        ("World Cuisines", "shopping list", "wc_shopping_list"),
        ("World Cuisines", "recipe details", "wc_recipe_detail"),
        ("World Cuisines", "nutrition facts", "wc_nutrition"),
        ("World Cuisines", "saved", "wc_saved_recipes"),
        ("World Cuisines", "favorite recipes", "wc_saved_recipes"),
        ("Timer", "stopwatch", "tm_stopwatch"),
        ("Timer", "alarm", "tm_alarm"),
        ("Timer", "settings", "tm_settings"),
        ("Timer", "lap history", "tm_laps"),
        ("Timer", "timer settings", "tm_settings"),
        ("Timer", "set alarm", "tm_alarm"),
        ("Timer", "laps", "tm_laps"),
        ("Timer", "countdown", "tm_home"),
        ("Timer", "history", "tm_laps"),
        ("Timer", "sound settings", "tm_settings"),
        ("Unit Converter", "length", "uc_length"),
        ("Unit Converter", "weight", "uc_weight"),
        ("Unit Converter", "temperature", "uc_temperature"),
        ("Unit Converter", "currency", "uc_currency"),
        ("Unit Converter", "conversion history", "uc_history"),
        ("Unit Converter", "history", "uc_history"),
        ("Unit Converter", "favorites", "uc_favorites"),
        ("Unit Converter", "length converter", "uc_length"),
        ("Unit Converter", "mass", "uc_weight"),
        ("Unit Converter", "currency exchange", "uc_currency"),
        ("Fast Notepad", "new note", "fn_new_note"),
        ("Fast Notepad", "search", "fn_search"),
        ("Fast Notepad", "settings", "fn_settings"),
        ("Fast Notepad", "trash", "fn_trash"),
        ("Fast Notepad", "checklist", "fn_checklist"),
        ("Fast Notepad", "notes list", "fn_notes"),
        ("Fast Notepad", "deleted notes", "fn_trash"),
        ("Fast Notepad", "edit note", "fn_new_note"),
        ("Fast Notepad", "to do list", "fn_checklist"),
        ("Fast Notepad", "write a note", "fn_new_note"),
        ("YouTube", "browse", "yt_browse"),
        ("YouTube", "subscriptions", "yt_subscriptions"),
        ("YouTube", "history", "yt_history"),
        ("YouTube", "search", "yt_search"),
        ("YouTube", "settings", "yt_settings"),
        ("YouTube", "watch history", "yt_history"),
        ("YouTube", "video player", "yt_watch"),
        ("YouTube", "explore", "yt_browse"),
        ("YouTube", "my subscriptions feed", "yt_subscriptions"),
        ("YouTube", "library", "yt_library"),
    ];
    rows.iter()
        .enumerate()
        .map(|(i, (app, feature, screen))| EvalCase {
            id: format!("hr{:02}", i + 1),
            command_text: format!("open {feature} in {}", app.to_lowercase()),
            app_phrase: app.to_lowercase(),
            feature_phrase: feature.to_string(),
            ground_truth_screen_id: screen.to_string(),
        })
        .collect()
}

pub fn scenarios() -> Vec<ScenarioScript> {
    let s = |name: &str, utterances: &[&str], expected: &str| ScenarioScript {
        name: name.into(),
        utterances: utterances.iter().map(|u| u.to_string()).collect(),
        expected_final_screen: Some(expected.into()),
    };
    vec![
        s(
            "saved_recipes_tap_path",
            &["open world cuisines", "tap profile", "tap my recipes", "tap saved"],
            "wc_saved_recipes",
        ),
        s("saved_recipes_direct", &["open saved recipes in world cuisines"], "wc_saved_recipes"),
        s("chained_open_press", &["open world cuisines then press healthy burger"], "wc_recipe_detail"),
        s(
            "three_command_chain",
            &["open length in unit converter then tap from then type 12"],
            "uc_length",
        ),
        s("tooltip_search", &["open youtube", "press number 1", "type lofi hip hop"], "yt_search"),
        s(
            "notepad_new_note",
            &["open new note in fast notepad", "tap note body", "type buy milk tomorrow", "tap save"],
            "fn_notes",
        ),
        s(
            "abort_on_reject",
            &["open timer", "tap start timer then tap rocket launch then tap cancel", "tap pause"],
            "tm_running",
        ),
    ]
}

pub fn broken_links() -> Vec<BrokenLinkCase> {
    let rows = [
        ("com.google.android.youtube", "https://www.youtube.com/watch?v=dQw4w9WgXcQ", "yt_home"),
        ("com.google.android.youtube", "https://www.youtube.com/shorts/abc123", "yt_home"),
        ("com.google.android.youtube", "https://m.youtube.com/browse", "yt_home"),
        ("com.google.android.youtube", "http://www.youtube.com/browse", "yt_home"),
        ("com.worldcuisines.recipes", "https://worldcuisines.app/", "wc_home"),
        ("com.worldcuisines.recipes", "https://worldcuisines.app/cookbook/42", "wc_home"),
        ("com.simpletimer.app", "timer://simpletimer/countdown", "tm_home"),
        ("com.unitconverter.pro", "https://unitconverter.pro/volume", "uc_home"),
        ("com.fastnotepad.notes", "notepad://fastnotepad/archive", "fn_notes"),
        ("com.fastnotepad.notes", "notepad://otherhost/new", "fn_notes"),
    ];
    rows.iter()
        .map(|(p, u, s)| BrokenLinkCase {
            package_name: p.to_string(),
            uri: u.to_string(),
            expected_screen: s.to_string(),
        })
        .collect()
}

/// Every generated file as (path relative to the fixtures directory, bytes).
pub fn generated_files() -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    for (name, bundle) in bundles() {
        for (file, bytes) in bundle.files() {
            files.push((Path::new(APPS_DIR).join(name).join(file), bytes));
        }
    }
    files.push((PathBuf::from(HIT_RATE_FILE), pretty(&hit_rate_cases()).into_bytes()));
    files.push((PathBuf::from(BROKEN_LINKS_FILE), pretty(&broken_links()).into_bytes()));
    for s in scenarios() {
        files.push((Path::new(SCENARIOS_DIR).join(format!("{}.json", s.name)), pretty(&s).into_bytes()));
    }
    files
}

/// Writes every generated fixture under `dir`.
pub fn write_all(dir: &Path) -> Result<usize> {
    let files = generated_files();
    for (rel, bytes) in &files {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| HarnessError::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| HarnessError::io(&path, e))?;
    }
    Ok(files.len())
}

/// Loads every bundle directory under `dir`, sorted by name.
pub fn load_bundles(dir: &Path) -> Result<Vec<AppBundle>> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| HarnessError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    dirs.iter().map(|d| AppBundle::load(d)).collect()
}

pub fn load_scenario(path: &Path) -> Result<ScenarioScript> {
    read_json(path)
}

pub fn load_hit_rate_cases(path: &Path) -> Result<Vec<EvalCase>> {
    read_json(path)
}

pub fn load_broken_links(path: &Path) -> Result<Vec<BrokenLinkCase>> {
    read_json(path)
}
