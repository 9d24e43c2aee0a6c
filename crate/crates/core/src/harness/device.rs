use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bundle::AppBundle;
use super::Result;
use crate::dialogue::{Device, DeviceError};
use crate::featdex::{build_index, FeatureIndex, ScreenOracle};
use crate::lang::Direction;
use crate::manifest::{AppPackage, DeepLink, IntentKind, LaunchIntent};
use crate::screen::{Bounds, ScreenTree, UiNode};

/// Screen id of the device launcher shown when no app is in the foreground.
pub const HOME_SCREEN_ID: &str = "home";
const ICON_PREFIX: &str = "icon:";
const SCREEN_W: i32 = 1080;
const SCREEN_H: i32 = 1920;
const ICON_COLUMNS: i32 = 4;
const ICON_H: i32 = 300;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppSummary {
    pub package_name: String,
    pub label: String,
    pub launcher_activity: Option<String>,
    pub entry_screen: String,
    pub deep_links: Vec<String>,
    pub intent_count: usize,
}

#[derive(Debug, Clone)]
struct InstalledApp {
    bundle: AppBundle,
    package: AppPackage,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct NodeOverlay {
    text: Option<String>,
    scroll_offset: i32,
}

/// A simulated phone: installed bundles, the foreground screen, and the
/// text and scroll state users have changed on each screen.
#[derive(Debug, Clone)]
pub struct SimDevice {
    installed: BTreeMap<String, InstalledApp>,
    index: FeatureIndex,
    /// (package, screen id); `None` shows the home screen.
    foreground: Option<(String, String)>,
    overlays: BTreeMap<(String, String), BTreeMap<String, NodeOverlay>>,
    current: ScreenTree,
}

impl Default for SimDevice {
    fn default() -> Self {
        Self::new()
    }
}

impl SimDevice {
    pub fn new() -> Self {
        let mut device = Self {
            installed: BTreeMap::new(),
            index: FeatureIndex::empty(),
            foreground: None,
            overlays: BTreeMap::new(),
            current: ScreenTree {
                screen_id: HOME_SCREEN_ID.into(),
                root: UiNode::new("home_root", "launcher", Bounds::new(0, 0, SCREEN_W, SCREEN_H)),
            },
        };
        device.refresh();
        device
    }

    pub fn with_bundles(bundles: impl IntoIterator<Item = AppBundle>) -> Result<Self> {
        let mut device = Self::new();
        for b in bundles {
            device.install(b)?;
        }
        Ok(device)
    }

    /// Installs or replaces a bundle and rebuilds the feature index. On any
    /// error the device is left unchanged.
    pub fn install(&mut self, bundle: AppBundle) -> Result<()> {
        bundle.validate_screens()?;
        let package = bundle.package()?;
        let name = package.package_name.clone();
        let mut packages: Vec<AppPackage> = self
            .installed
            .values()
            .filter(|a| a.package.package_name != name)
            .map(|a| a.package.clone())
            .collect();
        packages.push(package.clone());
        let index = build_index(&packages)?;
        self.index = index;
        self.installed.insert(name.clone(), InstalledApp { bundle, package });
        self.overlays.retain(|(pkg, _), _| *pkg != name);
        if self.foreground.as_ref().is_some_and(|(pkg, _)| *pkg == name) {
            self.foreground = None;
        }
        self.refresh();
        Ok(())
    }

    pub fn uninstall(&mut self, package_name: &str) -> Result<()> {
        if !self.installed.contains_key(package_name) {
            return Err(DeviceError::PackageNotInstalled {
                package: package_name.into(),
            }
            .into());
        }
        let packages: Vec<AppPackage> = self
            .installed
            .values()
            .filter(|a| a.package.package_name != package_name)
            .map(|a| a.package.clone())
            .collect();
        self.index = build_index(&packages)?;
        self.installed.remove(package_name);
        self.overlays.retain(|(pkg, _), _| pkg != package_name);
        if self.foreground.as_ref().is_some_and(|(pkg, _)| pkg == package_name) {
            self.foreground = None;
        }
        self.refresh();
        Ok(())
    }

    pub fn installed_packages(&self) -> impl Iterator<Item = &AppPackage> {
        self.installed.values().map(|a| &a.package)
    }

    pub fn bundle(&self, package_name: &str) -> Option<&AppBundle> {
        self.installed.get(package_name).map(|a| &a.bundle)
    }

    /// Installed apps ordered by label, each with its deep links.
    pub fn app_summaries(&self) -> Vec<AppSummary> {
        let mut out: Vec<AppSummary> = self
            .installed
            .values()
            .map(|a| self.summary_of(a))
            .collect();
        out.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.package_name.cmp(&b.package_name)));
        out
    }

    pub fn app_summary(&self, package_name: &str) -> Option<AppSummary> {
        self.installed.get(package_name).map(|a| self.summary_of(a))
    }

    fn summary_of(&self, app: &InstalledApp) -> AppSummary {
        let entry = self.index.by_package(&app.package.package_name);
        let deep_links = entry
            .map(|e| {
                e.intents
                    .iter()
                    .filter_map(|i| match &i.kind {
                        IntentKind::DeepLink { uri } => Some(uri.clone()),
                        IntentKind::Explicit { .. } => None,
                    })
                    .collect()
            })
            .unwrap_or_default();
        AppSummary {
            package_name: app.package.package_name.clone(),
            label: app.package.label.clone(),
            launcher_activity: app.package.launcher_activity.clone(),
            entry_screen: app.bundle.bindings.entry_screen.clone(),
            deep_links,
            intent_count: entry.map_or(0, |e| e.intents.len()),
        }
    }

    /// The foreground (package, screen id), or `None` on the home screen.
    pub fn foreground(&self) -> Option<(&str, &str)> {
        self.foreground.as_ref().map(|(p, s)| (p.as_str(), s.as_str()))
    }

    pub fn go_home(&mut self) {
        self.foreground = None;
        self.refresh();
    }

    /// Which screen an intent opens. Deep links match scheme and host exactly
    /// and take the binding with the longest path prefix; a deep link no
    /// binding accepts opens the entry screen.
    pub fn resolve_intent(&self, intent: &LaunchIntent) -> std::result::Result<(String, String), DeviceError> {
        let app = self
            .installed
            .get(&intent.package_name)
            .ok_or_else(|| DeviceError::PackageNotInstalled {
                package: intent.package_name.clone(),
            })?;
        let bindings = &app.bundle.bindings;
        let screen = match &intent.kind {
            IntentKind::DeepLink { uri } => {
                resolve_deep_link(uri, &bindings.deep_links).unwrap_or_else(|| bindings.entry_screen.clone())
            }
            IntentKind::Explicit { activity_name, .. } => {
                bindings
                    .activities
                    .get(activity_name)
                    .cloned()
                    .ok_or_else(|| DeviceError::ActivityNotFound {
                        package: intent.package_name.clone(),
                        activity: activity_name.clone(),
                    })?
            }
        };
        Ok((intent.package_name.clone(), screen))
    }

    /// Brings the screen an intent resolves to into the foreground.
    pub fn launch_intent(&mut self, intent: &LaunchIntent) -> std::result::Result<&ScreenTree, DeviceError> {
        let target = self.resolve_intent(intent)?;
        self.foreground = Some(target);
        self.refresh();
        Ok(&self.current)
    }

    fn launcher_of(&self, package_name: &str) -> std::result::Result<LaunchIntent, DeviceError> {
        self.index
            .by_package(package_name)
            .map(|e| e.launcher.clone())
            .ok_or_else(|| DeviceError::PackageNotInstalled {
                package: package_name.into(),
            })
    }

    fn refresh(&mut self) {
        self.current = match &self.foreground {
            None => self.home_screen(),
            Some((pkg, screen_id)) => {
                let mut tree = self.installed[pkg]
                    .bundle
                    .screen(screen_id)
                    .cloned()
                    .expect("foreground screen exists in its bundle");
                if let Some(overlay) = self.overlays.get(&(pkg.clone(), screen_id.clone())) {
                    for (node_id, o) in overlay {
                        if let Some(node) = tree.find_mut(node_id) {
                            if o.text.is_some() {
                                node.text.clone_from(&o.text);
                            }
                            node.scroll_offset = o.scroll_offset;
                        }
                    }
                }
                tree
            }
        };
    }

    fn home_screen(&self) -> ScreenTree {
        let apps = self.app_summaries();
        let rows = (apps.len() as i32 + ICON_COLUMNS - 1) / ICON_COLUMNS;
        let height = SCREEN_H.max(100 + rows * ICON_H);
        let w = SCREEN_W / ICON_COLUMNS;
        let mut root = UiNode::new("home_root", "launcher", Bounds::new(0, 0, SCREEN_W, height));
        for (i, app) in apps.iter().enumerate() {
            let (col, row) = (i as i32 % ICON_COLUMNS, i as i32 / ICON_COLUMNS);
            let top = 100 + row * ICON_H;
            let bounds = Bounds::new(col * w, top, (col + 1) * w, top + ICON_H);
            root = root.with_child(
                UiNode::new(format!("{ICON_PREFIX}{}", app.package_name), "icon", bounds)
                    .with_text(app.label.clone())
                    .clickable(),
            );
        }
        ScreenTree {
            screen_id: HOME_SCREEN_ID.into(),
            root,
        }
    }

    fn overlay_mut(&mut self, node_id: &str) -> Option<&mut NodeOverlay> {
        let (pkg, screen) = self.foreground.clone()?;
        Some(self.overlays.entry((pkg, screen)).or_default().entry(node_id.to_string()).or_default())
    }

    fn node(&self, node_id: &str) -> std::result::Result<&UiNode, DeviceError> {
        self.current.find(node_id).ok_or_else(|| DeviceError::UnknownNode {
            node_id: node_id.into(),
            screen_id: self.current.screen_id.clone(),
        })
    }
}

/// Longest matching path prefix among bindings with the same scheme and
/// host. Binding keys are visited in sorted order, so declaration order does
/// not matter.
fn resolve_deep_link(uri: &str, bindings: &BTreeMap<String, String>) -> Option<String> {
    let wanted = DeepLink::parse(uri).ok()?;
    let path = wanted.path_prefix.as_deref().unwrap_or("");
    let mut best: Option<(usize, &String)> = None;
    for (key, screen) in bindings {
        let Ok(link) = DeepLink::parse(key) else {
            continue;
        };
        if link.scheme != wanted.scheme || link.host != wanted.host {
            continue;
        }
        let prefix = link.path_prefix.as_deref().unwrap_or("");
        if path.starts_with(prefix) && best.is_none_or(|(len, _)| prefix.len() > len) {
            best = Some((prefix.len(), screen));
        }
    }
    best.map(|(_, s)| s.clone())
}

impl Device for SimDevice {
    fn current_screen(&self) -> &ScreenTree {
        &self.current
    }

    fn feature_index(&self) -> &FeatureIndex {
        &self.index
    }

    fn tap(&mut self, node_id: &str) -> std::result::Result<(), DeviceError> {
        self.node(node_id)?;
        match self.foreground.clone() {
            None => {
                if let Some(pkg) = node_id.strip_prefix(ICON_PREFIX) {
                    let launcher = self.launcher_of(pkg)?;
                    self.launch_intent(&launcher)?;
                }
            }
            Some((pkg, screen)) => {
                if let Some(target) = self.installed[&pkg].bundle.transition(&screen, node_id) {
                    self.foreground = Some((pkg, target.to_string()));
                    self.refresh();
                }
            }
        }
        Ok(())
    }

    fn input_text(&mut self, node_id: &str, text: &str) -> std::result::Result<(), DeviceError> {
        if !self.node(node_id)?.editable {
            return Err(DeviceError::Unsupported {
                node_id: node_id.into(),
                operation: "input".into(),
            });
        }
        if let Some(o) = self.overlay_mut(node_id) {
            o.text = Some(text.to_string());
        }
        self.refresh();
        Ok(())
    }

    fn scroll(&mut self, node_id: &str, direction: Direction) -> std::result::Result<(), DeviceError> {
        let current = self.node(node_id)?;
        if !current.scrollable {
            return Err(DeviceError::Unsupported {
                node_id: node_id.into(),
                operation: "scroll".into(),
            });
        }
        let offset = current.scroll_offset;
        let next = match direction {
            Direction::Down | Direction::Right => offset + 1,
            Direction::Up | Direction::Left => (offset - 1).max(0),
        };
        if let Some(o) = self.overlay_mut(node_id) {
            o.scroll_offset = next;
        }
        self.refresh();
        Ok(())
    }

    fn launch(&mut self, intent: &LaunchIntent) -> std::result::Result<(), DeviceError> {
        self.launch_intent(intent).map(|_| ())
    }
}

impl ScreenOracle for SimDevice {
    fn screen_for(&self, intent: &LaunchIntent) -> std::result::Result<String, String> {
        self.resolve_intent(intent).map(|(_, s)| s).map_err(|e| e.to_string())
    }
}
