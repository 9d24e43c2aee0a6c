use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HarnessError, Result};
use crate::axml::{decode_manifest, parse_xml_text};
use crate::manifest::{extract_package, AppPackage};
use crate::screen::ScreenTree;

pub const MANIFEST_BIN: &str = "manifest.bin";
pub const MANIFEST_XML: &str = "manifest.xml";
pub const SCREENS_FILE: &str = "screens.json";
pub const BINDINGS_FILE: &str = "bindings.json";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifestSource {
    Binary(Vec<u8>),
    /// Plain-text XML, for hand-written bundles.
    Xml(String),
}

impl ManifestSource {
    pub fn extract(&self) -> Result<AppPackage> {
        let doc = match self {
            ManifestSource::Binary(bytes) => decode_manifest(bytes)?,
            ManifestSource::Xml(text) => parse_xml_text(text)?,
        };
        Ok(extract_package(&doc)?)
    }
}

/// Tapping `node` on `screen` navigates to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub screen: String,
    pub node: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreensFile {
    pub screens: Vec<ScreenTree>,
    #[serde(default)]
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bindings {
    pub entry_screen: String,
    /// Fully qualified activity name to screen id.
    #[serde(default)]
    pub activities: BTreeMap<String, String>,
    /// Deep-link URI (scheme://host[/pathPrefix]) to screen id.
    #[serde(default)]
    pub deep_links: BTreeMap<String, String>,
}

/// An installable app: its manifest plus the screens its activities and
/// deep links open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppBundle {
    pub manifest: ManifestSource,
    pub screens: ScreensFile,
    pub bindings: Bindings,
}

impl AppBundle {
    pub fn new(manifest: ManifestSource, screens: ScreensFile, bindings: Bindings) -> Result<Self> {
        let bundle = Self {
            manifest,
            screens,
            bindings,
        };
        bundle.validate_screens()?;
        Ok(bundle)
    }

    pub fn screen(&self, screen_id: &str) -> Option<&ScreenTree> {
        self.screens.screens.iter().find(|s| s.screen_id == screen_id)
    }

    pub fn transition(&self, screen_id: &str, node_id: &str) -> Option<&str> {
        self.screens
            .transitions
            .iter()
            .find(|t| t.screen == screen_id && t.node == node_id)
            .map(|t| t.target.as_str())
    }

    /// Checks tree shape, unique screen ids, and that every transition and
    /// binding points at an existing screen.
    pub fn validate_screens(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for s in &self.screens.screens {
            s.validate()?;
            if !ids.insert(s.screen_id.as_str()) {
                return Err(HarnessError::InvalidBundle(format!("duplicate screen {}", s.screen_id)));
            }
        }
        let missing = |what: &str, id: &str| HarnessError::InvalidBundle(format!("{what} targets unknown screen {id}"));
        for t in &self.screens.transitions {
            let Some(from) = self.screen(&t.screen) else {
                return Err(missing("transition", &t.screen));
            };
            if from.find(&t.node).is_none() {
                return Err(HarnessError::InvalidBundle(format!(
                    "transition from unknown node {} on {}",
                    t.node, t.screen
                )));
            }
            if !ids.contains(t.target.as_str()) {
                return Err(missing("transition", &t.target));
            }
        }
        if !ids.contains(self.bindings.entry_screen.as_str()) {
            return Err(missing("entry", &self.bindings.entry_screen));
        }
        for (key, target) in self.bindings.activities.iter().chain(&self.bindings.deep_links) {
            if !ids.contains(target.as_str()) {
                return Err(missing(key, target));
            }
        }
        Ok(())
    }

    /// Extracts the manifest and checks that the launcher opens the entry
    /// screen.
    pub fn package(&self) -> Result<AppPackage> {
        let pkg = self.manifest.extract()?;
        let launcher = pkg
            .launcher_activity
            .as_deref()
            .ok_or_else(|| HarnessError::InvalidBundle(format!("{} has no launcher activity", pkg.package_name)))?;
        match self.bindings.activities.get(launcher) {
            Some(s) if *s == self.bindings.entry_screen => Ok(pkg),
            _ => Err(HarnessError::InvalidBundle(format!(
                "launcher {launcher} is not bound to entry screen {}",
                self.bindings.entry_screen
            ))),
        }
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let bin = dir.join(MANIFEST_BIN);
        let xml = dir.join(MANIFEST_XML);
        let manifest = if bin.exists() {
            ManifestSource::Binary(fs::read(&bin).map_err(|e| HarnessError::io(&bin, e))?)
        } else {
            ManifestSource::Xml(fs::read_to_string(&xml).map_err(|e| HarnessError::io(&xml, e))?)
        };
        let screens = read_json(&dir.join(SCREENS_FILE))?;
        let bindings = read_json(&dir.join(BINDINGS_FILE))?;
        Self::new(manifest, screens, bindings)
    }

    /// The bundle's directory contents as (file name, bytes).
    pub fn files(&self) -> Vec<(&'static str, Vec<u8>)> {
        let manifest = match &self.manifest {
            ManifestSource::Binary(bytes) => (MANIFEST_BIN, bytes.clone()),
            ManifestSource::Xml(text) => (MANIFEST_XML, text.clone().into_bytes()),
        };
        vec![
            (BINDINGS_FILE, pretty(&self.bindings).into_bytes()),
            manifest,
            (SCREENS_FILE, pretty(&self.screens).into_bytes()),
        ]
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        for (name, bytes) in self.files() {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(|e| HarnessError::io(&path, e))?;
        }
        Ok(())
    }
}

pub(crate) fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("fixture types serialize");
    s.push('\n');
    s
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::json(path, e))
}
