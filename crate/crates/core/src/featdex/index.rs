use std::collections::BTreeMap;
use std::time::SystemTime;

use serde::{Deserialize, Serialize};

use super::{FeatdexError, Result};
use crate::manifest::{AppDescriptor, AppPackage, LaunchIntent};
use crate::text;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppEntry {
    pub package: AppPackage,
    pub intents: Vec<LaunchIntent>,
    pub launcher: LaunchIntent,
}

/// Immutable after construction; rebuilding yields a new value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureIndex {
    /// Keyed by normalized app label.
    pub apps: BTreeMap<String, AppEntry>,
    /// Excluded from serialization so equal inputs serialize identically.
    #[serde(skip)]
    pub built_at: Option<SystemTime>,
}

impl FeatureIndex {
    pub fn empty() -> Self {
        Self {
            apps: BTreeMap::new(),
            built_at: Some(SystemTime::now()),
        }
    }

    pub fn len(&self) -> usize {
        self.apps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.apps.is_empty()
    }

    pub fn by_package(&self, package_name: &str) -> Option<&AppEntry> {
        self.apps.values().find(|e| e.package.package_name == package_name)
    }
}

pub fn build_index(packages: &[AppPackage]) -> Result<FeatureIndex> {
    let descriptors: Vec<AppDescriptor> = packages.iter().cloned().map(AppDescriptor::from_package).collect();
    build_index_from_descriptors(descriptors)
}

pub fn build_index_from_descriptors(descriptors: Vec<AppDescriptor>) -> Result<FeatureIndex> {
    let mut apps = BTreeMap::new();
    for d in descriptors {
        let key = text::normalize(&d.package.label);
        let launcher = d
            .launcher
            .clone()
            .ok_or_else(|| FeatdexError::MissingLauncher(d.package.package_name.clone()))?;
        let entry = AppEntry {
            package: d.package,
            intents: d.intents,
            launcher,
        };
        if apps.insert(key.clone(), entry).is_some() {
            return Err(FeatdexError::DuplicateAppLabel(key));
        }
    }
    Ok(FeatureIndex {
        apps,
        built_at: Some(SystemTime::now()),
    })
}

/// Finds the installed app a phrase refers to: an exact normalized label match
/// wins, otherwise the unique label with the largest token overlap.
pub fn match_app<'a>(index: &'a FeatureIndex, phrase: &str) -> Result<&'a AppEntry> {
    let normalized = text::normalize(phrase);
    if normalized.is_empty() {
        return Err(FeatdexError::EmptyPhrase);
    }
    if let Some(entry) = index.apps.get(&normalized) {
        return Ok(entry);
    }
    let wanted = text::tokens(&normalized);
    let mut best: Vec<(&String, &AppEntry)> = Vec::new();
    let mut best_overlap = 0;
    for (label, entry) in &index.apps {
        let overlap = label.split(' ').filter(|t| wanted.iter().any(|w| w == t)).count();
        if overlap == 0 || overlap < best_overlap {
            continue;
        }
        if overlap > best_overlap {
            best_overlap = overlap;
            best.clear();
        }
        best.push((label, entry));
    }
    match best.as_slice() {
        [] => Err(FeatdexError::UnknownApp(phrase.to_string())),
        [(_, entry)] => Ok(entry),
        many => Err(FeatdexError::AmbiguousApp {
            phrase: phrase.to_string(),
            candidates: many.iter().map(|(_, e)| e.package.label.clone()).collect(),
        }),
    }
}
