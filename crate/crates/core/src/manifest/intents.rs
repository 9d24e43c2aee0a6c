use log::warn;
use serde::{Deserialize, Serialize};

use super::keywords::{derive_keywords, split_identifier, KeywordOrigin, KeywordSet, KeywordSource};
use super::*;

/// Deep links declared by one intent filter. Only filters carrying both the
/// BROWSABLE and DEFAULT categories can be invoked from another app, so other
/// filters yield nothing.
pub fn build_deep_links(filter: &IntentFilterDecl) -> Vec<DeepLink> {
    build_deep_links_with(filter, true)
}

pub fn build_deep_links_with(filter: &IntentFilterDecl, require_browsable: bool) -> Vec<DeepLink> {
    if require_browsable && !(filter.has_category(CATEGORY_BROWSABLE) && filter.has_category(CATEGORY_DEFAULT)) {
        return Vec::new();
    }
    let mut links: Vec<DeepLink> = Vec::new();
    for spec in &filter.data_specs {
        let (Some(scheme), Some(host)) = (&spec.scheme, &spec.host) else {
            continue;
        };
        let link = DeepLink {
            scheme: scheme.clone(),
            host: host.clone(),
            path_prefix: spec.path_prefix.clone(),
        };
        if !is_valid(&link) {
            warn!("skipping invalid deep link {}", link.uri());
            continue;
        }
        if !links.contains(&link) {
            links.push(link);
        }
    }
    links
}

fn is_valid(link: &DeepLink) -> bool {
    let scheme_ok = link
        .scheme
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic())
        && link
            .scheme
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    let host_ok = !link.host.is_empty() && !link.host.contains(['/', ' ', '*']);
    let path_ok = link.path_prefix.as_deref().is_none_or(|p| p.starts_with('/') && !p.contains(' '));
    scheme_ok && host_ok && path_ok
}

/// One explicit intent per declared action of an exported component, or a
/// single action-less intent when it declares none.
pub fn build_explicit_intents(component: &ComponentDecl, pkg: &AppPackage) -> Vec<LaunchIntent> {
    if !component.exported {
        return Vec::new();
    }
    let mut actions: Vec<Option<&str>> = Vec::new();
    for f in &component.intent_filters {
        for a in &f.actions {
            if !actions.contains(&Some(a.as_str())) {
                actions.push(Some(a));
            }
        }
    }
    if actions.is_empty() {
        actions.push(None);
    }
    actions
        .into_iter()
        .filter_map(|action| {
            let source = KeywordSource {
                activity_name: &component.activity_name,
                path_prefix: None,
                action_name: action,
            };
            match derive_keywords(source) {
                Ok(keywords) => Some(LaunchIntent {
                    package_name: pkg.package_name.clone(),
                    kind: IntentKind::Explicit {
                        package_name: pkg.package_name.clone(),
                        activity_name: component.activity_name.clone(),
                        action_name: action.map(str::to_string),
                    },
                    keywords,
                    source_component: component.activity_name.clone(),
                }),
                Err(_) => None,
            }
        })
        .collect()
}

/// Every intent of a package plus its launcher.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppIntents {
    pub intents: Vec<LaunchIntent>,
    /// Always an element of `intents` when present.
    pub launcher: Option<LaunchIntent>,
}

pub fn collect_intents(pkg: &AppPackage) -> AppIntents {
    let mut intents = Vec::new();
    for component in pkg.components.iter().filter(|c| c.exported) {
        for filter in &component.intent_filters {
            for link in build_deep_links(filter) {
                let source = KeywordSource {
                    activity_name: &component.activity_name,
                    path_prefix: link.path_prefix.as_deref(),
                    action_name: None,
                };
                let Ok(keywords) = derive_keywords(source) else {
                    continue;
                };
                let intent = LaunchIntent {
                    package_name: pkg.package_name.clone(),
                    kind: IntentKind::DeepLink { uri: link.uri() },
                    keywords,
                    source_component: component.activity_name.clone(),
                };
                if !intents.contains(&intent) {
                    intents.push(intent);
                }
            }
        }
        intents.extend(build_explicit_intents(component, pkg));
    }

    let launcher_component = pkg
        .launcher_activity
        .as_deref()
        .or_else(|| pkg.components.iter().find(|c| c.exported).map(|c| c.activity_name.as_str()));
    let launcher = launcher_component.map(|activity| launcher_intent(pkg, activity, &mut intents));
    AppIntents { intents, launcher }
}

fn launcher_intent(pkg: &AppPackage, activity: &str, intents: &mut Vec<LaunchIntent>) -> LaunchIntent {
    let is_launch = |i: &LaunchIntent| {
        matches!(&i.kind, IntentKind::Explicit { activity_name, action_name, .. }
            if activity_name == activity && action_name.as_deref().is_none_or(|a| a == ACTION_MAIN))
    };
    if let Some(existing) = intents.iter().find(|i| is_launch(i)) {
        return existing.clone();
    }
    let mut keywords = KeywordSet::new();
    for word in pkg.label.split_whitespace().flat_map(split_identifier) {
        keywords.push(&word, KeywordOrigin::Label);
    }
    if keywords.is_empty() {
        keywords.push(pkg.package_name.rsplit('.').next().unwrap_or("launcher"), KeywordOrigin::Label);
    }
    let intent = LaunchIntent {
        package_name: pkg.package_name.clone(),
        kind: IntentKind::Explicit {
            package_name: pkg.package_name.clone(),
            activity_name: activity.to_string(),
            action_name: pkg
                .component(activity)
                .filter(|c| c.is_launcher())
                .map(|_| ACTION_MAIN.to_string()),
        },
        keywords,
        source_component: activity.to_string(),
    };
    intents.push(intent.clone());
    intent
}

/// Portable app descriptor: the JSON interchange consumed by the feature
/// index and the device simulator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppDescriptor {
    pub package: AppPackage,
    pub intents: Vec<LaunchIntent>,
    pub launcher: Option<LaunchIntent>,
}

impl AppDescriptor {
    pub fn from_package(package: AppPackage) -> Self {
        let AppIntents { intents, launcher } = collect_intents(&package);
        Self {
            package,
            intents,
            launcher,
        }
    }
}
