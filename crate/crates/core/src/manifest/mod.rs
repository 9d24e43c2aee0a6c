//! Manifest walking: exported components, intent filters, deep links,
//! explicit launch intents and the keywords used to rank them.

mod extract;
mod intents;
mod keywords;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extract::{extract_package, extract_package_with_warnings, ExtractWarning};
pub use intents::{build_deep_links, build_explicit_intents, collect_intents, AppDescriptor, AppIntents};
pub use keywords::{derive_keywords, split_identifier, KeywordOrigin, KeywordSet, KeywordSource, BOILERPLATE_TOKENS};

pub const ACTION_MAIN: &str = "android.intent.action.MAIN";
pub const ACTION_VIEW: &str = "android.intent.action.VIEW";
pub const CATEGORY_LAUNCHER: &str = "android.intent.category.LAUNCHER";
pub const CATEGORY_BROWSABLE: &str = "android.intent.category.BROWSABLE";
pub const CATEGORY_DEFAULT: &str = "android.intent.category.DEFAULT";

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ManifestError {
    #[error("root element is <{0}>, not <manifest>")]
    NotAManifest(String),
    #[error("manifest has no package attribute")]
    MissingPackageName,
    #[error("every keyword derived for {0} was boilerplate")]
    EmptyKeywordSet(String),
    #[error("malformed deep link {0:?}")]
    BadDeepLink(String),
}

pub type Result<T> = std::result::Result<T, ManifestError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppPackage {
    pub package_name: String,
    pub label: String,
    pub components: Vec<ComponentDecl>,
    pub launcher_activity: Option<String>,
}

impl AppPackage {
    pub fn component(&self, activity_name: &str) -> Option<&ComponentDecl> {
        self.components.iter().find(|c| c.activity_name == activity_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDecl {
    /// Fully qualified class name.
    pub activity_name: String,
    pub exported: bool,
    pub intent_filters: Vec<IntentFilterDecl>,
}

impl ComponentDecl {
    pub fn is_launcher(&self) -> bool {
        self.intent_filters.iter().any(IntentFilterDecl::is_main_launcher)
    }

    /// Class name without its package, e.g. `MyRecipesActivity`.
    pub fn simple_name(&self) -> &str {
        simple_name(&self.activity_name)
    }
}

pub(crate) fn simple_name(activity_name: &str) -> &str {
    activity_name.rsplit('.').next().unwrap_or(activity_name)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntentFilterDecl {
    pub actions: Vec<String>,
    pub categories: Vec<String>,
    pub data_specs: Vec<DataSpec>,
}

impl IntentFilterDecl {
    pub fn is_main_launcher(&self) -> bool {
        self.actions.iter().any(|a| a == ACTION_MAIN) && self.categories.iter().any(|c| c == CATEGORY_LAUNCHER)
    }

    pub fn has_category(&self, category: &str) -> bool {
        self.categories.iter().any(|c| c == category)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataSpec {
    pub scheme: Option<String>,
    pub host: Option<String>,
    pub path_prefix: Option<String>,
}

/// A `scheme://host[pathPrefix]` URI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DeepLink {
    pub scheme: String,
    pub host: String,
    pub path_prefix: Option<String>,
}

impl DeepLink {
    pub fn uri(&self) -> String {
        format!("{}://{}{}", self.scheme, self.host, self.path_prefix.as_deref().unwrap_or(""))
    }

    /// Splits a URI back into scheme, host and path.
    pub fn parse(uri: &str) -> Result<DeepLink> {
        let bad = || ManifestError::BadDeepLink(uri.to_string());
        let (scheme, rest) = uri.split_once("://").ok_or_else(bad)?;
        if scheme.is_empty() || rest.is_empty() {
            return Err(bad());
        }
        let (host, path) = match rest.find('/') {
            Some(i) => (&rest[..i], Some(rest[i..].to_string())),
            None => (rest, None),
        };
        if host.is_empty() {
            return Err(bad());
        }
        Ok(DeepLink {
            scheme: scheme.to_string(),
            host: host.to_string(),
            path_prefix: path,
        })
    }
}

impl std::fmt::Display for DeepLink {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.uri())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntentKind {
    DeepLink {
        uri: String,
    },
    Explicit {
        package_name: String,
        activity_name: String,
        action_name: Option<String>,
    },
}

/// An invocable entry point into an app.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaunchIntent {
    /// Package that declared the intent.
    pub package_name: String,
    #[serde(flatten)]
    pub kind: IntentKind,
    pub keywords: KeywordSet,
    pub source_component: String,
}

impl LaunchIntent {
    pub fn is_deep_link(&self) -> bool {
        matches!(self.kind, IntentKind::DeepLink { .. })
    }

    /// Stable one-line description, used for tie-breaking and display.
    pub fn describe(&self) -> String {
        match &self.kind {
            IntentKind::DeepLink { uri } => format!("deeplink {uri}"),
            IntentKind::Explicit {
                package_name,
                activity_name,
                action_name,
            } => match action_name {
                Some(action) => format!("explicit {package_name}/{activity_name} {action}"),
                None => format!("explicit {package_name}/{activity_name}"),
            },
        }
    }
}
