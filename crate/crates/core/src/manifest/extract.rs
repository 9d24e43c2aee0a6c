use log::warn;

use super::{AppPackage, ComponentDecl, DataSpec, IntentFilterDecl, ManifestError, Result};
use crate::axml::{AttrValue, XmlDocument, XmlElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtractWarning {
    EmptyIntentFilter { activity: String },
    ActivityWithoutName,
    /// A MAIN/LAUNCHER component declared `exported="false"`; it is treated
    /// as exported for launching.
    LauncherNotExported { activity: String },
}

impl std::fmt::Display for ExtractWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtractWarning::EmptyIntentFilter { activity } => {
                write!(f, "dropped intent filter without actions or data on {activity}")
            }
            ExtractWarning::ActivityWithoutName => f.write_str("skipped <activity> without android:name"),
            ExtractWarning::LauncherNotExported { activity } => {
                write!(f, "launcher {activity} is marked exported=false; launching it anyway")
            }
        }
    }
}

pub fn extract_package(doc: &XmlDocument) -> Result<AppPackage> {
    let (pkg, warnings) = extract_package_with_warnings(doc)?;
    for w in &warnings {
        warn!("{}: {w}", pkg.package_name);
    }
    Ok(pkg)
}

pub fn extract_package_with_warnings(doc: &XmlDocument) -> Result<(AppPackage, Vec<ExtractWarning>)> {
    let root = &doc.root;
    if root.name != "manifest" {
        return Err(ManifestError::NotAManifest(root.name.clone()));
    }
    let package_name = root
        .attr_text("package")
        .filter(|p| !p.trim().is_empty())
        .ok_or(ManifestError::MissingPackageName)?;

    let application = root.child_elements().find(|e| e.name == "application");
    let label = application
        .and_then(|a| a.attr_text("label"))
        .filter(|l| !l.is_empty() && !l.starts_with('@'))
        .unwrap_or_else(|| package_name.rsplit('.').next().unwrap_or(&package_name).to_string());

    let mut warnings = Vec::new();
    let mut components = Vec::new();
    for activity in root.descendants().into_iter().filter(|e| e.name == "activity") {
        let Some(name) = activity.attr_text("name") else {
            warnings.push(ExtractWarning::ActivityWithoutName);
            continue;
        };
        let activity_name = qualify(&package_name, &name);
        let intent_filters = read_filters(activity, &activity_name, &mut warnings);
        let declared = activity.attr("exported").map(as_bool);
        let is_launcher = intent_filters.iter().any(IntentFilterDecl::is_main_launcher);
        let exported = match declared {
            Some(false) if is_launcher => {
                warnings.push(ExtractWarning::LauncherNotExported {
                    activity: activity_name.clone(),
                });
                true
            }
            Some(v) => v,
            None => !intent_filters.is_empty(),
        };
        components.push(ComponentDecl {
            activity_name,
            exported,
            intent_filters,
        });
    }

    let launcher_activity = components
        .iter()
        .find(|c| c.is_launcher())
        .map(|c| c.activity_name.clone());

    Ok((
        AppPackage {
            package_name,
            label,
            components,
            launcher_activity,
        },
        warnings,
    ))
}

/// Resolves `.Foo` and bare `Foo` against the package name.
fn qualify(package: &str, name: &str) -> String {
    if let Some(rest) = name.strip_prefix('.') {
        format!("{package}.{rest}")
    } else if !name.contains('.') {
        format!("{package}.{name}")
    } else {
        name.to_string()
    }
}

fn as_bool(v: &AttrValue) -> bool {
    match v {
        AttrValue::Bool(b) => *b,
        AttrValue::IntDec(n) => *n != 0,
        AttrValue::IntHex(n) => *n != 0,
        AttrValue::String(s) => s.eq_ignore_ascii_case("true"),
    }
}

fn read_filters(activity: &XmlElement, activity_name: &str, warnings: &mut Vec<ExtractWarning>) -> Vec<IntentFilterDecl> {
    let mut filters = Vec::new();
    for f in activity.child_elements().filter(|e| e.name == "intent-filter") {
        let mut decl = IntentFilterDecl::default();
        for child in f.child_elements() {
            match child.name.as_str() {
                "action" => decl.actions.extend(child.attr_text("name")),
                "category" => decl.categories.extend(child.attr_text("name")),
                "data" => decl.data_specs.push(DataSpec {
                    scheme: child.attr_text("scheme"),
                    host: child.attr_text("host"),
                    path_prefix: child.attr_text("pathPrefix").map(|p| normalize_prefix(&p)),
                }),
                _ => {}
            }
        }
        if decl.actions.is_empty() && decl.data_specs.is_empty() {
            warnings.push(ExtractWarning::EmptyIntentFilter {
                activity: activity_name.to_string(),
            });
            continue;
        }
        filters.push(decl);
    }
    filters
}

fn normalize_prefix(p: &str) -> String {
    if p.starts_with('/') {
        p.to_string()
    } else {
        format!("/{p}")
    }
}
