use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::tree::{Bounds, ScreenTree, UiNode};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeSet {
    pub added: BTreeSet<String>,
    pub removed: BTreeSet<String>,
    pub text_changed: BTreeSet<String>,
    pub offset_changed: BTreeSet<String>,
    /// Nodes whose role, bounds, flags or position in the tree changed.
    pub other_changed: BTreeSet<String>,
    pub screen_changed: bool,
}

impl ChangeSet {
    pub fn is_empty(&self) -> bool {
        !self.screen_changed
            && self.added.is_empty()
            && self.removed.is_empty()
            && self.text_changed.is_empty()
            && self.offset_changed.is_empty()
            && self.other_changed.is_empty()
    }
}

#[derive(PartialEq)]
struct Shape<'a> {
    role: &'a str,
    bounds: Bounds,
    flags: (bool, bool, bool),
    parent: Option<&'a str>,
    children: Vec<&'a str>,
}

fn index(tree: &ScreenTree) -> BTreeMap<&str, (&UiNode, Shape<'_>)> {
    let mut out = BTreeMap::new();
    let mut stack: Vec<(&UiNode, Option<&str>)> = vec![(&tree.root, None)];
    while let Some((n, parent)) = stack.pop() {
        let shape = Shape {
            role: &n.role,
            bounds: n.bounds,
            flags: (n.clickable, n.scrollable, n.editable),
            parent,
            children: n.children.iter().map(|c| c.id.as_str()).collect(),
        };
        out.insert(n.id.as_str(), (n, shape));
        stack.extend(n.children.iter().map(|c| (c, Some(n.id.as_str()))));
    }
    out
}

/// Id-keyed structural diff; empty exactly when both trees serialize alike.
pub fn diff_screens(before: &ScreenTree, after: &ScreenTree) -> ChangeSet {
    let a = index(before);
    let b = index(after);
    let mut cs = ChangeSet {
        screen_changed: before.screen_id != after.screen_id,
        ..ChangeSet::default()
    };
    for (id, (node, shape)) in &a {
        match b.get(id) {
            None => {
                cs.removed.insert(id.to_string());
            }
            Some((other, other_shape)) => {
                if node.text != other.text {
                    cs.text_changed.insert(id.to_string());
                }
                if node.scroll_offset != other.scroll_offset {
                    cs.offset_changed.insert(id.to_string());
                }
                if shape != other_shape {
                    cs.other_changed.insert(id.to_string());
                }
            }
        }
    }
    cs.added = b.keys().filter(|id| !a.contains_key(*id)).map(|id| id.to_string()).collect();
    cs
}
