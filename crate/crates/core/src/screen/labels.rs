use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::tree::{center_distance, Bounds, ScreenTree, UiNode};
use super::ScreenError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSource {
    Own,
    Descendant,
    Sibling,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractiveElement {
    pub node_id: String,
    pub label: Option<String>,
    pub label_source: LabelSource,
    pub bounds: Bounds,
    pub clickable: bool,
    pub scrollable: bool,
    pub editable: bool,
}

fn normalize(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

fn descendant_text(node: &UiNode) -> Option<String> {
    let parts: Vec<&str> = node.preorder().into_iter().skip(1).filter_map(UiNode::own_text).collect();
    (!parts.is_empty()).then(|| parts.join(" "))
}

fn label_of(tree: &ScreenTree, node: &UiNode) -> (Option<String>, LabelSource) {
    if let Some(t) = node.own_text() {
        return (Some(normalize(t)), LabelSource::Own);
    }
    if let Some(t) = descendant_text(node) {
        return (Some(normalize(&t)), LabelSource::Descendant);
    }
    let sibling = tree.parent_of(&node.id).and_then(|parent| {
        parent
            .children
            .iter()
            .filter(|s| s.id != node.id && !s.is_interactive())
            .filter_map(|s| s.own_text().map(|t| (center_distance(&node.bounds, &s.bounds), t)))
            .fold(None, |best: Option<(f64, &str)>, cand| match best {
                Some(b) if b.0 <= cand.0 => Some(b),
                _ => Some(cand),
            })
    });
    match sibling {
        Some((_, t)) => (Some(normalize(t)), LabelSource::Sibling),
        None => (None, LabelSource::None),
    }
}

/// Label of `node_id`: own text, else descendant text in document order,
/// else the nearest non-interactive sibling with text. Lowercased.
pub fn resolve_label(tree: &ScreenTree, node_id: &str) -> Result<(Option<String>, LabelSource), ScreenError> {
    let node = tree
        .find(node_id)
        .ok_or_else(|| ScreenError::UnknownNode(node_id.to_string()))?;
    Ok(label_of(tree, node))
}

/// Interactive nodes in preorder with resolved labels.
pub fn collect_interactive(tree: &ScreenTree) -> Vec<InteractiveElement> {
    tree.preorder()
        .into_iter()
        .filter(|n| n.is_interactive())
        .map(|n| {
            let (label, label_source) = label_of(tree, n);
            InteractiveElement {
                node_id: n.id.clone(),
                label,
                label_source,
                bounds: n.bounds,
                clickable: n.clickable,
                scrollable: n.scrollable,
                editable: n.editable,
            }
        })
        .collect()
}

/// Numbers assigned to unlabeled interactive elements for this snapshot.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TooltipMap {
    pub assignments: BTreeMap<u32, String>,
}

impl TooltipMap {
    pub fn node_for(&self, number: u32) -> Option<&str> {
        self.assignments.get(&number).map(String::as_str)
    }

    pub fn number_of(&self, node_id: &str) -> Option<u32> {
        self.assignments.iter().find(|(_, id)| *id == node_id).map(|(n, _)| *n)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

/// Numbers unlabeled elements 1..n by top, then left, then input order.
pub fn assign_tooltips(elements: &[InteractiveElement]) -> TooltipMap {
    let mut unlabeled: Vec<(usize, &InteractiveElement)> =
        elements.iter().enumerate().filter(|(_, e)| e.label.is_none()).collect();
    unlabeled.sort_by_key(|(i, e)| (e.bounds.top, e.bounds.left, *i));
    let mut assignments = BTreeMap::new();
    for (_, e) in unlabeled {
        if !assignments.values().any(|id| id == &e.node_id) {
            assignments.insert(assignments.len() as u32 + 1, e.node_id.clone());
        }
    }
    TooltipMap { assignments }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(l: i32, t: i32, r: i32, bt: i32) -> Bounds {
        Bounds::new(l, t, r, bt)
    }

    fn root() -> UiNode {
        UiNode::new("root", "frame", b(0, 0, 1000, 2000))
    }

    #[test]
    fn own_text_label() {
        let tree = ScreenTree::new("s", root().with_child(UiNode::new("save", "button", b(0, 0, 100, 50)).with_text("Save").clickable())).unwrap();
        assert_eq!(resolve_label(&tree, "save").unwrap(), (Some("save".into()), LabelSource::Own));
    }

    #[test]
    fn descendant_label() {
        let card = UiNode::new("card", "container", b(0, 0, 500, 200))
            .clickable()
            .with_child(UiNode::new("img", "image", b(0, 0, 100, 100)))
            .with_child(UiNode::new("title", "text", b(100, 0, 500, 50)).with_text("Healthy  Burger"));
        let tree = ScreenTree::new("s", root().with_child(card)).unwrap();
        assert_eq!(
            resolve_label(&tree, "card").unwrap(),
            (Some("healthy burger".into()), LabelSource::Descendant)
        );
    }

    #[test]
    fn sibling_label_by_distance() {
        // icon center (25,25); "Options" center (85,25) at 60px; "Far" center (25,475) at 450px.
        let row = UiNode::new("row", "container", b(0, 0, 1000, 500))
            .with_child(UiNode::new("icon", "image", b(0, 0, 50, 50)).clickable())
            .with_child(UiNode::new("opt", "text", b(60, 0, 110, 50)).with_text("Options"))
            .with_child(UiNode::new("far", "text", b(0, 450, 50, 500)).with_text("Far"));
        let tree = ScreenTree::new("s", root().with_child(row)).unwrap();
        assert_eq!(
            resolve_label(&tree, "icon").unwrap(),
            (Some("options".into()), LabelSource::Sibling)
        );
    }

    #[test]
    fn sibling_ties_go_to_document_order() {
        let row = UiNode::new("row", "container", b(0, 0, 300, 100))
            .with_child(UiNode::new("left", "text", b(0, 0, 100, 100)).with_text("Left"))
            .with_child(UiNode::new("icon", "image", b(100, 0, 200, 100)).clickable())
            .with_child(UiNode::new("right", "text", b(200, 0, 300, 100)).with_text("Right"));
        let tree = ScreenTree::new("s", root().with_child(row)).unwrap();
        assert_eq!(resolve_label(&tree, "icon").unwrap().0.as_deref(), Some("left"));
    }

    #[test]
    fn interactive_siblings_do_not_lend_labels() {
        let row = UiNode::new("row", "container", b(0, 0, 300, 100))
            .with_child(UiNode::new("icon", "image", b(0, 0, 100, 100)).clickable())
            .with_child(UiNode::new("btn", "button", b(100, 0, 200, 100)).with_text("Share").clickable());
        let tree = ScreenTree::new("s", root().with_child(row)).unwrap();
        assert_eq!(resolve_label(&tree, "icon").unwrap(), (None, LabelSource::None));
        assert!(matches!(resolve_label(&tree, "nope"), Err(ScreenError::UnknownNode(_))));
    }

    #[test]
    fn collect_in_preorder() {
        let tree = ScreenTree::new(
            "s",
            root()
                .with_child(UiNode::new("a", "button", b(0, 0, 10, 10)).clickable().with_text("A"))
                .with_child(UiNode::new("t", "text", b(0, 20, 10, 30)).with_text("static"))
                .with_child(
                    UiNode::new("box", "frame", b(0, 40, 100, 100))
                        .with_child(UiNode::new("in", "input", b(0, 40, 100, 60)).editable())
                        .with_child(UiNode::new("c", "button", b(0, 60, 10, 70)).clickable()),
                ),
        )
        .unwrap();
        let ids: Vec<String> = collect_interactive(&tree).into_iter().map(|e| e.node_id).collect();
        assert_eq!(ids, ["a", "in", "c"]);
        let static_tree = ScreenTree::new("s", root().with_child(UiNode::new("t", "text", b(0, 0, 1, 1)))).unwrap();
        assert!(collect_interactive(&static_tree).is_empty());
    }

    #[test]
    fn tooltip_order() {
        let tree = ScreenTree::new(
            "s",
            root()
                .with_child(UiNode::new("right", "image", b(200, 0, 250, 50)).clickable())
                .with_child(UiNode::new("left", "image", b(10, 0, 60, 50)).clickable())
                .with_child(UiNode::new("low", "image", b(0, 100, 50, 150)).clickable())
                .with_child(UiNode::new("named", "button", b(0, 0, 5, 5)).with_text("Named").clickable()),
        )
        .unwrap();
        let map = assign_tooltips(&collect_interactive(&tree));
        assert_eq!(map.node_for(1), Some("left"));
        assert_eq!(map.node_for(2), Some("right"));
        assert_eq!(map.node_for(3), Some("low"));
        assert_eq!(map.len(), 3);
        assert_eq!(map.number_of("right"), Some(2));
        assert!(assign_tooltips(&[]).is_empty());
    }
}
