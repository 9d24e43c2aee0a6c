use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ScreenError;

/// Pixel rectangle, serialized as `[left, top, right, bottom]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i32; 4]", into = "[i32; 4]")]
pub struct Bounds {
    pub left: i32,
    pub top: i32,
    pub right: i32,
    pub bottom: i32,
}

impl From<[i32; 4]> for Bounds {
    fn from([left, top, right, bottom]: [i32; 4]) -> Self {
        Self {
            left,
            top,
            right,
            bottom,
        }
    }
}

impl From<Bounds> for [i32; 4] {
    fn from(b: Bounds) -> Self {
        [b.left, b.top, b.right, b.bottom]
    }
}

impl Bounds {
    pub fn new(left: i32, top: i32, right: i32, bottom: i32) -> Self {
        Self {
            left,
            top,
            right,
            bottom,
        }
    }

    pub fn is_well_ordered(&self) -> bool {
        self.left <= self.right && self.top <= self.bottom
    }

    pub fn contains(&self, other: &Bounds) -> bool {
        self.left <= other.left && self.top <= other.top && self.right >= other.right && self.bottom >= other.bottom
    }

    pub fn center(&self) -> (f64, f64) {
        (
            (self.left as f64 + self.right as f64) / 2.0,
            (self.top as f64 + self.bottom as f64) / 2.0,
        )
    }
}

/// Strict interior intersection: rectangles sharing only an edge do not
/// overlap. Degenerate rectangles overlap only when they are identical.
pub fn overlaps(a: &Bounds, b: &Bounds) -> bool {
    if a == b {
        return true;
    }
    a.left.max(b.left) < a.right.min(b.right) && a.top.max(b.top) < a.bottom.min(b.bottom)
}

pub fn center_distance(a: &Bounds, b: &Bounds) -> f64 {
    let (ax, ay) = a.center();
    let (bx, by) = b.center();
    (ax - bx).hypot(ay - by)
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_zero(n: &i32) -> bool {
    *n == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UiNode {
    pub id: String,
    pub role: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub bounds: Bounds,
    #[serde(default, skip_serializing_if = "is_false")]
    pub clickable: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub scrollable: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub editable: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<UiNode>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub scroll_offset: i32,
}

impl UiNode {
    pub fn new(id: impl Into<String>, role: impl Into<String>, bounds: Bounds) -> Self {
        Self {
            id: id.into(),
            role: role.into(),
            text: None,
            bounds,
            clickable: false,
            scrollable: false,
            editable: false,
            children: Vec::new(),
            scroll_offset: 0,
        }
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn clickable(mut self) -> Self {
        self.clickable = true;
        self
    }

    pub fn scrollable(mut self) -> Self {
        self.scrollable = true;
        self
    }

    pub fn editable(mut self) -> Self {
        self.editable = true;
        self
    }

    pub fn with_child(mut self, child: UiNode) -> Self {
        self.children.push(child);
        self
    }

    pub fn is_interactive(&self) -> bool {
        self.clickable || self.scrollable || self.editable
    }

    /// Own text, trimmed; `None` when absent or blank.
    pub fn own_text(&self) -> Option<&str> {
        self.text.as_deref().map(str::trim).filter(|t| !t.is_empty())
    }

    /// This node and its descendants in depth-first preorder.
    pub fn preorder(&self) -> Vec<&UiNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.children.iter().rev());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenTree {
    pub screen_id: String,
    pub root: UiNode,
}

impl ScreenTree {
    pub fn new(screen_id: impl Into<String>, root: UiNode) -> Result<Self, ScreenError> {
        let tree = Self {
            screen_id: screen_id.into(),
            root,
        };
        tree.validate()?;
        Ok(tree)
    }

    pub fn validate(&self) -> Result<(), ScreenError> {
        let mut seen = HashSet::new();
        for n in self.root.preorder() {
            if !seen.insert(n.id.as_str()) {
                return Err(ScreenError::DuplicateId(n.id.clone()));
            }
            if !n.bounds.is_well_ordered() {
                return Err(ScreenError::InvalidBounds(n.id.clone()));
            }
            if !self.root.bounds.contains(&n.bounds) {
                return Err(ScreenError::OutsideRoot(n.id.clone()));
            }
        }
        Ok(())
    }

    pub fn preorder(&self) -> Vec<&UiNode> {
        self.root.preorder()
    }

    pub fn find(&self, id: &str) -> Option<&UiNode> {
        self.preorder().into_iter().find(|n| n.id == id)
    }

    pub fn find_mut(&mut self, id: &str) -> Option<&mut UiNode> {
        fn walk<'a>(n: &'a mut UiNode, id: &str) -> Option<&'a mut UiNode> {
            if n.id == id {
                return Some(n);
            }
            n.children.iter_mut().find_map(|c| walk(c, id))
        }
        walk(&mut self.root, id)
    }

    pub fn parent_of(&self, id: &str) -> Option<&UiNode> {
        self.preorder()
            .into_iter()
            .find(|n| n.children.iter().any(|c| c.id == id))
    }

    /// Canonical JSON; two trees are identical exactly when this matches.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("tree serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_examples() {
        let a = Bounds::new(0, 0, 10, 10);
        assert!(overlaps(&a, &a));
        assert_eq!(center_distance(&a, &a), 0.0);
        let b = Bounds::new(20, 0, 30, 10);
        assert!(!overlaps(&a, &b));
        assert_eq!(center_distance(&a, &b), 20.0);
        let c = Bounds::new(10, 0, 20, 10);
        assert!(!overlaps(&a, &c));
        assert!(overlaps(&a, &Bounds::new(5, 5, 15, 15)));
    }

    #[test]
    fn validation() {
        let root = UiNode::new("r", "frame", Bounds::new(0, 0, 100, 100));
        let dup = root.clone().with_child(UiNode::new("r", "text", Bounds::new(0, 0, 1, 1)));
        assert_eq!(ScreenTree::new("s", dup), Err(ScreenError::DuplicateId("r".into())));
        let bad = root.clone().with_child(UiNode::new("x", "text", Bounds::new(5, 0, 1, 1)));
        assert_eq!(ScreenTree::new("s", bad), Err(ScreenError::InvalidBounds("x".into())));
        let out = root.clone().with_child(UiNode::new("x", "text", Bounds::new(50, 50, 150, 60)));
        assert_eq!(ScreenTree::new("s", out), Err(ScreenError::OutsideRoot("x".into())));
    }

    #[test]
    fn json_shape() {
        let tree = ScreenTree::new(
            "home",
            UiNode::new("root", "frame", Bounds::new(0, 0, 10, 10))
                .with_child(UiNode::new("b", "button", Bounds::new(0, 0, 5, 5)).with_text("Go").clickable()),
        )
        .unwrap();
        let json = tree.canonical_json();
        assert_eq!(
            json,
            r#"{"screen_id":"home","root":{"id":"root","role":"frame","bounds":[0,0,10,10],"children":[{"id":"b","role":"button","text":"Go","bounds":[0,0,5,5],"clickable":true}]}}"#
        );
        let back: ScreenTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tree);
        assert_eq!(tree.parent_of("b").unwrap().id, "root");
        assert!(tree.parent_of("root").is_none());
    }
}
