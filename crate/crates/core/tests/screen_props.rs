use std::collections::BTreeSet;

use proptest::prelude::*;
use voxnav_core::screen::{
    assign_tooltips, collect_interactive, diff_screens, resolve_label, Bounds, ScreenTree, UiNode,
};

fn arb_node() -> impl Strategy<Value = UiNode> {
    let leaf = (
        0i32..900,
        0i32..1900,
        1i32..100,
        1i32..100,
        proptest::option::of("[A-Za-z]{1,6}"),
        any::<(bool, bool, bool)>(),
    )
        .prop_map(|(l, t, w, h, text, (c, s, e))| {
            let mut n = UiNode::new("", "view", Bounds::new(l, t, l + w, t + h));
            n.text = text;
            n.clickable = c;
            n.scrollable = s;
            n.editable = e;
            n
        });
    leaf.prop_recursive(3, 24, 4, |inner| {
        (inner.clone(), proptest::collection::vec(inner, 0..4)).prop_map(|(mut n, children)| {
            n.children = children;
            n
        })
    })
}

fn number(node: &mut UiNode, next: &mut usize) {
    node.id = format!("n{next}");
    *next += 1;
    for c in &mut node.children {
        number(c, next);
    }
}

fn arb_tree() -> impl Strategy<Value = ScreenTree> {
    proptest::collection::vec(arb_node(), 0..5).prop_map(|children| {
        let mut root = UiNode::new("", "frame", Bounds::new(0, 0, 1000, 2000));
        root.children = children;
        let mut next = 0;
        number(&mut root, &mut next);
        ScreenTree::new("s", root).unwrap()
    })
}

proptest! {
    #[test]
    fn self_diff_is_empty(t in arb_tree()) {
        prop_assert!(diff_screens(&t, &t).is_empty());
    }

    #[test]
    fn diff_is_symmetric(a in arb_tree(), b in arb_tree()) {
        let ab = diff_screens(&a, &b);
        let ba = diff_screens(&b, &a);
        prop_assert_eq!(&ab.added, &ba.removed);
        prop_assert_eq!(&ab.removed, &ba.added);
        prop_assert_eq!(&ab.text_changed, &ba.text_changed);
        prop_assert_eq!(ab.is_empty(), a.canonical_json() == b.canonical_json());
    }

    #[test]
    fn tooltips_biject_onto_unlabeled(t in arb_tree()) {
        let elements = collect_interactive(&t);
        let map = assign_tooltips(&elements);
        let numbers: Vec<u32> = map.assignments.keys().copied().collect();
        prop_assert_eq!(numbers, (1..=map.len() as u32).collect::<Vec<_>>());
        let assigned: BTreeSet<&str> = map.assignments.values().map(String::as_str).collect();
        let unlabeled: BTreeSet<&str> = elements.iter().filter(|e| e.label.is_none()).map(|e| e.node_id.as_str()).collect();
        prop_assert_eq!(assigned.len(), map.len());
        prop_assert_eq!(assigned, unlabeled);
    }

    #[test]
    fn only_flagged_nodes_collected(t in arb_tree()) {
        for e in collect_interactive(&t) {
            let n = t.find(&e.node_id).unwrap();
            prop_assert!(n.clickable || n.scrollable || n.editable);
            prop_assert_eq!(e.label.is_none(), e.label_source == voxnav_core::screen::LabelSource::None);
        }
    }

    #[test]
    fn labels_stable_under_rebuild(t in arb_tree()) {
        let rebuilt: ScreenTree = serde_json::from_str(&t.canonical_json()).unwrap();
        for n in t.preorder() {
            prop_assert_eq!(resolve_label(&t, &n.id).unwrap(), resolve_label(&rebuilt, &n.id).unwrap());
        }
    }
}
