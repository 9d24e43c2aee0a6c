use std::fmt::Write;

use super::document::{AttrValue, Namespace, XmlAttribute, XmlDocument, XmlElement, XmlNode};
use super::{AxmlError, Result};

fn escape(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
}

fn qualified(doc: &XmlDocument, namespace: Option<&str>, name: &str) -> String {
    match namespace.and_then(|uri| doc.prefix_for(uri)) {
        Some(prefix) if !prefix.is_empty() => format!("{prefix}:{name}"),
        _ => name.to_string(),
    }
}

fn write_element(doc: &XmlDocument, e: &XmlElement, depth: usize, is_root: bool, out: &mut String) {
    let indent = "  ".repeat(depth);
    let tag = qualified(doc, e.namespace.as_deref(), &e.name);
    let _ = write!(out, "{indent}<{tag}");
    if is_root {
        for ns in &doc.namespaces {
            if ns.prefix.is_empty() {
                out.push_str(" xmlns=\"");
            } else {
                let _ = write!(out, " xmlns:{}=\"", ns.prefix);
            }
            escape(&ns.uri, out);
            out.push('"');
        }
    }
    for a in &e.attributes {
        let _ = write!(out, " {}=\"", qualified(doc, a.namespace.as_deref(), &a.name));
        escape(&a.value.render(), out);
        out.push('"');
    }
    if e.children.is_empty() {
        out.push_str("/>\n");
        return;
    }
    out.push_str(">\n");
    for c in &e.children {
        match c {
            XmlNode::Element(child) => write_element(doc, child, depth + 1, false, out),
            XmlNode::Text(t) => {
                out.push_str(&"  ".repeat(depth + 1));
                escape(t, out);
                out.push('\n');
            }
        }
    }
    let _ = writeln!(out, "{indent}</{tag}>");
}

/// Pretty-prints a document as UTF-8 XML with two-space indentation.
pub fn to_xml_string(doc: &XmlDocument) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n");
    write_element(doc, &doc.root, 0, true, &mut out);
    out
}

/// Parses plain-text XML into a document. Attribute values are typed with
/// [`AttrValue::infer`] so booleans and integers survive a trip through the
/// binary encoder unchanged.
pub fn parse_xml_text(text: &str) -> Result<XmlDocument> {
    let parsed = roxmltree::Document::parse(text).map_err(|e| AxmlError::InvalidXmlText(e.to_string()))?;
    let mut namespaces: Vec<Namespace> = Vec::new();
    for node in parsed.descendants().filter(|n| n.is_element()) {
        for ns in node.namespaces() {
            let entry = Namespace {
                prefix: ns.name().unwrap_or_default().to_string(),
                uri: ns.uri().to_string(),
            };
            if !namespaces.contains(&entry) {
                namespaces.push(entry);
            }
        }
    }
    let root = convert(parsed.root_element());
    Ok(XmlDocument { namespaces, root })
}

fn convert(node: roxmltree::Node<'_, '_>) -> XmlElement {
    let tag = node.tag_name();
    let attributes = node
        .attributes()
        .map(|a| XmlAttribute {
            namespace: a.namespace().map(str::to_string),
            name: a.name().to_string(),
            value: AttrValue::infer(a.value()),
        })
        .collect();
    let children = node
        .children()
        .filter_map(|c| {
            if c.is_element() {
                Some(XmlNode::Element(convert(c)))
            } else if c.is_text() {
                let t = c.text().unwrap_or_default().trim();
                (!t.is_empty()).then(|| XmlNode::Text(t.to_string()))
            } else {
                None
            }
        })
        .collect();
    XmlElement {
        namespace: tag.namespace().map(str::to_string),
        name: tag.name().to_string(),
        attributes,
        children,
    }
}
