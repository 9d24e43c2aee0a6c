use serde::{Deserialize, Serialize};

/// Typed attribute value. Only the value types the decoder supports are
/// representable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum AttrValue {
    String(String),
    IntDec(i32),
    IntHex(u32),
    Bool(bool),
}

impl AttrValue {
    /// Text rendering, identical to what the decoder produces for the
    /// corresponding typed value.
    pub fn render(&self) -> String {
        match self {
            AttrValue::String(s) => s.clone(),
            AttrValue::IntDec(n) => n.to_string(),
            AttrValue::IntHex(n) => format!("0x{n:08x}"),
            AttrValue::Bool(b) => b.to_string(),
        }
    }

    /// Infers a typed value from attribute text. Only renderings that come
    /// back out unchanged are typed, everything else stays a string.
    pub fn infer(text: &str) -> AttrValue {
        match text {
            "true" => return AttrValue::Bool(true),
            "false" => return AttrValue::Bool(false),
            _ => {}
        }
        if let Ok(n) = text.parse::<i32>() {
            if n.to_string() == text {
                return AttrValue::IntDec(n);
            }
        }
        if let Some(hex) = text.strip_prefix("0x") {
            if let Ok(n) = u32::from_str_radix(hex, 16) {
                if format!("0x{n:08x}") == text {
                    return AttrValue::IntHex(n);
                }
            }
        }
        AttrValue::String(text.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XmlAttribute {
    /// Namespace URI.
    pub namespace: Option<String>,
    pub name: String,
    pub value: AttrValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum XmlNode {
    Element(XmlElement),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XmlElement {
    /// Namespace URI.
    pub namespace: Option<String>,
    pub name: String,
    pub attributes: Vec<XmlAttribute>,
    pub children: Vec<XmlNode>,
}

impl XmlElement {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            namespace: None,
            name: name.into(),
            attributes: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn with_attr(mut self, namespace: Option<&str>, name: &str, value: AttrValue) -> Self {
        self.attributes.push(XmlAttribute {
            namespace: namespace.map(str::to_string),
            name: name.to_string(),
            value,
        });
        self
    }

    pub fn with_child(mut self, child: XmlElement) -> Self {
        self.children.push(XmlNode::Element(child));
        self
    }

    /// Attribute lookup by local name, ignoring the namespace.
    pub fn attr(&self, name: &str) -> Option<&AttrValue> {
        self.attributes.iter().find(|a| a.name == name).map(|a| &a.value)
    }

    pub fn attr_text(&self, name: &str) -> Option<String> {
        self.attr(name).map(AttrValue::render)
    }

    pub fn child_elements(&self) -> impl Iterator<Item = &XmlElement> {
        self.children.iter().filter_map(|c| match c {
            XmlNode::Element(e) => Some(e),
            XmlNode::Text(_) => None,
        })
    }

    /// Every descendant element (excluding self) in document order.
    pub fn descendants(&self) -> Vec<&XmlElement> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a XmlElement, out: &mut Vec<&'a XmlElement>) {
            for c in e.child_elements() {
                out.push(c);
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Namespace {
    pub prefix: String,
    pub uri: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XmlDocument {
    /// Namespace declarations in declaration order.
    pub namespaces: Vec<Namespace>,
    pub root: XmlElement,
}

impl XmlDocument {
    pub fn new(root: XmlElement) -> Self {
        Self {
            namespaces: Vec::new(),
            root,
        }
    }

    pub fn prefix_for(&self, uri: &str) -> Option<&str> {
        self.namespaces
            .iter()
            .find(|ns| ns.uri == uri)
            .map(|ns| ns.prefix.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infer_only_types_stable_renderings() {
        assert_eq!(AttrValue::infer("true"), AttrValue::Bool(true));
        assert_eq!(AttrValue::infer("42"), AttrValue::IntDec(42));
        assert_eq!(AttrValue::infer("-7"), AttrValue::IntDec(-7));
        assert_eq!(AttrValue::infer("007"), AttrValue::String("007".into()));
        assert_eq!(AttrValue::infer("0x0000001f"), AttrValue::IntHex(31));
        assert_eq!(AttrValue::infer("0x1f"), AttrValue::String("0x1f".into()));
        assert_eq!(AttrValue::infer("com.yt"), AttrValue::String("com.yt".into()));
        for s in ["true", "42", "0x0000001f", ".Browse"] {
            assert_eq!(AttrValue::infer(s).render(), s);
        }
    }
}
