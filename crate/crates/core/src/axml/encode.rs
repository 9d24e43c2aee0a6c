use std::collections::HashMap;

use super::cursor::ChunkHeader;
use super::document::{AttrValue, XmlDocument, XmlElement, XmlNode};
use super::string_pool::{encode_string_pool, StringEncoding};
use super::*;

const NODE_HEADER_SIZE: u16 = 16;
const ATTRIBUTE_SIZE: u16 = 20;

#[derive(Default)]
struct Interner {
    strings: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, s: &str) -> u32 {
        if let Some(&i) = self.index.get(s) {
            return i;
        }
        let i = self.strings.len() as u32;
        self.strings.push(s.to_string());
        self.index.insert(s.to_string(), i);
        i
    }

    fn intern_opt(&mut self, s: Option<&str>) -> u32 {
        s.map_or(NO_INDEX, |s| self.intern(s))
    }

    fn intern_element(&mut self, e: &XmlElement) {
        self.intern_opt(e.namespace.as_deref());
        self.intern(&e.name);
        for a in &e.attributes {
            self.intern_opt(a.namespace.as_deref());
            self.intern(&a.name);
            if let AttrValue::String(s) = &a.value {
                self.intern(s);
            }
        }
        for c in &e.children {
            match c {
                XmlNode::Element(child) => self.intern_element(child),
                XmlNode::Text(t) => {
                    self.intern(t);
                }
            }
        }
    }

    fn get(&self, s: &str) -> u32 {
        self.index[s]
    }

    fn get_opt(&self, s: Option<&str>) -> u32 {
        s.map_or(NO_INDEX, |s| self.get(s))
    }
}

struct NodeWriter<'a> {
    strings: &'a Interner,
    out: Vec<u8>,
    line: u32,
}

impl NodeWriter<'_> {
    fn node_header(&mut self, chunk_type: u16, total: u32) {
        let header = ChunkHeader {
            chunk_type,
            header_size: NODE_HEADER_SIZE,
            total_size: total,
        };
        self.line += 1;
        self.out.extend_from_slice(&header.to_bytes());
        self.out.extend_from_slice(&self.line.to_le_bytes());
        self.out.extend_from_slice(&NO_INDEX.to_le_bytes());
    }

    fn u16(&mut self, v: u16) {
        self.out.extend_from_slice(&v.to_le_bytes());
    }

    fn u32(&mut self, v: u32) {
        self.out.extend_from_slice(&v.to_le_bytes());
    }

    fn namespace(&mut self, chunk_type: u16, prefix: &str, uri: &str) {
        self.node_header(chunk_type, 24);
        self.u32(self.strings.get(prefix));
        self.u32(self.strings.get(uri));
    }

    fn element(&mut self, e: &XmlElement) -> Result<()> {
        let count = u16::try_from(e.attributes.len())
            .map_err(|_| AxmlError::Capacity(format!("<{}> has too many attributes", e.name)))?;
        let total = NODE_HEADER_SIZE as u32 + 20 + ATTRIBUTE_SIZE as u32 * count as u32;
        self.node_header(RES_XML_START_ELEMENT_TYPE, total);
        self.u32(self.strings.get_opt(e.namespace.as_deref()));
        self.u32(self.strings.get(&e.name));
        self.u16(20); // attributeStart, relative to the extension
        self.u16(ATTRIBUTE_SIZE);
        self.u16(count);
        self.u16(0); // idIndex
        self.u16(0); // classIndex
        self.u16(0); // styleIndex
        for a in &e.attributes {
            self.u32(self.strings.get_opt(a.namespace.as_deref()));
            self.u32(self.strings.get(&a.name));
            let (raw, value_type, data) = match &a.value {
                AttrValue::String(s) => {
                    let i = self.strings.get(s);
                    (i, TYPE_STRING, i)
                }
                AttrValue::IntDec(n) => (NO_INDEX, TYPE_INT_DEC, *n as u32),
                AttrValue::IntHex(n) => (NO_INDEX, TYPE_INT_HEX, *n),
                AttrValue::Bool(b) => (NO_INDEX, TYPE_INT_BOOLEAN, if *b { NO_INDEX } else { 0 }),
            };
            self.u32(raw);
            self.u16(8);
            self.out.push(0);
            self.out.push(value_type);
            self.u32(data);
        }
        for c in &e.children {
            match c {
                XmlNode::Element(child) => self.element(child)?,
                XmlNode::Text(t) => {
                    self.node_header(RES_XML_CDATA_TYPE, 28);
                    let i = self.strings.get(t);
                    self.u32(i);
                    self.u16(8);
                    self.out.push(0);
                    self.out.push(TYPE_STRING);
                    self.u32(i);
                }
            }
        }
        self.node_header(RES_XML_END_ELEMENT_TYPE, 24);
        self.u32(self.strings.get_opt(e.namespace.as_deref()));
        self.u32(self.strings.get(&e.name));
        Ok(())
    }
}

/// Encodes a document into the binary manifest format with a UTF-8 string
/// pool. Strings are pooled in first-use order.
pub fn encode_manifest(doc: &XmlDocument) -> Result<Vec<u8>> {
    let mut strings = Interner::default();
    for ns in &doc.namespaces {
        strings.intern(&ns.prefix);
        strings.intern(&ns.uri);
    }
    strings.intern_element(&doc.root);

    let pool = encode_string_pool(&strings.strings, StringEncoding::Utf8)?;

    let mut w = NodeWriter {
        strings: &strings,
        out: Vec::new(),
        line: 0,
    };
    for ns in &doc.namespaces {
        w.namespace(RES_XML_START_NAMESPACE_TYPE, &ns.prefix, &ns.uri);
    }
    w.element(&doc.root)?;
    for ns in doc.namespaces.iter().rev() {
        w.namespace(RES_XML_END_NAMESPACE_TYPE, &ns.prefix, &ns.uri);
    }
    let nodes = w.out;

    let total = ChunkHeader::SIZE + pool.len() + nodes.len();
    let total = u32::try_from(total).map_err(|_| AxmlError::Capacity("document too large".into()))?;
    let mut out = Vec::with_capacity(total as usize);
    out.extend_from_slice(
        &ChunkHeader {
            chunk_type: RES_XML_TYPE,
            header_size: ChunkHeader::SIZE as u16,
            total_size: total,
        }
        .to_bytes(),
    );
    out.extend_from_slice(&pool);
    out.extend_from_slice(&nodes);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axml::cursor::{read_chunk_header, ByteCursor};
    use crate::axml::decode::decode_manifest;

    #[test]
    fn element_without_attributes() {
        let doc = XmlDocument::new(XmlElement::new("manifest").with_child(XmlElement::new("application")));
        let decoded = decode_manifest(&encode_manifest(&doc).unwrap()).unwrap();
        let app = decoded.root.child_elements().next().unwrap();
        assert!(app.attributes.is_empty());
    }

    #[test]
    fn text_nodes_round_trip() {
        let mut root = XmlElement::new("string");
        root.children.push(XmlNode::Text("hello & <world>".into()));
        let doc = XmlDocument::new(root);
        assert_eq!(decode_manifest(&encode_manifest(&doc).unwrap()).unwrap(), doc);
    }

    #[test]
    fn chunk_sizes_add_up_to_container() {
        let doc = XmlDocument::new(
            XmlElement::new("manifest")
                .with_attr(None, "package", AttrValue::String("com.x".into()))
                .with_child(XmlElement::new("a").with_attr(None, "n", AttrValue::IntDec(-3))),
        );
        let bytes = encode_manifest(&doc).unwrap();
        let container = read_chunk_header(&mut ByteCursor::new(&bytes)).unwrap();
        let mut off = container.header_size as usize;
        let mut sum = 0u32;
        while off < bytes.len() {
            let h = read_chunk_header(&mut ByteCursor::new(&bytes[off..])).unwrap();
            sum += h.total_size;
            off += h.total_size as usize;
        }
        assert_eq!(sum + container.header_size as u32, container.total_size);
        assert_eq!(container.total_size as usize, bytes.len());
    }
}
