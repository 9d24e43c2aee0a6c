use log::warn;

use super::cursor::{read_chunk_header, ByteCursor, ChunkHeader};
use super::document::{AttrValue, Namespace, XmlAttribute, XmlDocument, XmlElement, XmlNode};
use super::string_pool::{read_string_pool, StringPool};
use super::*;

/// Wire form of an attribute or cdata value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypedValue {
    pub value_type: u8,
    pub raw: u32,
}

/// Renders a typed value: strings resolve through the pool, integers render in
/// base 10 (or `0x%08x` for hex), booleans are `true` for any nonzero payload.
pub fn typed_value_to_string(v: TypedValue, pool: &StringPool) -> Result<String> {
    Ok(to_attr_value(v, pool)?.render())
}

fn to_attr_value(v: TypedValue, pool: &StringPool) -> Result<AttrValue> {
    match v.value_type {
        TYPE_STRING => pool
            .get(v.raw)
            .map(|s| AttrValue::String(s.to_string()))
            .ok_or_else(|| AxmlError::MalformedChunk {
                offset: 0,
                reason: format!("string index {} out of range ({} strings)", v.raw, pool.len()),
            }),
        TYPE_INT_DEC => Ok(AttrValue::IntDec(v.raw as i32)),
        TYPE_INT_HEX => Ok(AttrValue::IntHex(v.raw)),
        TYPE_INT_BOOLEAN => Ok(AttrValue::Bool(v.raw != 0)),
        other => Err(AxmlError::UnsupportedValueType(other)),
    }
}

/// Non-fatal conditions met while decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeWarning {
    UnknownChunk { offset: usize, chunk_type: u16 },
    SkippedAttribute { element: String, attribute: String, value_type: u8 },
    StrayText { offset: usize },
}

impl std::fmt::Display for DecodeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodeWarning::UnknownChunk { offset, chunk_type } => {
                write!(f, "skipped unknown chunk type 0x{chunk_type:04x} at offset {offset}")
            }
            DecodeWarning::SkippedAttribute {
                element,
                attribute,
                value_type,
            } => write!(
                f,
                "skipped attribute {attribute} on <{element}> with unsupported value type 0x{value_type:02x}"
            ),
            DecodeWarning::StrayText { offset } => write!(f, "ignored text outside the root element at offset {offset}"),
        }
    }
}

/// Decodes a binary manifest, logging any warnings.
pub fn decode_manifest(bytes: &[u8]) -> Result<XmlDocument> {
    let (doc, warnings) = decode_manifest_with_warnings(bytes)?;
    for w in &warnings {
        warn!("{w}");
    }
    Ok(doc)
}

pub fn decode_manifest_with_warnings(bytes: &[u8]) -> Result<(XmlDocument, Vec<DecodeWarning>)> {
    let mut cur = ByteCursor::new(bytes);
    let header = read_chunk_header(&mut cur)?;
    if header.chunk_type != RES_XML_TYPE {
        return Err(AxmlError::MalformedChunk {
            offset: 0,
            reason: format!("expected XML container chunk, found type 0x{:04x}", header.chunk_type),
        });
    }
    let total = header.total_size as usize;
    if total > bytes.len() {
        return Err(AxmlError::Truncated {
            offset: 0,
            needed: total,
            available: bytes.len(),
        });
    }
    let body = &bytes[..total];

    let mut state = TreeBuilder::default();
    let mut warnings = Vec::new();
    let mut pool: Option<StringPool> = None;
    let mut offset = header.header_size as usize;

    while offset < total {
        let mut hc = ByteCursor::with_base(&body[offset..], offset);
        let child = read_chunk_header(&mut hc)?;
        let end = offset + child.total_size as usize;
        if end > total {
            return Err(AxmlError::MalformedChunk {
                offset,
                reason: format!(
                    "chunk of {} bytes overruns container ending at {total}",
                    child.total_size
                ),
            });
        }
        let chunk = &body[offset..end];
        match child.chunk_type {
            RES_STRING_POOL_TYPE => {
                pool = Some(read_string_pool(body, offset)?);
            }
            RES_XML_RESOURCE_MAP_TYPE => {}
            RES_XML_START_NAMESPACE_TYPE
            | RES_XML_END_NAMESPACE_TYPE
            | RES_XML_START_ELEMENT_TYPE
            | RES_XML_END_ELEMENT_TYPE
            | RES_XML_CDATA_TYPE => {
                let pool = pool.as_ref().ok_or_else(|| AxmlError::MalformedChunk {
                    offset,
                    reason: "tree node before string pool".into(),
                })?;
                let node = NodeReader {
                    chunk,
                    header: child,
                    offset,
                    pool,
                };
                node.apply(&mut state, &mut warnings)?;
            }
            other => warnings.push(DecodeWarning::UnknownChunk {
                offset,
                chunk_type: other,
            }),
        }
        offset = end;
    }

    let doc = state.finish()?;
    Ok((doc, warnings))
}

#[derive(Default)]
struct TreeBuilder {
    namespaces: Vec<Namespace>,
    stack: Vec<XmlElement>,
    root: Option<XmlElement>,
}

impl TreeBuilder {
    fn finish(self) -> Result<XmlDocument> {
        if let Some(open) = self.stack.last() {
            return Err(AxmlError::UnbalancedElements(format!(
                "{} element(s) left open, innermost <{}>",
                self.stack.len(),
                open.name
            )));
        }
        let root = self.root.ok_or_else(|| AxmlError::MalformedChunk {
            offset: 0,
            reason: "document has no root element".into(),
        })?;
        Ok(XmlDocument {
            namespaces: self.namespaces,
            root,
        })
    }
}

struct NodeReader<'a> {
    chunk: &'a [u8],
    header: ChunkHeader,
    offset: usize,
    pool: &'a StringPool,
}

impl NodeReader<'_> {
    fn malformed(&self, reason: impl Into<String>) -> AxmlError {
        AxmlError::MalformedChunk {
            offset: self.offset,
            reason: reason.into(),
        }
    }

    fn string(&self, index: u32) -> Result<String> {
        self.pool
            .get(index)
            .map(str::to_string)
            .ok_or_else(|| self.malformed(format!("string index {index} out of range ({} strings)", self.pool.len())))
    }

    fn opt_string(&self, index: u32) -> Result<Option<String>> {
        if index == NO_INDEX {
            Ok(None)
        } else {
            self.string(index).map(Some)
        }
    }

    /// Cursor positioned at the node extension, after the line number and
    /// comment fields.
    fn ext(&self) -> Result<ByteCursor<'_>> {
        if self.header.header_size < 16 {
            return Err(self.malformed(format!("tree node header size {} below 16", self.header.header_size)));
        }
        let mut cur = ByteCursor::with_base(self.chunk, self.offset);
        cur.seek(self.header.header_size as usize)?;
        Ok(cur)
    }

    fn apply(&self, state: &mut TreeBuilder, warnings: &mut Vec<DecodeWarning>) -> Result<()> {
        let map_trunc = |e: AxmlError| match e {
            AxmlError::Truncated { .. } => self.malformed("tree node runs past its declared size"),
            other => other,
        };
        self.apply_inner(state, warnings).map_err(map_trunc)
    }

    fn apply_inner(&self, state: &mut TreeBuilder, warnings: &mut Vec<DecodeWarning>) -> Result<()> {
        let mut cur = self.ext()?;
        match self.header.chunk_type {
            RES_XML_START_NAMESPACE_TYPE => {
                let prefix = self.opt_string(cur.u32()?)?.unwrap_or_default();
                let uri = self.string(cur.u32()?)?;
                if !state.namespaces.iter().any(|n| n.uri == uri && n.prefix == prefix) {
                    state.namespaces.push(Namespace { prefix, uri });
                }
            }
            RES_XML_END_NAMESPACE_TYPE => {}
            RES_XML_START_ELEMENT_TYPE => {
                let ext_start = cur.position();
                let namespace = self.opt_string(cur.u32()?)?;
                let name = self.string(cur.u32()?)?;
                let attr_start = cur.u16()? as usize;
                let attr_size = cur.u16()? as usize;
                let attr_count = cur.u16()? as usize;
                if attr_count > 0 && attr_size < 20 {
                    return Err(self.malformed(format!("attribute size {attr_size} below 20")));
                }
                let mut element = XmlElement {
                    namespace,
                    name,
                    attributes: Vec::with_capacity(attr_count),
                    children: Vec::new(),
                };
                for i in 0..attr_count {
                    let mut a = ByteCursor::with_base(self.chunk, self.offset);
                    a.seek(ext_start + attr_start + i * attr_size)?;
                    let ns = self.opt_string(a.u32()?)?;
                    let attr_name = self.string(a.u32()?)?;
                    let _raw_value = a.u32()?;
                    let _size = a.u16()?;
                    let _res0 = a.u8()?;
                    let value_type = a.u8()?;
                    let data = a.u32()?;
                    match to_attr_value(TypedValue { value_type, raw: data }, self.pool) {
                        Ok(value) => element.attributes.push(XmlAttribute {
                            namespace: ns,
                            name: attr_name,
                            value,
                        }),
                        Err(AxmlError::UnsupportedValueType(t)) => warnings.push(DecodeWarning::SkippedAttribute {
                            element: element.name.clone(),
                            attribute: attr_name,
                            value_type: t,
                        }),
                        Err(AxmlError::MalformedChunk { reason, .. }) => return Err(self.malformed(reason)),
                        Err(e) => return Err(e),
                    }
                }
                if state.root.is_some() && state.stack.is_empty() {
                    return Err(self.malformed("second root element"));
                }
                state.stack.push(element);
            }
            RES_XML_END_ELEMENT_TYPE => {
                let _ns = cur.u32()?;
                let name = self.string(cur.u32()?)?;
                let element = state.stack.pop().ok_or_else(|| {
                    AxmlError::UnbalancedElements(format!("end of <{name}> with no open element"))
                })?;
                if element.name != name {
                    return Err(AxmlError::UnbalancedElements(format!(
                        "end of <{name}> while <{}> is open",
                        element.name
                    )));
                }
                match state.stack.last_mut() {
                    Some(parent) => parent.children.push(XmlNode::Element(element)),
                    None => state.root = Some(element),
                }
            }
            RES_XML_CDATA_TYPE => {
                let text = self.string(cur.u32()?)?;
                match state.stack.last_mut() {
                    Some(parent) => parent.children.push(XmlNode::Text(text)),
                    None => warnings.push(DecodeWarning::StrayText { offset: self.offset }),
                }
            }
            _ => unreachable!("dispatch only routes tree node types here"),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axml::encode::encode_manifest;
    use crate::axml::string_pool::StringEncoding;

    const ANDROID: &str = "http://schemas.android.com/apk/res/android";

    fn pool(v: &[&str]) -> StringPool {
        StringPool {
            strings: v.iter().map(|s| s.to_string()).collect(),
            encoding: StringEncoding::Utf8,
            style_count: 0,
        }
    }

    fn yt_doc() -> XmlDocument {
        XmlDocument {
            namespaces: vec![Namespace {
                prefix: "android".into(),
                uri: ANDROID.into(),
            }],
            root: XmlElement::new("manifest")
                .with_attr(None, "package", AttrValue::String("com.yt".into()))
                .with_child(XmlElement::new("activity").with_attr(
                    Some(ANDROID),
                    "name",
                    AttrValue::String(".Browse".into()),
                )),
        }
    }

    #[test]
    fn typed_values_render() {
        let p = pool(&["a", "b"]);
        let tv = |value_type, raw| TypedValue { value_type, raw };
        assert_eq!(typed_value_to_string(tv(TYPE_INT_BOOLEAN, 0xFFFF_FFFF), &p).unwrap(), "true");
        assert_eq!(typed_value_to_string(tv(TYPE_INT_BOOLEAN, 0), &p).unwrap(), "false");
        assert_eq!(typed_value_to_string(tv(TYPE_INT_DEC, 42), &p).unwrap(), "42");
        assert_eq!(typed_value_to_string(tv(TYPE_STRING, 1), &p).unwrap(), "b");
        assert_eq!(typed_value_to_string(tv(TYPE_INT_HEX, 255), &p).unwrap(), "0x000000ff");
        assert_eq!(
            typed_value_to_string(tv(0x04, 0), &p),
            Err(AxmlError::UnsupportedValueType(0x04))
        );
    }

    #[test]
    fn decodes_encoded_manifest() {
        let doc = yt_doc();
        let bytes = encode_manifest(&doc).unwrap();
        let decoded = decode_manifest(&bytes).unwrap();
        assert_eq!(decoded.root.name, "manifest");
        assert_eq!(decoded.root.attr_text("package").as_deref(), Some("com.yt"));
        assert_eq!(decoded, doc);
    }

    #[test]
    fn minimal_document() {
        let doc = XmlDocument::new(XmlElement::new("manifest"));
        let decoded = decode_manifest(&encode_manifest(&doc).unwrap()).unwrap();
        assert_eq!(decoded.root.name, "manifest");
        assert!(decoded.root.children.is_empty());
    }

    /// Splits an encoded document into (container header, chunk list).
    fn chunks(bytes: &[u8]) -> Vec<(usize, ChunkHeader)> {
        let mut out = Vec::new();
        let mut off = 8;
        while off < bytes.len() {
            let h = read_chunk_header(&mut ByteCursor::new(&bytes[off..])).unwrap();
            out.push((off, h));
            off += h.total_size as usize;
        }
        out
    }

    #[test]
    fn extra_end_element_is_unbalanced() {
        let doc = XmlDocument::new(XmlElement::new("manifest"));
        let mut bytes = encode_manifest(&doc).unwrap();
        let (off, h) = *chunks(&bytes)
            .iter()
            .find(|(_, h)| h.chunk_type == RES_XML_END_ELEMENT_TYPE)
            .unwrap();
        let end_chunk = bytes[off..off + h.total_size as usize].to_vec();
        bytes.extend_from_slice(&end_chunk);
        let total = bytes.len() as u32;
        bytes[4..8].copy_from_slice(&total.to_le_bytes());
        assert!(matches!(decode_manifest(&bytes), Err(AxmlError::UnbalancedElements(_))));
    }

    #[test]
    fn missing_end_element_is_unbalanced() {
        let doc = yt_doc();
        let bytes = encode_manifest(&doc).unwrap();
        let list = chunks(&bytes);
        let (off, h) = *list
            .iter()
            .rev()
            .find(|(_, h)| h.chunk_type == RES_XML_END_ELEMENT_TYPE)
            .unwrap();
        let mut cut = bytes[..off].to_vec();
        cut.extend_from_slice(&bytes[off + h.total_size as usize..]);
        let total = cut.len() as u32;
        cut[4..8].copy_from_slice(&total.to_le_bytes());
        assert!(matches!(decode_manifest(&cut), Err(AxmlError::UnbalancedElements(_))));
    }

    #[test]
    fn unknown_chunk_is_skipped_with_warning() {
        let doc = yt_doc();
        let mut bytes = encode_manifest(&doc).unwrap();
        let unknown = ChunkHeader {
            chunk_type: 0x0777,
            header_size: 8,
            total_size: 12,
        };
        bytes.extend_from_slice(&unknown.to_bytes());
        bytes.extend_from_slice(&[1, 2, 3, 4]);
        let total = bytes.len() as u32;
        bytes[4..8].copy_from_slice(&total.to_le_bytes());
        let (decoded, warnings) = decode_manifest_with_warnings(&bytes).unwrap();
        assert_eq!(decoded, doc);
        assert_eq!(warnings.len(), 1);
        assert!(matches!(warnings[0], DecodeWarning::UnknownChunk { chunk_type: 0x0777, .. }));
    }

    #[test]
    fn resource_map_is_ignored() {
        let doc = yt_doc();
        let bytes = encode_manifest(&doc).unwrap();
        let list = chunks(&bytes);
        let pool_end = list[0].0 + list[0].1.total_size as usize;
        let map = ChunkHeader {
            chunk_type: RES_XML_RESOURCE_MAP_TYPE,
            header_size: 8,
            total_size: 16,
        };
        let mut with_map = bytes[..pool_end].to_vec();
        with_map.extend_from_slice(&map.to_bytes());
        with_map.extend_from_slice(&0x0101_0003u32.to_le_bytes());
        with_map.extend_from_slice(&0x0101_0010u32.to_le_bytes());
        with_map.extend_from_slice(&bytes[pool_end..]);
        let total = with_map.len() as u32;
        with_map[4..8].copy_from_slice(&total.to_le_bytes());
        let (decoded, warnings) = decode_manifest_with_warnings(&with_map).unwrap();
        assert_eq!(decoded, doc);
        assert!(warnings.is_empty());
    }

    #[test]
    fn truncated_container() {
        let bytes = encode_manifest(&yt_doc()).unwrap();
        assert!(matches!(
            decode_manifest(&bytes[..bytes.len() - 4]),
            Err(AxmlError::Truncated { .. })
        ));
        assert!(matches!(decode_manifest(&bytes[..6]), Err(AxmlError::Truncated { .. })));
    }

    #[test]
    fn child_overrunning_container_is_malformed() {
        let mut bytes = encode_manifest(&yt_doc()).unwrap();
        // shrink the container so the last chunk pokes out of it
        let total = (bytes.len() - 8) as u32;
        bytes[4..8].copy_from_slice(&total.to_le_bytes());
        assert!(matches!(decode_manifest(&bytes), Err(AxmlError::MalformedChunk { .. })));
    }

    #[test]
    fn wrong_container_type() {
        let mut bytes = encode_manifest(&yt_doc()).unwrap();
        bytes[0] = 0x02;
        assert!(matches!(decode_manifest(&bytes), Err(AxmlError::MalformedChunk { .. })));
    }

    #[test]
    fn string_index_out_of_range() {
        let doc = yt_doc();
        let mut bytes = encode_manifest(&doc).unwrap();
        let (off, _) = *chunks(&bytes)
            .iter()
            .find(|(_, h)| h.chunk_type == RES_XML_START_ELEMENT_TYPE)
            .unwrap();
        // element name index follows the 16-byte node header and namespace index
        bytes[off + 20..off + 24].copy_from_slice(&999u32.to_le_bytes());
        assert!(matches!(decode_manifest(&bytes), Err(AxmlError::MalformedChunk { .. })));
    }

    #[test]
    fn unsupported_attribute_type_is_skipped() {
        let doc = XmlDocument::new(XmlElement::new("manifest").with_attr(None, "versionCode", AttrValue::IntDec(3)));
        let mut bytes = encode_manifest(&doc).unwrap();
        let (off, _) = *chunks(&bytes)
            .iter()
            .find(|(_, h)| h.chunk_type == RES_XML_START_ELEMENT_TYPE)
            .unwrap();
        // attribute data type byte: node header 16 + ext 20 + 15
        bytes[off + 16 + 20 + 15] = 0x01;
        let (decoded, warnings) = decode_manifest_with_warnings(&bytes).unwrap();
        assert!(decoded.root.attributes.is_empty());
        assert!(matches!(warnings[0], DecodeWarning::SkippedAttribute { value_type: 0x01, .. }));
    }
}
