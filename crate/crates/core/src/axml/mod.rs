//! Android binary XML ("AXML") decoding and encoding.
//!
//! The binary format is a flat sequence of little-endian chunks wrapped in a
//! single XML container chunk. A string pool chunk carries every name and
//! string value; tree-node chunks (namespace and element start/end, cdata)
//! reference it by index. The decoder here materializes a generic
//! [`XmlDocument`]; the encoder produces byte-exact fixtures that the decoder
//! reads back.

mod cursor;
mod decode;
mod document;
mod encode;
mod string_pool;
mod text;

use thiserror::Error;

pub use cursor::{read_chunk_header, ByteCursor, ChunkHeader};
pub use decode::{decode_manifest, decode_manifest_with_warnings, typed_value_to_string, DecodeWarning, TypedValue};
pub use document::{AttrValue, Namespace, XmlAttribute, XmlDocument, XmlElement, XmlNode};
pub use encode::encode_manifest;
pub use string_pool::{encode_string_pool, read_string_pool, StringEncoding, StringPool};
pub use text::{parse_xml_text, to_xml_string};

pub const RES_STRING_POOL_TYPE: u16 = 0x0001;
pub const RES_XML_TYPE: u16 = 0x0003;
pub const RES_XML_START_NAMESPACE_TYPE: u16 = 0x0100;
pub const RES_XML_END_NAMESPACE_TYPE: u16 = 0x0101;
pub const RES_XML_START_ELEMENT_TYPE: u16 = 0x0102;
pub const RES_XML_END_ELEMENT_TYPE: u16 = 0x0103;
pub const RES_XML_CDATA_TYPE: u16 = 0x0104;
pub const RES_XML_RESOURCE_MAP_TYPE: u16 = 0x0180;

pub const TYPE_STRING: u8 = 0x03;
pub const TYPE_INT_DEC: u8 = 0x10;
pub const TYPE_INT_HEX: u8 = 0x11;
pub const TYPE_INT_BOOLEAN: u8 = 0x12;

/// Sentinel for "no string" in index fields.
pub const NO_INDEX: u32 = 0xFFFF_FFFF;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AxmlError {
    #[error("truncated input at offset {offset}: needed {needed} bytes, {available} available")]
    Truncated {
        offset: usize,
        needed: usize,
        available: usize,
    },

    #[error("malformed chunk at offset {offset}: {reason}")]
    MalformedChunk { offset: usize, reason: String },

    #[error("unbalanced elements: {0}")]
    UnbalancedElements(String),

    #[error("string pool encoding error: {0}")]
    EncodingError(String),

    #[error("unsupported typed value type 0x{0:02x}")]
    UnsupportedValueType(u8),

    #[error("value cannot be encoded: {0}")]
    Capacity(String),

    #[error("invalid XML text: {0}")]
    InvalidXmlText(String),
}

pub type Result<T> = std::result::Result<T, AxmlError>;
