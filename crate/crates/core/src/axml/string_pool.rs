use serde::{Deserialize, Serialize};

use super::cursor::{read_chunk_header, ByteCursor, ChunkHeader};
use super::{AxmlError, Result, RES_STRING_POOL_TYPE};

const UTF8_FLAG: u32 = 1 << 8;
const POOL_HEADER_SIZE: u16 = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StringEncoding {
    Utf8,
    Utf16,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringPool {
    pub strings: Vec<String>,
    pub encoding: StringEncoding,
    /// Parsed from the header; style spans themselves are ignored.
    pub style_count: u32,
}

impl StringPool {
    pub fn get(&self, index: u32) -> Option<&str> {
        self.strings.get(index as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

/// Decodes the string pool chunk starting at `offset`.
pub fn read_string_pool(bytes: &[u8], offset: usize) -> Result<StringPool> {
    if offset > bytes.len() {
        return Err(AxmlError::Truncated {
            offset,
            needed: ChunkHeader::SIZE,
            available: 0,
        });
    }
    let mut head = ByteCursor::with_base(&bytes[offset..], offset);
    let header = read_chunk_header(&mut head)?;
    let malformed = |reason: String| AxmlError::MalformedChunk { offset, reason };
    if header.chunk_type != RES_STRING_POOL_TYPE {
        return Err(malformed(format!(
            "expected string pool chunk, found type 0x{:04x}",
            header.chunk_type
        )));
    }
    let total = header.total_size as usize;
    if offset + total > bytes.len() {
        return Err(AxmlError::Truncated {
            offset,
            needed: total,
            available: bytes.len() - offset,
        });
    }
    let chunk = &bytes[offset..offset + total];
    let mut cur = ByteCursor::with_base(chunk, offset);
    cur.seek(ChunkHeader::SIZE)?;
    let string_count = cur.u32()? as usize;
    let style_count = cur.u32()?;
    let flags = cur.u32()?;
    let strings_start = cur.u32()? as usize;
    let _styles_start = cur.u32()?;

    let encoding = if flags & UTF8_FLAG != 0 {
        StringEncoding::Utf8
    } else {
        StringEncoding::Utf16
    };

    let index_end = header.header_size as usize + 4 * string_count;
    if index_end > total {
        return Err(malformed(format!(
            "{string_count} string offsets do not fit in a {total}-byte chunk"
        )));
    }
    if string_count > 0 && strings_start >= total {
        return Err(malformed(format!("strings start {strings_start} is past chunk end")));
    }

    cur.seek(header.header_size as usize)?;
    let mut offsets = Vec::with_capacity(string_count);
    for _ in 0..string_count {
        offsets.push(cur.u32()? as usize);
    }

    let mut strings = Vec::with_capacity(string_count);
    for (i, rel) in offsets.into_iter().enumerate() {
        let at = strings_start
            .checked_add(rel)
            .filter(|&at| at < total)
            .ok_or_else(|| malformed(format!("string {i} offset {rel} out of range")))?;
        let mut s = ByteCursor::with_base(chunk, offset);
        s.seek(at)?;
        let decoded = match encoding {
            StringEncoding::Utf8 => read_utf8_entry(&mut s),
            StringEncoding::Utf16 => read_utf16_entry(&mut s),
        }
        .map_err(|e| match e {
            AxmlError::Truncated { .. } => malformed(format!("string {i} runs past chunk end")),
            other => other,
        })?;
        strings.push(decoded);
    }

    Ok(StringPool {
        strings,
        encoding,
        style_count,
    })
}

fn read_utf8_len(cur: &mut ByteCursor<'_>) -> Result<usize> {
    let first = cur.u8()? as usize;
    if first & 0x80 != 0 {
        let second = cur.u8()? as usize;
        Ok(((first & 0x7F) << 8) | second)
    } else {
        Ok(first)
    }
}

fn read_utf8_entry(cur: &mut ByteCursor<'_>) -> Result<String> {
    let _char_len = read_utf8_len(cur)?;
    let byte_len = read_utf8_len(cur)?;
    let raw = cur.take(byte_len)?;
    String::from_utf8(raw.to_vec()).map_err(|e| AxmlError::EncodingError(e.to_string()))
}

fn read_utf16_entry(cur: &mut ByteCursor<'_>) -> Result<String> {
    let first = cur.u16()? as usize;
    let len = if first & 0x8000 != 0 {
        let second = cur.u16()? as usize;
        ((first & 0x7FFF) << 16) | second
    } else {
        first
    };
    let mut units = Vec::with_capacity(len);
    for _ in 0..len {
        units.push(cur.u16()?);
    }
    String::from_utf16(&units).map_err(|e| AxmlError::EncodingError(e.to_string()))
}

fn push_utf8_len(out: &mut Vec<u8>, len: usize) -> Result<()> {
    if len > 0x7FFF {
        return Err(AxmlError::Capacity(format!("string length {len} exceeds 0x7fff")));
    }
    if len > 0x7F {
        out.push(0x80 | (len >> 8) as u8);
        out.push((len & 0xFF) as u8);
    } else {
        out.push(len as u8);
    }
    Ok(())
}

/// Builds a complete string pool chunk. The encoder uses UTF-8; UTF-16 is
/// available so tests can exercise the decoder's other branch.
pub fn encode_string_pool(strings: &[String], encoding: StringEncoding) -> Result<Vec<u8>> {
    let mut data = Vec::new();
    let mut offsets = Vec::with_capacity(strings.len());
    for s in strings {
        offsets.push(data.len() as u32);
        match encoding {
            StringEncoding::Utf8 => {
                push_utf8_len(&mut data, s.chars().count())?;
                push_utf8_len(&mut data, s.len())?;
                data.extend_from_slice(s.as_bytes());
                data.push(0);
            }
            StringEncoding::Utf16 => {
                let units: Vec<u16> = s.encode_utf16().collect();
                if units.len() > 0x7FFF {
                    return Err(AxmlError::Capacity(format!(
                        "string length {} exceeds 0x7fff",
                        units.len()
                    )));
                }
                data.extend_from_slice(&(units.len() as u16).to_le_bytes());
                for u in units {
                    data.extend_from_slice(&u.to_le_bytes());
                }
                data.extend_from_slice(&[0, 0]);
            }
        }
    }
    while data.len() % 4 != 0 {
        data.push(0);
    }

    let strings_start = POOL_HEADER_SIZE as u32 + 4 * strings.len() as u32;
    let total = strings_start as usize + data.len();
    let total = u32::try_from(total).map_err(|_| AxmlError::Capacity("string pool too large".into()))?;
    let header = ChunkHeader {
        chunk_type: RES_STRING_POOL_TYPE,
        header_size: POOL_HEADER_SIZE,
        total_size: total,
    };
    let flags = match encoding {
        StringEncoding::Utf8 => UTF8_FLAG,
        StringEncoding::Utf16 => 0,
    };

    let mut out = Vec::with_capacity(total as usize);
    out.extend_from_slice(&header.to_bytes());
    out.extend_from_slice(&(strings.len() as u32).to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&flags.to_le_bytes());
    out.extend_from_slice(&(if strings.is_empty() { 0 } else { strings_start }).to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    for o in offsets {
        out.extend_from_slice(&o.to_le_bytes());
    }
    out.extend_from_slice(&data);
    Ok(out)
}
