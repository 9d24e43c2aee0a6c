use super::{AxmlError, Result};

/// Chunk header shared by every chunk in the binary format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkHeader {
    pub chunk_type: u16,
    pub header_size: u16,
    pub total_size: u32,
}

impl ChunkHeader {
    pub const SIZE: usize = 8;

    pub fn to_bytes(&self) -> [u8; 8] {
        let mut out = [0u8; 8];
        out[0..2].copy_from_slice(&self.chunk_type.to_le_bytes());
        out[2..4].copy_from_slice(&self.header_size.to_le_bytes());
        out[4..8].copy_from_slice(&self.total_size.to_le_bytes());
        out
    }
}

/// Bounded little-endian reader. Reads never go past the end of the slice it
/// was built from, so handing it a chunk-sized slice keeps the decoder
/// inside that chunk.
#[derive(Debug, Clone)]
pub struct ByteCursor<'a> {
    buf: &'a [u8],
    pos: usize,
    /// Absolute offset of `buf[0]` in the original input, for error messages.
    base: usize,
}

impl<'a> ByteCursor<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0, base: 0 }
    }

    pub fn with_base(buf: &'a [u8], base: usize) -> Self {
        Self { buf, pos: 0, base }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn absolute(&self) -> usize {
        self.base + self.pos
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn seek(&mut self, pos: usize) -> Result<()> {
        if pos > self.buf.len() {
            return Err(AxmlError::Truncated {
                offset: self.base + pos,
                needed: pos - self.buf.len(),
                available: 0,
            });
        }
        self.pos = pos;
        Ok(())
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(AxmlError::Truncated {
                offset: self.absolute(),
                needed: n,
                available: self.remaining(),
            });
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    pub fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}

/// Reads an 8-byte chunk header and advances the cursor past it.
pub fn read_chunk_header(cursor: &mut ByteCursor<'_>) -> Result<ChunkHeader> {
    let offset = cursor.absolute();
    if cursor.remaining() < ChunkHeader::SIZE {
        return Err(AxmlError::Truncated {
            offset,
            needed: ChunkHeader::SIZE,
            available: cursor.remaining(),
        });
    }
    let header = ChunkHeader {
        chunk_type: cursor.u16()?,
        header_size: cursor.u16()?,
        total_size: cursor.u32()?,
    };
    let malformed = |reason: String| AxmlError::MalformedChunk { offset, reason };
    if (header.header_size as usize) < ChunkHeader::SIZE {
        return Err(malformed(format!("header size {} below 8", header.header_size)));
    }
    if header.header_size as u32 > header.total_size {
        return Err(malformed(format!(
            "header size {} exceeds total size {}",
            header.header_size, header.total_size
        )));
    }
    if !header.total_size.is_multiple_of(4) {
        return Err(malformed(format!("total size {} is not 4-byte aligned", header.total_size)));
    }
    Ok(header)
}
