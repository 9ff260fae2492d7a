//! Minimal PGM (portable greymap) codec for 8-bit images.
//!
//! Reads binary `P5` and ASCII `P2` streams with `maxval <= 255`; writes a
//! bit-exact `P5\n<w> <h>\n255\n` header followed by raw row-major samples.
//! `#` comments are accepted anywhere in the header up to the maxval token.

use crate::error::{Error, Result};
use crate::image::GreyImage;

#[derive(Clone, Copy, PartialEq)]
enum Magic {
    P2,
    P5,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Skips whitespace and `#` comments (comment runs to end of line).
    fn skip_separators(&mut self) {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while let Some(b) = self.peek() {
                        self.pos += 1;
                        if b == b'\n' || b == b'\r' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    /// Reads an unsigned decimal token, after skipping separators.
    fn read_uint(&mut self, what: &'static str) -> Result<u32> {
        self.skip_separators();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(b) = self.peek() {
            if b.is_ascii_digit() {
                value = value
                    .saturating_mul(10)
                    .saturating_add(u32::from(b - b'0'));
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(Error::InvalidHeader(what));
        }
        Ok(value)
    }
}

/// Decodes a PGM byte stream into a [`GreyImage`].
pub fn read_pgm(bytes: &[u8]) -> Result<GreyImage> {
    let magic = match bytes.get(0..2) {
        Some(b"P2") => Magic::P2,
        Some(b"P5") => Magic::P5,
        _ => return Err(Error::BadMagic),
    };
    let mut cur = Cursor::new(bytes);
    cur.pos = 2;

    let width = cur.read_uint("missing width")? as usize;
    let height = cur.read_uint("missing height")? as usize;
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimensions);
    }
    let maxval = cur.read_uint("missing maxval")?;
    if maxval > 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    if maxval == 0 {
        return Err(Error::InvalidHeader("maxval must be at least 1"));
    }

    let expected = width * height;
    match magic {
        Magic::P5 => {
            // Exactly one whitespace byte separates the header from the raster.
            match cur.peek() {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => return Err(Error::InvalidHeader("maxval not followed by whitespace")),
            }
            let raster = &bytes[cur.pos.min(bytes.len())..];
            if raster.len() < expected {
                return Err(Error::TruncatedData { expected, got: raster.len() });
            }
            GreyImage::from_raw(width, height, raster[..expected].to_vec())
        }
        Magic::P2 => {
            let mut data = Vec::with_capacity(expected);
            for _ in 0..expected {
                cur.skip_ascii_space();
                if cur.peek().is_none() {
                    return Err(Error::TruncatedData { expected, got: data.len() });
                }
                let v = cur.read_sample()?;
                if v > maxval {
                    return Err(Error::SampleOutOfRange(v, maxval));
                }
                data.push(v as u8);
            }
            GreyImage::from_raw(width, height, data)
        }
    }
}

impl Cursor<'_> {
    /// Raster separator for P2: plain whitespace only, no comments.
    fn skip_ascii_space(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn read_sample(&mut self) -> Result<u32> {
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(b) = self.peek() {
            if b.is_ascii_digit() {
                value = value.saturating_mul(10).saturating_add(u32::from(b - b'0'));
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(Error::InvalidHeader("non-numeric sample in P2 raster"));
        }
        Ok(value)
    }
}

/// Encodes an image as PGM: binary `P5` by default, ASCII `P2` when `ascii`.
pub fn write_pgm(img: &GreyImage, ascii: bool) -> Vec<u8> {
    if ascii {
        let mut out = format!("P2\n{} {}\n255\n", img.width(), img.height()).into_bytes();
        // Keep lines within the customary 70-character limit.
        for row in 0..img.height() {
            for chunk in img.row(row).chunks(17) {
                let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        out
    } else {
        let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
        out.extend_from_slice(img.data());
        out
    }
}
