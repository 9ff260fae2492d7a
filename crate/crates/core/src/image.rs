//! Greyscale image storage, histograms, and elementary pixel arithmetic.
//!
//! Grey values follow the PGM convention: 0 is black, 255 is white.

use crate::error::{Error, Result};

/// An 8-bit greyscale image stored in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreyImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GreyImage {
    /// Wraps a row-major sample buffer. Fails when either dimension is zero
    /// or the buffer length does not equal `width * height`.
    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimensions);
        }
        let expected = width
            .checked_mul(height)
            .ok_or(Error::DataSizeMismatch { expected: usize::MAX, got: data.len() })?;
        if data.len() != expected {
            return Err(Error::DataSizeMismatch { expected, got: data.len() });
        }
        Ok(Self { width, height, data })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimensions);
        }
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Ok(Self { width, height, data })
    }

    /// A `width x height` image filled with `value`.
    pub fn constant(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::from_raw(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn same_dimensions(&self, other: &GreyImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Counts pixels per grey value.
    pub fn histogram(&self) -> Histogram {
        let mut counts = [0u64; 256];
        for &v in &self.data {
            counts[v as usize] += 1;
        }
        Histogram { counts }
    }

    /// Applies a per-pixel point operation.
    pub fn map(&self, mut f: impl FnMut(u8) -> u8) -> GreyImage {
        GreyImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Grey-level histogram: `counts[v]` is the number of pixels with value `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; 256],
}

impl Histogram {
    pub fn from_counts(counts: [u64; 256]) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    #[inline]
    pub fn count(&self, v: u8) -> u64 {
        self.counts[v as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of grey values with at least one pixel.
    pub fn populated_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Signed per-pixel samples, the intermediate of an image subtraction
/// before it is shifted and clamped back to the 8-bit range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedImage {
    width: usize,
    height: usize,
    data: Vec<i32>,
}

impl SignedImage {
    /// Pixelwise difference `a - b`. Fails on mismatched dimensions.
    pub fn difference(a: &GreyImage, b: &GreyImage) -> Result<Self> {
        if !a.same_dimensions(b) {
            return Err(Error::DimensionMismatch(a.width, a.height, b.width, b.height));
        }
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(&x, &y)| i32::from(x) - i32::from(y))
            .collect();
        Ok(Self { width: a.width, height: a.height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[i32] {
        &self.data
    }

    /// Adds `offset` to every sample and clamps the result to `[0, 255]`.
    pub fn offset_clamped(&self, offset: i32) -> GreyImage {
        GreyImage {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .map(|&d| (d.saturating_add(offset)).clamp(0, 255) as u8)
                .collect(),
        }
    }
}

/// `out(x,y) = clamp(offset + a(x,y) - b(x,y), 0, 255)`.
pub fn subtract_clamped(a: &GreyImage, b: &GreyImage, offset: i32) -> Result<GreyImage> {
    Ok(SignedImage::difference(a, b)?.offset_clamped(offset))
}
