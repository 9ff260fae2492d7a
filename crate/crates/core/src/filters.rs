//! Windowed maximum/minimum filters over square neighborhoods.
//!
//! Two implementations are provided: a brute-force reference that scans the
//! full `k x k` window per pixel, and a fast separable version whose running
//! 1-D passes cost O(1) comparisons per pixel regardless of `k`. Windows are
//! clamped to the image bounds, so border pixels see a truncated window.

use crate::error::{Error, Result};
use crate::image::GreyImage;

/// Side length of a square filter window, odd so the window has a center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    k: usize,
}

impl WindowSpec {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroWindow);
        }
        if k.is_multiple_of(2) {
            return Err(Error::EvenWindow(k));
        }
        Ok(Self { k })
    }

    pub fn side(&self) -> usize {
        self.k
    }

    pub fn radius(&self) -> usize {
        self.k / 2
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Extreme {
    Max,
    Min,
}

impl Extreme {
    #[inline]
    fn pick(self, a: u8, b: u8) -> u8 {
        match self {
            Extreme::Max => a.max(b),
            Extreme::Min => a.min(b),
        }
    }

    /// Value that never wins the comparison; padding with it is equivalent
    /// to truncating the window at the image border.
    #[inline]
    fn identity(self) -> u8 {
        match self {
            Extreme::Max => 0,
            Extreme::Min => 255,
        }
    }
}

/// `out(x,y) = max over the k x k window centered at (x,y)`, brute force.
pub fn max_filter_naive(img: &GreyImage, w: WindowSpec) -> GreyImage {
    window_scan(img, w, Extreme::Max)
}

/// Dual of [`max_filter_naive`] with minimum in place of maximum.
pub fn min_filter_naive(img: &GreyImage, w: WindowSpec) -> GreyImage {
    window_scan(img, w, Extreme::Min)
}

/// Separable running-max filter; output is identical to [`max_filter_naive`].
pub fn max_filter_fast(img: &GreyImage, w: WindowSpec) -> GreyImage {
    separable_running(img, w, Extreme::Max)
}

/// Dual of [`max_filter_fast`] with minimum in place of maximum.
pub fn min_filter_fast(img: &GreyImage, w: WindowSpec) -> GreyImage {
    separable_running(img, w, Extreme::Min)
}

fn window_scan(img: &GreyImage, w: WindowSpec, ex: Extreme) -> GreyImage {
    let (width, height) = (img.width(), img.height());
    let r = w.radius();
    GreyImage::from_fn(width, height, |x, y| {
        let x0 = x.saturating_sub(r);
        let x1 = (x + r).min(width - 1);
        let y0 = y.saturating_sub(r);
        let y1 = (y + r).min(height - 1);
        let mut best = img.get(x, y);
        for yy in y0..=y1 {
            for xx in x0..=x1 {
                best = ex.pick(best, img.get(xx, yy));
            }
        }
        best
    })
    .expect("source image has valid dimensions")
}

fn separable_running(img: &GreyImage, w: WindowSpec, ex: Extreme) -> GreyImage {
    let (width, height) = (img.width(), img.height());
    if w.side() == 1 {
        return img.clone();
    }

    let mut pass = RunningPass::new(width.max(height), w, ex);
    let mut rows = vec![0u8; width * height];
    for y in 0..height {
        pass.run(img.row(y), &mut rows[y * width..(y + 1) * width]);
    }

    let mut column = vec![0u8; height];
    let mut filtered = vec![0u8; height];
    let mut out = vec![0u8; width * height];
    for x in 0..width {
        for y in 0..height {
            column[y] = rows[y * width + x];
        }
        pass.run(&column, &mut filtered);
        for y in 0..height {
            out[y * width + x] = filtered[y];
        }
    }
    GreyImage::from_raw(width, height, out).expect("source image has valid dimensions")
}

/// One-dimensional running extreme over a centered window of length `k`.
///
/// The input is padded with `r` identity samples on each side, then split
/// into blocks of length `k`. Suffix extremes are precomputed per block
/// (truncated in a partial final block); prefix extremes are streamed during
/// the output scan. Every window result is then two comparisons, independent
/// of `k`.
struct RunningPass {
    ex: Extreme,
    k: usize,
    padded: Vec<u8>,
    suffix: Vec<u8>,
}

impl RunningPass {
    fn new(max_len: usize, w: WindowSpec, ex: Extreme) -> Self {
        let cap = max_len + w.side() - 1;
        Self { ex, k: w.side(), padded: vec![0; cap], suffix: vec![0; cap] }
    }

    fn run(&mut self, src: &[u8], dst: &mut [u8]) {
        let n = src.len();
        let k = self.k;
        let r = k / 2;
        let m = n + 2 * r;
        let id = self.ex.identity();

        let padded = &mut self.padded[..m];
        padded[..r].fill(id);
        padded[r..r + n].copy_from_slice(src);
        padded[r + n..].fill(id);

        let suffix = &mut self.suffix[..m];
        for start in (0..m).step_by(k) {
            let end = (start + k).min(m);
            let mut acc = padded[end - 1];
            suffix[end - 1] = acc;
            for i in (start..end - 1).rev() {
                acc = self.ex.pick(acc, padded[i]);
                suffix[i] = acc;
            }
        }

        // Window centered at c spans padded indices [c, c + k - 1]: the
        // suffix of c's block joined with the streamed prefix at c + k - 1.
        let mut acc = id;
        for (j, &value) in padded.iter().enumerate() {
            acc = if j % k == 0 { value } else { self.ex.pick(acc, value) };
            if j + 1 >= k {
                let c = j + 1 - k;
                if c < n {
                    dst[c] = self.ex.pick(suffix[c], acc);
                }
            }
        }
    }
}
