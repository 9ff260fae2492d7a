//! Local thresholding variants: shading subtraction before global (soft)
//! thresholding, per-neighborhood transfer parameters, and a white mean
//! taken over the pixels a position-dependent threshold calls white.

use crate::error::{Error, Result};
use crate::filters::{max_filter_fast, WindowSpec};
use crate::image::{subtract_clamped, GreyImage};
use crate::threshold::{
    band_from_alpha, soft_threshold, AutoParams, Distribution, SoftThresholded, TransferSpec,
};

/// Per-pixel thresholds `t(x, y)` for local methods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdMap {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ThresholdMap {
    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimensions);
        }
        let expected = width * height;
        if data.len() != expected {
            return Err(Error::DataSizeMismatch { expected, got: data.len() });
        }
        Ok(Self { width, height, data })
    }

    /// The same threshold at every pixel.
    pub fn constant(width: usize, height: usize, t: u8) -> Result<Self> {
        Self::from_raw(width, height, vec![t; width * height])
    }

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

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    fn matches(&self, img: &GreyImage) -> Result<()> {
        if self.width != img.width() || self.height != img.height() {
            return Err(Error::DimensionMismatch(
                img.width(),
                img.height(),
                self.width,
                self.height,
            ));
        }
        Ok(())
    }
}

/// Flattens shading by subtracting the `k x k` neighborhood maximum from
/// each pixel, shifted so background maps to white:
/// `out = clamp(255 + f - max_k f, 0, 255)`.
///
/// `k` must be large enough that every window contains background pixels;
/// that choice cannot be guessed from the image and is left to the caller.
pub fn shading_subtraction(img: &GreyImage, k: WindowSpec) -> GreyImage {
    let shade = max_filter_fast(img, k);
    subtract_clamped(img, &shade, 255).expect("filter output has the input dimensions")
}

/// Shading subtraction followed by global soft thresholding with automatic
/// parameters (threshold from Otsu's method on the flattened image).
pub fn soft_shading_subtraction(
    img: &GreyImage,
    k: WindowSpec,
    dist: Distribution,
    ap: &AutoParams,
) -> Result<SoftThresholded> {
    soft_threshold(&shading_subtraction(img, k), None, dist, ap)
}

/// Soft thresholding with a per-pixel threshold map: the white mean is
/// recomputed over each pixel's `k x k` neighborhood (clamped at borders)
/// and the band follows from it. Pixels whose window holds no value above
/// the local threshold fall back to the hard rule.
pub fn local_soft_threshold(
    img: &GreyImage,
    tmap: &ThresholdMap,
    k: WindowSpec,
    dist: Distribution,
    ap: &AutoParams,
) -> Result<GreyImage> {
    tmap.matches(img)?;
    let (width, height) = (img.width(), img.height());
    let r = k.radius();
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let t = tmap.get(x, y);
            let x0 = x.saturating_sub(r);
            let x1 = (x + r).min(width - 1);
            let y0 = y.saturating_sub(r);
            let y1 = (y + r).min(height - 1);

            let mut sum: u64 = 0;
            let mut count: u64 = 0;
            for yy in y0..=y1 {
                for xx in x0..=x1 {
                    let v = img.get(xx, yy);
                    if v > t {
                        sum += u64::from(v);
                        count += 1;
                    }
                }
            }

            let v = img.get(x, y);
            let mapped = if count == 0 {
                if v <= t {
                    0
                } else {
                    255
                }
            } else {
                let v_w = sum as f64 / count as f64;
                let band = band_from_alpha(dist, t, v_w, ap)?;
                let spec = TransferSpec::new(dist, t, band)?;
                spec.value(f64::from(v)).round().clamp(0.0, 255.0) as u8
            };
            out.push(mapped);
        }
    }
    GreyImage::from_raw(width, height, out)
}

/// Mean grey value of all pixels the threshold map assigns to the white
/// class, `mean of img(x,y) where img(x,y) > t(x,y)`.
pub fn white_class_vw(img: &GreyImage, tmap: &ThresholdMap) -> Result<f64> {
    tmap.matches(img)?;
    let mut sum: u64 = 0;
    let mut count: u64 = 0;
    for y in 0..img.height() {
        for x in 0..img.width() {
            let v = img.get(x, y);
            if v > tmap.get(x, y) {
                sum += u64::from(v);
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::NoWhiteClass);
    }
    Ok(sum as f64 / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::threshold::mean_white;

    #[test]
    fn shading_subtraction_of_constant_is_white() {
        let img = GreyImage::constant(9, 7, 180).unwrap();
        let out = shading_subtraction(&img, WindowSpec::new(5).unwrap());
        assert!(out.data().iter().all(|&v| v == 255));
    }

    #[test]
    fn shading_subtraction_gentle_ramp_stays_near_white() {
        // Horizontal ramp dropping less than the window can see across.
        let img = GreyImage::from_fn(64, 8, |x, _| (220 - x / 4) as u8).unwrap();
        let k = WindowSpec::new(5).unwrap();
        let out = shading_subtraction(&img, k);
        // Within a +-2 window the ramp drops at most 1 grey level.
        assert!(out.data().iter().all(|&v| v >= 254), "{:?}", out.data());
    }

    #[test]
    fn shading_subtraction_stroke_contrast() {
        // Dark stroke (10) of width 3 on constant background 200.
        let img = GreyImage::from_fn(21, 9, |x, _| if (9..12).contains(&x) { 10 } else { 200 }).unwrap();
        let out = shading_subtraction(&img, WindowSpec::new(7).unwrap());
        for y in 0..9 {
            for x in 0..21 {
                let expected = if (9..12).contains(&x) { 65 } else { 255 };
                assert_eq!(out.get(x, y), expected, "({x},{y})");
            }
        }
    }

    #[test]
    fn shading_subtraction_shift_invariance_with_headroom() {
        let base = GreyImage::from_fn(16, 16, |x, y| (60 + ((x * 7 + y * 13) % 90)) as u8).unwrap();
        let shifted = base.map(|v| v + 40);
        let k = WindowSpec::new(5).unwrap();
        assert_eq!(shading_subtraction(&base, k), shading_subtraction(&shifted, k));
    }

    #[test]
    fn soft_shading_subtraction_is_the_composition() {
        let img = GreyImage::from_fn(24, 16, |x, y| ((x * 11 + y * 5) % 200 + 30) as u8).unwrap();
        let k = WindowSpec::new(5).unwrap();
        let ap = AutoParams::default();
        let direct = soft_shading_subtraction(&img, k, Distribution::Logistic, &ap).unwrap();
        let composed =
            soft_threshold(&shading_subtraction(&img, k), None, Distribution::Logistic, &ap)
                .unwrap();
        assert_eq!(direct, composed);
    }

    #[test]
    fn soft_shading_subtraction_constant_is_degenerate() {
        let img = GreyImage::constant(10, 10, 100).unwrap();
        let err = soft_shading_subtraction(
            &img,
            WindowSpec::new(3).unwrap(),
            Distribution::Logistic,
            &AutoParams::default(),
        );
        assert_eq!(err.unwrap_err(), Error::DegenerateHistogram);
    }

    #[test]
    fn local_with_whole_image_window_equals_global() {
        let img = GreyImage::from_fn(12, 9, |x, y| ((x * 19 + y * 31) % 256) as u8).unwrap();
        let t = 100u8;
        let tmap = ThresholdMap::constant(12, 9, t).unwrap();
        let k = WindowSpec::new(25).unwrap(); // covers the whole image from any center
        let ap = AutoParams::default();
        let local = local_soft_threshold(&img, &tmap, k, Distribution::Logistic, &ap).unwrap();
        let global = soft_threshold(&img, Some(t), Distribution::Logistic, &ap).unwrap();
        assert_eq!(local, global.image);
    }

    #[test]
    fn local_all_dark_window_falls_back_to_black() {
        let img = GreyImage::constant(6, 6, 40).unwrap();
        let tmap = ThresholdMap::constant(6, 6, 90).unwrap();
        let out = local_soft_threshold(
            &img,
            &tmap,
            WindowSpec::new(3).unwrap(),
            Distribution::Normal,
            &AutoParams::default(),
        )
        .unwrap();
        assert!(out.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn local_rejects_mismatched_map() {
        let img = GreyImage::constant(6, 6, 40).unwrap();
        let tmap = ThresholdMap::constant(5, 6, 90).unwrap();
        let err = local_soft_threshold(
            &img,
            &tmap,
            WindowSpec::new(3).unwrap(),
            Distribution::Normal,
            &AutoParams::default(),
        );
        assert_eq!(err.unwrap_err(), Error::DimensionMismatch(6, 6, 5, 6));
    }

    #[test]
    fn white_class_vw_constant_map_reduces_to_histogram_mean() {
        let img = GreyImage::from_fn(16, 16, |x, y| ((x * 16 + y) % 256) as u8).unwrap();
        let t = 135u8;
        let tmap = ThresholdMap::constant(16, 16, t).unwrap();
        let by_map = white_class_vw(&img, &tmap).unwrap();
        let by_hist = mean_white(&img.histogram(), t).unwrap();
        assert!((by_map - by_hist).abs() < 1e-12);
    }

    #[test]
    fn white_class_vw_empty_class_errors() {
        let img = GreyImage::constant(4, 4, 200).unwrap();
        let tmap = ThresholdMap::constant(4, 4, 255).unwrap();
        assert_eq!(white_class_vw(&img, &tmap), Err(Error::NoWhiteClass));
    }

    #[test]
    fn white_class_vw_matches_masked_mean() {
        let img = GreyImage::from_fn(10, 10, |x, y| ((x * 23 + y * 41) % 256) as u8).unwrap();
        let tmap = ThresholdMap::from_fn(10, 10, |x, y| ((x * 7 + y * 3) % 200) as u8).unwrap();
        let got = white_class_vw(&img, &tmap).unwrap();

        let mut sum = 0f64;
        let mut n = 0f64;
        for y in 0..10 {
            for x in 0..10 {
                if img.get(x, y) > tmap.get(x, y) {
                    sum += f64::from(img.get(x, y));
                    n += 1.0;
                }
            }
        }
        assert!((got - sum / n).abs() < 1e-12);
    }
}
