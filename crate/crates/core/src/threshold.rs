//! Global thresholding: Otsu threshold selection, the hard step transfer,
//! soft-threshold transfer functions, and automatic band-width selection.
//!
//! A transfer function `g(v) = 255 * F(v - t)` turns thresholding into a
//! greyscale point operation, where `F` is the CDF of a zero-median
//! distribution. The spread of `F` (the band width) is chosen so that the
//! mean grey value of the white class maps to `alpha * 255`.

use crate::error::{Error, Result};
use crate::image::{GreyImage, Histogram};
use crate::math::{erf, normal_quantile};

/// Distribution underlying the soft-threshold transfer function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distribution {
    Uniform,
    #[default]
    Logistic,
    Normal,
}

impl Distribution {
    /// CDF with median zero; `band` is the native spread parameter
    /// (width `h`, scale `theta`, or standard deviation `sigma`).
    fn cdf(self, z: f64, band: f64) -> f64 {
        match self {
            Distribution::Uniform => {
                if z <= -band / 2.0 {
                    0.0
                } else if z >= band / 2.0 {
                    1.0
                } else {
                    z / band + 0.5
                }
            }
            Distribution::Logistic => 1.0 / (1.0 + (-z / band).exp()),
            Distribution::Normal => 0.5 * (1.0 + erf(z / (band * std::f64::consts::SQRT_2))),
        }
    }
}

/// Calibration for automatic band-width selection: the white mean must map
/// to `alpha * 255`. `z_alpha` is the alpha-quantile of the standard normal
/// distribution, computed from `alpha` at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutoParams {
    alpha: f64,
    z_alpha: f64,
}

impl AutoParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.5 && alpha < 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self { alpha, z_alpha: normal_quantile(alpha) })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn z_alpha(&self) -> f64 {
        self.z_alpha
    }
}

impl Default for AutoParams {
    fn default() -> Self {
        Self::new(0.99).expect("0.99 is a valid alpha")
    }
}

/// A fully specified transfer function: distribution, threshold, band width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferSpec {
    dist: Distribution,
    t: u8,
    band: f64,
}

impl TransferSpec {
    pub fn new(dist: Distribution, t: u8, band: f64) -> Result<Self> {
        if band <= 0.0 || band.is_nan() {
            return Err(Error::NonPositiveBand(band));
        }
        Ok(Self { dist, t, band })
    }

    pub fn dist(&self) -> Distribution {
        self.dist
    }

    pub fn threshold(&self) -> u8 {
        self.t
    }

    pub fn band(&self) -> f64 {
        self.band
    }

    /// Unrounded transfer value `255 * F(v - t)`, nondecreasing in `v`,
    /// equal to 127.5 at `v = t`.
    pub fn value(&self, v: f64) -> f64 {
        255.0 * self.dist.cdf(v - f64::from(self.t), self.band)
    }

    /// Tabulates the transfer for all 256 grey values; entries are rounded
    /// half away from zero and clamped.
    pub fn build_lut(&self) -> TransferLUT {
        let mut table = [0u8; 256];
        for (v, slot) in table.iter_mut().enumerate() {
            *slot = self.value(v as f64).round().clamp(0.0, 255.0) as u8;
        }
        TransferLUT { table }
    }
}

/// Precomputed transfer table `g(0..=255)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferLUT {
    table: [u8; 256],
}

impl TransferLUT {
    pub fn table(&self) -> &[u8; 256] {
        &self.table
    }

    #[inline]
    pub fn get(&self, v: u8) -> u8 {
        self.table[v as usize]
    }

    /// Applies the table to every pixel.
    pub fn map(&self, img: &GreyImage) -> GreyImage {
        img.map(|v| self.table[v as usize])
    }
}

/// Between-class variance score for the split at `t`, as exact integers.
///
/// With class counts `n0`, `n1 = n - n0` and class sums `s0`, `s1 = s - s0`,
/// the between-class variance is proportional to
/// `(s0*n - s*n0)^2 / (n0*n1)`; the numerator and denominator are exact,
/// so the score is a deterministic function of the histogram and two
/// independent summation routes cannot disagree.
fn split_score(n0: u128, s0: u128, n: u128, s: u128) -> f64 {
    let n1 = n - n0;
    if n0 == 0 || n1 == 0 {
        return 0.0;
    }
    let a = (s0 * n).abs_diff(s * n0);
    let af = a as f64;
    af * af / ((n0 * n1) as f64)
}

/// Otsu's threshold: the `t` in `[0, 254]` maximizing the between-class
/// variance of the split `v <= t` / `v > t`, smallest `t` on ties.
pub fn otsu_threshold(hist: &Histogram) -> Result<u8> {
    if hist.populated_bins() < 2 {
        return Err(Error::DegenerateHistogram);
    }
    let n: u128 = hist.counts().iter().map(|&c| u128::from(c)).sum();
    let s: u128 = hist
        .counts()
        .iter()
        .enumerate()
        .map(|(v, &c)| v as u128 * u128::from(c))
        .sum();

    let mut n0: u128 = 0;
    let mut s0: u128 = 0;
    let mut best_t = 0u8;
    let mut best = f64::NEG_INFINITY;
    for t in 0..=254u8 {
        n0 += u128::from(hist.count(t));
        s0 += u128::from(t) * u128::from(hist.count(t));
        let score = split_score(n0, s0, n, s);
        if score > best {
            best = score;
            best_t = t;
        }
    }
    Ok(best_t)
}

/// Hard thresholding as a point operation: black where `v <= t`, white above.
pub fn hard_threshold(img: &GreyImage, t: u8) -> GreyImage {
    img.map(|v| if v <= t { 0 } else { 255 })
}

/// Mean grey value of the white class, `sum(v * H(v)) / sum(H(v))` over
/// `v = t+1 ..= 255`. Errors when no pixel lies above `t`.
pub fn mean_white(hist: &Histogram, t: u8) -> Result<f64> {
    let mut weight: u128 = 0;
    let mut weighted: u128 = 0;
    for v in (t as usize + 1)..=255 {
        let c = u128::from(hist.counts()[v]);
        weight += c;
        weighted += v as u128 * c;
    }
    if weight == 0 {
        return Err(Error::NoWhiteClass);
    }
    Ok(weighted as f64 / weight as f64)
}

/// Band width such that the transfer maps `v_w` to `alpha * 255`.
pub fn band_from_alpha(dist: Distribution, t: u8, v_w: f64, ap: &AutoParams) -> Result<f64> {
    let spread = v_w - f64::from(t);
    if spread <= 0.0 {
        return Err(Error::InvalidWhiteMean(v_w, t));
    }
    Ok(match dist {
        Distribution::Uniform => spread / (ap.alpha() - 0.5),
        Distribution::Logistic => -spread / (1.0 / ap.alpha() - 1.0).ln(),
        Distribution::Normal => spread / ap.z_alpha(),
    })
}

/// Converts a normal standard deviation into the uniform width and logistic
/// scale with the same variance: `h = sigma * sqrt(12)`,
/// `theta = sigma * sqrt(3) / pi`.
pub fn band_convert(sigma: f64) -> Result<(f64, f64)> {
    if sigma <= 0.0 || sigma.is_nan() {
        return Err(Error::NonPositiveBand(sigma));
    }
    let h = sigma * 12.0f64.sqrt();
    let theta = sigma * 3.0f64.sqrt() / std::f64::consts::PI;
    Ok((h, theta))
}

/// Result of a soft-threshold run, carrying the parameters that were used.
///
/// `white_mean` and `band` are `None` when no pixel lay above the threshold
/// and the operation fell back to hard thresholding.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftThresholded {
    pub image: GreyImage,
    pub threshold: u8,
    pub white_mean: Option<f64>,
    pub band: Option<f64>,
}

impl SoftThresholded {
    pub fn used_hard_fallback(&self) -> bool {
        self.band.is_none()
    }
}

/// Soft thresholding with automatic parameters: threshold from Otsu's method
/// when not supplied, band width from the white mean.
pub fn soft_threshold(
    img: &GreyImage,
    t: Option<u8>,
    dist: Distribution,
    ap: &AutoParams,
) -> Result<SoftThresholded> {
    let hist = img.histogram();
    let t = match t {
        Some(t) => t,
        None => otsu_threshold(&hist)?,
    };
    match mean_white(&hist, t) {
        Ok(v_w) => {
            let band = band_from_alpha(dist, t, v_w, ap)?;
            let spec = TransferSpec::new(dist, t, band)?;
            Ok(SoftThresholded {
                image: spec.build_lut().map(img),
                threshold: t,
                white_mean: Some(v_w),
                band: Some(band),
            })
        }
        Err(Error::NoWhiteClass) => Ok(SoftThresholded {
            image: hard_threshold(img, t),
            threshold: t,
            white_mean: None,
            band: None,
        }),
        Err(e) => Err(e),
    }
}

/// Soft thresholding with an explicit band width, bypassing the automatic
/// white-mean calibration. The threshold still defaults to Otsu's method.
pub fn soft_threshold_with_band(
    img: &GreyImage,
    t: Option<u8>,
    dist: Distribution,
    band: f64,
) -> Result<SoftThresholded> {
    let t = match t {
        Some(t) => t,
        None => otsu_threshold(&img.histogram())?,
    };
    let spec = TransferSpec::new(dist, t, band)?;
    Ok(SoftThresholded {
        image: spec.build_lut().map(img),
        threshold: t,
        white_mean: None,
        band: Some(band),
    })
}
