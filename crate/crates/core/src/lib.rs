//! Soft thresholding for scanned document images.
//!
//! Instead of binarizing a greyscale scan, the image is passed through a
//! smooth nondecreasing transfer function `g(v) = 255 * F(v - t)` where `F`
//! is the CDF of a zero-median distribution (uniform, logistic, or normal).
//! The threshold `t` comes from any selector (Otsu's method by default) and
//! the band width is calibrated automatically so that the mean grey value of
//! the white class maps to `alpha * 255`. For scans with uneven illumination
//! a local variant first flattens the background by subtracting a windowed
//! maximum (computed in constant time per pixel regardless of window size).
//!
//! The crate is organized around a few small pieces:
//!
//! - [`image`]: 8-bit greyscale images, histograms, pixel arithmetic
//! - [`pgm`]: minimal PGM (P5/P2) codec
//! - [`filters`]: brute-force and running-extreme min/max window filters
//! - [`threshold`]: Otsu selection, transfer functions, band calibration
//! - [`local`]: shading subtraction and per-neighborhood soft thresholding
//!
//! All operations are pure functions of immutable inputs and safe to call
//! from concurrent workers.

mod error;

pub mod filters;
pub mod image;
pub mod local;
pub mod math;
pub mod pgm;
pub mod threshold;

pub use error::{Error, Result};
pub use filters::{
    max_filter_fast, max_filter_naive, min_filter_fast, min_filter_naive, WindowSpec,
};
pub use image::{subtract_clamped, GreyImage, Histogram, SignedImage};
pub use local::{
    local_soft_threshold, shading_subtraction, soft_shading_subtraction, white_class_vw,
    ThresholdMap,
};
pub use math::{erf, normal_cdf, normal_quantile};
pub use pgm::{read_pgm, write_pgm};
pub use threshold::{
    band_convert, band_from_alpha, hard_threshold, mean_white, otsu_threshold, soft_threshold,
    soft_threshold_with_band, AutoParams, Distribution, SoftThresholded, TransferLUT, TransferSpec,
};
