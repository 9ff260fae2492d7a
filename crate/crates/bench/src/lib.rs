//! Shared input generators for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use softthresh::GreyImage;

/// Deterministic noise image.
pub fn noise_image(width: usize, height: usize, seed: u64) -> GreyImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<u8> = (0..width * height).map(|_| rng.random()).collect();
    GreyImage::from_raw(width, height, data).unwrap()
}

/// Shaded synthetic page: linear background ramp with dark strokes, the
/// kind of input the shading pipeline is built for.
pub fn shaded_page(width: usize, height: usize) -> GreyImage {
    GreyImage::from_fn(width, height, |x, y| {
        let ramp = 250.0 - 80.0 * x as f64 / (width - 1) as f64;
        if (12..15).contains(&(x % 24)) && y >= 20 && y + 20 < height {
            30
        } else {
            ramp.round() as u8
        }
    })
    .unwrap()
}
