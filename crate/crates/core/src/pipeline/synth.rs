//! Seeded synthetic texture corpus: four classes separable by their
//! co-occurrence statistics, standing in for image datasets that cannot be
//! redistributed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::image::GrayImage;

/// Texture families, one per class label 1..=4.
///
/// Downstream features are direction-averaged and preceded by histogram
/// equalization, so the classes must differ in statistics that survive
/// both: the fraction of neighbor pairs crossing the low/high intensity
/// split, averaged over the four directions, and the concentration of the
/// co-occurrence mass. Stripes cross in three of four directions, the fine
/// checkerboard in two, the coarse one rarely, and full-range noise spreads
/// its mass over every bin pair.
#[derive(Debug, Clone, Copy)]
enum Texture {
    /// Rows alternate low/high (spatial period 2).
    Stripes,
    /// Checkerboard with single-pixel cells.
    CheckerFine,
    /// Independent uniform noise over the full intensity range.
    FullRangeNoise,
    /// Checkerboard with 4x4-pixel cells.
    CheckerCoarse,
}

impl Texture {
    fn for_class(label: usize) -> Texture {
        match label {
            1 => Texture::Stripes,
            2 => Texture::CheckerFine,
            3 => Texture::FullRangeNoise,
            _ => Texture::CheckerCoarse,
        }
    }
}

/// Generates one image of the class's texture family. Base intensities and
/// phases jitter per image; a small per-pixel perturbation keeps features
/// varying within a class.
pub fn synth_image(label: usize, size: usize, rng: &mut ChaCha8Rng) -> GrayImage {
    let texture = Texture::for_class(label);
    let lo: i32 = rng.random_range(24..=64);
    let hi: i32 = rng.random_range(176..=224);
    let phase: usize = rng.random_range(0..8);
    let mut pixels = Vec::with_capacity(size * size);
    for r in 0..size {
        for c in 0..size {
            let base = match texture {
                Texture::Stripes => {
                    if (r + phase).is_multiple_of(2) {
                        lo
                    } else {
                        hi
                    }
                }
                Texture::CheckerFine => {
                    if (r + c + phase).is_multiple_of(2) {
                        lo
                    } else {
                        hi
                    }
                }
                Texture::FullRangeNoise => rng.random_range(0..=255),
                Texture::CheckerCoarse => {
                    if ((r + phase) / 4 + (c + phase) / 4).is_multiple_of(2) {
                        lo
                    } else {
                        hi
                    }
                }
            };
            let jitter: i32 = rng.random_range(-4..=4);
            pixels.push((base + jitter).clamp(0, 255) as u16);
        }
    }
    GrayImage::new(size, size, 256, pixels).expect("generated pixels are in range")
}

/// Number of distinct synthetic classes.
pub const SYNTH_CLASSES: usize = 4;
