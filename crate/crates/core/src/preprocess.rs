//! Preprocessing chain: histogram equalization, mean-threshold binarization,
//! binary erosion/dilation, and the composed foreground-mask extraction.

use crate::error::{Error, Result};
use crate::image::{histogram, BinaryImage, GrayImage};

/// Offset set defining the neighborhood of erosion and dilation.
///
/// Offsets are `(row, col)` displacements and must include `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    offsets: Vec<(isize, isize)>,
}

impl StructuringElement {
    pub fn new(offsets: Vec<(isize, isize)>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::InvalidImage(
                "structuring element must be non-empty".into(),
            ));
        }
        if !offsets.contains(&(0, 0)) {
            return Err(Error::InvalidImage(
                "structuring element must contain the origin".into(),
            ));
        }
        Ok(Self { offsets })
    }

    /// Centered `size` x `size` square; `size` must be odd.
    pub fn square(size: usize) -> Result<Self> {
        if size == 0 || size.is_multiple_of(2) {
            return Err(Error::InvalidImage(format!(
                "square element size must be odd and positive, got {size}"
            )));
        }
        let r = (size / 2) as isize;
        let mut offsets = Vec::with_capacity(size * size);
        for dr in -r..=r {
            for dc in -r..=r {
                offsets.push((dr, dc));
            }
        }
        Ok(Self { offsets })
    }

    pub fn offsets(&self) -> &[(isize, isize)] {
        &self.offsets
    }

    /// Point reflection about the origin, used by the erosion/dilation duality.
    pub fn reflected(&self) -> StructuringElement {
        StructuringElement {
            offsets: self.offsets.iter().map(|&(r, c)| (-r, -c)).collect(),
        }
    }
}

impl Default for StructuringElement {
    fn default() -> Self {
        Self::square(3).expect("3x3 square is valid")
    }
}

/// Where a binarization threshold came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdSource {
    MeanIntensity,
    UserSupplied,
}

/// A real-valued binarization threshold in intensity units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdParams {
    pub value: f64,
    pub source: ThresholdSource,
}

/// Histogram equalization: pixel `v` maps to `round((L-1) * CDF(v))` with
/// round-half-up. The mapping is monotone non-decreasing and the level count
/// is preserved.
pub fn equalize_histogram(img: &GrayImage) -> GrayImage {
    let levels = img.levels();
    let hist = histogram(img);
    let total = (img.width() * img.height()) as f64;
    let top = f64::from(levels - 1);

    let mut map = vec![0u16; levels as usize];
    let mut cumulative = 0u64;
    for (v, &count) in hist.counts.iter().enumerate() {
        cumulative += count;
        let cdf = cumulative as f64 / total;
        map[v] = (top * cdf + 0.5).floor() as u16;
    }

    let pixels = img.pixels().iter().map(|&v| map[v as usize]).collect();
    GrayImage::new(img.width(), img.height(), levels, pixels)
        .expect("equalized pixels stay within the level range")
}

/// Threshold at the arithmetic mean of all pixel intensities (unrounded).
pub fn mean_threshold(img: &GrayImage) -> ThresholdParams {
    let sum: f64 = img.pixels().iter().map(|&v| f64::from(v)).sum();
    ThresholdParams {
        value: sum / (img.width() * img.height()) as f64,
        source: ThresholdSource::MeanIntensity,
    }
}

/// Binarization: foreground exactly where `pixel >= threshold`.
pub fn binarize(img: &GrayImage, threshold: f64) -> BinaryImage {
    BinaryImage::new(
        img.width(),
        img.height(),
        img.pixels()
            .iter()
            .map(|&v| f64::from(v) >= threshold)
            .collect(),
    )
    .expect("dimensions come from a valid image")
}

/// Binary erosion: a pixel survives iff every translated element offset lands
/// on foreground. Out-of-bounds neighborhoods count as background, so the
/// output never gains foreground.
pub fn erode(a: &BinaryImage, b: &StructuringElement) -> BinaryImage {
    let (w, h) = (a.width(), a.height());
    BinaryImage::from_fn(w, h, |r, c| {
        b.offsets()
            .iter()
            .all(|&(dr, dc)| a.get_or_background(r as isize + dr, c as isize + dc))
    })
    .expect("dimensions come from a valid image")
}

/// Binary dilation: the Minkowski sum of the foreground with the element,
/// clipped to the image bounds.
pub fn dilate(a: &BinaryImage, b: &StructuringElement) -> BinaryImage {
    let (w, h) = (a.width(), a.height());
    BinaryImage::from_fn(w, h, |r, c| {
        b.offsets()
            .iter()
            .any(|&(dr, dc)| a.get_or_background(r as isize - dr, c as isize - dc))
    })
    .expect("dimensions come from a valid image")
}

/// Erosion followed by dilation; removes specks smaller than the element.
pub fn open(a: &BinaryImage, b: &StructuringElement) -> BinaryImage {
    dilate(&erode(a, b), b)
}

/// Dilation followed by erosion; fills gaps smaller than the element.
pub fn close(a: &BinaryImage, b: &StructuringElement) -> BinaryImage {
    erode(&dilate(a, b), b)
}

/// Foreground-mask extraction: mean-threshold binarization, then opening,
/// then (if `apply_closing`) closing.
pub fn extract_mask(
    img: &GrayImage,
    apply_closing: bool,
    element: &StructuringElement,
) -> BinaryImage {
    let t = mean_threshold(img);
    let binary = binarize(img, t.value);
    let opened = open(&binary, element);
    if apply_closing {
        close(&opened, element)
    } else {
        opened
    }
}
