//! Gray-level co-occurrence matrices in four directions and the seven
//! texture features derived from them.

use crate::error::{Error, Result};
use crate::image::{quantize, GrayImage};

/// Co-occurrence direction. Offsets are `(row, col)` steps per unit distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Deg0,
        Direction::Deg45,
        Direction::Deg90,
        Direction::Deg135,
    ];

    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::Deg0 => (0, 1),
            Direction::Deg45 => (-1, 1),
            Direction::Deg90 => (-1, 0),
            Direction::Deg135 => (-1, -1),
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Direction::Deg0 => "0",
            Direction::Deg45 => "45",
            Direction::Deg90 => "90",
            Direction::Deg135 => "135",
        };
        write!(f, "{s}")
    }
}

/// Normalized gray-level co-occurrence probabilities for one direction/offset.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    /// Number of gray-level bins; the matrix is `levels x levels`.
    pub levels: usize,
    /// Row-major probabilities `p(i, j)`, summing to 1.
    pub p: Vec<f64>,
    pub direction: Direction,
    pub distance: usize,
    pub symmetric: bool,
}

impl Glcm {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.levels + j]
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// The seven direction-averaged texture features of one image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub contrast: f64,
    pub asm: f64,
    pub homogeneity: f64,
    pub idm: f64,
    pub energy: f64,
    pub entropy: f64,
    pub variance: f64,
}

impl FeatureVector {
    pub const NAMES: [&'static str; 7] = [
        "contrast",
        "asm",
        "homogeneity",
        "idm",
        "energy",
        "entropy",
        "variance",
    ];

    pub fn as_array(&self) -> [f64; 7] {
        [
            self.contrast,
            self.asm,
            self.homogeneity,
            self.idm,
            self.energy,
            self.entropy,
            self.variance,
        ]
    }

    pub fn from_array(a: [f64; 7]) -> Self {
        Self {
            contrast: a[0],
            asm: a[1],
            homogeneity: a[2],
            idm: a[3],
            energy: a[4],
            entropy: a[5],
            variance: a[6],
        }
    }
}

/// Builds the co-occurrence matrix for one direction.
///
/// The image is quantized to `levels` bins first when its level count
/// differs. Every in-bounds pixel pair `(x, x + offset * distance)`
/// increments one count; symmetric matrices also count the transposed pair.
/// Counts are normalized to probabilities.
pub fn compute_glcm(
    img: &GrayImage,
    direction: Direction,
    distance: usize,
    levels: u32,
    symmetric: bool,
) -> Result<Glcm> {
    if distance == 0 {
        return Err(Error::InvalidImage("GLCM distance must be positive".into()));
    }
    if levels < 2 {
        return Err(Error::InvalidLevelCount(levels as usize));
    }
    let quantized;
    let img = if img.levels() == levels {
        img
    } else {
        quantized = quantize(img, levels)?;
        &quantized
    };

    let n = levels as usize;
    let (dr, dc) = direction.offset();
    let (dr, dc) = (dr * distance as isize, dc * distance as isize);
    let (w, h) = (img.width() as isize, img.height() as isize);

    let mut counts = vec![0u64; n * n];
    let mut total = 0u64;
    for r in 0..h {
        let r2 = r + dr;
        if r2 < 0 || r2 >= h {
            continue;
        }
        for c in 0..w {
            let c2 = c + dc;
            if c2 < 0 || c2 >= w {
                continue;
            }
            let i = img.get(r as usize, c as usize) as usize;
            let j = img.get(r2 as usize, c2 as usize) as usize;
            counts[i * n + j] += 1;
            total += 1;
            if symmetric {
                counts[j * n + i] += 1;
                total += 1;
            }
        }
    }
    if total == 0 {
        return Err(Error::NoPixelPairs {
            width: img.width(),
            height: img.height(),
            dr,
            dc,
        });
    }

    let p = counts.iter().map(|&c| c as f64 / total as f64).collect();
    Ok(Glcm {
        levels: n,
        p,
        direction,
        distance,
        symmetric,
    })
}

/// Evaluates the seven features of one co-occurrence matrix.
///
/// contrast  = sum |i-j|^2 p(i,j)
/// asm       = sum p(i,j)^2          (angular second moment)
/// homogeneity = sum p(i,j) / (1 + |i-j|)
/// idm       = sum p(i,j) / (1 + (i-j)^2)
/// energy    = sum p(i,j)^2          (identical to asm; both reported)
/// entropy   = -sum p(i,j) log2 p(i,j), with 0 log 0 = 0
/// variance  = sum (i - mu)^2 p(i,j), mu = sum i p(i,j)
pub fn glcm_features(m: &Glcm) -> Result<FeatureVector> {
    let sum = m.sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::UnnormalizedMatrix(sum));
    }

    let n = m.levels;
    let mut contrast = 0.0;
    let mut asm = 0.0;
    let mut homogeneity = 0.0;
    let mut idm = 0.0;
    let mut entropy = 0.0;
    let mut mean = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = m.at(i, j);
            let d = i as f64 - j as f64;
            contrast += d * d * p;
            asm += p * p;
            homogeneity += p / (1.0 + d.abs());
            idm += p / (1.0 + d * d);
            if p > 0.0 {
                entropy -= p * p.log2();
            }
            mean += i as f64 * p;
        }
    }
    let mut variance = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = i as f64 - mean;
            variance += d * d * m.at(i, j);
        }
    }
    Ok(FeatureVector {
        contrast,
        asm,
        homogeneity,
        idm,
        energy: asm,
        entropy,
        variance,
    })
}

/// Computes symmetric GLCMs in all four directions and returns the
/// element-wise mean of their feature vectors: one 7-vector per image.
pub fn extract_features(img: &GrayImage, levels: u32, distance: usize) -> Result<FeatureVector> {
    extract_features_with(img, levels, distance, true)
}

/// As [`extract_features`], with the GLCM symmetry flag exposed.
pub fn extract_features_with(
    img: &GrayImage,
    levels: u32,
    distance: usize,
    symmetric: bool,
) -> Result<FeatureVector> {
    let quantized;
    let img = if img.levels() == levels {
        img
    } else {
        quantized = quantize(img, levels)?;
        &quantized
    };

    let mut acc = [0.0f64; 7];
    for direction in Direction::ALL {
        let glcm = compute_glcm(img, direction, distance, levels, symmetric)?;
        let f = glcm_features(&glcm)?.as_array();
        for (a, v) in acc.iter_mut().zip(f) {
            *a += v;
        }
    }
    for a in &mut acc {
        *a /= 4.0;
    }
    Ok(FeatureVector::from_array(acc))
}
