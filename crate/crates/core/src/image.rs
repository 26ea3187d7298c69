//! Grayscale image representation, quantization, histograms, and PGM file I/O.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// A grayscale image with a declared number of representable gray levels.
///
/// Pixels are stored row-major with the origin at the top-left; every value
/// lies in `0..levels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    levels: u32,
    pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, levels: u32, pixels: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if levels == 0 {
            return Err(Error::InvalidImage("level count must be positive".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "expected {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(&v) = pixels.iter().find(|&&v| u32::from(v) >= levels) {
            return Err(Error::InvalidImage(format!(
                "pixel value {v} exceeds maximum level {}",
                levels - 1
            )));
        }
        Ok(Self {
            width,
            height,
            levels,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        levels: u32,
        mut f: impl FnMut(usize, usize) -> u16,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(width, height, levels, pixels)
    }

    pub fn constant(width: usize, height: usize, levels: u32, value: u16) -> Result<Self> {
        Self::new(width, height, levels, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of representable gray values; pixels lie in `0..levels()`.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u16 {
        debug_assert!(row < self.height && col < self.width);
        self.pixels[row * self.width + col]
    }
}

/// A binary image; `true` is foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "expected {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn blank(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.height && col < self.width);
        self.pixels[row * self.width + col]
    }

    /// Signed-coordinate access; out-of-bounds reads as background.
    #[inline]
    pub fn get_or_background(&self, row: isize, col: isize) -> bool {
        if row < 0 || col < 0 || row as usize >= self.height || col as usize >= self.width {
            false
        } else {
            self.pixels[row as usize * self.width + col as usize]
        }
    }

    pub fn count_foreground(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    pub fn complement(&self) -> BinaryImage {
        BinaryImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| !p).collect(),
        }
    }

    /// Renders as a grayscale image with foreground at `levels - 1`.
    pub fn to_gray(&self, levels: u32) -> GrayImage {
        let top = (levels - 1).min(u32::from(u16::MAX)) as u16;
        GrayImage {
            width: self.width,
            height: self.height,
            levels,
            pixels: self
                .pixels
                .iter()
                .map(|&p| if p { top } else { 0 })
                .collect(),
        }
    }
}

/// Per-level pixel counts of a [`GrayImage`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Tallies pixels per gray level; `counts[v]` is the number of pixels equal to `v`.
pub fn histogram(img: &GrayImage) -> Histogram {
    let mut counts = vec![0u64; img.levels as usize];
    for &v in &img.pixels {
        counts[v as usize] += 1;
    }
    Histogram { counts }
}

/// Remaps an image onto `new_levels` gray values with uniform floor binning.
///
/// Output pixel = `floor(v * new_levels / levels)`, clamped to `new_levels - 1`.
/// The mapping is monotone non-decreasing in the input value.
pub fn quantize(img: &GrayImage, new_levels: u32) -> Result<GrayImage> {
    if new_levels < 2 {
        return Err(Error::InvalidLevelCount(new_levels as usize));
    }
    if new_levels == img.levels {
        return Ok(img.clone());
    }
    let old = u64::from(img.levels);
    let new = u64::from(new_levels);
    let top = (new - 1) as u16;
    let pixels = img
        .pixels
        .iter()
        .map(|&v| (u64::from(v) * new / old).min(u64::from(top)) as u16)
        .collect();
    Ok(GrayImage {
        width: img.width,
        height: img.height,
        levels: new_levels,
        pixels,
    })
}

/// PGM on-disk encoding: ASCII (`P2`) or binary (`P5`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    Ascii,
    Binary,
}

/// Reads a PGM file (P2 or P5). The result has `levels = maxval + 1`.
pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let pstr = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: pstr.clone(),
        source,
    })?;
    parse_pgm(&bytes, &pstr)
}

/// Writes `img` as a PGM file with `maxval = levels - 1`.
pub fn save_pgm(img: &GrayImage, path: impl AsRef<Path>, format: PgmFormat) -> Result<()> {
    save_pgm_with_comment(img, path, format, None)
}

/// As [`save_pgm`], with an optional `#` comment line embedded in the header.
pub fn save_pgm_with_comment(
    img: &GrayImage,
    path: impl AsRef<Path>,
    format: PgmFormat,
    comment: Option<&str>,
) -> Result<()> {
    let path = path.as_ref();
    let pstr = path.display().to_string();
    if img.levels > 65536 {
        return Err(Error::InvalidImage(format!(
            "cannot store {} levels in a PGM file (maxval limit 65535)",
            img.levels
        )));
    }
    let maxval = img.levels - 1;
    let mut out: Vec<u8> = Vec::new();
    let magic = match format {
        PgmFormat::Ascii => "P2",
        PgmFormat::Binary => "P5",
    };
    out.extend_from_slice(magic.as_bytes());
    out.push(b'\n');
    if let Some(c) = comment {
        out.extend_from_slice(format!("# {c}\n").as_bytes());
    }
    out.extend_from_slice(format!("{} {}\n{}\n", img.width, img.height, maxval).as_bytes());
    match format {
        PgmFormat::Ascii => {
            for row in img.pixels.chunks(img.width) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        PgmFormat::Binary => {
            if maxval > 255 {
                for &v in &img.pixels {
                    out.extend_from_slice(&v.to_be_bytes());
                }
            } else {
                out.extend(img.pixels.iter().map(|&v| v as u8));
            }
        }
    }
    let mut file = fs::File::create(path).map_err(|source| Error::Io {
        path: pstr.clone(),
        source,
    })?;
    file.write_all(&out)
        .map_err(|source| Error::Io { path: pstr, source })
}

fn parse_pgm(bytes: &[u8], path: &str) -> Result<GrayImage> {
    let header_err = |reason: &str| Error::MalformedHeader {
        path: path.to_string(),
        reason: reason.to_string(),
    };
    if bytes.len() < 2 {
        return Err(header_err("file shorter than magic number"));
    }
    let magic = &bytes[..2];
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        _ => return Err(header_err("magic number is neither P2 nor P5")),
    };

    // Header tokens (width, height, maxval) with `#` comments skipped.
    let mut pos = 2usize;
    let mut fields = [0u32; 3];
    for field in &mut fields {
        while pos < bytes.len() {
            if bytes[pos].is_ascii_whitespace() {
                pos += 1;
            } else if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(header_err("missing or non-numeric header field"));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("digits are valid UTF-8");
        *field = text
            .parse::<u32>()
            .map_err(|_| header_err("header field out of range"))?;
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(header_err("image dimensions must be positive"));
    }
    if maxval > 65535 {
        return Err(header_err("maxval exceeds 65535"));
    }
    let width = width as usize;
    let height = height as usize;
    let expected = width * height;

    let pixels = if binary {
        // Exactly one whitespace byte separates the header from the payload.
        if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
            return Err(header_err("missing separator before binary payload"));
        }
        pos += 1;
        let payload = &bytes[pos..];
        if maxval > 255 {
            if payload.len() < expected * 2 {
                return Err(Error::TruncatedPayload {
                    path: path.to_string(),
                    expected,
                    found: payload.len() / 2,
                });
            }
            payload
                .chunks_exact(2)
                .take(expected)
                .map(|c| u16::from_be_bytes([c[0], c[1]]))
                .collect()
        } else {
            if payload.len() < expected {
                return Err(Error::TruncatedPayload {
                    path: path.to_string(),
                    expected,
                    found: payload.len(),
                });
            }
            payload[..expected].iter().map(|&b| u16::from(b)).collect()
        }
    } else {
        let text = std::str::from_utf8(&bytes[pos..])
            .map_err(|_| header_err("ASCII payload is not valid UTF-8"))?;
        let mut pixels = Vec::with_capacity(expected);
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            for token in line.split_ascii_whitespace() {
                if pixels.len() == expected {
                    break;
                }
                let v: u32 = token.parse().map_err(|_| Error::MalformedHeader {
                    path: path.to_string(),
                    reason: format!("non-numeric pixel token '{token}'"),
                })?;
                if v > maxval {
                    return Err(Error::PixelOutOfRange {
                        path: path.to_string(),
                        value: v,
                        maxval,
                    });
                }
                pixels.push(v as u16);
            }
        }
        if pixels.len() < expected {
            return Err(Error::TruncatedPayload {
                path: path.to_string(),
                expected,
                found: pixels.len(),
            });
        }
        pixels
    };

    // Binary payloads can still carry values above the declared maxval.
    if let Some(&v) = pixels.iter().find(|&&v| u32::from(v) > maxval) {
        return Err(Error::PixelOutOfRange {
            path: path.to_string(),
            value: u32::from(v),
            maxval,
        });
    }

    GrayImage::new(width, height, maxval + 1, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(bytes: &[u8]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(bytes).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn load_ascii_pgm() {
        let f = write_tmp(b"P2\n2 1\n255\n0 255\n");
        let img = load_pgm(f.path()).unwrap();
        assert_eq!(img.width(), 2);
        assert_eq!(img.height(), 1);
        assert_eq!(img.levels(), 256);
        assert_eq!(img.pixels(), &[0, 255]);
    }

    #[test]
    fn binary_pgm_matches_ascii_form() {
        let ascii = write_tmp(b"P2\n2 1\n255\n0 255\n");
        let binary = write_tmp(b"P5\n2 1\n255\n\x00\xff");
        assert_eq!(
            load_pgm(ascii.path()).unwrap(),
            load_pgm(binary.path()).unwrap()
        );
    }

    #[test]
    fn comments_are_skipped() {
        let f = write_tmp(b"P2\n# made by hand\n2 1\n# another\n255\n0 255\n");
        let img = load_pgm(f.path()).unwrap();
        assert_eq!(img.pixels(), &[0, 255]);
    }

    #[test]
    fn truncated_payload_is_reported() {
        let f = write_tmp(b"P2\n2 2\n255\n0 255 7\n");
        match load_pgm(f.path()) {
            Err(Error::TruncatedPayload {
                expected, found, ..
            }) => {
                assert_eq!(expected, 4);
                assert_eq!(found, 3);
            }
            other => panic!("expected truncated payload, got {other:?}"),
        }
    }

    #[test]
    fn pixel_above_maxval_is_reported() {
        let f = write_tmp(b"P2\n2 1\n100\n0 101\n");
        match load_pgm(f.path()) {
            Err(Error::PixelOutOfRange { value, maxval, .. }) => {
                assert_eq!(value, 101);
                assert_eq!(maxval, 100);
            }
            other => panic!("expected out-of-range pixel, got {other:?}"),
        }
    }

    #[test]
    fn bad_magic_is_reported() {
        let f = write_tmp(b"P6\n1 1\n255\n0");
        assert!(matches!(
            load_pgm(f.path()),
            Err(Error::MalformedHeader { .. })
        ));
    }

    #[test]
    fn maxval_above_16bit_is_rejected() {
        let f = write_tmp(b"P2\n1 1\n65536\n0\n");
        assert!(matches!(
            load_pgm(f.path()),
            Err(Error::MalformedHeader { .. })
        ));
    }

    #[test]
    fn round_trip_single_pixel() {
        let img = GrayImage::new(1, 1, 256, vec![0]).unwrap();
        for format in [PgmFormat::Ascii, PgmFormat::Binary] {
            let f = tempfile::NamedTempFile::new().unwrap();
            save_pgm(&img, f.path(), format).unwrap();
            assert_eq!(load_pgm(f.path()).unwrap(), img);
        }
    }

    #[test]
    fn round_trip_full_ramp() {
        let img = GrayImage::from_fn(256, 256, 256, |r, c| ((r * 256 + c) % 256) as u16).unwrap();
        for format in [PgmFormat::Ascii, PgmFormat::Binary] {
            let f = tempfile::NamedTempFile::new().unwrap();
            save_pgm(&img, f.path(), format).unwrap();
            let back = load_pgm(f.path()).unwrap();
            assert_eq!(back.pixels(), img.pixels());
            assert_eq!(back.levels(), img.levels());
        }
    }

    #[test]
    fn round_trip_16bit() {
        let img = GrayImage::from_fn(9, 7, 65536, |r, c| (r * 7001 + c * 997) as u16).unwrap();
        for format in [PgmFormat::Ascii, PgmFormat::Binary] {
            let f = tempfile::NamedTempFile::new().unwrap();
            save_pgm(&img, f.path(), format).unwrap();
            assert_eq!(load_pgm(f.path()).unwrap(), img);
        }
    }

    #[test]
    fn sixteen_bit_payload_is_big_endian() {
        let f = write_tmp(b"P5\n2 1\n65535\n\x01\x02\xff\x00");
        let img = load_pgm(f.path()).unwrap();
        assert_eq!(img.pixels(), &[0x0102, 0xff00]);

        let g = tempfile::NamedTempFile::new().unwrap();
        save_pgm(&img, g.path(), PgmFormat::Binary).unwrap();
        let bytes = std::fs::read(g.path()).unwrap();
        assert!(bytes.ends_with(&[0x01, 0x02, 0xff, 0x00]));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let img = GrayImage::new(1, 1, 256, vec![0]).unwrap();
        let err = save_pgm(&img, "/no/such/dir/x.pgm", PgmFormat::Ascii).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn histogram_counts_and_conservation() {
        let img = GrayImage::constant(2, 2, 4, 0).unwrap();
        assert_eq!(histogram(&img).counts, vec![4, 0, 0, 0]);

        let img = GrayImage::new(4, 1, 4, vec![0, 1, 1, 3]).unwrap();
        let h = histogram(&img);
        assert_eq!(h.counts, vec![1, 2, 0, 1]);
        assert_eq!(h.total(), 4);
    }

    #[test]
    fn quantize_identity_and_examples() {
        let img = GrayImage::from_fn(16, 16, 256, |r, c| (r * 16 + c) as u16).unwrap();
        assert_eq!(quantize(&img, 256).unwrap(), img);

        let img = GrayImage::new(2, 1, 256, vec![255, 128]).unwrap();
        let q = quantize(&img, 8).unwrap();
        assert_eq!(q.pixels(), &[7, 4]);
        assert_eq!(q.levels(), 8);
    }

    #[test]
    fn quantize_rejects_single_level() {
        let img = GrayImage::constant(2, 2, 256, 0).unwrap();
        assert!(matches!(
            quantize(&img, 1),
            Err(Error::InvalidLevelCount(1))
        ));
    }

    #[test]
    fn invalid_construction_is_rejected() {
        assert!(GrayImage::new(0, 1, 256, vec![]).is_err());
        assert!(GrayImage::new(1, 1, 256, vec![0, 0]).is_err());
        assert!(GrayImage::new(1, 1, 4, vec![4]).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip_is_identity(
                w in 1usize..12,
                h in 1usize..12,
                seed in 0u16..1000,
                binary in proptest::bool::ANY,
            ) {
                let img = GrayImage::from_fn(w, h, 256, |r, c| {
                    ((r * 31 + c * 17 + seed as usize) % 256) as u16
                }).unwrap();
                let f = tempfile::NamedTempFile::new().unwrap();
                let format = if binary { PgmFormat::Binary } else { PgmFormat::Ascii };
                save_pgm(&img, f.path(), format).unwrap();
                prop_assert_eq!(load_pgm(f.path()).unwrap(), img);
            }

            #[test]
            fn quantize_is_monotone_and_bounded(
                v1 in 0u16..=255,
                v2 in 0u16..=255,
                new_levels in 2u32..=64,
            ) {
                let (lo, hi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
                let img = GrayImage::new(2, 1, 256, vec![lo, hi]).unwrap();
                let q = quantize(&img, new_levels).unwrap();
                prop_assert!(q.pixels()[0] <= q.pixels()[1]);
                prop_assert!(u32::from(q.pixels()[1]) < new_levels);
            }

            #[test]
            fn histogram_total_is_pixel_count(w in 1usize..10, h in 1usize..10, seed in 0u16..100) {
                let img = GrayImage::from_fn(w, h, 64, |r, c| {
                    ((r * 7 + c * 13 + seed as usize) % 64) as u16
                }).unwrap();
                prop_assert_eq!(histogram(&img).total(), (w * h) as u64);
            }
        }
    }
}
