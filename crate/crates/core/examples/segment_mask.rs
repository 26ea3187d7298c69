//! Foreground-mask extraction on a synthetic image: mean thresholding,
//! opening to drop salt noise, and a boundary overlay.
//!
//! ```bash
//! cargo run -p texfis --example segment_mask
//! ```

use texfis::image::{save_pgm, GrayImage, PgmFormat};
use texfis::preprocess::{binarize, extract_mask, mean_threshold, StructuringElement};

fn main() -> texfis::Result<()> {
    // A bright 12x12 blob on a dark background, plus scattered bright
    // single pixels that a plain threshold would keep.
    let salt = [(2usize, 3usize), (4, 28), (27, 5), (30, 30)];
    let img = GrayImage::from_fn(32, 32, 256, |r, c| {
        let blob = (10..22).contains(&r) && (10..22).contains(&c);
        if blob || salt.contains(&(r, c)) {
            210
        } else {
            25
        }
    })?;

    let threshold = mean_threshold(&img);
    println!("mean-intensity threshold: {:.2}", threshold.value);

    let raw = binarize(&img, threshold.value);
    println!("raw foreground pixels:    {}", raw.count_foreground());

    let element = StructuringElement::square(3)?;
    let mask = extract_mask(&img, false, &element);
    println!("after 3x3 opening:        {}", mask.count_foreground());
    println!("(the blob is 12 x 12 = 144 pixels; the salt is gone)");

    let out = std::env::temp_dir().join("texfis_segment_mask.pgm");
    save_pgm(&mask.to_gray(256), &out, PgmFormat::Binary)?;
    println!("mask written to {}", out.display());
    Ok(())
}
