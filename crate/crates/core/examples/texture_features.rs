//! Co-occurrence texture features: per-direction matrices and the
//! direction-averaged 7-feature vector for three very different textures.
//!
//! ```bash
//! cargo run -p texfis --example texture_features
//! ```

use texfis::image::GrayImage;
use texfis::texture::{compute_glcm, extract_features, glcm_features, Direction, FeatureVector};

fn striped(size: usize) -> GrayImage {
    GrayImage::from_fn(size, size, 256, |r, _| if r % 2 == 0 { 40 } else { 200 }).unwrap()
}

fn checkered(size: usize) -> GrayImage {
    GrayImage::from_fn(
        size,
        size,
        256,
        |r, c| {
            if (r + c) % 2 == 0 {
                40
            } else {
                200
            }
        },
    )
    .unwrap()
}

fn noisy(size: usize) -> GrayImage {
    let mut state = 0x2545f4914f6cdd1du64;
    GrayImage::from_fn(size, size, 256, |_, _| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) % 256) as u16
    })
    .unwrap()
}

fn print_features(name: &str, f: &FeatureVector) {
    print!("{name:>8}");
    for v in f.as_array() {
        print!(" {v:>9.4}");
    }
    println!();
}

fn main() -> texfis::Result<()> {
    let img = striped(32);

    println!("per-direction contrast of a horizontally striped image:");
    for direction in Direction::ALL {
        let glcm = compute_glcm(&img, direction, 1, 8, true)?;
        let f = glcm_features(&glcm)?;
        println!("  {direction:>3} degrees: contrast {:.3}", f.contrast);
    }
    println!("(stripes agree along a row and flip across rows)\n");

    print!("{:>8}", "texture");
    for name in FeatureVector::NAMES {
        print!(" {name:>9}");
    }
    println!();
    for (name, img) in [
        ("stripes", striped(32)),
        ("checker", checkered(32)),
        ("noise", noisy(32)),
    ] {
        let f = extract_features(&img, 8, 1)?;
        print_features(name, &f);
    }
    println!("\n(averaged over the four directions; 8 gray-level bins)");
    Ok(())
}
