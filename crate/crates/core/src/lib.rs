//! Grayscale texture classification toolkit.
//!
//! Pipeline: preprocess a grayscale image (histogram equalization,
//! mean-threshold binarization, binary morphology), extract co-occurrence
//! texture features in four directions, classify with an adaptive
//! neuro-fuzzy inference system trained by hybrid least-squares /
//! gradient-descent learning, and compare against fuzzy c-means, k-nearest
//! neighbor, and k-means baselines with sensitivity/specificity/accuracy
//! reports.
//!
//! See the `examples/` directory for one runnable program per capability,
//! and the `texfis` binary for the batch command-line interface.

pub mod anfis;
pub mod baselines;
pub mod error;
pub mod evaluate;
pub mod fuzzy;
pub mod image;
pub mod pipeline;
pub mod preprocess;
pub mod texture;

pub use anfis::{AnfisModel, TrainConfig};
pub use error::{Error, Result};
pub use image::{BinaryImage, GrayImage, Histogram, PgmFormat};
pub use texture::{Direction, FeatureVector, Glcm};
