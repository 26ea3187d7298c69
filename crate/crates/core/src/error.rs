//! Error type shared across the crate.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed PGM header in {path}: {reason}")]
    MalformedHeader { path: String, reason: String },
    #[error("pixel value {value} exceeds declared maxval {maxval} in {path}")]
    PixelOutOfRange {
        path: String,
        value: u32,
        maxval: u32,
    },
    #[error("truncated PGM payload in {path}: expected {expected} pixels, found {found}")]
    TruncatedPayload {
        path: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("quantization requires at least 2 levels, got {0}")]
    InvalidLevelCount(usize),
    #[error("image {width}x{height} has no pixel pair for offset ({dr},{dc})")]
    NoPixelPairs {
        width: usize,
        height: usize,
        dr: isize,
        dc: isize,
    },
    #[error("co-occurrence matrix is not normalized: sum = {0}")]
    UnnormalizedMatrix(f64),
    #[error("invalid membership function: {0}")]
    InvalidMembership(String),
    #[error("feature '{0}' is degenerate (max = min); cannot place membership functions")]
    DegenerateFeature(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("label {label} out of range 1..={n_classes}")]
    LabelOutOfRange { label: usize, n_classes: usize },
    #[error("unsupported model format in {path}: expected magic '{expected}'")]
    ModelVersionMismatch { path: String, expected: String },
    #[error("corrupt model file {path}: {reason}")]
    CorruptModel { path: String, reason: String },
    #[error("invalid clustering parameters: {0}")]
    InvalidClustering(String),
    #[error("class {class} has {have} samples, need at least {need}")]
    TooFewClassSamples {
        class: usize,
        have: usize,
        need: usize,
    },
    #[error("input lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty input")]
    EmptyInput,
    #[error("invalid manifest: {0}")]
    InvalidManifest(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("config fingerprint mismatch: {0}")]
    FingerprintMismatch(String),
    #[error("{failed} of {total} manifest entries failed:\n{log}")]
    FeatureExtractionFailed {
        failed: usize,
        total: usize,
        log: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
