//! Pipeline configuration: a flat key-value file, defaults for every
//! tunable, and a canonical fingerprint embedded in output artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::anfis::TrainConfig;
use crate::baselines::FcmParams;
use crate::error::{Error, Result};

/// Every tunable of the end-to-end pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Gray-level bins for the co-occurrence matrices.
    pub ng: u32,
    pub glcm_distance: usize,
    pub glcm_symmetric: bool,
    /// Side length of the square structuring element (odd).
    pub se_size: usize,
    /// Apply a closing after the opening in mask extraction.
    pub apply_closing: bool,
    pub epochs: usize,
    pub learning_rate: f64,
    pub use_lse: bool,
    pub min_improvement: f64,
    /// Optional rule-subset size (top-k by training firing strength).
    pub max_rules: Option<usize>,
    pub knn_k: usize,
    pub fcm_clusters_per_class: usize,
    pub fcm_m: f64,
    pub fcm_tol: f64,
    pub fcm_max_iter: usize,
    pub seed: u64,
    /// Synthetic corpus: images per class per split.
    pub synth_per_class: usize,
    /// Synthetic corpus: square image side length.
    pub synth_size: usize,
    /// Skip the fingerprint equality check between artifacts. Excluded
    /// from the fingerprint itself.
    pub allow_fingerprint_mismatch: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            ng: 8,
            glcm_distance: 1,
            glcm_symmetric: true,
            se_size: 3,
            apply_closing: false,
            epochs: 100,
            learning_rate: 0.01,
            use_lse: true,
            min_improvement: 1e-7,
            max_rules: None,
            knn_k: 5,
            fcm_clusters_per_class: 1,
            fcm_m: 2.0,
            fcm_tol: 1e-5,
            fcm_max_iter: 100,
            seed: 0,
            synth_per_class: 10,
            synth_size: 64,
            allow_fingerprint_mismatch: false,
        }
    }
}

impl PipelineConfig {
    /// Parses a `key = value` file; `#` starts a comment. Unknown keys are
    /// errors. Missing keys keep their defaults.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                Error::InvalidConfig(format!("line {}: bad {what} value '{value}'", lineno + 1))
            };
            match key {
                "ng" => cfg.ng = value.parse().map_err(|_| bad("ng"))?,
                "glcm_distance" => {
                    cfg.glcm_distance = value.parse().map_err(|_| bad("glcm_distance"))?
                }
                "glcm_symmetric" => {
                    cfg.glcm_symmetric = value.parse().map_err(|_| bad("glcm_symmetric"))?
                }
                "se_size" => cfg.se_size = value.parse().map_err(|_| bad("se_size"))?,
                "apply_closing" => {
                    cfg.apply_closing = value.parse().map_err(|_| bad("apply_closing"))?
                }
                "epochs" => cfg.epochs = value.parse().map_err(|_| bad("epochs"))?,
                "learning_rate" => {
                    cfg.learning_rate = value.parse().map_err(|_| bad("learning_rate"))?
                }
                "use_lse" => cfg.use_lse = value.parse().map_err(|_| bad("use_lse"))?,
                "min_improvement" => {
                    cfg.min_improvement = value.parse().map_err(|_| bad("min_improvement"))?
                }
                "max_rules" => {
                    cfg.max_rules = if value == "none" {
                        None
                    } else {
                        Some(value.parse().map_err(|_| bad("max_rules"))?)
                    }
                }
                "knn_k" => cfg.knn_k = value.parse().map_err(|_| bad("knn_k"))?,
                "fcm_clusters_per_class" => {
                    cfg.fcm_clusters_per_class =
                        value.parse().map_err(|_| bad("fcm_clusters_per_class"))?
                }
                "fcm_m" => cfg.fcm_m = value.parse().map_err(|_| bad("fcm_m"))?,
                "fcm_tol" => cfg.fcm_tol = value.parse().map_err(|_| bad("fcm_tol"))?,
                "fcm_max_iter" => {
                    cfg.fcm_max_iter = value.parse().map_err(|_| bad("fcm_max_iter"))?
                }
                "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
                "synth_per_class" => {
                    cfg.synth_per_class = value.parse().map_err(|_| bad("synth_per_class"))?
                }
                "synth_size" => cfg.synth_size = value.parse().map_err(|_| bad("synth_size"))?,
                "allow_fingerprint_mismatch" => {
                    cfg.allow_fingerprint_mismatch = value
                        .parse()
                        .map_err(|_| bad("allow_fingerprint_mismatch"))?
                }
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ng < 2 {
            return Err(Error::InvalidConfig("ng must be >= 2".into()));
        }
        if self.glcm_distance == 0 {
            return Err(Error::InvalidConfig("glcm_distance must be >= 1".into()));
        }
        if self.se_size == 0 || self.se_size.is_multiple_of(2) {
            return Err(Error::InvalidConfig("se_size must be odd".into()));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be >= 1".into()));
        }
        if self.learning_rate.is_nan() || self.learning_rate < 0.0 {
            return Err(Error::InvalidConfig("learning_rate must be >= 0".into()));
        }
        if self.min_improvement.is_nan() || self.min_improvement < 0.0 {
            return Err(Error::InvalidConfig("min_improvement must be >= 0".into()));
        }
        if self.fcm_m.is_nan() || self.fcm_m <= 1.0 {
            return Err(Error::InvalidConfig("fcm_m must be > 1".into()));
        }
        if self.knn_k == 0 || self.fcm_clusters_per_class == 0 || self.fcm_max_iter == 0 {
            return Err(Error::InvalidConfig(
                "knn_k, fcm_clusters_per_class and fcm_max_iter must be >= 1".into(),
            ));
        }
        if self.synth_per_class == 0 || self.synth_size < 8 {
            return Err(Error::InvalidConfig(
                "synth_per_class must be >= 1 and synth_size >= 8".into(),
            ));
        }
        Ok(())
    }

    /// Canonical rendering of every semantic field in fixed order;
    /// `allow_fingerprint_mismatch` is an operator switch and excluded.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "ng={};", self.ng);
        let _ = write!(s, "glcm_distance={};", self.glcm_distance);
        let _ = write!(s, "glcm_symmetric={};", self.glcm_symmetric);
        let _ = write!(s, "se_size={};", self.se_size);
        let _ = write!(s, "apply_closing={};", self.apply_closing);
        let _ = write!(s, "epochs={};", self.epochs);
        let _ = write!(s, "learning_rate={};", self.learning_rate);
        let _ = write!(s, "use_lse={};", self.use_lse);
        let _ = write!(s, "min_improvement={};", self.min_improvement);
        match self.max_rules {
            Some(k) => {
                let _ = write!(s, "max_rules={k};");
            }
            None => {
                let _ = write!(s, "max_rules=none;");
            }
        }
        let _ = write!(s, "knn_k={};", self.knn_k);
        let _ = write!(s, "fcm_clusters_per_class={};", self.fcm_clusters_per_class);
        let _ = write!(s, "fcm_m={};", self.fcm_m);
        let _ = write!(s, "fcm_tol={};", self.fcm_tol);
        let _ = write!(s, "fcm_max_iter={};", self.fcm_max_iter);
        let _ = write!(s, "seed={};", self.seed);
        let _ = write!(s, "synth_per_class={};", self.synth_per_class);
        let _ = write!(s, "synth_size={};", self.synth_size);
        s
    }

    /// FNV-1a hash of the canonical string, as 16 hex digits.
    pub fn fingerprint(&self) -> String {
        format!("{:016x}", fnv1a64(self.canonical_string().as_bytes()))
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            use_lse: self.use_lse,
            seed: self.seed,
            min_improvement: self.min_improvement,
            max_rules: self.max_rules,
        }
    }

    pub fn fcm_params(&self) -> FcmParams {
        FcmParams {
            m: self.fcm_m,
            tol: self.fcm_tol,
            max_iter: self.fcm_max_iter,
        }
    }
}

fn fnv1a64(data: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &byte in data {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse_back() {
        let cfg = PipelineConfig::parse("").unwrap();
        assert_eq!(cfg, PipelineConfig::default());
    }

    #[test]
    fn keys_override_defaults() {
        let cfg = PipelineConfig::parse(
            "ng = 16\nseed = 7\nlearning_rate = 0.5  # steep\nmax_rules = 49\n",
        )
        .unwrap();
        assert_eq!(cfg.ng, 16);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.learning_rate, 0.5);
        assert_eq!(cfg.max_rules, Some(49));
    }

    #[test]
    fn unknown_key_is_an_error() {
        match PipelineConfig::parse("glcm_levels = 8\n") {
            Err(Error::InvalidConfig(msg)) => assert!(msg.contains("glcm_levels")),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn bad_value_is_an_error() {
        assert!(PipelineConfig::parse("epochs = many\n").is_err());
        assert!(PipelineConfig::parse("ng = 1\n").is_err());
        assert!(PipelineConfig::parse("se_size = 4\n").is_err());
    }

    #[test]
    fn fingerprint_tracks_semantic_fields_only() {
        let a = PipelineConfig::default();
        let mut b = a.clone();
        b.allow_fingerprint_mismatch = true;
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.seed = 99;
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn fingerprint_is_stable() {
        // Frozen so that artifacts produced by older runs keep verifying.
        assert_eq!(PipelineConfig::default().fingerprint().len(), 16);
        let a = PipelineConfig::default().fingerprint();
        let b = PipelineConfig::parse("").unwrap().fingerprint();
        assert_eq!(a, b);
    }
}
