//! End-to-end orchestration: the five batch commands behind the CLI.
//!
//! Artifacts live under a single output directory with fixed names, so the
//! commands chain without extra flags: `synth` writes a corpus and
//! manifest, `features` turns a manifest into train/test feature tables,
//! `train` fits the classifier, `evaluate` scores it against the enabled
//! baselines, and `segment` extracts a foreground mask from one image.
//! Every artifact embeds the configuration fingerprint.

mod chart;
mod config;
mod feature_io;
mod manifest;
mod synth;

pub use chart::render_chart;
pub use config::PipelineConfig;
pub use feature_io::{read_feature_csv, write_feature_csv, FeatureTable, FEATURE_CSV_HEADER};
pub use manifest::{Manifest, ManifestEntry, Split};
pub use synth::{synth_image, SYNTH_CLASSES};

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::anfis::AnfisModel;
use crate::baselines::{knn_classify, FcmClassifier, KmeansClassifier, LabeledDataset};
use crate::error::{Error, Result};
use crate::evaluate::{multiclass_report, render_comparison_csv, render_report, MetricsReport};
use crate::image::{load_pgm, save_pgm_with_comment, BinaryImage, GrayImage, PgmFormat};
use crate::preprocess::{equalize_histogram, extract_mask, StructuringElement};
use crate::texture::{extract_features_with, FeatureVector};

pub const MANIFEST_FILE: &str = "manifest.csv";
pub const FEATURES_TRAIN_FILE: &str = "features_train.csv";
pub const FEATURES_TEST_FILE: &str = "features_test.csv";
pub const FEATURE_ERROR_LOG: &str = "features_errors.log";
pub const MODEL_FILE: &str = "model.anfis";
pub const LOSS_HISTORY_FILE: &str = "loss_history.csv";
pub const COMPARISON_FILE: &str = "comparison.csv";
pub const CHART_FILE: &str = "metrics_chart.pgm";

/// Classifiers the `evaluate` command can score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Anfis,
    Fcm,
    Knn,
    Kmeans,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Anfis, Method::Fcm, Method::Knn, Method::Kmeans];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Anfis => "anfis",
            Method::Fcm => "fcm",
            Method::Knn => "knn",
            Method::Kmeans => "kmeans",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "anfis" => Ok(Method::Anfis),
            "fcm" => Ok(Method::Fcm),
            "knn" => Ok(Method::Knn),
            "kmeans" => Ok(Method::Kmeans),
            other => Err(Error::InvalidConfig(format!(
                "unknown method '{other}' (expected anfis, fcm, knn, kmeans)"
            ))),
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Result of `synth`: the generated manifest and corpus size.
#[derive(Debug)]
pub struct SynthOutcome {
    pub manifest_path: PathBuf,
    pub image_count: usize,
}

/// Generates the four-class synthetic texture corpus (`synth_per_class`
/// images per class per split) plus its manifest, all derived from the
/// configured seed.
pub fn cmd_synth(cfg: &PipelineConfig, out_dir: &Path) -> Result<SynthOutcome> {
    cfg.validate()?;
    let fingerprint = cfg.fingerprint();
    let images_dir = out_dir.join("images");
    ensure_dir(&images_dir)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut entries = Vec::new();
    for split in [Split::Train, Split::Test] {
        for label in 1..=SYNTH_CLASSES {
            for index in 0..cfg.synth_per_class {
                let img = synth_image(label, cfg.synth_size, &mut rng);
                let name = format!("class{}_{}_{:03}.pgm", label, split.as_str(), index);
                let rel = PathBuf::from("images").join(&name);
                save_pgm_with_comment(
                    &img,
                    images_dir.join(&name),
                    PgmFormat::Binary,
                    Some(&format!("fingerprint {fingerprint}")),
                )?;
                entries.push(ManifestEntry {
                    path: rel,
                    label,
                    split,
                });
            }
        }
    }

    let manifest = Manifest::new(entries)?;
    let manifest_path = out_dir.join(MANIFEST_FILE);
    manifest.save(&manifest_path, &fingerprint)?;
    Ok(SynthOutcome {
        manifest_path,
        image_count: manifest.entries.len(),
    })
}

/// Result of `features`: where the tables landed and how many rows each has.
#[derive(Debug)]
pub struct FeaturesOutcome {
    pub train_csv: PathBuf,
    pub test_csv: PathBuf,
    pub train_rows: usize,
    pub test_rows: usize,
}

/// Extracts the 7-feature vector of every manifest entry (histogram
/// equalization, then direction-averaged co-occurrence features) and writes
/// one CSV per split, rows in manifest order.
///
/// Entries that fail to load are collected into an error log next to the
/// tables; any failure makes the whole command fail after processing every
/// entry.
pub fn cmd_features(
    manifest_path: &Path,
    cfg: &PipelineConfig,
    out_dir: &Path,
) -> Result<FeaturesOutcome> {
    cfg.validate()?;
    let fingerprint = cfg.fingerprint();
    let manifest = Manifest::load(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    ensure_dir(out_dir)?;

    let mut train_rows: Vec<(FeatureVector, usize)> = Vec::new();
    let mut test_rows: Vec<(FeatureVector, usize)> = Vec::new();
    let mut failures = String::new();
    let mut failed = 0usize;
    for entry in &manifest.entries {
        let resolved = if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            base.join(&entry.path)
        };
        let result = load_pgm(&resolved).and_then(|img| {
            let equalized = equalize_histogram(&img);
            extract_features_with(&equalized, cfg.ng, cfg.glcm_distance, cfg.glcm_symmetric)
        });
        match result {
            Ok(features) => match entry.split {
                Split::Train => train_rows.push((features, entry.label)),
                Split::Test => test_rows.push((features, entry.label)),
            },
            Err(err) => {
                failed += 1;
                let _ = writeln!(failures, "{}: {err}", resolved.display());
            }
        }
    }

    let train_csv = out_dir.join(FEATURES_TRAIN_FILE);
    let test_csv = out_dir.join(FEATURES_TEST_FILE);
    write_feature_csv(&train_csv, &train_rows, &fingerprint)?;
    write_feature_csv(&test_csv, &test_rows, &fingerprint)?;

    if failed > 0 {
        write_text(&out_dir.join(FEATURE_ERROR_LOG), &failures)?;
        return Err(Error::FeatureExtractionFailed {
            failed,
            total: manifest.entries.len(),
            log: failures.trim_end().to_string(),
        });
    }
    Ok(FeaturesOutcome {
        train_csv,
        test_csv,
        train_rows: train_rows.len(),
        test_rows: test_rows.len(),
    })
}

/// Result of `train`.
#[derive(Debug)]
pub struct TrainOutcome {
    pub model_path: PathBuf,
    pub loss_history_path: PathBuf,
    pub epochs_run: usize,
    pub final_loss: f64,
}

/// Trains the neuro-fuzzy classifier on `features_train.csv` in `out_dir`
/// and writes the model file plus the per-epoch loss history.
pub fn cmd_train(cfg: &PipelineConfig, out_dir: &Path) -> Result<TrainOutcome> {
    cfg.validate()?;
    let fingerprint = cfg.fingerprint();
    let table = read_feature_csv(out_dir.join(FEATURES_TRAIN_FILE))?;
    if table.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if !cfg.allow_fingerprint_mismatch && table.fingerprint != fingerprint {
        return Err(Error::FingerprintMismatch(format!(
            "feature table has {}, config gives {fingerprint}",
            table.fingerprint
        )));
    }

    let n_classes = table.n_classes();
    let mut model = AnfisModel::new(
        &table.rows,
        n_classes,
        Some(&FeatureVector::NAMES),
        cfg.max_rules,
    )?;
    model.fingerprint = fingerprint.clone();
    let history = model.train(&table.rows, &table.labels, &cfg.train_config())?;

    let model_path = out_dir.join(MODEL_FILE);
    model.save(&model_path)?;

    let mut loss_csv = String::new();
    let _ = writeln!(loss_csv, "# fingerprint {fingerprint}");
    let _ = writeln!(loss_csv, "epoch,mse");
    for (epoch, loss) in history.iter().enumerate() {
        let _ = writeln!(loss_csv, "{epoch},{loss}");
    }
    let loss_history_path = out_dir.join(LOSS_HISTORY_FILE);
    write_text(&loss_history_path, &loss_csv)?;

    Ok(TrainOutcome {
        model_path,
        loss_history_path,
        epochs_run: history.len(),
        final_loss: *history.last().expect("training ran at least one epoch"),
    })
}

/// Result of `evaluate`: one report per enabled method, in request order.
#[derive(Debug)]
pub struct EvaluateOutcome {
    pub reports: Vec<MetricsReport>,
    pub report_paths: Vec<PathBuf>,
    pub comparison_path: PathBuf,
    pub chart_path: PathBuf,
}

/// Scores the trained model and the enabled baselines on the test split and
/// writes per-method reports, the comparison CSV, and the metrics chart.
///
/// The feature tables, the model, and the current config must carry the
/// same fingerprint unless `allow_fingerprint_mismatch` is set.
pub fn cmd_evaluate(
    cfg: &PipelineConfig,
    out_dir: &Path,
    methods: &[Method],
) -> Result<EvaluateOutcome> {
    cfg.validate()?;
    let fingerprint = cfg.fingerprint();
    let train = read_feature_csv(out_dir.join(FEATURES_TRAIN_FILE))?;
    let test = read_feature_csv(out_dir.join(FEATURES_TEST_FILE))?;
    let model = AnfisModel::load(out_dir.join(MODEL_FILE))?;

    if !cfg.allow_fingerprint_mismatch {
        for (what, fp) in [
            ("train features", &train.fingerprint),
            ("test features", &test.fingerprint),
            ("model", &model.fingerprint),
        ] {
            if fp != &fingerprint {
                return Err(Error::FingerprintMismatch(format!(
                    "{what} carries '{fp}', config gives '{fingerprint}'"
                )));
            }
        }
    }
    if test.is_empty() {
        return Err(Error::EmptyInput);
    }
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if model.n_inputs() != 7 {
        return Err(Error::DimensionMismatch {
            expected: 7,
            got: model.n_inputs(),
        });
    }

    let n_classes = model.n_classes.max(train.n_classes()).max(test.n_classes());
    let ids = (0..train.len()).map(|i| format!("row{i}")).collect();
    let train_set = LabeledDataset::new(train.rows.clone(), train.labels.clone(), ids, n_classes)?;

    let mut methods_unique: Vec<Method> = Vec::new();
    for &m in methods {
        if !methods_unique.contains(&m) {
            methods_unique.push(m);
        }
    }
    if methods_unique.is_empty() {
        methods_unique.extend(Method::ALL);
    }

    ensure_dir(out_dir)?;
    let mut reports = Vec::new();
    let mut report_paths = Vec::new();
    for method in methods_unique {
        let predictions: Vec<usize> = match method {
            Method::Anfis => test
                .rows
                .iter()
                .map(|row| model.predict_class(row))
                .collect::<Result<_>>()?,
            Method::Fcm => {
                let clf = FcmClassifier::fit(
                    &train_set,
                    cfg.fcm_clusters_per_class,
                    &cfg.fcm_params(),
                    cfg.seed,
                )?;
                test.rows.iter().map(|row| clf.predict(row)).collect()
            }
            Method::Knn => test
                .rows
                .iter()
                .map(|row| knn_classify(&train_set, row, cfg.knn_k))
                .collect::<Result<_>>()?,
            Method::Kmeans => {
                let clf =
                    KmeansClassifier::fit(&train_set, cfg.fcm_tol, cfg.fcm_max_iter, cfg.seed)?;
                test.rows.iter().map(|row| clf.predict(row)).collect()
            }
        };
        let mut report = multiclass_report(&test.labels, &predictions, n_classes)?;
        report.method = method.as_str().to_string();
        report.fingerprint = fingerprint.clone();
        let path = out_dir.join(format!("report_{}.txt", method.as_str()));
        write_text(&path, &render_report(&report))?;
        report_paths.push(path);
        reports.push(report);
    }

    let comparison_path = out_dir.join(COMPARISON_FILE);
    write_text(
        &comparison_path,
        &render_comparison_csv(&reports, &fingerprint),
    )?;

    let chart_path = out_dir.join(CHART_FILE);
    save_pgm_with_comment(
        &render_chart(&reports),
        &chart_path,
        PgmFormat::Binary,
        Some(&format!("fingerprint {fingerprint}")),
    )?;

    Ok(EvaluateOutcome {
        reports,
        report_paths,
        comparison_path,
        chart_path,
    })
}

/// Result of `segment`.
#[derive(Debug)]
pub struct SegmentOutcome {
    pub mask_path: PathBuf,
    pub overlay_path: PathBuf,
    /// The mask covered the whole image (e.g. constant input); worth a
    /// warning to the caller.
    pub all_foreground: bool,
}

/// Extracts the foreground mask of one image and writes it as a 0/255 PGM
/// together with an overlay marking the mask boundary at full intensity.
pub fn cmd_segment(
    image_path: &Path,
    cfg: &PipelineConfig,
    out_dir: &Path,
) -> Result<SegmentOutcome> {
    cfg.validate()?;
    let fingerprint = cfg.fingerprint();
    let img = load_pgm(image_path)?;
    let element = StructuringElement::square(cfg.se_size)?;
    let mask = extract_mask(&img, cfg.apply_closing, &element);

    ensure_dir(out_dir)?;
    let stem = image_path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "image".to_string());

    let mask_path = out_dir.join(format!("{stem}_mask.pgm"));
    save_pgm_with_comment(
        &mask.to_gray(256),
        &mask_path,
        PgmFormat::Binary,
        Some(&format!("fingerprint {fingerprint}")),
    )?;

    let overlay_path = out_dir.join(format!("{stem}_overlay.pgm"));
    save_pgm_with_comment(
        &render_overlay(&img, &mask),
        &overlay_path,
        PgmFormat::Binary,
        Some(&format!("fingerprint {fingerprint}")),
    )?;

    Ok(SegmentOutcome {
        mask_path,
        overlay_path,
        all_foreground: mask.count_foreground() == mask.width() * mask.height(),
    })
}

/// Original image with the mask boundary painted at maximum intensity.
fn render_overlay(img: &GrayImage, mask: &BinaryImage) -> GrayImage {
    let top = (img.levels() - 1).min(u32::from(u16::MAX)) as u16;
    GrayImage::from_fn(img.width(), img.height(), img.levels(), |r, c| {
        if mask.get(r, c) && is_boundary(mask, r, c) {
            top
        } else {
            img.get(r, c)
        }
    })
    .expect("overlay dimensions match a valid image")
}

fn is_boundary(mask: &BinaryImage, r: usize, c: usize) -> bool {
    let (r, c) = (r as isize, c as isize);
    [(0isize, 1isize), (0, -1), (1, 0), (-1, 0)]
        .iter()
        .any(|&(dr, dc)| !mask.get_or_background(r + dr, c + dc))
}
