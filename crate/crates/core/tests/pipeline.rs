//! Integration tests for the batch commands: corpus generation, feature
//! extraction, training, evaluation, and segmentation chained through a
//! shared output directory.

use std::fs;
use std::path::Path;

use texfis::error::Error;
use texfis::image::{load_pgm, save_pgm, GrayImage, PgmFormat};
use texfis::pipeline::{
    cmd_evaluate, cmd_features, cmd_segment, cmd_synth, cmd_train, read_feature_csv,
    write_feature_csv, Manifest, Method, PipelineConfig, COMPARISON_FILE, FEATURES_TEST_FILE,
    FEATURES_TRAIN_FILE, FEATURE_CSV_HEADER, FEATURE_ERROR_LOG, LOSS_HISTORY_FILE, MODEL_FILE,
};
use texfis::texture::FeatureVector;

fn test_config(seed: u64) -> PipelineConfig {
    PipelineConfig {
        seed,
        synth_per_class: 4,
        synth_size: 32,
        ..PipelineConfig::default()
    }
}

/// Two tight, well-separated classes across all seven feature columns;
/// every column varies so no dimension is degenerate.
fn separable_rows(n: usize) -> Vec<(FeatureVector, usize)> {
    let weights = [1.0, 0.1, 0.2, 0.3, 0.1, 0.5, 0.7];
    (0..n)
        .map(|i| {
            let label = 1 + i % 2;
            let mut f = [0.0f64; 7];
            for (j, w) in weights.iter().enumerate() {
                let jitter = ((i * 31 + j * 17 + i * i * 7) % 97) as f64 / 97.0;
                f[j] = label as f64 * w + 0.08 * jitter;
            }
            (FeatureVector::from_array(f), label)
        })
        .collect()
}

/// Three classes with wide within-class scatter, so the rule activations
/// genuinely blend inside each class and the premise updates keep finding
/// loss to remove. Still linearly separable enough for exact rounding.
fn blended_rows(n: usize) -> Vec<(FeatureVector, usize)> {
    let weights = [1.0, 0.4, 0.5, 0.6, 0.4, 0.8, 0.9];
    (0..n)
        .map(|i| {
            let label = 1 + i % 3;
            let mut f = [0.0f64; 7];
            for (j, w) in weights.iter().enumerate() {
                let jitter = ((i * 31 + j * 17 + i * i * 7) % 97) as f64 / 97.0;
                f[j] = (label as f64 - 1.0) * w + 0.5 * jitter;
            }
            (FeatureVector::from_array(f), label)
        })
        .collect()
}

#[test]
fn synth_writes_manifest_matching_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(3);
    let outcome = cmd_synth(&cfg, dir.path()).unwrap();
    assert_eq!(outcome.image_count, 4 * 4 * 2);

    let manifest = Manifest::load(&outcome.manifest_path).unwrap();
    assert_eq!(manifest.entries.len(), 32);
    assert_eq!(manifest.n_classes, 4);
    for entry in &manifest.entries {
        let img = load_pgm(dir.path().join(&entry.path)).unwrap();
        assert_eq!(img.width(), 32);
        assert_eq!(img.levels(), 256);
    }
}

#[test]
fn synth_same_seed_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = test_config(11);
    cmd_synth(&cfg, a.path()).unwrap();
    cmd_synth(&cfg, b.path()).unwrap();
    let manifest = Manifest::load(a.path().join("manifest.csv")).unwrap();
    for entry in &manifest.entries {
        let bytes_a = fs::read(a.path().join(&entry.path)).unwrap();
        let bytes_b = fs::read(b.path().join(&entry.path)).unwrap();
        assert_eq!(bytes_a, bytes_b, "{}", entry.path.display());
    }
    assert_eq!(
        fs::read(a.path().join("manifest.csv")).unwrap(),
        fs::read(b.path().join("manifest.csv")).unwrap()
    );
}

#[test]
fn synth_classes_separate_in_feature_space() {
    // For every class pair, some feature must put the class means more
    // than 3 pooled standard deviations apart.
    let dir = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig {
        seed: 5,
        synth_per_class: 8,
        synth_size: 48,
        ..PipelineConfig::default()
    };
    cmd_synth(&cfg, dir.path()).unwrap();
    cmd_features(&dir.path().join("manifest.csv"), &cfg, dir.path()).unwrap();
    let table = read_feature_csv(dir.path().join(FEATURES_TRAIN_FILE)).unwrap();

    let stats = |class: usize, j: usize| -> (f64, f64) {
        let values: Vec<f64> = table
            .rows
            .iter()
            .zip(&table.labels)
            .filter(|(_, &l)| l == class)
            .map(|(row, _)| row[j])
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var =
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
        (mean, var)
    };
    for a in 1..=4usize {
        for b in a + 1..=4 {
            let separated = (0..7).any(|j| {
                let (ma, va) = stats(a, j);
                let (mb, vb) = stats(b, j);
                let pooled = ((va + vb) / 2.0).sqrt();
                pooled > 0.0 && (ma - mb).abs() > 3.0 * pooled
            });
            assert!(separated, "classes {a} and {b} are not 3-sigma separated");
        }
    }
}

#[test]
fn features_csv_shape_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(13);
    cmd_synth(&cfg, dir.path()).unwrap();
    let manifest_path = dir.path().join("manifest.csv");

    let outcome = cmd_features(&manifest_path, &cfg, dir.path()).unwrap();
    assert_eq!(outcome.train_rows, 16);
    assert_eq!(outcome.test_rows, 16);

    let text = fs::read_to_string(&outcome.train_csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# fingerprint "));
    assert_eq!(lines.next().unwrap(), FEATURE_CSV_HEADER);
    assert_eq!(lines.count(), 16);

    let first = fs::read(&outcome.train_csv).unwrap();
    cmd_features(&manifest_path, &cfg, dir.path()).unwrap();
    assert_eq!(first, fs::read(&outcome.train_csv).unwrap());
}

#[test]
fn features_missing_file_fails_and_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(1);

    let img = GrayImage::constant(8, 8, 256, 40).unwrap();
    save_pgm(&img, dir.path().join("ok.pgm"), PgmFormat::Binary).unwrap();
    fs::write(
        dir.path().join("manifest.csv"),
        "path,label,split\nok.pgm,1,train\nmissing.pgm,2,test\n",
    )
    .unwrap();

    let err = cmd_features(&dir.path().join("manifest.csv"), &cfg, dir.path()).unwrap_err();
    match err {
        Error::FeatureExtractionFailed { failed, total, log } => {
            assert_eq!(failed, 1);
            assert_eq!(total, 2);
            assert!(log.contains("missing.pgm"));
        }
        other => panic!("expected feature failure, got {other}"),
    }
    let log = fs::read_to_string(dir.path().join(FEATURE_ERROR_LOG)).unwrap();
    assert!(log.contains("missing.pgm"));
}

#[test]
fn train_reaches_full_accuracy_on_separable_table() {
    // Few enough rules that least squares cannot interpolate outright,
    // so the premise updates keep improving the loss.
    let dir = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig {
        min_improvement: 0.0,
        epochs: 12,
        max_rules: Some(4),
        ..PipelineConfig::default()
    };
    write_feature_csv(
        dir.path().join(FEATURES_TRAIN_FILE),
        &blended_rows(48),
        &cfg.fingerprint(),
    )
    .unwrap();

    let outcome = cmd_train(&cfg, dir.path()).unwrap();
    assert_eq!(outcome.epochs_run, 12);

    let loss_text = fs::read_to_string(dir.path().join(LOSS_HISTORY_FILE)).unwrap();
    let losses: Vec<f64> = loss_text
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    for pair in losses[..10].windows(2) {
        assert!(pair[1] < pair[0], "loss history not decreasing: {losses:?}");
    }

    let model = texfis::AnfisModel::load(dir.path().join(MODEL_FILE)).unwrap();
    let table = read_feature_csv(dir.path().join(FEATURES_TRAIN_FILE)).unwrap();
    for (row, &label) in table.rows.iter().zip(&table.labels) {
        assert_eq!(model.predict_class(row).unwrap(), label);
    }
}

#[test]
fn train_same_seed_gives_identical_model_file() {
    let cfg = test_config(21);
    let mut model_bytes = Vec::new();
    for round in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        write_feature_csv(
            dir.path().join(FEATURES_TRAIN_FILE),
            &separable_rows(10),
            &cfg.fingerprint(),
        )
        .unwrap();
        cmd_train(&cfg, dir.path()).unwrap();
        let bytes = fs::read(dir.path().join(MODEL_FILE)).unwrap();
        if round == 0 {
            model_bytes = bytes;
        } else {
            assert_eq!(model_bytes, bytes);
        }
    }
}

#[test]
fn train_empty_split_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(2);
    write_feature_csv(
        dir.path().join(FEATURES_TRAIN_FILE),
        &[],
        &cfg.fingerprint(),
    )
    .unwrap();
    assert!(matches!(
        cmd_train(&cfg, dir.path()),
        Err(Error::EmptyTrainingSet)
    ));
}

#[test]
fn train_refuses_mismatched_fingerprint() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(2);
    write_feature_csv(
        dir.path().join(FEATURES_TRAIN_FILE),
        &separable_rows(8),
        "0000000000000000",
    )
    .unwrap();
    assert!(matches!(
        cmd_train(&cfg, dir.path()),
        Err(Error::FingerprintMismatch(_))
    ));

    let lenient = PipelineConfig {
        allow_fingerprint_mismatch: true,
        ..cfg
    };
    cmd_train(&lenient, dir.path()).unwrap();
}

#[test]
fn evaluate_perfect_fixture_scores_100_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(6);
    let rows = separable_rows(12);
    write_feature_csv(
        dir.path().join(FEATURES_TRAIN_FILE),
        &rows,
        &cfg.fingerprint(),
    )
    .unwrap();
    write_feature_csv(
        dir.path().join(FEATURES_TEST_FILE),
        &separable_rows(8),
        &cfg.fingerprint(),
    )
    .unwrap();
    cmd_train(&cfg, dir.path()).unwrap();

    let outcome = cmd_evaluate(&cfg, dir.path(), &Method::ALL).unwrap();
    assert_eq!(outcome.reports.len(), 4);
    for report in &outcome.reports {
        assert_eq!(report.accuracy, 100.0, "method {}", report.method);
        assert_eq!(report.sensitivity, Some(100.0));
        assert_eq!(report.specificity, Some(100.0));
        let text =
            fs::read_to_string(dir.path().join(format!("report_{}.txt", report.method))).unwrap();
        assert!(text.contains("accuracy 100"));
    }

    // One comparison row per method, in Table-style column order.
    let csv = fs::read_to_string(dir.path().join(COMPARISON_FILE)).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[1], "method,sensitivity,specificity,accuracy");
    assert_eq!(lines.len(), 2 + 4);
    assert!(lines[2].starts_with("anfis,100,100,100"));

    let subset = cmd_evaluate(&cfg, dir.path(), &[Method::Anfis, Method::Knn]).unwrap();
    let csv = fs::read_to_string(subset.comparison_path).unwrap();
    assert_eq!(csv.lines().count(), 2 + 2);
}

#[test]
fn evaluate_refuses_mismatched_model() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(6);
    let rows = separable_rows(12);
    write_feature_csv(
        dir.path().join(FEATURES_TRAIN_FILE),
        &rows,
        &cfg.fingerprint(),
    )
    .unwrap();
    write_feature_csv(
        dir.path().join(FEATURES_TEST_FILE),
        &rows,
        &cfg.fingerprint(),
    )
    .unwrap();
    cmd_train(&cfg, dir.path()).unwrap();

    // Same artifacts, different semantic config: refused.
    let other = PipelineConfig {
        knn_k: 3,
        ..test_config(6)
    };
    assert!(matches!(
        cmd_evaluate(&other, dir.path(), &Method::ALL),
        Err(Error::FingerprintMismatch(_))
    ));
    let lenient = PipelineConfig {
        allow_fingerprint_mismatch: true,
        ..other
    };
    cmd_evaluate(&lenient, dir.path(), &Method::ALL).unwrap();
}

#[test]
fn segment_bright_square_recovers_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(0);
    let img = GrayImage::from_fn(24, 24, 256, |r, c| {
        if (5..15).contains(&r) && (5..15).contains(&c) {
            210
        } else {
            25
        }
    })
    .unwrap();
    let input = dir.path().join("square.pgm");
    save_pgm(&img, &input, PgmFormat::Binary).unwrap();

    let outcome = cmd_segment(&input, &cfg, dir.path()).unwrap();
    assert!(!outcome.all_foreground);

    let mask = load_pgm(&outcome.mask_path).unwrap();
    for r in 0..24 {
        for c in 0..24 {
            let inside = (5..15).contains(&r) && (5..15).contains(&c);
            assert_eq!(mask.get(r, c) == 255, inside, "at ({r},{c})");
        }
    }

    // The overlay marks the mask boundary at full intensity.
    let overlay = load_pgm(&outcome.overlay_path).unwrap();
    assert_eq!(overlay.get(5, 5), 255);
    assert_eq!(overlay.get(10, 10), 210);
    assert_eq!(overlay.get(0, 0), 25);
}

#[test]
fn segment_constant_image_flags_all_foreground() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(0);
    let img = GrayImage::constant(10, 10, 256, 90).unwrap();
    let input = dir.path().join("flat.pgm");
    save_pgm(&img, &input, PgmFormat::Binary).unwrap();

    let outcome = cmd_segment(&input, &cfg, dir.path()).unwrap();
    assert!(outcome.all_foreground);
    let mask = load_pgm(&outcome.mask_path).unwrap();
    assert!(mask.pixels().iter().all(|&v| v == 255));
}

#[test]
fn end_to_end_chain_through_one_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = test_config(17);
    cmd_synth(&cfg, dir.path()).unwrap();
    cmd_features(&dir.path().join("manifest.csv"), &cfg, dir.path()).unwrap();
    cmd_train(&cfg, dir.path()).unwrap();
    let outcome = cmd_evaluate(&cfg, dir.path(), &Method::ALL).unwrap();
    let anfis = &outcome.reports[0];
    assert_eq!(anfis.method, "anfis");
    assert!(anfis.accuracy >= 75.0, "accuracy {}", anfis.accuracy);
    assert!(Path::new(&outcome.chart_path).exists());
}
