//! The baseline classifiers side by side: per-class fuzzy c-means centers,
//! k-nearest neighbor, and k-means-derived nearest centers, scored with
//! sensitivity/specificity/accuracy.
//!
//! ```bash
//! cargo run -p texfis --example compare_classifiers
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use texfis::baselines::{
    fcm, knn_classify, FcmClassifier, FcmParams, KmeansClassifier, LabeledDataset,
};
use texfis::evaluate::multiclass_report;

fn cloud(rng: &mut ChaCha8Rng, cx: f64, cy: f64, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            vec![
                cx + rng.random::<f64>() - 0.5,
                cy + rng.random::<f64>() - 0.5,
            ]
        })
        .collect()
}

fn main() -> texfis::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let centers = [(0.0, 0.0), (4.0, 0.5), (2.0, 4.0)];
    let mut train_rows = Vec::new();
    let mut train_labels = Vec::new();
    let mut test_rows = Vec::new();
    let mut test_labels = Vec::new();
    for (i, &(cx, cy)) in centers.iter().enumerate() {
        train_rows.extend(cloud(&mut rng, cx, cy, 20));
        train_labels.extend(std::iter::repeat_n(i + 1, 20));
        test_rows.extend(cloud(&mut rng, cx, cy, 10));
        test_labels.extend(std::iter::repeat_n(i + 1, 10));
    }
    let ids = (0..train_rows.len()).map(|i| format!("s{i}")).collect();
    let train = LabeledDataset::new(train_rows.clone(), train_labels, ids, 3)?;

    // Plain fuzzy c-means on the pooled data, just to see the soft split.
    let state = fcm(&train_rows, 3, &FcmParams::default(), 1)?;
    println!(
        "fuzzy c-means converged in {} sweeps, objective {:.2}",
        state.objective_history.len(),
        state.objective
    );

    let fcm_clf = FcmClassifier::fit(&train, 1, &FcmParams::default(), 1)?;
    let kmeans_clf = KmeansClassifier::fit(&train, 1e-5, 100, 1)?;

    for (name, predictions) in [
        (
            "fcm",
            test_rows
                .iter()
                .map(|x| fcm_clf.predict(x))
                .collect::<Vec<_>>(),
        ),
        (
            "knn",
            test_rows
                .iter()
                .map(|x| knn_classify(&train, x, 5).unwrap())
                .collect(),
        ),
        (
            "kmeans",
            test_rows.iter().map(|x| kmeans_clf.predict(x)).collect(),
        ),
    ] {
        let report = multiclass_report(&test_labels, &predictions, 3)?;
        println!(
            "{name:>7}: sensitivity {:>6.2}, specificity {:>6.2}, accuracy {:>6.2}",
            report.sensitivity.unwrap_or(f64::NAN),
            report.specificity.unwrap_or(f64::NAN),
            report.accuracy
        );
    }
    Ok(())
}
