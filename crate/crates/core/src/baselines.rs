//! Comparator classifiers: fuzzy c-means clustering (also usable as a
//! per-class nearest-center classifier), k-nearest neighbor, and k-means.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Fuzzy c-means hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct FcmParams {
    /// Fuzzifier exponent; must be > 1.
    pub m: f64,
    /// Convergence threshold on the largest membership change.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FcmParams {
    fn default() -> Self {
        Self {
            m: 2.0,
            tol: 1e-5,
            max_iter: 100,
        }
    }
}

/// Converged fuzzy c-means state.
#[derive(Debug, Clone)]
pub struct FcmState {
    /// `centers[i]` is the i-th cluster center.
    pub centers: Vec<Vec<f64>>,
    /// `memberships[i][k]` is the membership of point k in cluster i;
    /// columns sum to 1.
    pub memberships: Vec<Vec<f64>>,
    /// Final objective `sum_i sum_k u_ik^m ||x_k - v_i||^2`.
    pub objective: f64,
    /// Objective after every iteration; non-increasing.
    pub objective_history: Vec<f64>,
}

/// Feature rows with class labels in `1..=n_classes` and per-row identifiers.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub ids: Vec<String>,
    pub n_classes: usize,
}

impl LabeledDataset {
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<usize>,
        ids: Vec<String>,
        n_classes: usize,
    ) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::LengthMismatch(features.len(), labels.len()));
        }
        if features.len() != ids.len() {
            return Err(Error::LengthMismatch(features.len(), ids.len()));
        }
        for &label in &labels {
            if label == 0 || label > n_classes {
                return Err(Error::LabelOutOfRange { label, n_classes });
            }
        }
        Ok(Self {
            features,
            labels,
            ids,
            n_classes,
        })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Per-dimension `(min, max)` of the rows, for `[0, 1]` rescaling.
fn feature_ranges(rows: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let d = rows.first().map_or(0, Vec::len);
    (0..d)
        .map(|j| {
            let mut min = f64::MAX;
            let mut max = f64::MIN;
            for row in rows {
                min = min.min(row[j]);
                max = max.max(row[j]);
            }
            (min, max)
        })
        .collect()
}

fn rescale(row: &[f64], ranges: &[(f64, f64)]) -> Vec<f64> {
    row.iter()
        .zip(ranges)
        .map(|(&v, &(min, max))| {
            if max > min {
                (v - min) / (max - min)
            } else {
                0.0
            }
        })
        .collect()
}

/// Fuzzy c-means by alternating center/membership updates.
///
/// Memberships are initialized from the seeded RNG, each point's column
/// normalized to sum to 1. A point coincident with a center receives full
/// membership in the first such cluster. Iteration stops when the largest
/// membership change falls below `params.tol` or after `params.max_iter`
/// sweeps; the objective is non-increasing along the way.
pub fn fcm(rows: &[Vec<f64>], c: usize, params: &FcmParams, seed: u64) -> Result<FcmState> {
    if c == 0 || rows.len() < c {
        return Err(Error::InvalidClustering(format!(
            "need at least c = {c} points, have {}",
            rows.len()
        )));
    }
    if params.m.is_nan() || params.m <= 1.0 {
        return Err(Error::InvalidClustering(format!(
            "fuzzifier m must be > 1, got {}",
            params.m
        )));
    }
    let n = rows.len();
    let d = rows[0].len();
    let exponent = 2.0 / (params.m - 1.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut memberships = vec![vec![0.0f64; n]; c];
    for point in 0..n {
        let mut column: Vec<f64> = (0..c).map(|_| rng.random::<f64>().max(1e-9)).collect();
        let sum: f64 = column.iter().sum();
        column.iter_mut().for_each(|u| *u /= sum);
        for (cluster, &u) in memberships.iter_mut().zip(&column) {
            cluster[point] = u;
        }
    }

    let mut centers = vec![vec![0.0f64; d]; c];
    let mut history = Vec::new();
    for _ in 0..params.max_iter {
        // Center update from fuzzified memberships.
        for (i, center) in centers.iter_mut().enumerate() {
            center.iter_mut().for_each(|v| *v = 0.0);
            let mut weight_sum = 0.0;
            for (k, row) in rows.iter().enumerate() {
                let w = memberships[i][k].powf(params.m);
                weight_sum += w;
                for (cv, &rv) in center.iter_mut().zip(row) {
                    *cv += w * rv;
                }
            }
            if weight_sum > 0.0 {
                center.iter_mut().for_each(|v| *v /= weight_sum);
            }
        }

        // Membership update.
        let mut max_change = 0.0f64;
        for (k, row) in rows.iter().enumerate() {
            let dist: Vec<f64> = centers
                .iter()
                .map(|center| squared_distance(row, center).sqrt())
                .collect();
            let new_column: Vec<f64> = if let Some(hit) = dist.iter().position(|&v| v == 0.0) {
                (0..c).map(|i| if i == hit { 1.0 } else { 0.0 }).collect()
            } else {
                (0..c)
                    .map(|i| {
                        let denom: f64 = dist.iter().map(|&dj| (dist[i] / dj).powf(exponent)).sum();
                        1.0 / denom
                    })
                    .collect()
            };
            for (i, &u) in new_column.iter().enumerate() {
                max_change = max_change.max((u - memberships[i][k]).abs());
                memberships[i][k] = u;
            }
        }

        let objective: f64 = (0..c)
            .map(|i| {
                rows.iter()
                    .enumerate()
                    .map(|(k, row)| {
                        memberships[i][k].powf(params.m) * squared_distance(row, &centers[i])
                    })
                    .sum::<f64>()
            })
            .sum();
        history.push(objective);

        if max_change < params.tol {
            break;
        }
    }

    let objective = *history.last().expect("at least one iteration ran");
    Ok(FcmState {
        centers,
        memberships,
        objective,
        objective_history: history,
    })
}

/// Per-class fuzzy c-means centers on `[0, 1]`-rescaled features; predicts
/// the class owning the globally nearest center.
#[derive(Debug, Clone)]
pub struct FcmClassifier {
    ranges: Vec<(f64, f64)>,
    /// `(class label, centers)` in ascending label order.
    centers_by_class: Vec<(usize, Vec<Vec<f64>>)>,
}

impl FcmClassifier {
    pub fn fit(
        train: &LabeledDataset,
        c_per_class: usize,
        params: &FcmParams,
        seed: u64,
    ) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let ranges = feature_ranges(&train.features);
        let mut centers_by_class = Vec::new();
        for class in 1..=train.n_classes {
            let rows: Vec<Vec<f64>> = train
                .features
                .iter()
                .zip(&train.labels)
                .filter(|(_, &l)| l == class)
                .map(|(row, _)| rescale(row, &ranges))
                .collect();
            if rows.len() < c_per_class {
                return Err(Error::TooFewClassSamples {
                    class,
                    have: rows.len(),
                    need: c_per_class,
                });
            }
            let state = fcm(&rows, c_per_class, params, seed.wrapping_add(class as u64))?;
            centers_by_class.push((class, state.centers));
        }
        Ok(Self {
            ranges,
            centers_by_class,
        })
    }

    /// Nearest stored center wins; exact ties go to the lower class label.
    pub fn predict(&self, x: &[f64]) -> usize {
        let xn = rescale(x, &self.ranges);
        let mut best = (f64::MAX, 0usize);
        for (class, centers) in &self.centers_by_class {
            for center in centers {
                let dist = squared_distance(&xn, center);
                if dist < best.0 {
                    best = (dist, *class);
                }
            }
        }
        best.1
    }
}

/// Convenience wrapper: fit per-class FCM centers on the training set and
/// classify one test vector.
pub fn fcm_classify(
    train: &LabeledDataset,
    test_x: &[f64],
    c_per_class: usize,
    params: &FcmParams,
    seed: u64,
) -> Result<usize> {
    Ok(FcmClassifier::fit(train, c_per_class, params, seed)?.predict(test_x))
}

/// K-nearest-neighbor vote on `[0, 1]`-rescaled features.
///
/// Neighbors sort by (distance, sample index). Vote ties break by smaller
/// mean distance among the tied classes, then by lower class label.
pub fn knn_classify(train: &LabeledDataset, test_x: &[f64], k: usize) -> Result<usize> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if k == 0 || k > train.len() {
        return Err(Error::InvalidClustering(format!(
            "k = {k} outside 1..={}",
            train.len()
        )));
    }
    let ranges = feature_ranges(&train.features);
    let xn = rescale(test_x, &ranges);
    let mut neighbors: Vec<(f64, usize)> = train
        .features
        .iter()
        .enumerate()
        .map(|(i, row)| (squared_distance(&rescale(row, &ranges), &xn), i))
        .collect();
    neighbors.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite distances")
            .then(a.1.cmp(&b.1))
    });

    let mut votes = vec![0usize; train.n_classes + 1];
    let mut dist_sums = vec![0.0f64; train.n_classes + 1];
    for &(dist, idx) in neighbors.iter().take(k) {
        let label = train.labels[idx];
        votes[label] += 1;
        dist_sums[label] += dist.sqrt();
    }
    let top_votes = *votes.iter().max().expect("non-empty vote table");
    let mut winner = 0usize;
    let mut winner_mean = f64::MAX;
    for class in 1..=train.n_classes {
        if votes[class] != top_votes {
            continue;
        }
        let mean = dist_sums[class] / votes[class] as f64;
        if mean < winner_mean {
            winner_mean = mean;
            winner = class;
        }
    }
    Ok(winner)
}

/// Result of Lloyd's algorithm.
#[derive(Debug, Clone)]
pub struct KmeansResult {
    pub centers: Vec<Vec<f64>>,
    /// Cluster index per input row.
    pub assignments: Vec<usize>,
    /// Final within-cluster sum of squares.
    pub wcss: f64,
    /// WCSS after every assignment step; non-increasing.
    pub wcss_history: Vec<f64>,
}

/// K-means with seeded random-sample initialization.
///
/// Empty clusters are re-seeded to the point farthest from its current
/// center. Stops when assignments stabilize, the WCSS improvement falls
/// below `tol`, or `max_iter` is reached.
pub fn kmeans(
    rows: &[Vec<f64>],
    c: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<KmeansResult> {
    if c == 0 || rows.len() < c {
        return Err(Error::InvalidClustering(format!(
            "need at least c = {c} points, have {}",
            rows.len()
        )));
    }
    let n = rows.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Draw c distinct sample indices for the initial centers.
    let mut picked: Vec<usize> = Vec::with_capacity(c);
    while picked.len() < c {
        let candidate = rng.random_range(0..n);
        if !picked.contains(&candidate) {
            picked.push(candidate);
        }
    }
    let mut centers: Vec<Vec<f64>> = picked.iter().map(|&i| rows[i].clone()).collect();

    let mut assignments = vec![usize::MAX; n];
    let mut history = Vec::new();
    for _ in 0..max_iter {
        // Assignment step; ties go to the lower cluster index.
        let mut changed = false;
        for (k, row) in rows.iter().enumerate() {
            let mut best = (f64::MAX, 0usize);
            for (i, center) in centers.iter().enumerate() {
                let dist = squared_distance(row, center);
                if dist < best.0 {
                    best = (dist, i);
                }
            }
            if assignments[k] != best.1 {
                assignments[k] = best.1;
                changed = true;
            }
        }

        // Re-seed empty clusters to the farthest point.
        let mut counts = vec![0usize; c];
        for &a in &assignments {
            counts[a] += 1;
        }
        for i in 0..c {
            if counts[i] > 0 {
                continue;
            }
            let (far_idx, _) = rows
                .iter()
                .enumerate()
                .map(|(k, row)| (k, squared_distance(row, &centers[assignments[k]])))
                .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite distances"))
                .expect("non-empty rows");
            counts[assignments[far_idx]] -= 1;
            counts[i] += 1;
            centers[i] = rows[far_idx].clone();
            assignments[far_idx] = i;
            changed = true;
        }

        let wcss: f64 = rows
            .iter()
            .zip(&assignments)
            .map(|(row, &a)| squared_distance(row, &centers[a]))
            .sum();
        history.push(wcss);

        if !changed {
            break;
        }
        if history.len() >= 2 {
            let improvement = history[history.len() - 2] - wcss;
            if improvement >= 0.0 && improvement < tol {
                break;
            }
        }

        // Update step: centers move to their cluster means.
        for (i, center) in centers.iter_mut().enumerate() {
            if counts[i] == 0 {
                continue;
            }
            center.iter_mut().for_each(|v| *v = 0.0);
            for (row, &a) in rows.iter().zip(&assignments) {
                if a == i {
                    for (cv, &rv) in center.iter_mut().zip(row) {
                        *cv += rv;
                    }
                }
            }
            center.iter_mut().for_each(|v| *v /= counts[i] as f64);
        }
    }

    let wcss = *history.last().expect("at least one iteration ran");
    Ok(KmeansResult {
        centers,
        assignments,
        wcss,
        wcss_history: history,
    })
}

/// K-means-derived nearest-center classifier: clusters the rescaled
/// training features into `n_classes` groups, labels each center by the
/// majority training label among its members, and predicts the label of
/// the nearest center.
#[derive(Debug, Clone)]
pub struct KmeansClassifier {
    ranges: Vec<(f64, f64)>,
    centers: Vec<Vec<f64>>,
    center_labels: Vec<usize>,
}

impl KmeansClassifier {
    pub fn fit(train: &LabeledDataset, tol: f64, max_iter: usize, seed: u64) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let ranges = feature_ranges(&train.features);
        let rows: Vec<Vec<f64>> = train
            .features
            .iter()
            .map(|row| rescale(row, &ranges))
            .collect();
        let result = kmeans(&rows, train.n_classes, tol, max_iter, seed)?;
        let mut center_labels = Vec::with_capacity(result.centers.len());
        for i in 0..result.centers.len() {
            let mut counts = vec![0usize; train.n_classes + 1];
            for (&a, &label) in result.assignments.iter().zip(&train.labels) {
                if a == i {
                    counts[label] += 1;
                }
            }
            let label = (1..=train.n_classes)
                .max_by_key(|&l| counts[l])
                .expect("at least one class");
            center_labels.push(label);
        }
        Ok(Self {
            ranges,
            centers: result.centers,
            center_labels,
        })
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let xn = rescale(x, &self.ranges);
        let mut best = (f64::MAX, 0usize);
        for (center, &label) in self.centers.iter().zip(&self.center_labels) {
            let dist = squared_distance(&xn, center);
            if dist < best.0 {
                best = (dist, label);
            }
        }
        best.1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_clouds(per_cloud: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
        // Gaussian-ish clouds at (0, 0) and (100, 100) via Box-Muller.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut normal = move || {
            let u1: f64 = rng.random::<f64>().max(1e-12);
            let u2: f64 = rng.random();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        };
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (label, center) in [(1usize, 0.0f64), (2, 100.0)] {
            for _ in 0..per_cloud {
                rows.push(vec![center + normal(), center + normal()]);
                labels.push(label);
            }
        }
        (rows, labels)
    }

    fn dataset(rows: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> LabeledDataset {
        let ids = (0..rows.len()).map(|i| format!("s{i}")).collect();
        LabeledDataset::new(rows, labels, ids, n_classes).unwrap()
    }

    #[test]
    fn fcm_single_cluster_is_the_mean() {
        let rows = vec![vec![1.0, 0.0], vec![3.0, 4.0], vec![5.0, 2.0]];
        let state = fcm(&rows, 1, &FcmParams::default(), 7).unwrap();
        assert!((state.centers[0][0] - 3.0).abs() < 1e-9);
        assert!((state.centers[0][1] - 2.0).abs() < 1e-9);
        assert!(state.memberships[0]
            .iter()
            .all(|&u| (u - 1.0).abs() < 1e-12));
    }

    #[test]
    fn fcm_separates_two_clouds() {
        let (rows, _) = two_clouds(30, 3);
        let state = fcm(&rows, 2, &FcmParams::default(), 11).unwrap();
        let mut centers = state.centers.clone();
        centers.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        assert!((centers[0][0]).abs() < 0.5 && (centers[0][1]).abs() < 0.5);
        assert!((centers[1][0] - 100.0).abs() < 0.5 && (centers[1][1] - 100.0).abs() < 0.5);
        for k in 0..rows.len() {
            let dominant = state
                .memberships
                .iter()
                .map(|row| row[k])
                .fold(0.0, f64::max);
            assert!(dominant > 0.99, "point {k} dominant membership {dominant}");
        }
    }

    #[test]
    fn fcm_objective_is_non_increasing() {
        let (rows, _) = two_clouds(20, 9);
        for seed in 0..5 {
            let state = fcm(&rows, 3, &FcmParams::default(), seed).unwrap();
            for w in state.objective_history.windows(2) {
                assert!(w[1] <= w[0] + 1e-10, "objective rose: {:?}", w);
            }
        }
    }

    #[test]
    fn fcm_coincident_point_gets_full_membership() {
        // All-identical points put the center exactly on every point, which
        // exercises the zero-distance membership rule.
        let rows = vec![vec![5.0], vec![5.0], vec![5.0]];
        let state = fcm(&rows, 1, &FcmParams::default(), 1).unwrap();
        assert_eq!(state.centers[0][0], 5.0);
        for k in 0..3 {
            assert_eq!(state.memberships[0][k], 1.0);
        }

        let rows = vec![vec![0.0], vec![0.0], vec![10.0]];
        let state = fcm(&rows, 2, &FcmParams::default(), 1).unwrap();
        for column in 0..3 {
            let sum: f64 = (0..2).map(|i| state.memberships[i][column]).sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fcm_rejects_bad_parameters() {
        let rows = vec![vec![0.0], vec![1.0]];
        assert!(fcm(&rows, 3, &FcmParams::default(), 0).is_err());
        let bad = FcmParams {
            m: 1.0,
            ..FcmParams::default()
        };
        assert!(fcm(&rows, 2, &bad, 0).is_err());
    }

    #[test]
    fn fcm_classifier_examples() {
        // Duplicated rows give exactly representable centers at 0 and 1.
        let rows = vec![vec![0.0], vec![0.0], vec![1.0], vec![1.0]];
        let train = dataset(rows, vec![1, 1, 2, 2], 2);
        let clf = FcmClassifier::fit(&train, 1, &FcmParams::default(), 5).unwrap();
        // A test point equal to a stored center takes that center's class.
        assert_eq!(clf.predict(&[0.0]), 1);
        assert_eq!(clf.predict(&[0.1]), 1);
        assert_eq!(clf.predict(&[0.9]), 2);
        // Equidistant from both centers: the lower class index wins.
        assert_eq!(clf.predict(&[0.5]), 1);

        // Free-function form fits and classifies in one call.
        let train2 = dataset(
            vec![vec![0.0], vec![0.05], vec![1.0], vec![0.95]],
            vec![1, 1, 2, 2],
            2,
        );
        assert_eq!(
            fcm_classify(&train2, &[0.1], 1, &FcmParams::default(), 5).unwrap(),
            1
        );
    }

    #[test]
    fn fcm_classifier_rejects_small_classes() {
        let train = dataset(vec![vec![0.0], vec![1.0]], vec![1, 2], 2);
        assert!(matches!(
            FcmClassifier::fit(&train, 2, &FcmParams::default(), 0),
            Err(Error::TooFewClassSamples { class: 1, .. })
        ));
    }

    #[test]
    fn knn_exact_match_and_majority() {
        let train = dataset(
            vec![
                vec![0.0, 0.0],
                vec![1.0, 1.0],
                vec![0.9, 0.9],
                vec![0.2, 0.1],
            ],
            vec![1, 2, 2, 3],
            3,
        );
        assert_eq!(knn_classify(&train, &[1.0, 1.0], 1).unwrap(), 2);
        // Neighbors labeled (2, 2, 3)-ish: majority 2.
        assert_eq!(knn_classify(&train, &[0.95, 0.95], 3).unwrap(), 2);
    }

    #[test]
    fn knn_vote_tie_breaks_by_mean_distance() {
        let train = dataset(vec![vec![0.0], vec![1.0]], vec![1, 2], 2);
        // k = 2: one vote each; class 1's neighbor is nearer.
        assert_eq!(knn_classify(&train, &[0.3], 2).unwrap(), 1);
        assert_eq!(knn_classify(&train, &[0.7], 2).unwrap(), 2);
        // Perfectly centered: lower class label wins.
        assert_eq!(knn_classify(&train, &[0.5], 2).unwrap(), 1);
    }

    #[test]
    fn knn_rejects_bad_k_and_empty_sets() {
        let train = dataset(vec![vec![0.0], vec![1.0]], vec![1, 2], 2);
        assert!(knn_classify(&train, &[0.5], 0).is_err());
        assert!(knn_classify(&train, &[0.5], 3).is_err());
    }

    #[test]
    fn knn_k1_reproduces_training_labels() {
        let (rows, labels) = two_clouds(15, 21);
        let train = dataset(rows.clone(), labels.clone(), 2);
        for (row, &label) in rows.iter().zip(&labels) {
            assert_eq!(knn_classify(&train, row, 1).unwrap(), label);
        }
    }

    #[test]
    fn kmeans_each_point_its_own_center() {
        let rows = vec![vec![0.0], vec![5.0], vec![9.0]];
        let result = kmeans(&rows, 3, 1e-9, 50, 13).unwrap();
        assert!(result.wcss < 1e-18);
    }

    #[test]
    fn kmeans_recovers_two_clouds() {
        let (rows, labels) = two_clouds(25, 31);
        let result = kmeans(&rows, 2, 1e-9, 100, 4).unwrap();
        // All points of one generating label share one cluster.
        let first = result.assignments[0];
        for (a, &label) in result.assignments.iter().zip(&labels) {
            assert_eq!(*a == first, label == labels[0]);
        }
    }

    #[test]
    fn kmeans_wcss_is_non_increasing() {
        let (rows, _) = two_clouds(20, 41);
        for seed in 0..5 {
            let result = kmeans(&rows, 4, 0.0, 100, seed).unwrap();
            for w in result.wcss_history.windows(2) {
                assert!(w[1] <= w[0] + 1e-10, "WCSS rose: {:?}", w);
            }
        }
    }

    #[test]
    fn kmeans_classifier_labels_clusters() {
        let (rows, labels) = two_clouds(20, 51);
        let train = dataset(rows, labels, 2);
        let clf = KmeansClassifier::fit(&train, 1e-9, 100, 8).unwrap();
        assert_eq!(clf.predict(&[0.0, 0.0]), 1);
        assert_eq!(clf.predict(&[100.0, 100.0]), 2);
    }

    #[test]
    fn baselines_are_deterministic_given_seed() {
        let (rows, labels) = two_clouds(12, 61);
        let train = dataset(rows.clone(), labels, 2);
        let a = FcmClassifier::fit(&train, 2, &FcmParams::default(), 9).unwrap();
        let b = FcmClassifier::fit(&train, 2, &FcmParams::default(), 9).unwrap();
        for row in &rows {
            assert_eq!(a.predict(row), b.predict(row));
        }
        let ka = kmeans(&rows, 3, 1e-9, 100, 9).unwrap();
        let kb = kmeans(&rows, 3, 1e-9, 100, 9).unwrap();
        assert_eq!(ka.assignments, kb.assignments);
        assert_eq!(ka.wcss.to_bits(), kb.wcss.to_bits());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]

            #[test]
            fn fcm_membership_columns_sum_to_one(seed in 0u64..200, c in 1usize..4) {
                let (rows, _) = two_clouds(8, seed);
                let state = fcm(&rows, c, &FcmParams::default(), seed).unwrap();
                for k in 0..rows.len() {
                    let sum: f64 = (0..c).map(|i| state.memberships[i][k]).sum();
                    prop_assert!((sum - 1.0).abs() < 1e-9);
                    for i in 0..c {
                        let u = state.memberships[i][k];
                        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&u));
                    }
                }
            }

            #[test]
            fn fcm_objective_monotone_random(seed in 0u64..200) {
                let (rows, _) = two_clouds(10, seed.wrapping_add(1000));
                let state = fcm(&rows, 3, &FcmParams::default(), seed).unwrap();
                for w in state.objective_history.windows(2) {
                    prop_assert!(w[1] <= w[0] + 1e-10);
                }
            }
        }
    }
}
