//! Confusion counting, sensitivity/specificity/accuracy, multi-class
//! aggregation, and comparison-report serialization.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One-vs-rest case tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }
}

/// Metrics of one confusion table, as percentages in `[0, 100]`.
///
/// A metric whose denominator is zero is `None` (undefined), never silently
/// 0 or 100.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryMetrics {
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub accuracy: Option<f64>,
}

/// Per-class slice of a multi-class evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    pub class: usize,
    pub counts: ConfusionCounts,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
}

/// Evaluation summary for one method on one split.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub method: String,
    pub fingerprint: String,
    pub cases: usize,
    /// Macro-averaged over classes with a defined denominator.
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    /// Overall fraction correct, in percent.
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    /// One entry per class whose sensitivity or specificity was undefined
    /// and therefore excluded from the macro average.
    pub warnings: Vec<String>,
}

/// Tallies one-vs-rest confusion counts for `positive_class`.
pub fn confusion(
    y_true: &[usize],
    y_pred: &[usize],
    positive_class: usize,
) -> Result<ConfusionCounts> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch(y_true.len(), y_pred.len()));
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut counts = ConfusionCounts::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t == positive_class, p == positive_class) {
            (true, true) => counts.tp += 1,
            (false, false) => counts.tn += 1,
            (false, true) => counts.fp += 1,
            (true, false) => counts.fn_ += 1,
        }
    }
    Ok(counts)
}

/// Sensitivity = TP/(TP+FN) * 100, specificity = TN/(TN+FP) * 100,
/// accuracy = (TP+TN)/total * 100.
pub fn metrics(c: &ConfusionCounts) -> BinaryMetrics {
    let ratio = |num: usize, den: usize| -> Option<f64> {
        if den == 0 {
            None
        } else {
            Some(num as f64 * 100.0 / den as f64)
        }
    };
    BinaryMetrics {
        sensitivity: ratio(c.tp, c.tp + c.fn_),
        specificity: ratio(c.tn, c.tn + c.fp),
        accuracy: ratio(c.tp + c.tn, c.total()),
    }
}

/// One-vs-rest evaluation of a multi-class prediction.
///
/// Macro sensitivity/specificity average the per-class values over classes
/// with defined denominators; classes excluded this way are listed in
/// `warnings`. Accuracy is the overall fraction correct.
pub fn multiclass_report(
    y_true: &[usize],
    y_pred: &[usize],
    n_classes: usize,
) -> Result<MetricsReport> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch(y_true.len(), y_pred.len()));
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput);
    }
    for &label in y_true.iter().chain(y_pred) {
        if label == 0 || label > n_classes {
            return Err(Error::LabelOutOfRange { label, n_classes });
        }
    }

    let mut per_class = Vec::with_capacity(n_classes);
    let mut warnings = Vec::new();
    let mut sens_sum = 0.0;
    let mut sens_count = 0usize;
    let mut spec_sum = 0.0;
    let mut spec_count = 0usize;
    for class in 1..=n_classes {
        let counts = confusion(y_true, y_pred, class)?;
        let m = metrics(&counts);
        match m.sensitivity {
            Some(v) => {
                sens_sum += v;
                sens_count += 1;
            }
            None => warnings.push(format!(
                "sensitivity undefined for class {class} (no positive cases)"
            )),
        }
        match m.specificity {
            Some(v) => {
                spec_sum += v;
                spec_count += 1;
            }
            None => warnings.push(format!(
                "specificity undefined for class {class} (no negative cases)"
            )),
        }
        per_class.push(ClassMetrics {
            class,
            counts,
            sensitivity: m.sensitivity,
            specificity: m.specificity,
        });
    }

    let correct = y_true.iter().zip(y_pred).filter(|(t, p)| t == p).count();
    Ok(MetricsReport {
        method: String::new(),
        fingerprint: String::new(),
        cases: y_true.len(),
        sensitivity: (sens_count > 0).then(|| sens_sum / sens_count as f64),
        specificity: (spec_count > 0).then(|| spec_sum / spec_count as f64),
        accuracy: correct as f64 * 100.0 / y_true.len() as f64,
        per_class,
        warnings,
    })
}

fn render_metric(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v}"),
        None => "undefined".to_string(),
    }
}

/// Renders a report as a flat key-value document, one datum per line.
pub fn render_report(report: &MetricsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "method {}", report.method);
    let _ = writeln!(out, "fingerprint {}", report.fingerprint);
    let _ = writeln!(out, "cases {}", report.cases);
    let _ = writeln!(out, "accuracy {}", report.accuracy);
    let _ = writeln!(
        out,
        "macro_sensitivity {}",
        render_metric(report.sensitivity)
    );
    let _ = writeln!(
        out,
        "macro_specificity {}",
        render_metric(report.specificity)
    );
    for c in &report.per_class {
        let _ = writeln!(
            out,
            "class {} tp {} tn {} fp {} fn {} sensitivity {} specificity {}",
            c.class,
            c.counts.tp,
            c.counts.tn,
            c.counts.fp,
            c.counts.fn_,
            render_metric(c.sensitivity),
            render_metric(c.specificity),
        );
    }
    for w in &report.warnings {
        let _ = writeln!(out, "warning {w}");
    }
    out
}

/// Renders the comparison table across methods as CSV with columns
/// `method,sensitivity,specificity,accuracy`.
pub fn render_comparison_csv(reports: &[MetricsReport], fingerprint: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# fingerprint {fingerprint}");
    let _ = writeln!(out, "method,sensitivity,specificity,accuracy");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.method,
            render_metric(r.sensitivity),
            render_metric(r.specificity),
            r.accuracy
        );
    }
    out
}
