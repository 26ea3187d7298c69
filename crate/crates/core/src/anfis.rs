//! Five-layer Takagi-Sugeno neuro-fuzzy classifier: forward inference,
//! hybrid least-squares / gradient-descent training, class decoding, and
//! model persistence.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fuzzy::RuleBase;

const MODEL_MAGIC: &str = "ANFIS/1";
const RIDGE_LAMBDA: f64 = 1e-8;
const MIN_PREMISE_PARAM: f64 = 1e-6;

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    /// Solve consequents by least squares each epoch (hybrid learning).
    /// With `false`, only the premise parameters move.
    pub use_lse: bool,
    /// Reserved for stochastic variants; batch training is deterministic
    /// and does not consume randomness.
    pub seed: u64,
    /// Early-stop threshold on epoch-over-epoch loss improvement.
    pub min_improvement: f64,
    /// Optional rule-subset selection: keep only the k rules with the
    /// largest total firing strength on the training data.
    pub max_rules: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            learning_rate: 0.01,
            use_lse: true,
            seed: 0,
            min_improvement: 1e-7,
            max_rules: None,
        }
    }
}

/// Intermediate layer outputs of one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    /// Layer 2: product firing strength per rule.
    pub strengths: Vec<f64>,
    /// Layer 3: strengths normalized to sum to 1.
    pub normalized: Vec<f64>,
    /// First-order consequent value per rule (before weighting).
    pub rule_outputs: Vec<f64>,
    /// Layer 5: the single system output.
    pub output: f64,
}

/// A trained (or trainable) neuro-fuzzy classifier.
///
/// Inputs are affinely rescaled to `[0, 1]` using the per-dimension
/// `(min, max)` ranges recorded at construction; the rule base operates on
/// the rescaled values.
#[derive(Debug, Clone, PartialEq)]
pub struct AnfisModel {
    pub rulebase: RuleBase,
    pub n_classes: usize,
    /// Per-input `(min, max)` recorded from the training features.
    pub normalization: Vec<(f64, f64)>,
    /// Configuration fingerprint carried into the model file; free-form.
    pub fingerprint: String,
}

impl AnfisModel {
    /// Builds an untrained model: records input normalization from the
    /// feature rows and grid-partitions each input into two bell MFs.
    pub fn new(
        rows: &[Vec<f64>],
        n_classes: usize,
        names: Option<&[&str]>,
        max_rules: Option<usize>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        if n_classes == 0 {
            return Err(Error::InvalidConfig("n_classes must be positive".into()));
        }
        let n_inputs = rows[0].len();
        let mut normalization = Vec::with_capacity(n_inputs);
        for d in 0..n_inputs {
            let mut min = f64::MAX;
            let mut max = f64::MIN;
            for row in rows {
                if row.len() != n_inputs {
                    return Err(Error::DimensionMismatch {
                        expected: n_inputs,
                        got: row.len(),
                    });
                }
                min = min.min(row[d]);
                max = max.max(row[d]);
            }
            if max.is_nan() || min.is_nan() || max <= min {
                let name = names
                    .and_then(|ns| ns.get(d).map(|s| s.to_string()))
                    .unwrap_or_else(|| format!("input{d}"));
                return Err(Error::DegenerateFeature(name));
            }
            normalization.push((min, max));
        }

        let normalized: Vec<Vec<f64>> = rows
            .iter()
            .map(|row| normalize_row(row, &normalization))
            .collect();
        let mut rulebase = RuleBase::grid_partition(&normalized, names)?;
        if let Some(k) = max_rules {
            if k < rulebase.rules.len() {
                rulebase = rulebase.pruned_to_top_k(&normalized, k)?;
            }
        }
        Ok(Self {
            rulebase,
            n_classes,
            normalization,
            fingerprint: String::new(),
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.rulebase.n_inputs
    }

    /// Full forward pass returning every layer's outputs.
    pub fn trace(&self, x: &[f64]) -> Result<ForwardTrace> {
        if x.len() != self.n_inputs() {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs(),
                got: x.len(),
            });
        }
        let xn = normalize_row(x, &self.normalization);
        let strengths = self.rulebase.firing_strengths(&xn)?;
        let total: f64 = strengths.iter().sum();
        if total.is_nan() || total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidMembership(format!(
                "firing strengths sum to {total}; input is far outside the trained range"
            )));
        }
        let normalized: Vec<f64> = strengths.iter().map(|w| w / total).collect();
        let rule_outputs: Vec<f64> = self
            .rulebase
            .rules
            .iter()
            .map(|rule| consequent_value(&rule.consequent, &xn))
            .collect();
        let output = normalized
            .iter()
            .zip(&rule_outputs)
            .map(|(w, g)| w * g)
            .sum();
        Ok(ForwardTrace {
            strengths,
            normalized,
            rule_outputs,
            output,
        })
    }

    /// The single real-valued system output for a feature vector.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        Ok(self.trace(x)?.output)
    }

    /// Rounds the output to the nearest class label, half-up, clamped to
    /// `1..=n_classes`.
    pub fn predict_class(&self, x: &[f64]) -> Result<usize> {
        let y = self.forward(x)?;
        let rounded = (y + 0.5).floor();
        let label = if rounded < 1.0 {
            1
        } else if rounded >= self.n_classes as f64 {
            self.n_classes
        } else {
            rounded as usize
        };
        Ok(label)
    }

    /// Least-squares consequent update with the premises held fixed.
    ///
    /// Solves `min ||Phi theta - y||^2 + lambda ||theta||^2` over all
    /// consequent coefficients via the normal equations with ridge damping
    /// `lambda = 1e-8`, so rank-deficient designs stay solvable.
    pub fn lse_consequents(&mut self, rows: &[Vec<f64>], targets: &[f64]) -> Result<()> {
        if rows.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        if rows.len() != targets.len() {
            return Err(Error::LengthMismatch(rows.len(), targets.len()));
        }
        let n_rules = self.rulebase.rules.len();
        let block = self.n_inputs() + 1;
        let m = n_rules * block;

        // Accumulate Phi^T Phi and Phi^T y one sample at a time.
        let mut gram = vec![0.0f64; m * m];
        let mut rhs = vec![0.0f64; m];
        let mut design_row = vec![0.0f64; m];
        for (row, &y) in rows.iter().zip(targets) {
            if row.len() != self.n_inputs() {
                return Err(Error::DimensionMismatch {
                    expected: self.n_inputs(),
                    got: row.len(),
                });
            }
            let xn = normalize_row(row, &self.normalization);
            let strengths = self.rulebase.firing_strengths(&xn)?;
            let total: f64 = strengths.iter().sum();
            for (r, w) in strengths.iter().enumerate() {
                let wn = w / total;
                let base = r * block;
                for (d, &v) in xn.iter().enumerate() {
                    design_row[base + d] = wn * v;
                }
                design_row[base + block - 1] = wn;
            }
            for i in 0..m {
                let di = design_row[i];
                if di == 0.0 {
                    continue;
                }
                rhs[i] += di * y;
                let row_i = i * m;
                for j in i..m {
                    gram[row_i + j] += di * design_row[j];
                }
            }
        }
        // Mirror the upper triangle and add the ridge.
        for i in 0..m {
            gram[i * m + i] += RIDGE_LAMBDA;
            for j in i + 1..m {
                gram[j * m + i] = gram[i * m + j];
            }
        }

        let theta = solve_spd(gram, m, rhs)?;
        for (r, rule) in self.rulebase.rules.iter_mut().enumerate() {
            rule.consequent
                .copy_from_slice(&theta[r * block..(r + 1) * block]);
        }
        Ok(())
    }

    /// Mean squared error over the batch and its gradient with respect to
    /// every premise parameter, laid out as `(a, b, c)` per MF, MFs in
    /// input-major order.
    pub fn loss_and_premise_gradient(
        &self,
        rows: &[Vec<f64>],
        targets: &[f64],
    ) -> Result<(f64, Vec<f64>)> {
        if rows.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        if rows.len() != targets.len() {
            return Err(Error::LengthMismatch(rows.len(), targets.len()));
        }
        let rb = &self.rulebase;
        let n_inputs = rb.n_inputs;
        let per_input = rb.mfs_per_input;
        let n = rows.len() as f64;

        let mut loss = 0.0;
        let mut grad = vec![0.0f64; n_inputs * per_input * 3];
        let mut mu = vec![0.0f64; n_inputs * per_input];
        let mut dmu_acc = vec![0.0f64; n_inputs * per_input];

        for (row, &y) in rows.iter().zip(targets) {
            let xn = normalize_row(row, &self.normalization);
            if xn.len() != n_inputs {
                return Err(Error::DimensionMismatch {
                    expected: n_inputs,
                    got: xn.len(),
                });
            }
            for d in 0..n_inputs {
                for mi in 0..per_input {
                    mu[d * per_input + mi] = rb.mfs[d][mi].eval(xn[d]);
                }
            }
            let strengths: Vec<f64> = rb
                .rules
                .iter()
                .map(|rule| {
                    rule.antecedent
                        .iter()
                        .enumerate()
                        .map(|(d, &mi)| mu[d * per_input + mi])
                        .product()
                })
                .collect();
            let total: f64 = strengths.iter().sum();
            let rule_outputs: Vec<f64> = rb
                .rules
                .iter()
                .map(|rule| consequent_value(&rule.consequent, &xn))
                .collect();
            let output: f64 = strengths
                .iter()
                .zip(&rule_outputs)
                .map(|(w, g)| w * g)
                .sum::<f64>()
                / total;
            let err = output - y;
            loss += err * err / n;

            // dE/d mu, accumulated over the rules sharing each MF.
            dmu_acc.iter_mut().for_each(|v| *v = 0.0);
            for (rule, (&w, &g)) in rb.rules.iter().zip(strengths.iter().zip(&rule_outputs)) {
                let delta = 2.0 * err / n * (g - output) / total;
                if delta == 0.0 {
                    continue;
                }
                for (d, &mi) in rule.antecedent.iter().enumerate() {
                    let m_val = mu[d * per_input + mi];
                    dmu_acc[d * per_input + mi] += delta * w / m_val;
                }
            }
            for d in 0..n_inputs {
                for mi in 0..per_input {
                    let acc = dmu_acc[d * per_input + mi];
                    if acc == 0.0 {
                        continue;
                    }
                    let (da, db, dc) = rb.mfs[d][mi].grad(xn[d]);
                    let base = (d * per_input + mi) * 3;
                    grad[base] += acc * da;
                    grad[base + 1] += acc * db;
                    grad[base + 2] += acc * dc;
                }
            }
        }
        Ok((loss, grad))
    }

    /// Hybrid training: per epoch, optionally re-solve the consequents by
    /// least squares, record the mean squared error, then take one
    /// gradient-descent step on every premise parameter. Stops early when
    /// the epoch-over-epoch improvement drops below
    /// `cfg.min_improvement`. Returns the per-epoch loss history.
    pub fn train(
        &mut self,
        rows: &[Vec<f64>],
        labels: &[usize],
        cfg: &TrainConfig,
    ) -> Result<Vec<f64>> {
        if rows.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        if rows.len() != labels.len() {
            return Err(Error::LengthMismatch(rows.len(), labels.len()));
        }
        if cfg.epochs == 0 || cfg.learning_rate.is_nan() || cfg.learning_rate < 0.0 {
            return Err(Error::InvalidConfig(
                "epochs must be >= 1 and learning_rate >= 0".into(),
            ));
        }
        for &label in labels {
            if label == 0 || label > self.n_classes {
                return Err(Error::LabelOutOfRange {
                    label,
                    n_classes: self.n_classes,
                });
            }
        }
        let targets: Vec<f64> = labels.iter().map(|&l| l as f64).collect();

        let mut history = Vec::with_capacity(cfg.epochs);
        for epoch in 0..cfg.epochs {
            if cfg.use_lse {
                self.lse_consequents(rows, &targets)?;
            }
            let (loss, grad) = self.loss_and_premise_gradient(rows, &targets)?;
            history.push(loss);
            if epoch > 0 {
                let improvement = history[epoch - 1] - loss;
                if improvement < cfg.min_improvement {
                    break;
                }
            }
            self.apply_premise_step(&grad, cfg.learning_rate)?;
        }
        Ok(history)
    }

    fn apply_premise_step(&mut self, grad: &[f64], lr: f64) -> Result<()> {
        let per_input = self.rulebase.mfs_per_input;
        for d in 0..self.rulebase.n_inputs {
            for mi in 0..per_input {
                let base = (d * per_input + mi) * 3;
                let mf = &mut self.rulebase.mfs[d][mi];
                let a = (mf.a() - lr * grad[base]).max(MIN_PREMISE_PARAM);
                let b = (mf.b() - lr * grad[base + 1]).max(MIN_PREMISE_PARAM);
                let c = mf.c() - lr * grad[base + 2];
                mf.set_params(a, b, c)?;
            }
        }
        Ok(())
    }

    /// Writes the model as a versioned, self-describing text document.
    /// Floats use Rust's shortest round-trip rendering, so loading
    /// reproduces every parameter bit-exactly.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        let _ = writeln!(out, "{MODEL_MAGIC}");
        let fp = if self.fingerprint.is_empty() {
            "-"
        } else {
            &self.fingerprint
        };
        let _ = writeln!(out, "fingerprint {fp}");
        let _ = writeln!(out, "n_inputs {}", self.rulebase.n_inputs);
        let _ = writeln!(out, "n_classes {}", self.n_classes);
        let _ = writeln!(out, "mfs_per_input {}", self.rulebase.mfs_per_input);
        for &(min, max) in &self.normalization {
            let _ = writeln!(out, "norm {min} {max}");
        }
        for input_mfs in &self.rulebase.mfs {
            for mf in input_mfs {
                let _ = writeln!(out, "mf {} {} {}", mf.a(), mf.b(), mf.c());
            }
        }
        let _ = writeln!(out, "rules {}", self.rulebase.rules.len());
        for rule in &self.rulebase.rules {
            let ant: Vec<String> = rule.antecedent.iter().map(|a| a.to_string()).collect();
            let coef: Vec<String> = rule.consequent.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "rule {} : {}", ant.join(" "), coef.join(" "));
        }
        fs::write(path, out).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Loads a model written by [`AnfisModel::save`].
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let pstr = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: pstr.clone(),
            source,
        })?;
        let corrupt = |reason: &str| Error::CorruptModel {
            path: pstr.clone(),
            reason: reason.to_string(),
        };

        let mut lines = text.lines();
        match lines.next() {
            Some(line) if line.trim() == MODEL_MAGIC => {}
            _ => {
                return Err(Error::ModelVersionMismatch {
                    path: pstr,
                    expected: MODEL_MAGIC.to_string(),
                })
            }
        }

        let mut field = |key: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| corrupt(&format!("missing '{key}' line")))?;
            let rest = line
                .strip_prefix(key)
                .ok_or_else(|| corrupt(&format!("expected '{key}' line, got '{line}'")))?;
            Ok(rest.trim().to_string())
        };

        let fingerprint = field("fingerprint")?;
        let fingerprint = if fingerprint == "-" {
            String::new()
        } else {
            fingerprint
        };
        let n_inputs: usize = field("n_inputs")?
            .parse()
            .map_err(|_| corrupt("bad n_inputs"))?;
        let n_classes: usize = field("n_classes")?
            .parse()
            .map_err(|_| corrupt("bad n_classes"))?;
        let mfs_per_input: usize = field("mfs_per_input")?
            .parse()
            .map_err(|_| corrupt("bad mfs_per_input"))?;
        if n_inputs == 0 || n_classes == 0 || mfs_per_input == 0 {
            return Err(corrupt("counts must be positive"));
        }

        let mut normalization = Vec::with_capacity(n_inputs);
        for _ in 0..n_inputs {
            let value = field("norm")?;
            let parts: Vec<f64> = value
                .split_ascii_whitespace()
                .map(|t| t.parse().map_err(|_| corrupt("bad norm value")))
                .collect::<Result<_>>()?;
            if parts.len() != 2 || parts[0].is_nan() || parts[1].is_nan() || parts[1] <= parts[0] {
                return Err(corrupt("norm line needs min < max"));
            }
            normalization.push((parts[0], parts[1]));
        }

        let mut mfs = Vec::with_capacity(n_inputs);
        for _ in 0..n_inputs {
            let mut input_mfs = Vec::with_capacity(mfs_per_input);
            for _ in 0..mfs_per_input {
                let value = field("mf")?;
                let parts: Vec<f64> = value
                    .split_ascii_whitespace()
                    .map(|t| t.parse().map_err(|_| corrupt("bad mf value")))
                    .collect::<Result<_>>()?;
                if parts.len() != 3 {
                    return Err(corrupt("mf line needs a b c"));
                }
                input_mfs.push(
                    crate::fuzzy::BellMf::new(parts[0], parts[1], parts[2])
                        .map_err(|e| corrupt(&e.to_string()))?,
                );
            }
            mfs.push(input_mfs);
        }

        let n_rules: usize = field("rules")?.parse().map_err(|_| corrupt("bad rules"))?;
        let mut rules = Vec::with_capacity(n_rules);
        for _ in 0..n_rules {
            let value = field("rule")?;
            let (ant_text, coef_text) = value
                .split_once(':')
                .ok_or_else(|| corrupt("rule line needs ':' separator"))?;
            let antecedent: Vec<usize> = ant_text
                .split_ascii_whitespace()
                .map(|t| t.parse().map_err(|_| corrupt("bad antecedent index")))
                .collect::<Result<_>>()?;
            let consequent: Vec<f64> = coef_text
                .split_ascii_whitespace()
                .map(|t| t.parse().map_err(|_| corrupt("bad consequent value")))
                .collect::<Result<_>>()?;
            if antecedent.len() != n_inputs {
                return Err(corrupt("antecedent length mismatch"));
            }
            if consequent.len() != n_inputs + 1 {
                return Err(corrupt("consequent length mismatch"));
            }
            if antecedent.iter().any(|&m| m >= mfs_per_input) {
                return Err(corrupt("antecedent index out of range"));
            }
            rules.push(crate::fuzzy::Rule {
                antecedent,
                consequent,
            });
        }

        Ok(Self {
            rulebase: RuleBase {
                n_inputs,
                mfs_per_input,
                mfs,
                rules,
            },
            n_classes,
            normalization,
            fingerprint,
        })
    }
}

#[inline]
fn normalize_row(row: &[f64], normalization: &[(f64, f64)]) -> Vec<f64> {
    row.iter()
        .zip(normalization)
        .map(|(&v, &(min, max))| (v - min) / (max - min))
        .collect()
}

#[inline]
fn consequent_value(coef: &[f64], xn: &[f64]) -> f64 {
    let linear: f64 = coef[..xn.len()].iter().zip(xn).map(|(c, x)| c * x).sum();
    linear + coef[xn.len()]
}

/// Cholesky solve of a symmetric positive-definite system.
fn solve_spd(mut g: Vec<f64>, m: usize, mut b: Vec<f64>) -> Result<Vec<f64>> {
    // Factor G = L L^T in place (lower triangle).
    for i in 0..m {
        for j in 0..=i {
            let mut sum = g[i * m + j];
            for k in 0..j {
                sum -= g[i * m + k] * g[j * m + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::InvalidConfig(
                        "least-squares system is not positive definite".into(),
                    ));
                }
                g[i * m + j] = sum.sqrt();
            } else {
                g[i * m + j] = sum / g[j * m + j];
            }
        }
    }
    // Forward then backward substitution.
    for i in 0..m {
        let mut sum = b[i];
        for k in 0..i {
            sum -= g[i * m + k] * b[k];
        }
        b[i] = sum / g[i * m + i];
    }
    for i in (0..m).rev() {
        let mut sum = b[i];
        for k in i + 1..m {
            sum -= g[k * m + i] * b[k];
        }
        b[i] = sum / g[i * m + i];
    }
    Ok(b)
}
