//! Generalized-bell membership functions, grid-partition rule generation,
//! and rule firing strengths: the premise half of the fuzzy classifier.

use crate::error::{Error, Result};

/// Generalized bell membership function `1 / (1 + |(x - c) / a|^(2b))`.
///
/// `a` is the width, `b` the slope exponent, `c` the center. Membership is
/// 1 at the center, 0.5 at `c +/- a`, and strictly positive everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellMf {
    a: f64,
    b: f64,
    c: f64,
}

impl BellMf {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if a.is_nan() || a <= 0.0 || !a.is_finite() {
            return Err(Error::InvalidMembership(format!(
                "width a must be positive and finite, got {a}"
            )));
        }
        if b.is_nan() || b <= 0.0 || !b.is_finite() {
            return Err(Error::InvalidMembership(format!(
                "exponent b must be positive and finite, got {b}"
            )));
        }
        if !c.is_finite() {
            return Err(Error::InvalidMembership(format!(
                "center c must be finite, got {c}"
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn set_params(&mut self, a: f64, b: f64, c: f64) -> Result<()> {
        *self = Self::new(a, b, c)?;
        Ok(())
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let u = ((x - self.c) / self.a).abs();
        1.0 / (1.0 + u.powf(2.0 * self.b))
    }

    /// Partial derivatives `(d mu/d a, d mu/d b, d mu/d c)` at `x`.
    ///
    /// All three vanish at `x = c`, where the membership peaks.
    pub fn grad(&self, x: f64) -> (f64, f64, f64) {
        let u = ((x - self.c) / self.a).abs();
        if u == 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let mu = 1.0 / (1.0 + u.powf(2.0 * self.b));
        let common = 2.0 * mu * (1.0 - mu);
        let da = common * self.b / self.a;
        let db = -common * u.ln();
        let dc = common * self.b / (x - self.c);
        (da, db, dc)
    }
}

/// One fuzzy if-then rule: an MF index per input plus a linear consequent.
///
/// The consequent has `n_inputs + 1` coefficients; the last one is the
/// constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedent: Vec<usize>,
    pub consequent: Vec<f64>,
}

/// Membership functions per input plus the rule list.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    pub n_inputs: usize,
    pub mfs_per_input: usize,
    /// `mfs[input][mf_index]`
    pub mfs: Vec<Vec<BellMf>>,
    pub rules: Vec<Rule>,
}

impl RuleBase {
    /// Grid partition over the observed feature ranges: two bell MFs per
    /// input (centers at the min and max, width = half the range, slope 2)
    /// and one rule per combination of MF choices, consequents zeroed.
    ///
    /// `names` supplies feature names for error reporting; indices are used
    /// when it is `None`.
    pub fn grid_partition(rows: &[Vec<f64>], names: Option<&[&str]>) -> Result<RuleBase> {
        if rows.len() < 2 {
            return Err(Error::EmptyTrainingSet);
        }
        let n_inputs = rows[0].len();
        for row in rows {
            if row.len() != n_inputs {
                return Err(Error::DimensionMismatch {
                    expected: n_inputs,
                    got: row.len(),
                });
            }
        }

        let mut mfs = Vec::with_capacity(n_inputs);
        for d in 0..n_inputs {
            let mut min = f64::MAX;
            let mut max = f64::MIN;
            for row in rows {
                min = min.min(row[d]);
                max = max.max(row[d]);
            }
            if max.is_nan() || min.is_nan() || max <= min {
                let name = names
                    .and_then(|ns| ns.get(d).map(|s| s.to_string()))
                    .unwrap_or_else(|| format!("input{d}"));
                return Err(Error::DegenerateFeature(name));
            }
            let a = (max - min) / 2.0;
            mfs.push(vec![BellMf::new(a, 2.0, min)?, BellMf::new(a, 2.0, max)?]);
        }

        let mfs_per_input = 2;
        let n_rules = mfs_per_input_pow(mfs_per_input, n_inputs);
        let mut rules = Vec::with_capacity(n_rules);
        for idx in 0..n_rules {
            let mut antecedent = Vec::with_capacity(n_inputs);
            let mut rest = idx;
            for _ in 0..n_inputs {
                antecedent.push(rest % mfs_per_input);
                rest /= mfs_per_input;
            }
            rules.push(Rule {
                antecedent,
                consequent: vec![0.0; n_inputs + 1],
            });
        }

        Ok(RuleBase {
            n_inputs,
            mfs_per_input,
            mfs,
            rules,
        })
    }

    /// Product-t-norm firing strength of every rule at `x`.
    ///
    /// Bell memberships never reach zero, so all strengths are strictly
    /// positive.
    pub fn firing_strengths(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_inputs {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs,
                got: x.len(),
            });
        }
        // Memberships are shared across rules; evaluate each once.
        let mut mu = vec![0.0; self.n_inputs * self.mfs_per_input];
        for d in 0..self.n_inputs {
            for m in 0..self.mfs_per_input {
                mu[d * self.mfs_per_input + m] = self.mfs[d][m].eval(x[d]);
            }
        }
        Ok(self
            .rules
            .iter()
            .map(|rule| {
                rule.antecedent
                    .iter()
                    .enumerate()
                    .map(|(d, &m)| mu[d * self.mfs_per_input + m])
                    .product()
            })
            .collect())
    }

    /// Keeps the `k` rules with the largest total firing strength over the
    /// given sample rows. Ties break toward the lower rule index.
    pub fn pruned_to_top_k(&self, rows: &[Vec<f64>], k: usize) -> Result<RuleBase> {
        if k == 0 || k > self.rules.len() {
            return Err(Error::InvalidConfig(format!(
                "rule count {k} outside 1..={}",
                self.rules.len()
            )));
        }
        let mut totals = vec![0.0f64; self.rules.len()];
        for row in rows {
            for (t, w) in totals.iter_mut().zip(self.firing_strengths(row)?) {
                *t += w;
            }
        }
        let mut order: Vec<usize> = (0..self.rules.len()).collect();
        order.sort_by(|&i, &j| {
            totals[j]
                .partial_cmp(&totals[i])
                .expect("strengths are finite")
                .then(i.cmp(&j))
        });
        let mut keep: Vec<usize> = order.into_iter().take(k).collect();
        keep.sort_unstable();
        Ok(RuleBase {
            n_inputs: self.n_inputs,
            mfs_per_input: self.mfs_per_input,
            mfs: self.mfs.clone(),
            rules: keep.into_iter().map(|i| self.rules[i].clone()).collect(),
        })
    }
}

fn mfs_per_input_pow(base: usize, exp: usize) -> usize {
    base.checked_pow(exp as u32)
        .expect("rule count overflows usize")
}
