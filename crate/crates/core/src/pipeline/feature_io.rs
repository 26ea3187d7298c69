//! Feature-table CSV: header `contrast,asm,homogeneity,idm,energy,entropy,
//! variance,label`, one row per image, preceded by a fingerprint comment.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::texture::FeatureVector;

pub const FEATURE_CSV_HEADER: &str = "contrast,asm,homogeneity,idm,energy,entropy,variance,label";

/// Parsed feature table.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub fingerprint: String,
}

impl FeatureTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0)
    }
}

pub fn write_feature_csv(
    path: impl AsRef<Path>,
    rows: &[(FeatureVector, usize)],
    fingerprint: &str,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    let _ = writeln!(out, "# fingerprint {fingerprint}");
    let _ = writeln!(out, "{FEATURE_CSV_HEADER}");
    for (features, label) in rows {
        for v in features.as_array() {
            let _ = write!(out, "{v:.12e},");
        }
        let _ = writeln!(out, "{label}");
    }
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_feature_csv(path: impl AsRef<Path>) -> Result<FeatureTable> {
    let path = path.as_ref();
    let pstr = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: pstr.clone(),
        source,
    })?;

    let mut fingerprint = String::new();
    let mut header_seen = false;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(fp) = rest.trim().strip_prefix("fingerprint ") {
                fingerprint = fp.trim().to_string();
            }
            continue;
        }
        if !header_seen {
            if line != FEATURE_CSV_HEADER {
                return Err(Error::InvalidConfig(format!(
                    "{pstr}: line {}: expected feature header '{FEATURE_CSV_HEADER}'",
                    lineno + 1
                )));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::InvalidConfig(format!(
                "{pstr}: line {}: expected 8 columns, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let mut row = Vec::with_capacity(7);
        for f in &fields[..7] {
            row.push(f.trim().parse::<f64>().map_err(|_| {
                Error::InvalidConfig(format!(
                    "{pstr}: line {}: bad feature value '{f}'",
                    lineno + 1
                ))
            })?);
        }
        let label = fields[7].trim().parse::<usize>().map_err(|_| {
            Error::InvalidConfig(format!(
                "{pstr}: line {}: bad label '{}'",
                lineno + 1,
                fields[7]
            ))
        })?;
        rows.push(row);
        labels.push(label);
    }
    if !header_seen {
        return Err(Error::InvalidConfig(format!("{pstr}: missing header")));
    }
    Ok(FeatureTable {
        rows,
        labels,
        fingerprint,
    })
}
