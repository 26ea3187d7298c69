//! Dataset manifest: image paths, class labels, and train/test split tags.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    /// Image path; relative paths resolve against the manifest's directory.
    pub path: PathBuf,
    pub label: usize,
    pub split: Split,
}

/// The dataset description consumed by `features`: CSV `path,label,split`.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
    pub n_classes: usize,
}

impl Manifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidManifest("no entries".into()));
        }
        let mut seen = BTreeSet::new();
        let mut n_classes = 0;
        for entry in &entries {
            if entry.label == 0 {
                return Err(Error::InvalidManifest(format!(
                    "label must be >= 1 ({} has 0)",
                    entry.path.display()
                )));
            }
            if !seen.insert(entry.path.clone()) {
                return Err(Error::InvalidManifest(format!(
                    "duplicate path {}",
                    entry.path.display()
                )));
            }
            n_classes = n_classes.max(entry.label);
        }
        Ok(Self { entries, n_classes })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if lineno == 0 || entries.is_empty() {
                // Tolerate a header line wherever the data starts.
                if line.eq_ignore_ascii_case("path,label,split") {
                    continue;
                }
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::InvalidManifest(format!(
                    "line {}: expected 'path,label,split'",
                    lineno + 1
                )));
            }
            let label: usize = fields[1].parse().map_err(|_| {
                Error::InvalidManifest(format!("line {}: bad label '{}'", lineno + 1, fields[1]))
            })?;
            let split = match fields[2].to_ascii_lowercase().as_str() {
                "train" => Split::Train,
                "test" => Split::Test,
                other => {
                    return Err(Error::InvalidManifest(format!(
                        "line {}: split must be train or test, got '{other}'",
                        lineno + 1
                    )))
                }
            };
            entries.push(ManifestEntry {
                path: PathBuf::from(fields[0]),
                label,
                split,
            });
        }
        Self::new(entries)
    }

    pub fn save(&self, path: impl AsRef<Path>, fingerprint: &str) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        let _ = writeln!(out, "# fingerprint {fingerprint}");
        let _ = writeln!(out, "path,label,split");
        for entry in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{}",
                entry.path.display(),
                entry.label,
                entry.split.as_str()
            );
        }
        fs::write(path, out).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn split_entries(&self, split: Split) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.split == split)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_header_and_comments() {
        let m = Manifest::parse(
            "# fingerprint abc\npath,label,split\nimages/a.pgm,1,train\nimages/b.pgm,2,test\n",
        )
        .unwrap();
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.n_classes, 2);
        assert_eq!(m.entries[0].split, Split::Train);
        assert_eq!(m.entries[1].split, Split::Test);
    }

    #[test]
    fn duplicate_paths_rejected() {
        let text = "a.pgm,1,train\na.pgm,2,test\n";
        assert!(matches!(
            Manifest::parse(text),
            Err(Error::InvalidManifest(_))
        ));
    }

    #[test]
    fn zero_label_rejected() {
        assert!(Manifest::parse("a.pgm,0,train\n").is_err());
    }

    #[test]
    fn bad_split_rejected() {
        assert!(Manifest::parse("a.pgm,1,validation\n").is_err());
    }

    #[test]
    fn save_load_round_trip() {
        let m = Manifest::parse("a.pgm,1,train\nb.pgm,3,test\n").unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        m.save(f.path(), "deadbeef").unwrap();
        let back = Manifest::load(f.path()).unwrap();
        assert_eq!(m, back);
        assert_eq!(back.n_classes, 3);
    }
}
