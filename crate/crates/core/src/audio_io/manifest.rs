use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Clip class. Obscene clips are the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Obscene,
    NonObscene,
}

impl Label {
    /// `+1` for obscene, `-1` otherwise.
    pub fn sign(self) -> i8 {
        match self {
            Label::Obscene => 1,
            Label::NonObscene => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Self {
        if sign >= 0 {
            Label::Obscene
        } else {
            Label::NonObscene
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Obscene => "obscene",
            Label::NonObscene => "non_obscene",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "obscene" => Ok(Label::Obscene),
            "non_obscene" => Ok(Label::NonObscene),
            other => Err(Error::InvalidArgument(format!("unknown label {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

/// One manifest line. `category` is free-form metadata (FMSS, FMSM, MASS,
/// MASM, BOSS, BOSM or a genre name) and never affects training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    pub split: Split,
}

/// JSON Lines dataset listing. Relative paths resolve against `base_dir`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
    pub base_dir: PathBuf,
}

impl DatasetManifest {
    pub fn new(entries: Vec<ManifestEntry>, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let manifest = Self {
            entries,
            base_dir: base_dir.into(),
        };
        manifest.check_unique(Path::new("<memory>"))?;
        Ok(manifest)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, path, base_dir)
    }

    /// Parses JSON Lines text; blank lines are skipped. `origin` only labels
    /// error messages.
    pub fn parse(text: &str, origin: &Path, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: ManifestEntry =
                serde_json::from_str(line).map_err(|e| Error::Manifest {
                    path: origin.to_path_buf(),
                    line: i + 1,
                    reason: e.to_string(),
                })?;
            entries.push(entry);
        }
        let manifest = Self {
            entries,
            base_dir: base_dir.into(),
        };
        manifest.check_unique(origin)?;
        Ok(manifest)
    }

    fn check_unique(&self, origin: &Path) -> Result<()> {
        let mut seen = HashSet::new();
        for (i, e) in self.entries.iter().enumerate() {
            if !seen.insert(&e.path) {
                return Err(Error::Manifest {
                    path: origin.to_path_buf(),
                    line: i + 1,
                    reason: format!("duplicate path {}", e.path.display()),
                });
            }
        }
        Ok(())
    }

    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.base_dir.join(&entry.path)
        }
    }

    pub fn split(&self, split: Split) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.split == split)
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_jsonl()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{"path": "a.wav", "label": "obscene", "category": "FMSS", "split": "train"}

{"path": "/abs/b.wav", "label": "non_obscene", "split": "test"}
"#;

    #[test]
    fn parses_and_resolves() {
        let m = DatasetManifest::parse(SAMPLE, Path::new("m.jsonl"), "/data").unwrap();
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.entries[0].category.as_deref(), Some("FMSS"));
        assert_eq!(m.entries[1].category, None);
        assert_eq!(m.resolve(&m.entries[0]), PathBuf::from("/data/a.wav"));
        assert_eq!(m.resolve(&m.entries[1]), PathBuf::from("/abs/b.wav"));
        assert_eq!(m.split(Split::Test).count(), 1);
    }

    #[test]
    fn rejects_bad_label_and_duplicates() {
        let bad = r#"{"path": "a.wav", "label": "maybe", "split": "train"}"#;
        match DatasetManifest::parse(bad, Path::new("m"), "") {
            Err(Error::Manifest { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        let dup = format!(
            "{}\n{}",
            r#"{"path": "a.wav", "label": "obscene", "split": "train"}"#,
            r#"{"path": "a.wav", "label": "non_obscene", "split": "test"}"#
        );
        assert!(matches!(
            DatasetManifest::parse(&dup, Path::new("m"), ""),
            Err(Error::Manifest { line: 2, .. })
        ));
    }

    #[test]
    fn jsonl_round_trip() {
        let m = DatasetManifest::parse(SAMPLE, Path::new("m"), "/data").unwrap();
        let text = m.to_jsonl().unwrap();
        let back = DatasetManifest::parse(&text, Path::new("m"), "/data").unwrap();
        assert_eq!(m, back);
    }
}
