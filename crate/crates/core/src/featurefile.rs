//! Columnar text format for extracted feature vectors.
//!
//! ```text
//! # rcsf-features v1 fingerprint=<hex> dim=<n> config=<json>
//! obscene 0.125 -3.5 ...
//! non_obscene 1.0 2.25 ...
//! ```
//!
//! Reals use Rust's shortest round-trip formatting, so a write/read cycle is
//! exact.

use std::fmt::Write as _;
use std::path::Path;

use crate::audio_io::Label;
use crate::error::{Error, Result};
use crate::features::{ClipFeatureVector, FeatureConfig};

const MAGIC: &str = "# rcsf-features v1";

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub label: Label,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureFile {
    pub config: FeatureConfig,
    pub rows: Vec<FeatureRow>,
}

impl FeatureFile {
    pub fn new(config: FeatureConfig) -> Self {
        Self {
            config,
            rows: Vec::new(),
        }
    }

    pub fn fingerprint(&self) -> String {
        self.config.fingerprint()
    }

    pub fn push(&mut self, label: Label, vector: ClipFeatureVector) -> Result<()> {
        if vector.fingerprint != self.fingerprint() {
            return Err(Error::FingerprintMismatch {
                expected: self.fingerprint(),
                actual: vector.fingerprint,
            });
        }
        self.rows.push(FeatureRow {
            label,
            values: vector.values,
        });
        Ok(())
    }

    /// Vectors and `±1` labels ready for training.
    pub fn training_data(&self) -> (Vec<Vec<f64>>, Vec<i8>) {
        self.rows
            .iter()
            .map(|r| (r.values.clone(), r.label.sign()))
            .unzip()
    }

    pub fn vectors(&self) -> impl Iterator<Item = ClipFeatureVector> + '_ {
        let fp = self.fingerprint();
        self.rows.iter().map(move |r| ClipFeatureVector {
            values: r.values.clone(),
            fingerprint: fp.clone(),
            num_segments: 0,
        })
    }

    pub fn to_text(&self) -> Result<String> {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{MAGIC} fingerprint={} dim={} config={}",
            self.fingerprint(),
            self.config.vector_dim(),
            serde_json::to_string(&self.config)?
        );
        for row in &self.rows {
            out.push_str(row.label.as_str());
            for v in &row.values {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let err = |line: usize, reason: String| Error::FeatureFile {
            path: origin.to_path_buf(),
            line,
            reason,
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let rest = header
            .strip_prefix(MAGIC)
            .ok_or_else(|| err(1, "missing feature-file header".into()))?;
        let (meta, config_json) = rest
            .split_once(" config=")
            .ok_or_else(|| err(1, "header lacks config".into()))?;
        let config: FeatureConfig =
            serde_json::from_str(config_json).map_err(|e| err(1, e.to_string()))?;
        let mut fingerprint = None;
        let mut dim = None;
        for token in meta.split_whitespace() {
            match token.split_once('=') {
                Some(("fingerprint", v)) => fingerprint = Some(v.to_string()),
                Some(("dim", v)) => dim = v.parse::<usize>().ok(),
                _ => return Err(err(1, format!("unexpected header token {token:?}"))),
            }
        }
        if fingerprint.as_deref() != Some(config.fingerprint().as_str()) {
            return Err(err(1, "fingerprint does not match config".into()));
        }
        let dim = dim.ok_or_else(|| err(1, "header lacks dim".into()))?;
        if dim != config.vector_dim() {
            return Err(err(1, format!("dim {dim} disagrees with config")));
        }

        let mut rows = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let label: Label = fields
                .next()
                .unwrap_or_default()
                .parse()
                .map_err(|e: Error| err(i + 1, e.to_string()))?;
            let values = fields
                .map(|f| f.parse::<f64>().map_err(|e| err(i + 1, format!("{f:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if values.len() != dim {
                return Err(err(i + 1, format!("expected {dim} values, got {}", values.len())));
            }
            rows.push(FeatureRow { label, values });
        }
        Ok(Self { config, rows })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&std::fs::read_to_string(path)?, path)
    }
}
