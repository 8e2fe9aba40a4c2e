//! Clip-level scoring and the per-recording harmful-rate decision.
//!
//! Obscene clips are the positive class throughout.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audio_io::{add_awgn, load_audio, DatasetManifest, Label, ManifestEntry, Split};
use crate::error::{Error, Result};
use crate::features::{ClipFeatureVector, FeatureConfig, FeatureExtractor};
use crate::svm::SvmModel;

pub const DEFAULT_THRESHOLD_PCT: f64 = 20.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn record(&mut self, actual: Label, predicted: Label) {
        match (actual, predicted) {
            (Label::Obscene, Label::Obscene) => self.tp += 1,
            (Label::Obscene, Label::NonObscene) => self.fn_ += 1,
            (Label::NonObscene, Label::Obscene) => self.fp += 1,
            (Label::NonObscene, Label::NonObscene) => self.tn += 1,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Label)>) -> Self {
        let mut c = Self::default();
        for (actual, predicted) in pairs {
            c.record(actual, predicted);
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn errors(&self) -> u64 {
        self.fp + self.fn_
    }

    pub fn metrics(&self) -> Metrics {
        metrics(self)
    }
}

/// Percentages; `None` where the denominator is empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision_pct: Option<f64>,
    pub recall_pct: Option<f64>,
    pub f1_pct: Option<f64>,
}

/// Harmonic mean of precision and recall, in the units given.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

pub fn metrics(counts: &ConfusionCounts) -> Metrics {
    let pct = |num: u64, den: u64| (den > 0).then(|| 100.0 * num as f64 / den as f64);
    let precision_pct = pct(counts.tp, counts.tp + counts.fp);
    let recall_pct = pct(counts.tp, counts.tp + counts.fn_);
    let f1_pct = match (precision_pct, recall_pct) {
        (Some(p), Some(r)) => Some(f1_score(p, r)),
        _ => None,
    };
    Metrics {
        precision_pct,
        recall_pct,
        f1_pct,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClipDecision {
    pub offset_s: f64,
    pub label: Label,
    pub decision_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    XRated,
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmfulRateReport {
    pub clip_decisions: Vec<ClipDecision>,
    pub harmful_rate_pct: f64,
    pub threshold_pct: f64,
    pub verdict: Verdict,
}

/// Share of clips judged obscene, in percent. The recording is X-rated only
/// when the rate strictly exceeds `threshold_pct`.
pub fn harmful_rate(decisions: Vec<ClipDecision>, threshold_pct: f64) -> Result<HarmfulRateReport> {
    if decisions.is_empty() {
        return Err(Error::NoClips);
    }
    if !(0.0..=100.0).contains(&threshold_pct) {
        return Err(Error::InvalidArgument(format!(
            "threshold {threshold_pct} % is outside 0..=100"
        )));
    }
    let obscene = decisions.iter().filter(|d| d.label == Label::Obscene).count();
    let harmful_rate_pct = 100.0 * obscene as f64 / decisions.len() as f64;
    let verdict = if harmful_rate_pct > threshold_pct {
        Verdict::XRated
    } else {
        Verdict::General
    };
    Ok(HarmfulRateReport {
        clip_decisions: decisions,
        harmful_rate_pct,
        threshold_pct,
        verdict,
    })
}

/// White-noise corruption applied to clips before feature extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub snr_db: f64,
    pub seed: u64,
}

impl NoiseSpec {
    /// Per-clip seed; clip `index` of a run always gets the same noise.
    pub fn seed_for(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }
}

/// Loads, optionally corrupts, and featurizes manifest entries in parallel.
/// Results keep the input order.
pub fn extract_entries(
    manifest: &DatasetManifest,
    entries: &[&ManifestEntry],
    extractor: &FeatureExtractor,
    noise: Option<NoiseSpec>,
) -> Vec<Result<ClipFeatureVector>> {
    entries
        .par_iter()
        .enumerate()
        .map(|(i, entry)| {
            let clip = load_audio(manifest.resolve(entry))?;
            let clip = match noise {
                Some(n) => add_awgn(&clip, n.snr_db, n.seed_for(i))?,
                None => clip,
            };
            extractor.extract(&clip)
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryTally {
    pub clips: u64,
    pub errors: u64,
}

impl CategoryTally {
    pub fn error_rate_pct(&self) -> f64 {
        if self.clips == 0 {
            0.0
        } else {
            100.0 * self.errors as f64 / self.clips as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipFailure {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub counts: ConfusionCounts,
    pub metrics: Metrics,
    /// Keyed by the manifest's `category` tag; untagged entries go under
    /// their label name.
    pub per_category: BTreeMap<String, CategoryTally>,
    pub failures: Vec<ClipFailure>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_text(&self) -> String {
        let fmt_opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.2}"));
        let mut out = String::new();
        let m = &self.metrics;
        let _ = writeln!(out, "F1-score(%)\tPrecision(%)\tRecall(%)");
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            fmt_opt(m.f1_pct),
            fmt_opt(m.precision_pct),
            fmt_opt(m.recall_pct)
        );
        let c = &self.counts;
        let _ = writeln!(out, "\nTP {}  TN {}  FP {}  FN {}", c.tp, c.tn, c.fp, c.fn_);
        let _ = writeln!(out, "\nCategory\tClips\tErrors\tError rate(%)");
        for (cat, t) in &self.per_category {
            let _ = writeln!(out, "{cat}\t{}\t{}\t{:.2}", t.clips, t.errors, t.error_rate_pct());
        }
        if !self.failures.is_empty() {
            let _ = writeln!(out, "\nExcluded {} unreadable clip(s):", self.failures.len());
            for f in &self.failures {
                let _ = writeln!(out, "  {}: {}", f.path.display(), f.reason);
            }
        }
        out
    }
}

/// Classifies every test entry of a manifest and tallies the outcome.
/// Entries that fail to load or featurize are excluded and listed.
pub fn evaluate_manifest(
    model: &SvmModel,
    manifest: &DatasetManifest,
    config: &FeatureConfig,
    noise: Option<NoiseSpec>,
) -> Result<EvaluationReport> {
    let entries: Vec<&ManifestEntry> = manifest.split(Split::Test).collect();
    if entries.is_empty() {
        return Err(Error::InvalidArgument("manifest has no test entries".into()));
    }
    if config.fingerprint() != model.feature_fingerprint {
        return Err(Error::FingerprintMismatch {
            expected: model.feature_fingerprint.clone(),
            actual: config.fingerprint(),
        });
    }
    let extractor = FeatureExtractor::new(config.clone())?;
    let vectors = extract_entries(manifest, &entries, &extractor, noise);
    let predictions: Vec<Result<Label>> = vectors
        .into_par_iter()
        .map(|v| Ok(model.predict(&v?)?.label))
        .collect();
    Ok(tally(manifest, &entries, predictions))
}

pub(crate) fn tally(
    manifest: &DatasetManifest,
    entries: &[&ManifestEntry],
    predictions: Vec<Result<Label>>,
) -> EvaluationReport {
    let mut counts = ConfusionCounts::default();
    let mut per_category: BTreeMap<String, CategoryTally> = BTreeMap::new();
    let mut failures = Vec::new();
    for (entry, predicted) in entries.iter().zip(predictions) {
        match predicted {
            Ok(predicted) => {
                counts.record(entry.label, predicted);
                let key = entry
                    .category
                    .clone()
                    .unwrap_or_else(|| entry.label.to_string());
                let t = per_category.entry(key).or_default();
                t.clips += 1;
                if predicted != entry.label {
                    t.errors += 1;
                }
            }
            Err(e) => failures.push(ClipFailure {
                path: manifest.resolve(entry),
                reason: e.to_string(),
            }),
        }
    }
    EvaluationReport {
        counts,
        metrics: metrics(&counts),
        per_category,
        failures,
    }
}

/// Sample mean and sample standard deviation (n − 1), as used for sweep
/// summary rows.
pub fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
