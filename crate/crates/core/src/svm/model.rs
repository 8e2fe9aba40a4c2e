use std::path::Path;

use serde::{Deserialize, Serialize};

use super::kernel::{squared_distance, DenseGram, KernelRows, LazyRbfGram};
use super::scaling::ScalingParams;
use super::smo::{check_labels, smo_solve, SmoSolution, TrainConfig, SUPPORT_THRESHOLD};
use crate::audio_io::Label;
use crate::error::{Error, Result};
use crate::features::{ClipFeatureVector, FeatureConfig};

pub const MODEL_VERSION: u32 = 1;

/// Training sets up to this size get a fully materialized Gram matrix.
const DENSE_GRAM_LIMIT: usize = 4096;

/// Trained RBF machine. Support vectors are stored already scaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub version: u32,
    pub gamma: f64,
    pub bias: f64,
    pub scaling: ScalingParams,
    pub support_vectors: Vec<Vec<f64>>,
    pub alphas: Vec<f64>,
    pub labels: Vec<i8>,
    pub feature_fingerprint: String,
    /// Feature layout the model was trained on, when known. Lets audio be
    /// classified without restating the configuration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_config: Option<FeatureConfig>,
}

/// Class decision with its signed decision value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Label,
    pub decision_value: f64,
}

impl Prediction {
    pub fn from_decision(decision_value: f64) -> Self {
        // sign(0) counts as obscene
        let label = if decision_value >= 0.0 {
            Label::Obscene
        } else {
            Label::NonObscene
        };
        Self {
            label,
            decision_value,
        }
    }
}

pub(crate) fn validate_training(vectors: &[Vec<f64>], labels: &[i8]) -> Result<()> {
    if vectors.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: vectors.len(),
            actual: labels.len(),
        });
    }
    check_labels(labels)?;
    let dim = vectors[0].len();
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
        if let Some(d) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { sample: i, dim: d });
        }
    }
    Ok(())
}

/// Runs SMO on vectors that are already scaled.
pub fn smo_train(scaled: &[Vec<f64>], labels: &[i8], config: &TrainConfig) -> Result<SmoSolution> {
    validate_training(scaled, labels)?;
    config.validate()?;
    if scaled.len() <= DENSE_GRAM_LIMIT {
        smo_solve(&DenseGram::rbf(scaled, config.gamma), labels, config)
    } else {
        let gram = LazyRbfGram {
            points: scaled,
            gamma: config.gamma,
        };
        smo_solve(&gram as &dyn KernelRows, labels, config)
    }
}

impl SvmModel {
    /// Fits scaling on `raw`, trains, and keeps multipliers above the
    /// support threshold.
    pub fn train(
        raw: &[Vec<f64>],
        labels: &[i8],
        config: &TrainConfig,
        feature_fingerprint: impl Into<String>,
    ) -> Result<(Self, SmoSolution)> {
        if raw.is_empty() {
            return Err(Error::InvalidArgument("empty training set".into()));
        }
        validate_training(raw, labels)?;
        let scaling = ScalingParams::fit(raw)?;
        let scaled = scaling.apply_all(raw)?;
        let solution = smo_train(&scaled, labels, config)?;
        let model = Self::from_solution(&solution, scaled, labels, config.gamma, scaling, feature_fingerprint);
        Ok((model, solution))
    }

    /// Keeps the support set of a solver result.
    pub fn from_solution(
        solution: &SmoSolution,
        scaled: Vec<Vec<f64>>,
        labels: &[i8],
        gamma: f64,
        scaling: ScalingParams,
        feature_fingerprint: impl Into<String>,
    ) -> Self {
        let mut support_vectors = Vec::new();
        let mut alphas = Vec::new();
        let mut sv_labels = Vec::new();
        for ((x, &a), &m) in scaled.into_iter().zip(&solution.alphas).zip(labels) {
            if a > SUPPORT_THRESHOLD {
                support_vectors.push(x);
                alphas.push(a);
                sv_labels.push(m);
            }
        }
        Self {
            version: MODEL_VERSION,
            gamma,
            bias: solution.bias,
            scaling,
            support_vectors,
            alphas,
            labels: sv_labels,
            feature_fingerprint: feature_fingerprint.into(),
            feature_config: None,
        }
    }

    pub fn with_feature_config(mut self, config: FeatureConfig) -> Self {
        self.feature_fingerprint = config.fingerprint();
        self.feature_config = Some(config);
        self
    }

    pub fn dim(&self) -> usize {
        self.scaling.dim()
    }

    pub fn num_support_vectors(&self) -> usize {
        self.support_vectors.len()
    }

    /// `Σ α_i m_i K(x_i, x) + b` for an already scaled vector.
    pub fn decision_value_scaled(&self, scaled: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(self.alphas.iter().zip(&self.labels))
            .map(|(sv, (&a, &m))| a * f64::from(m) * (-self.gamma * squared_distance(sv, scaled)).exp())
            .sum::<f64>()
            + self.bias
    }

    /// Scales a raw vector with the training parameters, then decides.
    pub fn predict_raw(&self, raw: &[f64]) -> Result<Prediction> {
        let scaled = self.scaling.apply(raw)?;
        Ok(Prediction::from_decision(self.decision_value_scaled(&scaled)))
    }

    pub fn predict(&self, vector: &ClipFeatureVector) -> Result<Prediction> {
        if vector.fingerprint != self.feature_fingerprint {
            return Err(Error::FingerprintMismatch {
                expected: self.feature_fingerprint.clone(),
                actual: vector.fingerprint.clone(),
            });
        }
        self.predict_raw(&vector.values)
    }

    /// `|Σ α_i m_i|`, zero at an exact dual-feasible point.
    pub fn equality_residual(&self) -> f64 {
        self.alphas
            .iter()
            .zip(&self.labels)
            .map(|(a, &m)| a * f64::from(m))
            .sum::<f64>()
            .abs()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ModelFormat(m));
        if self.version != MODEL_VERSION {
            return bad(format!("unsupported version {}", self.version));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma {} is not positive", self.gamma));
        }
        if !self.bias.is_finite() {
            return bad("bias is not finite".into());
        }
        if self.scaling.mins.len() != self.scaling.maxs.len() {
            return bad("scaling mins and maxs differ in length".into());
        }
        let n = self.support_vectors.len();
        if n == 0 {
            return bad("model has no support vectors".into());
        }
        if self.alphas.len() != n || self.labels.len() != n {
            return bad("support vectors, alphas and labels differ in length".into());
        }
        if self.support_vectors.iter().any(|v| v.len() != self.dim()) {
            return bad("support vector dimension differs from scaling".into());
        }
        if self.alphas.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return bad("alphas must be positive".into());
        }
        if self.labels.iter().any(|&m| m != 1 && m != -1) {
            return bad("labels must be ±1".into());
        }
        if let Some(cfg) = &self.feature_config {
            if cfg.fingerprint() != self.feature_fingerprint {
                return bad("feature_config does not match feature_fingerprint".into());
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
