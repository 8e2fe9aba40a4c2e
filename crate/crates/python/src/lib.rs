//! Python bindings for the clip feature extractor, the RBF classifier and the
//! rating metrics.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rcsf_core::audio_io::{self, Label, PcmClip};
use rcsf_core::cli::{scan_clips, train_model};
use rcsf_core::eval::{self, ClipDecision, ConfusionCounts};
use rcsf_core::features::{self, FeatureExtractor, FeatureFamily};
use rcsf_core::svm::{self, GridPoint, TrainConfig};
use rcsf_core::synth::{self, SynthKind};
use rcsf_core::Error;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(_) | Error::AudioRead { .. } | Error::AudioWrite { .. } => PyOSError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn parse_label(s: &str) -> PyResult<i8> {
    match s {
        "obscene" => Ok(1),
        "non_obscene" => Ok(-1),
        _ => Err(PyValueError::new_err(format!("unknown label {s:?}"))),
    }
}

fn clip_from(samples: Vec<f64>, sample_rate: u32) -> PyResult<PcmClip> {
    PcmClip::new_unbounded(samples, sample_rate).map_err(to_py)
}

#[pyclass(name = "FeatureConfig", module = "rcsf", from_py_object)]
#[derive(Clone)]
struct PyFeatureConfig {
    inner: features::FeatureConfig,
}

#[pymethods]
impl PyFeatureConfig {
    #[new]
    #[pyo3(signature = (family = "RCSF", quefrency_order = 23, temporal_order = 15))]
    fn new(family: &str, quefrency_order: usize, temporal_order: usize) -> PyResult<Self> {
        let family: FeatureFamily = family.parse().map_err(to_py)?;
        let inner = features::FeatureConfig {
            family,
            ..features::FeatureConfig::rcsf(quefrency_order, temporal_order)
        };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family.as_str()
    }

    #[getter]
    fn quefrency_order(&self) -> usize {
        self.inner.quefrency_order
    }

    #[getter]
    fn temporal_order(&self) -> usize {
        self.inner.temporal_order
    }

    #[getter]
    fn vector_dim(&self) -> usize {
        self.inner.vector_dim()
    }

    #[getter]
    fn fingerprint(&self) -> String {
        self.inner.fingerprint()
    }

    fn __repr__(&self) -> String {
        format!("FeatureConfig({})", self.inner.describe())
    }
}

/// Returns `(samples, sample_rate)` of a WAV file at 16 kHz mono.
#[pyfunction]
fn load_audio(path: &str) -> PyResult<(Vec<f64>, u32)> {
    let clip = audio_io::load_audio(path).map_err(to_py)?;
    let rate = clip.sample_rate_hz();
    Ok((clip.into_samples(), rate))
}

#[pyfunction]
#[pyo3(signature = (samples, snr_db, seed = 0, sample_rate = 16_000))]
fn add_awgn(samples: Vec<f64>, snr_db: f64, seed: u64, sample_rate: u32) -> PyResult<Vec<f64>> {
    let clip = clip_from(samples, sample_rate)?;
    Ok(audio_io::add_awgn(&clip, snr_db, seed).map_err(to_py)?.into_samples())
}

/// One synthetic clip: `kind` is chirp, steady, tone or noise.
#[pyfunction]
#[pyo3(signature = (kind, seed, duration_s = 10.0))]
fn synth_clip(kind: &str, seed: u64, duration_s: f64) -> PyResult<Vec<f64>> {
    let kind = [SynthKind::Chirp, SynthKind::Steady, SynthKind::Tone, SynthKind::Noise]
        .into_iter()
        .find(|k| k.as_str() == kind)
        .ok_or_else(|| PyValueError::new_err(format!("unknown synthetic kind {kind:?}")))?;
    Ok(synth::synth_clip(kind, seed, duration_s).into_samples())
}

#[pyfunction]
#[pyo3(signature = (samples, config = None, sample_rate = 16_000))]
fn clip_features(samples: Vec<f64>, config: Option<PyFeatureConfig>, sample_rate: u32) -> PyResult<Vec<f64>> {
    let config = config.map(|c| c.inner).unwrap_or_default();
    let clip = clip_from(samples, sample_rate)?;
    Ok(features::clip_feature(&clip, &config).map_err(to_py)?.values)
}

#[pyclass(name = "SvmModel", module = "rcsf")]
struct PySvmModel {
    inner: svm::SvmModel,
}

#[pymethods]
impl PySvmModel {
    /// Grid-searches `(C, γ)` by stratified cross-validation, then refits on
    /// all rows. `labels` are "obscene" / "non_obscene".
    #[staticmethod]
    #[pyo3(signature = (vectors, labels, config = None, c_values = None, gamma_values = None, folds = 5, seed = 0))]
    fn train(
        py: Python<'_>,
        vectors: Vec<Vec<f64>>,
        labels: Vec<String>,
        config: Option<PyFeatureConfig>,
        c_values: Option<Vec<f64>>,
        gamma_values: Option<Vec<f64>>,
        folds: usize,
        seed: u64,
    ) -> PyResult<Self> {
        let config = config.map(|c| c.inner).unwrap_or_default();
        let signs = labels.iter().map(|l| parse_label(l)).collect::<PyResult<Vec<_>>>()?;
        let grid: Vec<GridPoint> = match (c_values, gamma_values) {
            (None, None) => svm::default_grid(),
            (cs, gs) => {
                let defaults = svm::default_grid();
                let cs = cs.unwrap_or_else(|| dedup(defaults.iter().map(|p| p.c)));
                let gs = gs.unwrap_or_else(|| dedup(defaults.iter().map(|p| p.gamma)));
                cs.iter()
                    .flat_map(|&c| gs.iter().map(move |&gamma| GridPoint { c, gamma }))
                    .collect()
            }
        };
        let (inner, _, _) = py
            .detach(|| train_model(&vectors, &signs, &grid, folds, seed, &config))
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Trains at a fixed `(C, γ)` with no search.
    #[staticmethod]
    #[pyo3(signature = (vectors, labels, c, gamma, fingerprint = "custom"))]
    fn fit(vectors: Vec<Vec<f64>>, labels: Vec<String>, c: f64, gamma: f64, fingerprint: &str) -> PyResult<Self> {
        let signs = labels.iter().map(|l| parse_label(l)).collect::<PyResult<Vec<_>>>()?;
        let (inner, _) = svm::SvmModel::train(&vectors, &signs, &TrainConfig::new(c, gamma), fingerprint).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: svm::SvmModel::load(path).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: svm::SvmModel::from_json(text).map_err(to_py)?,
        })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path).map_err(to_py)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn num_support_vectors(&self) -> usize {
        self.inner.num_support_vectors()
    }

    #[getter]
    fn fingerprint(&self) -> &str {
        &self.inner.feature_fingerprint
    }

    /// `(label, decision_value)` for one raw feature vector.
    fn predict(&self, vector: Vec<f64>) -> PyResult<(&'static str, f64)> {
        let p = self.inner.predict_raw(&vector).map_err(to_py)?;
        Ok((p.label.as_str(), p.decision_value))
    }

    /// Splits a recording into 10 s clips and rates it.
    #[pyo3(signature = (samples, threshold_pct = 20.0, sample_rate = 16_000))]
    fn scan<'py>(
        &self,
        py: Python<'py>,
        samples: Vec<f64>,
        threshold_pct: f64,
        sample_rate: u32,
    ) -> PyResult<Bound<'py, PyDict>> {
        let config = self
            .inner
            .feature_config
            .clone()
            .ok_or_else(|| PyValueError::new_err("model does not record its feature configuration"))?;
        let extractor = FeatureExtractor::new(config).map_err(to_py)?;
        let recording = clip_from(samples, sample_rate)?;
        let decisions = py
            .detach(|| scan_clips(&self.inner, &extractor, &recording))
            .map_err(to_py)?;
        let report = eval::harmful_rate(decisions, threshold_pct).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("harmful_rate_pct", report.harmful_rate_pct)?;
        d.set_item("threshold_pct", report.threshold_pct)?;
        d.set_item("verdict", verdict_str(&report))?;
        let clips: Vec<(f64, &str, f64)> = report
            .clip_decisions
            .iter()
            .map(|c| (c.offset_s, c.label.as_str(), c.decision_value))
            .collect();
        d.set_item("clips", clips)?;
        Ok(d)
    }
}

fn dedup(it: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = it.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn verdict_str(report: &eval::HarmfulRateReport) -> &'static str {
    match report.verdict {
        eval::Verdict::XRated => "x_rated",
        eval::Verdict::General => "general",
    }
}

/// Precision, recall and F1 in percent. Undefined values are `None`.
#[pyfunction]
fn metrics(py: Python<'_>, tp: u64, tn: u64, fp: u64, r#fn: u64) -> PyResult<Bound<'_, PyDict>> {
    let m = eval::metrics(&ConfusionCounts { tp, tn, fp, fn_: r#fn });
    let d = PyDict::new(py);
    d.set_item("precision_pct", m.precision_pct)?;
    d.set_item("recall_pct", m.recall_pct)?;
    d.set_item("f1_pct", m.f1_pct)?;
    Ok(d)
}

#[pyfunction]
fn f1_score(precision: f64, recall: f64) -> f64 {
    eval::f1_score(precision, recall)
}

/// Rates a recording from per-clip labels. Returns `(rate_pct, verdict)`.
#[pyfunction]
#[pyo3(signature = (labels, threshold_pct = 20.0))]
fn harmful_rate(labels: Vec<String>, threshold_pct: f64) -> PyResult<(f64, &'static str)> {
    let decisions = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let sign = parse_label(l)?;
            Ok(ClipDecision {
                offset_s: 10.0 * i as f64,
                label: Label::from_sign(sign),
                decision_value: f64::from(sign),
            })
        })
        .collect::<PyResult<Vec<_>>>()?;
    let report = eval::harmful_rate(decisions, threshold_pct).map_err(to_py)?;
    Ok((report.harmful_rate_pct, verdict_str(&report)))
}

#[pymodule]
fn rcsf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFeatureConfig>()?;
    m.add_class::<PySvmModel>()?;
    m.add_function(wrap_pyfunction!(load_audio, m)?)?;
    m.add_function(wrap_pyfunction!(add_awgn, m)?)?;
    m.add_function(wrap_pyfunction!(synth_clip, m)?)?;
    m.add_function(wrap_pyfunction!(clip_features, m)?)?;
    m.add_function(wrap_pyfunction!(metrics, m)?)?;
    m.add_function(wrap_pyfunction!(f1_score, m)?)?;
    m.add_function(wrap_pyfunction!(harmful_rate, m)?)?;
    Ok(())
}
