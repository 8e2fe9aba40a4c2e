//! Clip-level feature vectors.
//!
//! A 10 s clip is framed, each frame is reduced to a per-frame descriptor,
//! frames are grouped into non-overlapping segments of `L` frames, each
//! segment becomes one vector, and the clip vector is the per-dimension mean
//! followed by the population standard deviation over segments.
//!
//! The repeated curve-like spectrum feature (RCSF) takes, per segment, the
//! MFCC matrix of `L` frames, applies a DCT-II along time and keeps the first
//! `B'` quefrency rows by `L'` modulation columns. Row `q = 0` follows the
//! frame log energy over the segment; column `n = 0` is the segment's summed
//! MFCC. The comparison families (MFCC, MFCC+delta, MFCC+delta+double-delta,
//! and two low-level spectral sets) average their per-frame vectors within
//! each segment instead.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::audio_io::{PcmClip, CANONICAL_RATE_HZ};
use crate::dsp::{
    filter_energies, frame_signal, Dct2, FramingParams, MelFilterbank, PowerSpectrum,
    SpectrumAnalyzer, LOG_FLOOR,
};
use crate::error::{Error, Result};

/// Quefrency orders swept in the order study: 7, 9, ..., 23.
pub const QUEFRENCY_SWEEP: [usize; 9] = [7, 9, 11, 13, 15, 17, 19, 21, 23];
/// Temporal orders swept in the order study: 5, 7, ..., 19.
pub const TEMPORAL_SWEEP: [usize; 8] = [5, 7, 9, 11, 13, 15, 17, 19];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureFamily {
    #[serde(rename = "RCSF")]
    Rcsf,
    #[serde(rename = "MFCC")]
    Mfcc,
    #[serde(rename = "MFCCD")]
    Mfccd,
    #[serde(rename = "MFCCDD")]
    Mfccdd,
    #[serde(rename = "LLF_S")]
    LlfS,
    #[serde(rename = "LLF_ES")]
    LlfEs,
}

impl FeatureFamily {
    pub const ALL: [FeatureFamily; 6] = [
        FeatureFamily::Rcsf,
        FeatureFamily::Mfcc,
        FeatureFamily::Mfccd,
        FeatureFamily::Mfccdd,
        FeatureFamily::LlfS,
        FeatureFamily::LlfEs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureFamily::Rcsf => "RCSF",
            FeatureFamily::Mfcc => "MFCC",
            FeatureFamily::Mfccd => "MFCCD",
            FeatureFamily::Mfccdd => "MFCCDD",
            FeatureFamily::LlfS => "LLF_S",
            FeatureFamily::LlfEs => "LLF_ES",
        }
    }

    pub fn uses_cepstrum(self) -> bool {
        !matches!(self, FeatureFamily::LlfS | FeatureFamily::LlfEs)
    }
}

impl fmt::Display for FeatureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FeatureFamily::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown feature family {s:?}")))
    }
}

/// Everything that determines a clip vector, including its length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub family: FeatureFamily,
    /// `B'`, cepstral coefficients kept per frame (coefficient 0 included).
    pub quefrency_order: usize,
    /// `L'`, modulation coefficients kept per quefrency row (RCSF only).
    pub temporal_order: usize,
    /// `L`, frames per segment.
    pub frames_per_segment: usize,
    /// `B`, mel filters.
    pub num_mel_filters: usize,
    pub framing: FramingParams,
    pub sample_rate_hz: u32,
    pub rolloff_fraction: f64,
    pub num_subbands: usize,
    /// Half-width of the delta regression window.
    pub delta_window: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self::rcsf(23, 15)
    }
}

impl FeatureConfig {
    pub fn rcsf(quefrency_order: usize, temporal_order: usize) -> Self {
        Self {
            family: FeatureFamily::Rcsf,
            quefrency_order,
            temporal_order,
            frames_per_segment: 32,
            num_mel_filters: 26,
            framing: FramingParams::default(),
            sample_rate_hz: CANONICAL_RATE_HZ,
            rolloff_fraction: 0.85,
            num_subbands: 8,
            delta_window: 2,
        }
    }

    pub fn with_family(family: FeatureFamily, quefrency_order: usize) -> Self {
        Self {
            family,
            ..Self::rcsf(quefrency_order, 15)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.framing.validate()?;
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.family.uses_cepstrum() {
            if self.quefrency_order == 0 || self.quefrency_order >= self.num_mel_filters {
                return bad(format!(
                    "quefrency order {} must lie in 1..{}",
                    self.quefrency_order, self.num_mel_filters
                ));
            }
        }
        if self.family == FeatureFamily::Rcsf
            && (self.temporal_order == 0 || self.temporal_order > self.frames_per_segment)
        {
            return bad(format!(
                "temporal order {} must lie in 1..={}",
                self.temporal_order, self.frames_per_segment
            ));
        }
        if self.frames_per_segment == 0 {
            return bad("frames per segment must be positive".into());
        }
        if !(self.rolloff_fraction > 0.0 && self.rolloff_fraction <= 1.0) {
            return bad(format!("rolloff fraction {} not in (0, 1]", self.rolloff_fraction));
        }
        if self.num_subbands == 0 {
            return bad("need at least one sub-band".into());
        }
        if self.delta_window == 0 {
            return bad("delta window must be positive".into());
        }
        Ok(())
    }

    /// Length of one segment vector.
    pub fn segment_dim(&self) -> usize {
        let q = self.quefrency_order;
        match self.family {
            FeatureFamily::Rcsf => q * self.temporal_order,
            FeatureFamily::Mfcc => q,
            FeatureFamily::Mfccd => 2 * q,
            FeatureFamily::Mfccdd => 3 * q,
            FeatureFamily::LlfS => 5,
            FeatureFamily::LlfEs => 5 + 1 + self.num_subbands,
        }
    }

    /// Length of the clip vector: mean half plus std half.
    pub fn vector_dim(&self) -> usize {
        2 * self.segment_dim()
    }

    /// Canonical one-line description. Parameters the family ignores are
    /// left out so that they cannot cause spurious fingerprint mismatches.
    pub fn describe(&self) -> String {
        let mut s = format!("family={}", self.family);
        if self.family.uses_cepstrum() {
            s.push_str(&format!(
                " quefrency_order={} mel_filters={}",
                self.quefrency_order, self.num_mel_filters
            ));
        }
        match self.family {
            FeatureFamily::Rcsf => s.push_str(&format!(" temporal_order={}", self.temporal_order)),
            FeatureFamily::Mfccd | FeatureFamily::Mfccdd => {
                s.push_str(&format!(" delta_window={}", self.delta_window))
            }
            FeatureFamily::LlfS | FeatureFamily::LlfEs => {
                s.push_str(&format!(" rolloff={}", self.rolloff_fraction));
                if self.family == FeatureFamily::LlfEs {
                    s.push_str(&format!(" subbands={}", self.num_subbands));
                }
            }
            FeatureFamily::Mfcc => {}
        }
        s.push_str(&format!(
            " segment_frames={} frame={} hop={} window={} rate={}",
            self.frames_per_segment,
            self.framing.frame_len_samples,
            self.framing.hop_samples,
            self.framing.window.as_str(),
            self.sample_rate_hz
        ));
        s
    }

    /// First 16 hex digits of SHA-256 over [`FeatureConfig::describe`].
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.describe().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// One segment's vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentFeature {
    pub values: Vec<f64>,
    pub segment_index: usize,
}

/// Per-clip classifier input: segment means then segment standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipFeatureVector {
    pub values: Vec<f64>,
    pub fingerprint: String,
    pub num_segments: usize,
}

impl ClipFeatureVector {
    pub fn mean_half(&self) -> &[f64] {
        &self.values[..self.values.len() / 2]
    }

    pub fn std_half(&self) -> &[f64] {
        &self.values[self.values.len() / 2..]
    }
}

/// Cepstral coefficients `0..order` of one frame's filter energies:
/// `C(q) = Σ_b ln(max(E(b), ε))·cos((2b+1)qπ / 2B)`.
pub fn mfcc_frame(energies: &[f64], order: usize) -> Result<Vec<f64>> {
    if order >= energies.len() {
        return Err(Error::InvalidArgument(format!(
            "quefrency order {order} must be below the filter count {}",
            energies.len()
        )));
    }
    let logs: Vec<f64> = energies.iter().map(|&e| e.max(LOG_FLOOR).ln()).collect();
    crate::dsp::dct2(&logs, order)
}

/// Regression deltas over a frame sequence with edge frames replicated:
/// `Δ_t = Σ_{w=1..W} w·(c_{t+w} − c_{t−w}) / (2·Σ w²)`.
pub fn delta_coeffs(per_frame: &[Vec<f64>], window: usize) -> Result<Vec<Vec<f64>>> {
    let n = per_frame.len();
    if window == 0 {
        return Err(Error::InvalidArgument("delta window must be positive".into()));
    }
    if n <= 2 * window {
        return Err(Error::TooShort {
            what: "delta window",
            len: n,
            needed: 2 * window + 1,
        });
    }
    let dim = per_frame[0].len();
    let denom = 2.0 * (1..=window).map(|w| (w * w) as f64).sum::<f64>();
    Ok((0..n)
        .map(|t| {
            let mut out = vec![0.0; dim];
            for w in 1..=window {
                let next = &per_frame[(t + w).min(n - 1)];
                let prev = &per_frame[t.saturating_sub(w)];
                for d in 0..dim {
                    out[d] += w as f64 * (next[d] - prev[d]);
                }
            }
            out.iter_mut().for_each(|v| *v /= denom);
            out
        })
        .collect())
}

/// Low-level spectral descriptors of one frame, in the order bandwidth,
/// centroid, flatness, flux, roll-off. With `energies` set, appends the log
/// total energy and the log energies of `num_subbands` equal-width bands.
pub fn llf_frame(
    spec: &PowerSpectrum,
    prev: Option<&PowerSpectrum>,
    config: &FeatureConfig,
    energies: bool,
) -> Result<Vec<f64>> {
    if let Some(p) = prev {
        if p.bins.len() != spec.bins.len() {
            return Err(Error::LengthMismatch {
                expected: spec.bins.len(),
                actual: p.bins.len(),
            });
        }
    }
    let bins = &spec.bins;
    let total: f64 = bins.iter().sum();

    let centroid = if total > 0.0 {
        bins.iter()
            .enumerate()
            .map(|(j, b)| spec.frequency(j) * b)
            .sum::<f64>()
            / total
    } else {
        0.0
    };
    let bandwidth = if total > 0.0 {
        (bins
            .iter()
            .enumerate()
            .map(|(j, b)| (spec.frequency(j) - centroid).powi(2) * b)
            .sum::<f64>()
            / total)
            .sqrt()
    } else {
        0.0
    };
    let n = bins.len() as f64;
    let log_mean = bins.iter().map(|b| (b + LOG_FLOOR).ln()).sum::<f64>() / n;
    let arith_mean = bins.iter().map(|b| b + LOG_FLOOR).sum::<f64>() / n;
    let flatness = log_mean.exp() / arith_mean;
    let flux = prev.map_or(0.0, |p| {
        bins.iter().zip(&p.bins).map(|(a, b)| (a - b).powi(2)).sum()
    });
    let rolloff = if total > 0.0 {
        let target = config.rolloff_fraction * total;
        let mut acc = 0.0;
        let mut idx = bins.len() - 1;
        for (j, b) in bins.iter().enumerate() {
            acc += b;
            if acc >= target {
                idx = j;
                break;
            }
        }
        spec.frequency(idx)
    } else {
        0.0
    };

    let mut out = vec![bandwidth, centroid, flatness, flux, rolloff];
    if energies {
        out.push((total + LOG_FLOOR).ln());
        let nyquist = config.sample_rate_hz as f64 / 2.0;
        let width = nyquist / config.num_subbands as f64;
        let mut bands = vec![0.0; config.num_subbands];
        for (j, b) in bins.iter().enumerate() {
            let k = ((spec.frequency(j) / width) as usize).min(config.num_subbands - 1);
            bands[k] += b;
        }
        out.extend(bands.iter().map(|e| (e + LOG_FLOOR).ln()));
    }
    Ok(out)
}

/// Temporal DCT of one segment's MFCC sequence.
///
/// `frame_mfccs` holds `L` rows of `B'` coefficients; the result holds `B'`
/// rows of `temporal_order` modulation coefficients:
/// `C(q, n) = Σ_t C_t(q)·cos((2t+1)nπ / 2L)`.
pub fn rcsf_segment_matrix(frame_mfccs: &[Vec<f64>], temporal_order: usize) -> Result<Vec<Vec<f64>>> {
    let dct = Dct2::new(frame_mfccs.len(), temporal_order)?;
    segment_matrix_with(&dct, frame_mfccs)
}

fn segment_matrix_with(dct: &Dct2, frame_mfccs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    if frame_mfccs.len() != dct.len() {
        return Err(Error::LengthMismatch {
            expected: dct.len(),
            actual: frame_mfccs.len(),
        });
    }
    let order = frame_mfccs.first().map_or(0, Vec::len);
    if frame_mfccs.iter().any(|row| row.len() != order) {
        return Err(Error::InvalidArgument("ragged MFCC matrix".into()));
    }
    (0..order)
        .map(|q| {
            let track: Vec<f64> = frame_mfccs.iter().map(|row| row[q]).collect();
            dct.apply(&track)
        })
        .collect()
}

/// Row-major flattening: all modulation coefficients of quefrency 0, then
/// quefrency 1, and so on.
pub fn rcsf_segment_vector(matrix: &[Vec<f64>], segment_index: usize) -> SegmentFeature {
    SegmentFeature {
        values: matrix.iter().flatten().copied().collect(),
        segment_index,
    }
}

/// Per-dimension mean followed by population standard deviation.
pub fn aggregate_segments(segments: &[SegmentFeature]) -> Vec<f64> {
    let k = segments.len() as f64;
    let dim = segments.first().map_or(0, |s| s.values.len());
    let mut mean = vec![0.0; dim];
    for s in segments {
        for (m, v) in mean.iter_mut().zip(&s.values) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= k);
    let mut var = vec![0.0; dim];
    for s in segments {
        for ((acc, v), m) in var.iter_mut().zip(&s.values).zip(&mean) {
            *acc += (v - m).powi(2);
        }
    }
    let std = var.into_iter().map(|v| (v / k).sqrt());
    mean.iter().copied().chain(std).collect()
}

/// Per-frame intermediate results that do not depend on the cepstral or
/// temporal orders. Computing this once lets an order sweep reuse the
/// expensive framing and FFT work.
#[derive(Debug, Clone)]
pub struct FrameAnalysis {
    /// `ln(max(E(b), ε))` per frame.
    pub log_mel: Vec<Vec<f64>>,
    /// Power spectra per frame; kept only when a low-level family needs them.
    pub spectra: Option<Vec<PowerSpectrum>>,
}

impl FrameAnalysis {
    pub fn num_frames(&self) -> usize {
        self.log_mel.len()
    }
}

/// Immutable extraction context for one framing/filterbank layout. Safe to
/// share across threads.
#[derive(Debug, Clone)]
pub struct FeatureExtractor {
    config: FeatureConfig,
    analyzer: SpectrumAnalyzer,
    filterbank: MelFilterbank,
}

impl FeatureExtractor {
    pub fn new(config: FeatureConfig) -> Result<Self> {
        config.validate()?;
        let analyzer =
            SpectrumAnalyzer::new(config.framing.frame_len_samples, config.sample_rate_hz)?;
        let filterbank = MelFilterbank::new(
            config.num_mel_filters,
            config.framing.frame_len_samples,
            config.sample_rate_hz,
        )?;
        Ok(Self {
            config,
            analyzer,
            filterbank,
        })
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn filterbank(&self) -> &MelFilterbank {
        &self.filterbank
    }

    /// Frames and analyzes a clip. Requires at least one full segment.
    pub fn analyze(&self, clip: &PcmClip, keep_spectra: bool) -> Result<FrameAnalysis> {
        if clip.sample_rate_hz() != self.config.sample_rate_hz {
            return Err(Error::InvalidArgument(format!(
                "clip rate {} Hz does not match configured {} Hz",
                clip.sample_rate_hz(),
                self.config.sample_rate_hz
            )));
        }
        let framing = &self.config.framing;
        let l = self.config.frames_per_segment;
        let needed = framing.frame_len_samples + (l - 1) * framing.hop_samples;
        if framing.frame_count(clip.len()) < l {
            return Err(Error::TooShort {
                what: "segment",
                len: clip.len(),
                needed,
            });
        }
        let frames = frame_signal(clip.samples(), framing)?;
        let mut log_mel = Vec::with_capacity(frames.len());
        let mut spectra = keep_spectra.then(|| Vec::with_capacity(frames.len()));
        for frame in &frames {
            let spec = self.analyzer.analyze(frame)?;
            let energies = filter_energies(&spec, &self.filterbank)?;
            log_mel.push(energies.iter().map(|&e| e.max(LOG_FLOOR).ln()).collect());
            if let Some(s) = spectra.as_mut() {
                s.push(spec);
            }
        }
        Ok(FrameAnalysis { log_mel, spectra })
    }

    /// Feature vector of a clip under this extractor's configuration.
    pub fn extract(&self, clip: &PcmClip) -> Result<ClipFeatureVector> {
        let keep = !self.config.family.uses_cepstrum();
        let analysis = self.analyze(clip, keep)?;
        features_from_analysis(&analysis, &self.config)
    }
}

/// Finishes feature extraction from a [`FrameAnalysis`]. `config` may differ
/// from the analyzing extractor's only in family and orders.
pub fn features_from_analysis(
    analysis: &FrameAnalysis,
    config: &FeatureConfig,
) -> Result<ClipFeatureVector> {
    config.validate()?;
    let l = config.frames_per_segment;
    let num_frames = analysis.num_frames();
    let k = num_frames / l;
    if k == 0 {
        return Err(Error::TooShort {
            what: "segment (frames)",
            len: num_frames,
            needed: l,
        });
    }

    let per_frame: Vec<Vec<f64>> = match config.family {
        FeatureFamily::LlfS | FeatureFamily::LlfEs => {
            let spectra = analysis.spectra.as_ref().ok_or_else(|| {
                Error::InvalidArgument("low-level features need stored spectra".into())
            })?;
            let energies = config.family == FeatureFamily::LlfEs;
            spectra
                .iter()
                .enumerate()
                .map(|(t, s)| llf_frame(s, t.checked_sub(1).map(|p| &spectra[p]), config, energies))
                .collect::<Result<_>>()?
        }
        _ => {
            if let Some(first) = analysis.log_mel.first() {
                if config.quefrency_order >= first.len() {
                    return Err(Error::InvalidArgument(format!(
                        "quefrency order {} needs more than {} mel filters",
                        config.quefrency_order,
                        first.len()
                    )));
                }
            }
            let dct = Dct2::new(
                analysis.log_mel.first().map_or(0, Vec::len),
                config.quefrency_order,
            )?;
            let mfcc: Vec<Vec<f64>> = analysis
                .log_mel
                .iter()
                .map(|logs| dct.apply(logs))
                .collect::<Result<_>>()?;
            match config.family {
                FeatureFamily::Mfccd | FeatureFamily::Mfccdd => {
                    let d1 = delta_coeffs(&mfcc, config.delta_window)?;
                    let d2 = if config.family == FeatureFamily::Mfccdd {
                        Some(delta_coeffs(&d1, config.delta_window)?)
                    } else {
                        None
                    };
                    mfcc.into_iter()
                        .zip(d1)
                        .enumerate()
                        .map(|(t, (mut c, d))| {
                            c.extend(d);
                            if let Some(dd) = &d2 {
                                c.extend_from_slice(&dd[t]);
                            }
                            c
                        })
                        .collect()
                }
                _ => mfcc,
            }
        }
    };

    let segments: Vec<SegmentFeature> = if config.family == FeatureFamily::Rcsf {
        let dct = Dct2::new(l, config.temporal_order)?;
        per_frame[..k * l]
            .chunks_exact(l)
            .enumerate()
            .map(|(i, block)| Ok(rcsf_segment_vector(&segment_matrix_with(&dct, block)?, i)))
            .collect::<Result<_>>()?
    } else {
        per_frame[..k * l]
            .chunks_exact(l)
            .enumerate()
            .map(|(i, block)| {
                let dim = block[0].len();
                let mut mean = vec![0.0; dim];
                for row in block {
                    for (m, v) in mean.iter_mut().zip(row) {
                        *m += v;
                    }
                }
                mean.iter_mut().for_each(|m| *m /= l as f64);
                SegmentFeature {
                    values: mean,
                    segment_index: i,
                }
            })
            .collect()
    };

    let values = aggregate_segments(&segments);
    debug_assert_eq!(values.len(), config.vector_dim());
    Ok(ClipFeatureVector {
        values,
        fingerprint: config.fingerprint(),
        num_segments: k,
    })
}

/// Convenience wrapper building a one-off [`FeatureExtractor`].
pub fn clip_feature(clip: &PcmClip, config: &FeatureConfig) -> Result<ClipFeatureVector> {
    FeatureExtractor::new(config.clone())?.extract(clip)
}
