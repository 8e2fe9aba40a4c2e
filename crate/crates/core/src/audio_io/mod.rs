//! Canonical audio: loading, clip splitting and noise corruption.
//!
//! Everything downstream of this module consumes [`PcmClip`] values at
//! [`CANONICAL_RATE_HZ`] in mono. Clips cut for classification are exactly
//! [`CLIP_LEN_S`] seconds long.

mod manifest;
mod noise;
mod wav;

pub use manifest::{DatasetManifest, Label, ManifestEntry, Split};
pub use noise::{add_awgn, measured_snr_db, signal_power};
pub use wav::{load_audio, resample_linear, write_wav, WavEncoding};

use crate::error::{Error, Result};

pub const CANONICAL_RATE_HZ: u32 = 16_000;
pub const CLIP_LEN_S: f64 = 10.0;
/// Samples in one canonical classification clip.
pub const CLIP_SAMPLES: usize = 160_000;

/// Mono sample buffer at a fixed rate.
///
/// Samples lie in `[-1, 1]` unless `noise_augmented` is set, in which case
/// they are only guaranteed finite.
#[derive(Debug, Clone, PartialEq)]
pub struct PcmClip {
    samples: Vec<f64>,
    sample_rate_hz: u32,
    source_offset_s: f64,
    noise_augmented: bool,
}

impl PcmClip {
    /// Builds a bounded clip. Fails if a sample lies outside `[-1, 1]` or
    /// the rate is zero.
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(Error::InvalidArgument("sample rate must be positive".into()));
        }
        if let Some(i) = samples
            .iter()
            .position(|s| !s.is_finite() || s.abs() > 1.0)
        {
            return Err(Error::InvalidArgument(format!(
                "sample {i} = {} lies outside [-1, 1]",
                samples[i]
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            source_offset_s: 0.0,
            noise_augmented: false,
        })
    }

    /// Builds a clip whose samples may exceed `[-1, 1]`, e.g. after additive
    /// noise. Samples must still be finite.
    pub fn new_unbounded(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(Error::InvalidArgument("sample rate must be positive".into()));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument(format!("sample {i} is not finite")));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            source_offset_s: 0.0,
            noise_augmented: true,
        })
    }

    pub fn with_offset(mut self, offset_s: f64) -> Self {
        self.source_offset_s = offset_s;
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn source_offset_s(&self) -> f64 {
        self.source_offset_s
    }

    pub fn is_noise_augmented(&self) -> bool {
        self.noise_augmented
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz as f64
    }

    pub fn is_canonical(&self) -> bool {
        self.sample_rate_hz == CANONICAL_RATE_HZ
    }
}

/// Cuts a signal into consecutive non-overlapping clips of `clip_len_s`.
///
/// A trailing remainder shorter than one clip is dropped, so a signal
/// shorter than one clip yields an empty list. Each clip records its start
/// position in the source.
pub fn split_into_clips(signal: &PcmClip, clip_len_s: f64) -> Result<Vec<PcmClip>> {
    if !(clip_len_s.is_finite() && clip_len_s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "clip length must be positive, got {clip_len_s}"
        )));
    }
    let rate = signal.sample_rate_hz as f64;
    let clip_samples = (clip_len_s * rate).round() as usize;
    if clip_samples == 0 {
        return Err(Error::InvalidArgument("clip length rounds to zero samples".into()));
    }
    Ok(signal
        .samples
        .chunks_exact(clip_samples)
        .enumerate()
        .map(|(i, chunk)| PcmClip {
            samples: chunk.to_vec(),
            sample_rate_hz: signal.sample_rate_hz,
            source_offset_s: signal.source_offset_s + (i * clip_samples) as f64 / rate,
            noise_augmented: signal.noise_augmented,
        })
        .collect())
}
