//! Spectral primitives shared by every feature family: framing, windowing,
//! power spectra, the mel filterbank and an unnormalized DCT-II.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower bound on filter energies before taking a logarithm.
pub const LOG_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    Rectangular,
    Hamming,
}

impl Window {
    pub fn coefficients(self, len: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; len],
            Window::Hamming if len == 1 => vec![1.0],
            Window::Hamming => (0..len)
                .map(|n| 0.54 - 0.46 * (2.0 * PI * n as f64 / (len - 1) as f64).cos())
                .collect(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Window::Rectangular => "rectangular",
            Window::Hamming => "hamming",
        }
    }
}

/// Frame layout. The canonical 512/256 pair is a 32 ms frame with 50 %
/// overlap at 16 kHz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FramingParams {
    pub frame_len_samples: usize,
    pub hop_samples: usize,
    pub window: Window,
}

impl Default for FramingParams {
    fn default() -> Self {
        Self {
            frame_len_samples: 512,
            hop_samples: 256,
            window: Window::Hamming,
        }
    }
}

impl FramingParams {
    pub fn validate(&self) -> Result<()> {
        if self.hop_samples == 0 || self.hop_samples > self.frame_len_samples {
            return Err(Error::InvalidArgument(format!(
                "hop {} must lie in 1..={}",
                self.hop_samples, self.frame_len_samples
            )));
        }
        Ok(())
    }

    /// `floor((n - frame) / hop) + 1`, or zero when `n < frame`.
    pub fn frame_count(&self, n: usize) -> usize {
        if n < self.frame_len_samples || self.hop_samples == 0 {
            0
        } else {
            (n - self.frame_len_samples) / self.hop_samples + 1
        }
    }
}

/// Splits `samples` into windowed frames; frame `t` starts at `t * hop`.
pub fn frame_signal(samples: &[f64], params: &FramingParams) -> Result<Vec<Vec<f64>>> {
    params.validate()?;
    let len = params.frame_len_samples;
    if samples.len() < len {
        return Err(Error::TooShort {
            what: "frame",
            len: samples.len(),
            needed: len,
        });
    }
    let window = params.window.coefficients(len);
    Ok((0..params.frame_count(samples.len()))
        .map(|t| {
            let start = t * params.hop_samples;
            samples[start..start + len]
                .iter()
                .zip(&window)
                .map(|(s, w)| s * w)
                .collect()
        })
        .collect())
}

/// One-sided power spectrum of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    /// `|X[j]|^2` for `j = 0..=len/2`.
    pub bins: Vec<f64>,
    pub bin_width_hz: f64,
}

impl PowerSpectrum {
    pub fn frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.bin_width_hz
    }
}

/// Reusable FFT plan for power spectra of one frame length.
#[derive(Clone)]
pub struct SpectrumAnalyzer {
    fft: Arc<dyn Fft<f64>>,
    len: usize,
    bin_width_hz: f64,
}

impl std::fmt::Debug for SpectrumAnalyzer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectrumAnalyzer")
            .field("len", &self.len)
            .field("bin_width_hz", &self.bin_width_hz)
            .finish()
    }
}

impl SpectrumAnalyzer {
    pub fn new(frame_len: usize, sample_rate_hz: u32) -> Result<Self> {
        if !frame_len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(frame_len));
        }
        if sample_rate_hz == 0 {
            return Err(Error::InvalidArgument("sample rate must be positive".into()));
        }
        let fft = FftPlanner::new().plan_fft_forward(frame_len);
        Ok(Self {
            fft,
            len: frame_len,
            bin_width_hz: sample_rate_hz as f64 / frame_len as f64,
        })
    }

    pub fn frame_len(&self) -> usize {
        self.len
    }

    pub fn analyze(&self, frame: &[f64]) -> Result<PowerSpectrum> {
        if frame.len() != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: frame.len(),
            });
        }
        let mut buf: Vec<Complex<f64>> = frame.iter().map(|&x| Complex::new(x, 0.0)).collect();
        self.fft.process(&mut buf);
        Ok(PowerSpectrum {
            bins: buf[..=self.len / 2].iter().map(|c| c.norm_sqr()).collect(),
            bin_width_hz: self.bin_width_hz,
        })
    }
}

/// One-shot power spectrum; prefer [`SpectrumAnalyzer`] in loops.
pub fn power_spectrum(frame: &[f64], sample_rate_hz: u32) -> Result<PowerSpectrum> {
    SpectrumAnalyzer::new(frame.len(), sample_rate_hz)?.analyze(frame)
}

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular filters with edges equally spaced on the mel scale.
#[derive(Debug, Clone, PartialEq)]
pub struct MelFilterbank {
    /// One row per filter, one weight per spectrum bin.
    pub weights: Vec<Vec<f64>>,
    /// `num_filters + 2` ascending edges in Hz.
    pub band_edges_hz: Vec<f64>,
    /// Half-open range of bins with nonzero weight, per filter.
    support: Vec<(usize, usize)>,
}

impl MelFilterbank {
    /// Filterbank spanning `0 .. sample_rate/2` for spectra of `frame_len`.
    pub fn new(num_filters: usize, frame_len: usize, sample_rate_hz: u32) -> Result<Self> {
        Self::with_range(
            num_filters,
            frame_len,
            sample_rate_hz,
            0.0,
            sample_rate_hz as f64 / 2.0,
        )
    }

    pub fn with_range(
        num_filters: usize,
        frame_len: usize,
        sample_rate_hz: u32,
        low_hz: f64,
        high_hz: f64,
    ) -> Result<Self> {
        if num_filters == 0 {
            return Err(Error::InvalidArgument("need at least one mel filter".into()));
        }
        if !(0.0 <= low_hz && low_hz < high_hz && high_hz <= sample_rate_hz as f64 / 2.0) {
            return Err(Error::InvalidArgument(format!(
                "mel range {low_hz}..{high_hz} Hz is invalid"
            )));
        }
        let (mel_lo, mel_hi) = (hz_to_mel(low_hz), hz_to_mel(high_hz));
        let step = (mel_hi - mel_lo) / (num_filters + 1) as f64;
        let edges: Vec<f64> = (0..num_filters + 2)
            .map(|i| {
                if i == num_filters + 1 {
                    high_hz
                } else {
                    mel_to_hz(mel_lo + i as f64 * step)
                }
            })
            .collect();

        let num_bins = frame_len / 2 + 1;
        let bin_width = sample_rate_hz as f64 / frame_len as f64;
        let weights = (0..num_filters)
            .map(|b| {
                let (lo, center, hi) = (edges[b], edges[b + 1], edges[b + 2]);
                (0..num_bins)
                    .map(|j| {
                        let f = j as f64 * bin_width;
                        if f > lo && f <= center {
                            (f - lo) / (center - lo)
                        } else if f > center && f < hi {
                            (hi - f) / (hi - center)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect::<Vec<Vec<f64>>>();
        let support = weights
            .iter()
            .map(|row| {
                let start = row.iter().position(|&w| w > 0.0).unwrap_or(0);
                let end = row.iter().rposition(|&w| w > 0.0).map_or(start, |j| j + 1);
                (start, end)
            })
            .collect();
        Ok(Self {
            weights,
            band_edges_hz: edges,
            support,
        })
    }

    pub fn num_filters(&self) -> usize {
        self.weights.len()
    }

    pub fn num_bins(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }
}

/// `E(b) = Σ_j w[b][j]·P[j]`, without any floor.
pub fn filter_energies(spec: &PowerSpectrum, fb: &MelFilterbank) -> Result<Vec<f64>> {
    if spec.bins.len() != fb.num_bins() {
        return Err(Error::LengthMismatch {
            expected: fb.num_bins(),
            actual: spec.bins.len(),
        });
    }
    Ok(fb
        .weights
        .iter()
        .zip(&fb.support)
        .map(|(row, &(start, end))| {
            row[start..end]
                .iter()
                .zip(&spec.bins[start..end])
                .map(|(w, p)| w * p)
                .sum()
        })
        .collect())
}

/// Precomputed unnormalized DCT-II:
/// `out[p] = Σ_i x[i]·cos((2i+1)pπ / 2M)` for `p < order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dct2 {
    len: usize,
    order: usize,
    table: Vec<f64>,
}

impl Dct2 {
    pub fn new(len: usize, order: usize) -> Result<Self> {
        if order == 0 || order > len {
            return Err(Error::InvalidArgument(format!(
                "DCT order {order} must lie in 1..={len}"
            )));
        }
        let m = len as f64;
        let table = (0..order)
            .flat_map(|p| {
                (0..len).map(move |i| ((2 * i + 1) as f64 * p as f64 * PI / (2.0 * m)).cos())
            })
            .collect();
        Ok(Self { len, order, table })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn apply(&self, seq: &[f64]) -> Result<Vec<f64>> {
        if seq.len() != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: seq.len(),
            });
        }
        Ok(self
            .table
            .chunks_exact(self.len)
            .map(|row| row.iter().zip(seq).map(|(c, x)| c * x).sum())
            .collect())
    }
}

pub fn dct2(seq: &[f64], order: usize) -> Result<Vec<f64>> {
    Dct2::new(seq.len(), order)?.apply(seq)
}
