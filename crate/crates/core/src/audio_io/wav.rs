use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::{PcmClip, CANONICAL_RATE_HZ};
use crate::error::{Error, Result};

/// Sample encoding used when writing a clip back to disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavEncoding {
    /// 16-bit integer PCM. Samples outside `[-1, 1]` saturate.
    Pcm16,
    /// 32-bit IEEE float. Preserves out-of-range noisy samples.
    Float32,
}

/// Loads a PCM or IEEE-float WAV file as a canonical 16 kHz mono clip.
///
/// Channels are averaged per sample and the rate is converted by linear
/// interpolation. Integer samples are divided by `2^(bits-1)`. Float files
/// whose samples leave `[-1, 1]` are taken to be noise-augmented and kept
/// unclipped.
pub fn load_audio(path: impl AsRef<Path>) -> Result<PcmClip> {
    let path = path.as_ref();
    let reader = WavReader::open(path).map_err(|e| map_hound(path, e))?;
    let spec = reader.spec();
    if spec.channels == 0 {
        return Err(Error::AudioRead {
            path: path.to_path_buf(),
            reason: "zero channels".into(),
        });
    }

    let interleaved: Vec<f64> = match spec.sample_format {
        SampleFormat::Int => {
            if !(1..=32).contains(&spec.bits_per_sample) {
                return Err(Error::UnsupportedCodec {
                    path: path.to_path_buf(),
                    reason: format!("{}-bit integer samples", spec.bits_per_sample),
                });
            }
            let scale = (1u64 << (spec.bits_per_sample - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| v as f64 / scale))
                .collect::<Result<_, _>>()
                .map_err(|e| map_hound(path, e))?
        }
        SampleFormat::Float => {
            if spec.bits_per_sample != 32 {
                return Err(Error::UnsupportedCodec {
                    path: path.to_path_buf(),
                    reason: format!("{}-bit float samples", spec.bits_per_sample),
                });
            }
            reader
                .into_samples::<f32>()
                .map(|s| s.map(f64::from))
                .collect::<Result<_, _>>()
                .map_err(|e| map_hound(path, e))?
        }
    };

    let channels = spec.channels as usize;
    let mono: Vec<f64> = interleaved
        .chunks_exact(channels)
        .map(|frame| frame.iter().sum::<f64>() / channels as f64)
        .collect();
    if mono.is_empty() {
        return Err(Error::EmptyAudio(path.to_path_buf()));
    }
    if let Some(i) = mono.iter().position(|s| !s.is_finite()) {
        return Err(Error::AudioRead {
            path: path.to_path_buf(),
            reason: format!("sample {i} is not finite"),
        });
    }

    let samples = if spec.sample_rate == CANONICAL_RATE_HZ {
        mono
    } else {
        resample_linear(&mono, spec.sample_rate, CANONICAL_RATE_HZ)?
    };

    if samples.iter().all(|s| s.abs() <= 1.0) {
        PcmClip::new(samples, CANONICAL_RATE_HZ)
    } else {
        PcmClip::new_unbounded(samples, CANONICAL_RATE_HZ)
    }
}

/// Linear-interpolation rate conversion.
///
/// Output length is `floor(n * to / from)` (at least one sample for
/// nonempty input). Output sample `i` reads the input at position
/// `i * from / to`.
pub fn resample_linear(samples: &[f64], from_hz: u32, to_hz: u32) -> Result<Vec<f64>> {
    if from_hz == 0 || to_hz == 0 {
        return Err(Error::InvalidArgument("sample rates must be positive".into()));
    }
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    if from_hz == to_hz {
        return Ok(samples.to_vec());
    }
    let n = samples.len();
    let out_len = ((n as u128 * to_hz as u128) / from_hz as u128).max(1) as usize;
    let step = from_hz as f64 / to_hz as f64;
    Ok((0..out_len)
        .map(|i| {
            let pos = i as f64 * step;
            let i0 = (pos.floor() as usize).min(n - 1);
            let i1 = (i0 + 1).min(n - 1);
            let frac = pos - i0 as f64;
            samples[i0] + (samples[i1] - samples[i0]) * frac
        })
        .collect())
}

/// Writes a mono clip at its own sample rate.
pub fn write_wav(path: impl AsRef<Path>, clip: &PcmClip, encoding: WavEncoding) -> Result<()> {
    let path = path.as_ref();
    let to_err = |e: hound::Error| Error::AudioWrite {
        path: path.to_path_buf(),
        reason: e.to_string(),
    };
    let spec = match encoding {
        WavEncoding::Pcm16 => WavSpec {
            channels: 1,
            sample_rate: clip.sample_rate_hz(),
            bits_per_sample: 16,
            sample_format: SampleFormat::Int,
        },
        WavEncoding::Float32 => WavSpec {
            channels: 1,
            sample_rate: clip.sample_rate_hz(),
            bits_per_sample: 32,
            sample_format: SampleFormat::Float,
        },
    };
    let mut writer = WavWriter::create(path, spec).map_err(to_err)?;
    match encoding {
        WavEncoding::Pcm16 => {
            for &s in clip.samples() {
                let q = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
                writer.write_sample(q).map_err(to_err)?;
            }
        }
        WavEncoding::Float32 => {
            for &s in clip.samples() {
                writer.write_sample(s as f32).map_err(to_err)?;
            }
        }
    }
    writer.finalize().map_err(to_err)
}

fn map_hound(path: &Path, e: hound::Error) -> Error {
    match e {
        hound::Error::Unsupported => Error::UnsupportedCodec {
            path: path.to_path_buf(),
            reason: "format tag is neither PCM nor IEEE float".into(),
        },
        hound::Error::InvalidSampleFormat => Error::UnsupportedCodec {
            path: path.to_path_buf(),
            reason: "invalid sample format".into(),
        },
        hound::Error::TooWide => Error::UnsupportedCodec {
            path: path.to_path_buf(),
            reason: "sample width too large".into(),
        },
        other => Error::AudioRead {
            path: path.to_path_buf(),
            reason: other.to_string(),
        },
    }
}
