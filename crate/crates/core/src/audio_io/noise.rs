use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::PcmClip;
use crate::error::{Error, Result};

/// Mean of squared samples.
pub fn signal_power(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64
}

/// `10·log10(P_signal / P_noise)` from the clean signal and the realized noise.
pub fn measured_snr_db(clean: &[f64], noise: &[f64]) -> f64 {
    10.0 * (signal_power(clean) / signal_power(noise)).log10()
}

/// Adds white Gaussian noise at the requested SNR.
///
/// The noise variance is `P / 10^(snr_db/10)` with `P` the clip's mean
/// power. The result is flagged noise-augmented and is not clipped.
/// Identical seeds give identical noise.
pub fn add_awgn(clip: &PcmClip, snr_db: f64, rng_seed: u64) -> Result<PcmClip> {
    if !snr_db.is_finite() {
        return Err(Error::InvalidArgument(format!("SNR must be finite, got {snr_db}")));
    }
    let power = signal_power(clip.samples());
    if power == 0.0 {
        return Err(Error::SilentClip {
            offset_s: clip.source_offset_s(),
        });
    }
    let sigma = (power / 10f64.powf(snr_db / 10.0)).sqrt();
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidArgument(format!("noise distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let noisy: Vec<f64> = clip
        .samples()
        .iter()
        .map(|&s| s + normal.sample(&mut rng))
        .collect();
    Ok(PcmClip::new_unbounded(noisy, clip.sample_rate_hz())?.with_offset(clip.source_offset_s()))
}
