//! Deterministic synthetic clips for demos and end-to-end checks.
//!
//! Positive clips repeat short pitch arcs centred near 500 Hz with a few
//! harmonics and breathy noise above 4 kHz. Negative clips are steady
//! drones, slow note sequences and coloured noise. Every clip carries a
//! faint background noise bed.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audio_io::{
    write_wav, DatasetManifest, Label, ManifestEntry, PcmClip, Split, WavEncoding, CANONICAL_RATE_HZ,
    CLIP_LEN_S,
};
use crate::error::Result;

const RATE: f64 = CANONICAL_RATE_HZ as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthKind {
    /// Repeated ~500 ms pitch arcs.
    Chirp,
    /// Constant-pitch harmonic drone.
    Steady,
    /// Sequence of held notes.
    Tone,
    /// Low-passed or white noise with a slow envelope.
    Noise,
}

impl SynthKind {
    pub const NEGATIVE: [SynthKind; 3] = [SynthKind::Steady, SynthKind::Tone, SynthKind::Noise];

    pub fn label(self) -> Label {
        match self {
            SynthKind::Chirp => Label::Obscene,
            _ => Label::NonObscene,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SynthKind::Chirp => "chirp",
            SynthKind::Steady => "steady",
            SynthKind::Tone => "tone",
            SynthKind::Noise => "noise",
        }
    }
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn normalize_peak(samples: &mut [f64], peak: f64) {
    let max = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max > 0.0 {
        let g = peak / max;
        samples.iter_mut().for_each(|v| *v *= g);
    }
}

/// Harmonic oscillator following a per-sample frequency track.
fn render_harmonics(out: &mut [f64], freqs: &[f64], env: &[f64], amps: &[f64], phase: &mut f64) {
    for ((o, &f), &e) in out.iter_mut().zip(freqs).zip(env) {
        *phase += 2.0 * PI * f / RATE;
        let mut v = 0.0;
        for (h, &a) in amps.iter().enumerate() {
            let fh = f * (h + 1) as f64;
            if fh < RATE / 2.0 {
                v += a * (*phase * (h + 1) as f64).sin();
            }
        }
        *o += e * v;
    }
}

fn chirp(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    let center = rng.random_range(430.0..620.0);
    let amps: Vec<f64> = (0..4).map(|h| rng.random_range(0.5..1.0) / (h + 1) as f64).collect();
    let breath_level = rng.random_range(0.05..0.2);
    let mut phase = 0.0;
    let mut pos = rng.random_range(0..(0.2 * RATE) as usize);
    while pos < n {
        let len = (rng.random_range(0.4..0.6) * RATE) as usize;
        let end = (pos + len).min(n);
        let depth = rng.random_range(0.2..0.45);
        let lift = rng.random_range(-0.15..0.15);
        let level = rng.random_range(0.6..1.0);
        let m = end - pos;
        let mut freqs = Vec::with_capacity(m);
        let mut env = Vec::with_capacity(m);
        for k in 0..m {
            let u = k as f64 / len as f64;
            // rise-then-fall arc with a random tilt
            freqs.push(center * (1.0 + depth * ((PI * u).sin() - 0.5) + lift * (u - 0.5)));
            env.push(level * (PI * u).sin().powf(0.7));
        }
        render_harmonics(&mut out[pos..end], &freqs, &env, &amps, &mut phase);
        // breath: differenced noise, which tilts energy towards high frequencies
        let mut prev = 0.0;
        for (k, o) in out[pos..end].iter_mut().enumerate() {
            let w = gauss(rng);
            *o += breath_level * env[k] * (w - prev);
            prev = w;
        }
        let gap = (rng.random_range(0.05..0.25) * RATE) as usize;
        pos = end + gap;
    }
    out
}

fn steady(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let f0 = rng.random_range(80.0..900.0);
    let amps: Vec<f64> = (0..6).map(|h| rng.random_range(0.2..1.0) / (h + 1) as f64).collect();
    let trem_rate = rng.random_range(0.1..0.5);
    let trem_depth = rng.random_range(0.0..0.2);
    let freqs = vec![f0; n];
    let env: Vec<f64> = (0..n)
        .map(|k| 1.0 - trem_depth * (0.5 + 0.5 * (2.0 * PI * trem_rate * k as f64 / RATE).sin()))
        .collect();
    let mut out = vec![0.0; n];
    render_harmonics(&mut out, &freqs, &env, &amps, &mut 0.0);
    out
}

fn tone(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    let amps: Vec<f64> = (0..3).map(|h| rng.random_range(0.3..1.0) / (h + 1) as f64).collect();
    let base = rng.random_range(150.0..500.0);
    let mut phase = 0.0;
    let mut pos = 0;
    while pos < n {
        let len = (rng.random_range(0.9..2.5) * RATE) as usize;
        let end = (pos + len).min(n);
        let semis = rng.random_range(0..19) as f64;
        let f = base * 2f64.powf(semis / 12.0);
        let m = end - pos;
        let attack = (0.02 * RATE) as usize;
        let env: Vec<f64> = (0..m)
            .map(|k| {
                let a = (k as f64 / attack as f64).min(1.0);
                let r = ((m - k) as f64 / attack as f64).min(1.0);
                a * r * (-(k as f64) / (1.5 * RATE)).exp()
            })
            .collect();
        render_harmonics(&mut out[pos..end], &vec![f; m], &env, &amps, &mut phase);
        pos = end;
    }
    out
}

fn noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    // one-pole low-pass; pole 0 leaves white noise
    let pole = [0.0, 0.7, 0.95][rng.random_range(0..3)];
    let drift = rng.random_range(0.05..0.3);
    let depth = rng.random_range(0.0..0.3);
    let offset = rng.random_range(0.0..2.0 * PI);
    let mut state = 0.0;
    (0..n)
        .map(|k| {
            state = pole * state + gauss(rng);
            let env = 1.0 - depth * (0.5 + 0.5 * (2.0 * PI * drift * k as f64 / RATE + offset).sin());
            env * state
        })
        .collect()
}

/// Mixes in a noise bed of random colour at 8 to 35 dB below the clip, so
/// that noisiness alone does not separate the classes.
fn add_background(rng: &mut ChaCha8Rng, samples: &mut [f64]) {
    let power = samples.iter().map(|v| v * v).sum::<f64>() / samples.len().max(1) as f64;
    if power == 0.0 {
        return;
    }
    let bed = noise(rng, samples.len());
    let bed_power = bed.iter().map(|v| v * v).sum::<f64>() / bed.len() as f64;
    let snr_db = rng.random_range(8.0..35.0);
    let g = (power / bed_power / 10f64.powf(snr_db / 10.0)).sqrt();
    for (s, b) in samples.iter_mut().zip(bed) {
        *s += g * b;
    }
}

/// One canonical-rate clip of `duration_s` seconds.
pub fn synth_clip(kind: SynthKind, seed: u64, duration_s: f64) -> PcmClip {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (duration_s * RATE).round() as usize;
    let mut samples = match kind {
        SynthKind::Chirp => chirp(&mut rng, n),
        SynthKind::Steady => steady(&mut rng, n),
        SynthKind::Tone => tone(&mut rng, n),
        SynthKind::Noise => noise(&mut rng, n),
    };
    add_background(&mut rng, &mut samples);
    let peak = rng.random_range(0.2..0.8);
    normalize_peak(&mut samples, peak);
    PcmClip::new(samples, CANONICAL_RATE_HZ).expect("peak-normalized samples are in range")
}

/// Kind and seed of the `index`-th clip of a class in a corpus.
pub fn corpus_item(label: Label, index: usize, seed: u64) -> (SynthKind, u64) {
    let kind = match label {
        Label::Obscene => SynthKind::Chirp,
        Label::NonObscene => SynthKind::NEGATIVE[index % SynthKind::NEGATIVE.len()],
    };
    let class_salt: u64 = match label {
        Label::Obscene => 0x5EED_0001,
        Label::NonObscene => 0x5EED_0002,
    };
    let item_seed = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(class_salt << 20)
        .wrapping_add(index as u64);
    (kind, item_seed)
}

/// Writes `per_class` positive and `per_class` negative 10 s clips under
/// `dir` together with `manifest.jsonl`. The first half of each class is
/// the training split.
pub fn generate_corpus(dir: &Path, per_class: usize, seed: u64) -> Result<DatasetManifest> {
    std::fs::create_dir_all(dir)?;
    let jobs: Vec<(Label, usize)> = [Label::Obscene, Label::NonObscene]
        .into_iter()
        .flat_map(|l| (0..per_class).map(move |i| (l, i)))
        .collect();
    let entries = jobs
        .par_iter()
        .map(|&(label, i)| -> Result<ManifestEntry> {
            let (kind, item_seed) = corpus_item(label, i, seed);
            let clip = synth_clip(kind, item_seed, CLIP_LEN_S);
            let name = PathBuf::from(format!("{}_{:04}.wav", label.as_str(), i));
            write_wav(dir.join(&name), &clip, WavEncoding::Pcm16)?;
            Ok(ManifestEntry {
                path: name,
                label,
                category: Some(kind.as_str().to_string()),
                split: if i < per_class.div_ceil(2) {
                    Split::Train
                } else {
                    Split::Test
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = DatasetManifest::new(entries, dir.to_path_buf())?;
    manifest.save(dir.join("manifest.jsonl"))?;
    Ok(manifest)
}

/// Joins clips end to end.
pub fn concatenate(clips: &[PcmClip]) -> Result<PcmClip> {
    let samples: Vec<f64> = clips.iter().flat_map(|c| c.samples().iter().copied()).collect();
    PcmClip::new_unbounded(samples, CANONICAL_RATE_HZ)
}
