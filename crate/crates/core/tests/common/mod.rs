//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library's numeric code.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// `|X[j]|^2` for `j = 0..=n/2` by the defining O(n²) sum.
pub fn naive_power_spectrum(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..=n / 2)
        .map(|j| {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, &v) in x.iter().enumerate() {
                let theta = -2.0 * PI * ((i * j) % n) as f64 / n as f64;
                re += v * theta.cos();
                im += v * theta.sin();
            }
            re * re + im * im
        })
        .collect()
}

/// `out[p] = Σ_i x[i]·cos((2i+1)pπ / 2M)`.
pub fn literal_dct2(x: &[f64], order: usize) -> Vec<f64> {
    let m = x.len() as f64;
    let mut out = vec![0.0; order];
    for (p, o) in out.iter_mut().enumerate() {
        for (i, &v) in x.iter().enumerate() {
            *o += v * ((2.0 * i as f64 + 1.0) * p as f64 * PI / (2.0 * m)).cos();
        }
    }
    out
}

pub fn hamming(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / (n as f64 - 1.0)).cos())
        .collect()
}

/// Triangular mel filters over `0..rate/2` as a dense weight matrix.
pub fn reference_filterbank(num_filters: usize, frame_len: usize, rate: f64) -> Vec<Vec<f64>> {
    let mel = |f: f64| 2595.0 * (1.0 + f / 700.0).log10();
    let inv = |m: f64| 700.0 * (10f64.powf(m / 2595.0) - 1.0);
    let top = mel(rate / 2.0);
    let edges: Vec<f64> = (0..num_filters + 2)
        .map(|i| inv(top * i as f64 / (num_filters + 1) as f64))
        .collect();
    let bins = frame_len / 2 + 1;
    (0..num_filters)
        .map(|b| {
            let (lo, c, hi) = (edges[b], edges[b + 1], edges[b + 2]);
            (0..bins)
                .map(|j| {
                    let f = j as f64 * rate / frame_len as f64;
                    if f > lo && f <= c {
                        (f - lo) / (c - lo)
                    } else if f > c && f < hi {
                        (hi - f) / (hi - c)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Frame-level log mel energies of `samples` with 512/256 Hamming framing.
pub fn reference_log_mel(samples: &[f64], num_filters: usize) -> Vec<Vec<f64>> {
    let (len, hop) = (512, 256);
    let win = hamming(len);
    let fb = reference_filterbank(num_filters, len, 16_000.0);
    let frames = (samples.len() - len) / hop + 1;
    (0..frames)
        .map(|t| {
            let frame: Vec<f64> = (0..len).map(|i| samples[t * hop + i] * win[i]).collect();
            let p = naive_power_spectrum(&frame);
            fb.iter()
                .map(|w| {
                    let e: f64 = w.iter().zip(&p).map(|(a, b)| a * b).sum();
                    e.max(1e-10).ln()
                })
                .collect()
        })
        .collect()
}

/// Regression deltas with replicated edges.
pub fn reference_deltas(seq: &[Vec<f64>], w: usize) -> Vec<Vec<f64>> {
    let n = seq.len() as isize;
    let denom = 2.0 * (1..=w).map(|k| (k * k) as f64).sum::<f64>();
    let at = |t: isize| &seq[t.clamp(0, n - 1) as usize];
    (0..n)
        .map(|t| {
            (0..seq[0].len())
                .map(|d| {
                    (1..=w as isize)
                        .map(|k| k as f64 * (at(t + k)[d] - at(t - k)[d]))
                        .sum::<f64>()
                        / denom
                })
                .collect()
        })
        .collect()
}

/// Mean then population standard deviation across rows.
pub fn mean_and_pop_std(rows: &[Vec<f64>]) -> Vec<f64> {
    let k = rows.len() as f64;
    let dim = rows[0].len();
    let mut out = vec![0.0; 2 * dim];
    for d in 0..dim {
        let mean = rows.iter().map(|r| r[d]).sum::<f64>() / k;
        let var = rows.iter().map(|r| (r[d] - mean).powi(2)).sum::<f64>() / k;
        out[d] = mean;
        out[dim + d] = var.sqrt();
    }
    out
}

pub fn rbf_matrix(points: &[Vec<f64>], gamma: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| {
                    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                    (-gamma * d).exp()
                })
                .collect()
        })
        .collect()
}

/// `Σ α_i − ½ Σ_ij α_i α_j y_i y_j K_ij`.
pub fn dual_objective(alpha: &[f64], y: &[f64], k: &[Vec<f64>]) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Euclidean projection onto `{0 ≤ α ≤ C, Σ α_i y_i = 0}` by bisection on
/// the equality multiplier.
fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |lam: f64| -> Vec<f64> { v.iter().zip(y).map(|(a, s)| (a - lam * s).clamp(0.0, c)).collect() };
    let g = |lam: f64| -> f64 { at(lam).iter().zip(y).map(|(a, s)| a * s).sum() };
    let bound = v.iter().fold(0.0f64, |m, a| m.max(a.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Accelerated projected gradient ascent on the SVM dual.
pub fn projected_gradient_dual(k: &[Vec<f64>], y: &[f64], c: f64, iterations: usize) -> Vec<f64> {
    let n = y.len();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| y[i] * y[j] * k[i][j]).collect())
        .collect();
    // Gershgorin bound on the largest eigenvalue
    let lip = q
        .iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let step = 1.0 / lip;
    let mut x = vec![0.0; n];
    let mut z = x.clone();
    let mut t = 1.0f64;
    for _ in 0..iterations {
        let grad: Vec<f64> = (0..n)
            .map(|i| 1.0 - q[i].iter().zip(&z).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        let moved: Vec<f64> = z.iter().zip(&grad).map(|(a, g)| a + step * g).collect();
        let x_next = project(&moved, y, c);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        z = x_next
            .iter()
            .zip(&x)
            .map(|(a, b)| a + (t - 1.0) / t_next * (a - b))
            .collect();
        x = x_next;
        t = t_next;
    }
    x
}

/// Two Gaussian blobs in `dim` dimensions, centres `±sep/2` on every axis.
pub fn blobs(rng: &mut ChaCha8Rng, n: usize, dim: usize, sep: f64, spread: f64) -> (Vec<Vec<f64>>, Vec<i8>) {
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let m: i8 = if i % 2 == 0 { 1 } else { -1 };
        let centre = f64::from(m) * sep / 2.0;
        points.push(
            (0..dim)
                .map(|_| centre + spread * rng.random_range(-1.0..1.0))
                .collect(),
        );
        labels.push(m);
    }
    (points, labels)
}
