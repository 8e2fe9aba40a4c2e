//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every tolerance below is fixed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rcsf_core::audio_io::{
    add_awgn, load_audio, measured_snr_db, signal_power, write_wav, DatasetManifest, Label, PcmClip,
    Split, WavEncoding,
};
use rcsf_core::cli::{run_sweep, scan_clips, train_model, SweepSpec};
use rcsf_core::dsp::{dct2, power_spectrum, MelFilterbank};
use rcsf_core::eval::{f1_score, harmful_rate, NoiseSpec, Verdict};
use rcsf_core::features::{
    features_from_analysis, FeatureConfig, FeatureExtractor, FeatureFamily, QUEFRENCY_SWEEP,
    TEMPORAL_SWEEP,
};
use rcsf_core::svm::{
    default_grid, max_kkt_violation, smo_solve, DenseGram, SmoSolution, SvmModel, TrainConfig,
};
use rcsf_core::synth::{concatenate, generate_corpus, synth_clip, SynthKind};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const DSP_FRAMES: usize = 1000;
const DSP_BUDGET: Duration = Duration::from_secs(10);
const SPECTRUM_REL_TOL: f64 = 1e-6;
const DCT_ABS_TOL: f64 = 1e-9;
const PARSEVAL_REL_TOL: f64 = 1e-9;

fn dsp_oracle_suite() -> Outcome {
    let start = Instant::now();
    let mut r = rng(101);
    let (mut worst_spec, mut worst_dct, mut worst_parseval) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..DSP_FRAMES {
        let scale = 10f64.powf(r.random_range(-3.0..1.0));
        let frame = uniform_vec(&mut r, 512, -scale, scale);

        let got = power_spectrum(&frame, 16_000).map_err(|e| e.to_string())?;
        let want = naive_power_spectrum(&frame);
        for (j, (g, w)) in got.bins.iter().zip(&want).enumerate() {
            let rel = (g - w).abs() / w.abs();
            worst_spec = worst_spec.max(rel);
            ensure!(rel <= SPECTRUM_REL_TOL, "frame {i} bin {j}: {g} vs {w}");
        }

        let energy: f64 = frame.iter().map(|x| x * x).sum();
        let n = got.bins.len();
        let folded = got.bins[0] + got.bins[n - 1] + 2.0 * got.bins[1..n - 1].iter().sum::<f64>();
        let rel = (folded / 512.0 - energy).abs() / energy;
        worst_parseval = worst_parseval.max(rel);
        ensure!(rel <= PARSEVAL_REL_TOL, "frame {i}: Parseval off by {rel:e}");

        let m = r.random_range(1..=64);
        let p = r.random_range(1..=m);
        let seq = &frame[..m];
        let got = dct2(seq, p).map_err(|e| e.to_string())?;
        for (k, (g, w)) in got.iter().zip(literal_dct2(seq, p)).enumerate() {
            worst_dct = worst_dct.max((g - w).abs());
            ensure!((g - w).abs() <= DCT_ABS_TOL, "M={m} P={p} out[{k}]: {g} vs {w}");
        }

        let filters = r.random_range(8..=40);
        let len = [256usize, 512, 1024, 2048][r.random_range(0..4)];
        let rate = [8_000u32, 16_000, 22_050, 44_100][r.random_range(0..4)];
        let fb = MelFilterbank::new(filters, len, rate).map_err(|e| e.to_string())?;
        let (lo, hi) = (fb.band_edges_hz[0], *fb.band_edges_hz.last().unwrap());
        for j in 0..=len / 2 {
            let f = j as f64 * rate as f64 / len as f64;
            if f > lo && f < hi {
                let cover: f64 = fb.weights.iter().map(|w| w[j]).sum();
                ensure!(cover > 0.0, "{filters} filters, {len}-point, {rate} Hz: hole at {f} Hz");
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < DSP_BUDGET, "took {elapsed:?}");
    Ok(format!(
        "{DSP_FRAMES} frames; worst spectrum rel {worst_spec:.1e}, DCT abs {worst_dct:.1e}, Parseval rel {worst_parseval:.1e}; {elapsed:.2?}"
    ))
}

const IDENTITY_TOL: f64 = 1e-6;

fn rcsf_indices(q: usize, t: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..q).flat_map(move |qi| (0..t).map(move |n| (qi, n, qi * t + n)))
}

fn feature_identities() -> Outcome {
    let (q, t) = (23, 15);
    let cfg = FeatureConfig::rcsf(q, t);
    let dim = q * t;

    // period of 64 samples divides the 256-sample hop, so every frame is identical
    let period: Vec<f64> = (0..64)
        .map(|i| {
            let ph = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
            0.4 * ph.sin() + 0.2 * (3.0 * ph).sin() + 0.1 * (7.0 * ph).cos()
        })
        .collect();
    let tone = PcmClip::new(period.iter().copied().cycle().take(160_000).collect(), 16_000).unwrap();
    let v = rcsf_core::features::clip_feature(&tone, &cfg).map_err(|e| e.to_string())?;
    let mut worst_flat = 0.0f64;
    for (qi, n, idx) in rcsf_indices(q, t) {
        if n >= 1 {
            let ratio = v.values[idx].abs() / v.values[qi * t].abs();
            worst_flat = worst_flat.max(ratio);
            ensure!(ratio <= IDENTITY_TOL, "stationary tone: C({qi},{n}) ratio {ratio:e}");
        }
    }

    // one 32-frame segment advances 32·256 = 8192 samples
    let mut r = rng(202);
    let block = uniform_vec(&mut r, 8192, -0.5, 0.5);
    let tiled = PcmClip::new(block.iter().copied().cycle().take(160_000).collect(), 16_000).unwrap();
    let v = rcsf_core::features::clip_feature(&tiled, &cfg).map_err(|e| e.to_string())?;
    ensure!(v.num_segments == 19, "expected 19 segments, got {}", v.num_segments);
    let mut worst_tile = 0.0f64;
    for d in 0..dim {
        let (mean, std) = (v.values[d], v.values[dim + d]);
        worst_tile = worst_tile.max(std / mean.abs());
        ensure!(std <= IDENTITY_TOL * mean.abs(), "tiled clip: dim {d} std {std} vs mean {mean}");
    }

    let base: Vec<f64> = (0..160_000)
        .map(|i| 0.1 * r.random_range(-1.0..1.0) + 0.1 * (i as f64 * 0.21).sin())
        .collect();
    let reference = rcsf_core::features::clip_feature(&PcmClip::new(base.clone(), 16_000).unwrap(), &cfg)
        .map_err(|e| e.to_string())?;
    let mut worst_scale = 0.0f64;
    for g in [0.25, 4.0, 9.5] {
        let scaled = PcmClip::new_unbounded(base.iter().map(|x| g * x).collect(), 16_000).unwrap();
        let v = rcsf_core::features::clip_feature(&scaled, &cfg).map_err(|e| e.to_string())?;
        for half in [0, dim] {
            for (qi, n, idx) in rcsf_indices(q, t) {
                let (a, b) = (reference.values[half + idx], v.values[half + idx]);
                if qi >= 1 {
                    let rel = (a - b).abs() / a.abs().max(b.abs());
                    worst_scale = worst_scale.max(rel);
                    ensure!(rel <= IDENTITY_TOL, "gain {g}: component ({qi},{n}) {a} vs {b}");
                }
            }
        }
        // the log-energy row moves by L·B·ln(g²) in its n = 0 entry
        let shift = v.values[0] - reference.values[0];
        let expected = 32.0 * 26.0 * 2.0 * f64::ln(g);
        ensure!(
            (shift - expected).abs() <= IDENTITY_TOL * expected.abs(),
            "gain {g}: C(0,0) shifted by {shift}, expected {expected}"
        );
    }

    let extractor = FeatureExtractor::new(FeatureConfig::with_family(FeatureFamily::LlfS, 7)).unwrap();
    let analysis = extractor
        .analyze(&PcmClip::new(base.iter().map(|x| x * 2.0).collect(), 16_000).unwrap(), true)
        .map_err(|e| e.to_string())?;
    let mut checked = 0;
    for family in FeatureFamily::ALL {
        for &bq in &QUEFRENCY_SWEEP {
            for &lt in &TEMPORAL_SWEEP {
                let mut c = FeatureConfig::with_family(family, bq);
                c.temporal_order = lt;
                let expected = match family {
                    FeatureFamily::Rcsf => 2 * bq * lt,
                    FeatureFamily::Mfcc => 2 * bq,
                    FeatureFamily::Mfccd => 4 * bq,
                    FeatureFamily::Mfccdd => 6 * bq,
                    FeatureFamily::LlfS => 10,
                    FeatureFamily::LlfEs => 28,
                };
                let v = features_from_analysis(&analysis, &c).map_err(|e| e.to_string())?;
                ensure!(
                    v.values.len() == expected && c.vector_dim() == expected,
                    "{family} B'={bq} L'={lt}: {} values, config says {}, expected {expected}",
                    v.values.len(),
                    c.vector_dim()
                );
                checked += 1;
            }
        }
    }
    Ok(format!(
        "flat-spectrum ratio {worst_flat:.1e}, tiled std ratio {worst_tile:.1e}, gain rel {worst_scale:.1e}, {checked} (family, B', L') dims"
    ))
}

const KKT_TOL: f64 = 1e-3;
const ORACLE_TOL: f64 = 1e-3;

fn check_solution(sol: &SmoSolution, labels: &[i8], c: f64, what: &str) -> Result<(), String> {
    let kkt = max_kkt_violation(sol, labels, c);
    ensure!(kkt <= KKT_TOL, "{what}: KKT violation {kkt:e}");
    for (i, w) in sol.objective_history.windows(2).enumerate() {
        ensure!(w[1] >= w[0], "{what}: objective fell at step {i}: {} -> {}", w[0], w[1]);
    }
    Ok(())
}

fn svm_suite() -> Outcome {
    let mut models = 0;
    let mut worst_gap = 0.0f64;
    for (seed, n, c, gamma) in [(1, 12, 1.0, 0.5), (2, 25, 2.0, 0.3), (3, 40, 0.5, 1.0), (4, 50, 4.0, 0.2), (5, 50, 10.0, 0.1)] {
        let mut r = rng(300 + seed);
        let (pts, labels) = blobs(&mut r, n, 3, 1.0, 2.0);
        let y: Vec<f64> = labels.iter().map(|&m| f64::from(m)).collect();
        let cfg = TrainConfig {
            kkt_tolerance: 1e-5,
            ..TrainConfig::new(c, gamma)
        };
        let sol = smo_solve(&DenseGram::rbf(&pts, gamma), &labels, &cfg).map_err(|e| e.to_string())?;
        check_solution(&sol, &labels, c, &format!("blobs seed {seed}"))?;
        let k = rbf_matrix(&pts, gamma);
        let w_ref = dual_objective(&projected_gradient_dual(&k, &y, c, 20_000), &y, &k);
        let gap = (sol.objective() - w_ref).abs();
        worst_gap = worst_gap.max(gap);
        ensure!(gap <= ORACLE_TOL, "n={n}: SMO {} vs projected gradient {w_ref}", sol.objective());
        models += 1;
    }

    for seed in 0..30u64 {
        let mut r = rng(400 + seed);
        let n = r.random_range(5..80);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| uniform_vec(&mut r, 4, -1.0, 1.0)).collect();
        let mut labels: Vec<i8> = (0..n).map(|_| if r.random_bool(0.4) { 1 } else { -1 }).collect();
        labels[0] = 1;
        labels[1] = -1;
        let cfg = TrainConfig::new(2f64.powi(r.random_range(-4..8)), 2f64.powi(r.random_range(-5..3)));
        let (_, sol) = SvmModel::train(&pts, &labels, &cfg, "x").map_err(|e| e.to_string())?;
        check_solution(&sol, &labels, cfg.c, &format!("random problem {seed}"))?;
        models += 1;
    }

    let mut xor_pts = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
    let mut xor_labels = vec![-1i8, -1, 1, 1];
    let mut r = rng(500);
    for _ in 0..60 {
        let (a, b) = (r.random_bool(0.5), r.random_bool(0.5));
        let p = vec![
            f64::from(u8::from(a)) + r.random_range(-0.2..0.2),
            f64::from(u8::from(b)) + r.random_range(-0.2..0.2),
        ];
        xor_pts.push(p);
        xor_labels.push(if a != b { 1 } else { -1 });
    }
    let cfg = TrainConfig::new(100.0, 2.0);
    let (xor_model, sol) = SvmModel::train(&xor_pts, &xor_labels, &cfg, "xor").map_err(|e| e.to_string())?;
    check_solution(&sol, &xor_labels, cfg.c, "xor")?;
    models += 1;
    let correct = xor_pts
        .iter()
        .zip(&xor_labels)
        .filter(|(p, &m)| xor_model.predict_raw(p).unwrap().label == Label::from_sign(m))
        .count();
    ensure!(correct == xor_pts.len(), "XOR training accuracy {correct}/{}", xor_pts.len());

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("xor.json");
    xor_model.save(&path).map_err(|e| e.to_string())?;
    let back = SvmModel::load(&path).map_err(|e| e.to_string())?;
    ensure!(back == xor_model, "reloaded model differs");
    for _ in 0..1000 {
        let v = uniform_vec(&mut r, 2, -1.0, 2.0);
        let (a, b) = (xor_model.predict_raw(&v).unwrap(), back.predict_raw(&v).unwrap());
        ensure!(a.label == b.label, "class differs at {v:?}");
        ensure!((a.decision_value - b.decision_value).abs() <= 1e-12, "decision differs at {v:?}");
    }
    Ok(format!(
        "{models} models within KKT {KKT_TOL}, monotone; XOR {correct}/{}; worst oracle gap {worst_gap:.1e}; round trip on 1000 vectors",
        xor_pts.len()
    ))
}

fn metrics_regression() -> Outcome {
    let f1_t5 = f1_score(98.17, 95.16);
    ensure!((f1_t5 - 96.64).abs() <= 0.01, "F1(98.17, 95.16) = {f1_t5}");
    let f1_t9 = f1_score(98.0, 87.0);
    ensure!((f1_t9 - 92.17).abs() <= 0.01, "F1(98, 87) = {f1_t9}");
    ensure!(f1_t9.round() == 92.0, "F1(98, 87) = {f1_t9} does not round to 92");
    Ok(format!("F1(98.17, 95.16) = {f1_t5:.4}; F1(98, 87) = {f1_t9:.4} (reported 92)"))
}

const SNR_TOL_DB: f64 = 0.1;
const RMS_RATIO: f64 = 1.778;
const RMS_RATIO_TOL: f64 = 0.01;

fn noise_protocol() -> Outcome {
    let mut worst_snr = 0.0f64;
    let mut worst_ratio = 0.0f64;
    let mut trials = 0;
    for (k, kind) in [SynthKind::Chirp, SynthKind::Steady, SynthKind::Tone, SynthKind::Noise].into_iter().enumerate() {
        let clip = synth_clip(kind, 600 + k as u64, 10.0);
        for seed in 0..10u64 {
            let noisy = add_awgn(&clip, 5.0, seed).map_err(|e| e.to_string())?;
            let noise: Vec<f64> = noisy.samples().iter().zip(clip.samples()).map(|(a, b)| a - b).collect();
            let snr = measured_snr_db(clip.samples(), &noise);
            let ratio = (signal_power(clip.samples()) / signal_power(&noise)).sqrt();
            worst_snr = worst_snr.max((snr - 5.0).abs());
            worst_ratio = worst_ratio.max((ratio - RMS_RATIO).abs());
            ensure!((snr - 5.0).abs() <= SNR_TOL_DB, "{kind:?} seed {seed}: {snr} dB");
            ensure!((ratio - RMS_RATIO).abs() <= RMS_RATIO_TOL, "{kind:?} seed {seed}: RMS ratio {ratio}");
            let again = add_awgn(&clip, 5.0, seed).map_err(|e| e.to_string())?;
            ensure!(again == noisy, "{kind:?} seed {seed}: not deterministic");
            trials += 1;
        }
        ensure!(
            add_awgn(&clip, 5.0, 0).unwrap() != add_awgn(&clip, 5.0, 1).unwrap(),
            "seeds 0 and 1 gave the same noise"
        );
    }
    Ok(format!(
        "{trials} trials; worst SNR error {worst_snr:.3} dB, worst RMS-ratio error {worst_ratio:.4}"
    ))
}

const CORPUS_PER_CLASS: usize = 400;
const CORPUS_SEED: u64 = 1;
const E2E_BUDGET: Duration = Duration::from_secs(300);

struct Corpus {
    _dir: tempfile::TempDir,
    manifest: DatasetManifest,
    elapsed: Duration,
}

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let start = Instant::now();
        let dir = tempfile::tempdir().expect("temp dir");
        let manifest = generate_corpus(dir.path(), CORPUS_PER_CLASS, CORPUS_SEED).expect("corpus");
        Corpus {
            _dir: dir,
            manifest,
            elapsed: start.elapsed(),
        }
    })
}

fn synthetic_end_to_end() -> Outcome {
    let start = Instant::now();
    let c = corpus();
    let grid = default_grid();
    let noise = Some(NoiseSpec { snr_db: 5.0, seed: 1 });
    let run = |family, q, t| {
        run_sweep(
            &c.manifest,
            &SweepSpec {
                family,
                quefrency_orders: &[q],
                temporal_orders: &[t],
                grid: &grid,
                folds: 5,
                seed: 1,
                noise,
            },
        )
        .map_err(|e| e.to_string())
    };
    let rcsf = run(FeatureFamily::Rcsf, 23, 15)?;
    let mfcc = run(FeatureFamily::Mfcc, 23, 15)?;
    ensure!(rcsf.failures == 0 && mfcc.failures == 0, "clips failed to load");
    let f1 = |o: &rcsf_core::cli::SweepOutcome| -> Result<(f64, f64), String> {
        let row = &o.rows[0];
        let clean = row.original.f1_pct.ok_or("clean F1 undefined")?;
        let noisy = row.noisy.and_then(|m| m.f1_pct).unwrap_or(0.0);
        Ok((clean, noisy))
    };
    let (r_clean, r_noisy) = f1(&rcsf)?;
    let (m_clean, m_noisy) = f1(&mfcc)?;
    let (r_drop, m_drop) = (r_clean - r_noisy, m_clean - m_noisy);
    let elapsed = start.elapsed() + c.elapsed;
    let summary = format!(
        "RCSF F1 {r_clean:.2} -> {r_noisy:.2} at 5 dB (drop {r_drop:.2}); MFCC {m_clean:.2} -> {m_noisy:.2} (drop {m_drop:.2}); {elapsed:.1?}"
    );
    ensure!(r_clean >= 95.0, "RCSF clean F1 below 95: {summary}");
    ensure!(r_drop < 10.0, "RCSF drop not under 10 points: {summary}");
    ensure!(m_drop > r_drop, "MFCC did not degrade more than RCSF: {summary}");
    ensure!(elapsed < E2E_BUDGET, "over the time budget: {summary}");
    Ok(summary)
}

const COMPOSITIONS: usize = 100;

fn harmful_rate_verdicts() -> Outcome {
    let c = corpus();
    let config = FeatureConfig::rcsf(23, 15);
    let extractor = FeatureExtractor::new(config.clone()).map_err(|e| e.to_string())?;
    let train: Vec<_> = c.manifest.split(Split::Train).collect();
    let (vectors, labels): (Vec<Vec<f64>>, Vec<i8>) = train
        .iter()
        .map(|e| {
            let clip = load_audio(c.manifest.resolve(e)).unwrap();
            (extractor.extract(&clip).unwrap().values, e.label.sign())
        })
        .unzip();
    let (model, _, _) =
        train_model(&vectors, &labels, &default_grid(), 5, 1, &config).map_err(|e| e.to_string())?;

    let pool = |label: Label| -> Vec<PathBuf> {
        c.manifest
            .split(Split::Test)
            .filter(|e| e.label == label)
            .map(|e| c.manifest.resolve(e))
            .collect()
    };
    let (pos, neg) = (pool(Label::Obscene), pool(Label::NonObscene));
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut r = rng(700);
    let (mut xrated, mut boundary) = (0, 0);
    for i in 0..COMPOSITIONS {
        // every tenth recording sits exactly on the 20 % threshold
        let (n, k) = if i % 10 == 0 {
            let n = 5 * r.random_range(1..=3);
            (n, n / 5)
        } else {
            let n = r.random_range(1..=12);
            (n, r.random_range(0..=n))
        };
        let mut parts: Vec<(Label, &Path)> = pos
            .choose_multiple(&mut r, k)
            .map(|p| (Label::Obscene, p.as_path()))
            .chain(neg.choose_multiple(&mut r, n - k).map(|p| (Label::NonObscene, p.as_path())))
            .collect();
        parts.shuffle(&mut r);
        let clips: Vec<PcmClip> = parts.iter().map(|(_, p)| load_audio(p).unwrap()).collect();
        let wav = dir.path().join(format!("rec{i}.wav"));
        write_wav(&wav, &concatenate(&clips).unwrap(), WavEncoding::Pcm16).map_err(|e| e.to_string())?;
        let recording = load_audio(&wav).map_err(|e| e.to_string())?;

        let decisions = scan_clips(&model, &extractor, &recording).map_err(|e| e.to_string())?;
        ensure!(decisions.len() == n, "recording {i}: {} clips, expected {n}", decisions.len());
        for (j, (d, (truth, _))) in decisions.iter().zip(&parts).enumerate() {
            ensure!(d.offset_s == 10.0 * j as f64, "recording {i}: clip {j} at {} s", d.offset_s);
            ensure!(d.label == *truth, "recording {i}: clip {j} classified {} but is {truth}", d.label);
        }
        let report = harmful_rate(decisions, 20.0).map_err(|e| e.to_string())?;
        let expected_rate = 100.0 * k as f64 / n as f64;
        ensure!(
            report.harmful_rate_pct == expected_rate,
            "recording {i}: rate {} vs {expected_rate}",
            report.harmful_rate_pct
        );
        let expected_verdict = if 100 * k > 20 * n { Verdict::XRated } else { Verdict::General };
        ensure!(report.verdict == expected_verdict, "recording {i}: verdict {:?}", report.verdict);
        xrated += usize::from(expected_verdict == Verdict::XRated);
        boundary += usize::from(100 * k == 20 * n);
    }
    Ok(format!(
        "{COMPOSITIONS} recordings, {xrated} x_rated, {boundary} exactly at 20 % (all general)"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("DSP oracle suite", dsp_oracle_suite),
        ("Feature identities", feature_identities),
        ("SVM suite", svm_suite),
        ("Metrics regression against reported F1", metrics_regression),
        ("Noise protocol", noise_protocol),
        ("Synthetic end-to-end analogue", synthetic_end_to_end),
        ("Harmful-rate verdicts", harmful_rate_verdicts),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                Err(p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into()))
            });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
