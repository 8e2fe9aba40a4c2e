//! Command-line front end. The `rcsf` binary is a thin wrapper around
//! [`run`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audio_io::{
    add_awgn, load_audio, split_into_clips, write_wav, DatasetManifest, Label, ManifestEntry, PcmClip,
    Split, WavEncoding, CLIP_LEN_S,
};
use crate::error::{Error, Result};
use crate::eval::{
    evaluate_manifest, extract_entries, harmful_rate, mean_and_sample_std, metrics, ClipDecision,
    ConfusionCounts, Metrics, NoiseSpec, DEFAULT_THRESHOLD_PCT,
};
use crate::featurefile::FeatureFile;
use crate::features::{
    features_from_analysis, FeatureConfig, FeatureExtractor, FeatureFamily, FrameAnalysis,
    QUEFRENCY_SWEEP, TEMPORAL_SWEEP,
};
use crate::svm::{default_grid, grid_search, GridPoint, SvmModel, TrainConfig};

/// Exit status: every file processed and every check held.
pub const EXIT_OK: u8 = 0;
/// Some inputs failed; outputs cover the rest.
pub const EXIT_PARTIAL: u8 = 1;
/// The command could not run.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "rcsf", version, about = "Obscene-sound clip classifier and recording scanner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract one feature vector per manifest entry into a feature file.
    Extract(ExtractArgs),
    /// Train an SVM model from a feature file or a manifest's training split.
    Train(TrainArgs),
    /// Classify individual clips.
    Predict(PredictArgs),
    /// Cut a long recording into 10 s clips and compute its harmful rate.
    Scan(ScanArgs),
    /// Classify a manifest's test split and report metrics.
    Evaluate(EvaluateArgs),
    /// Write noise-corrupted copies of manifest audio.
    Noise(NoiseArgs),
    /// Train and test every order combination of a feature family.
    Sweep(SweepArgs),
    /// Generate a synthetic labelled corpus.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FeatureArgs {
    #[arg(long, default_value = "RCSF")]
    pub family: FeatureFamily,
    /// Cepstral coefficients kept per frame (odd, 7..=23).
    #[arg(long, default_value_t = 23, value_parser = parse_quefrency)]
    pub quefrency_order: usize,
    /// Temporal coefficients kept per cepstral row (odd, 5..=19; RCSF only).
    #[arg(long, default_value_t = 15, value_parser = parse_temporal)]
    pub temporal_order: usize,
}

impl FeatureArgs {
    pub fn config(&self) -> FeatureConfig {
        let mut cfg = FeatureConfig::with_family(self.family, self.quefrency_order);
        cfg.temporal_order = self.temporal_order;
        cfg
    }
}

#[derive(Debug, Clone, Args)]
pub struct NoiseFlags {
    /// Add white Gaussian noise at this SNR before feature extraction.
    #[arg(long)]
    pub snr_db: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl NoiseFlags {
    pub fn spec(&self) -> Option<NoiseSpec> {
        self.snr_db.map(|snr_db| NoiseSpec {
            snr_db,
            seed: self.seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitChoice {
    Train,
    Test,
    All,
}

impl SplitChoice {
    fn admits(self, split: Split) -> bool {
        match self {
            SplitChoice::All => true,
            SplitChoice::Train => split == Split::Train,
            SplitChoice::Test => split == Split::Test,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub split: SplitChoice,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub noise: NoiseFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Candidate C values; defaults to 2^-5, 2^-3, ..., 2^15.
    #[arg(long = "c", value_delimiter = ',')]
    pub c_values: Vec<f64>,
    /// Candidate gamma values; defaults to 2^-15, 2^-13, ..., 2^3.
    #[arg(long = "gamma", value_delimiter = ',')]
    pub gamma_values: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
}

impl GridArgs {
    pub fn grid(&self) -> Vec<GridPoint> {
        let default = default_grid();
        let mut cs: Vec<f64> = default.iter().map(|p| p.c).collect();
        let mut gs: Vec<f64> = default.iter().map(|p| p.gamma).collect();
        cs.dedup();
        gs.sort_by(f64::total_cmp);
        gs.dedup();
        if !self.c_values.is_empty() {
            cs = self.c_values.clone();
        }
        if !self.gamma_values.is_empty() {
            gs = self.gamma_values.clone();
        }
        cs.iter()
            .flat_map(|&c| gs.iter().map(move |&gamma| GridPoint { c, gamma }))
            .collect()
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Feature file from `extract`.
    #[arg(long, conflicts_with = "manifest")]
    pub features_file: Option<PathBuf>,
    /// Extract the manifest's training split instead.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Feature file to classify row by row.
    #[arg(long, conflicts_with = "audio")]
    pub features_file: Option<PathBuf>,
    /// Audio files, each classified as one clip.
    #[arg(long, num_args = 1..)]
    pub audio: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub audio: PathBuf,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD_PCT)]
    pub threshold_pct: f64,
    /// Write the JSON report here as well.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub noise: NoiseFlags,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value_t = 5.0)]
    pub snr_db: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "test")]
    pub split: SplitChoice,
    /// Output directory for the corrupted WAV files and their manifest.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value = "RCSF")]
    pub family: FeatureFamily,
    /// Cepstral orders to try; defaults to 7, 9, ..., 23.
    #[arg(long, value_delimiter = ',', value_parser = parse_quefrency)]
    pub quefrency_order: Vec<usize>,
    /// Temporal orders to try (RCSF only); defaults to 5, 7, ..., 19.
    #[arg(long, value_delimiter = ',', value_parser = parse_temporal)]
    pub temporal_order: Vec<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub noise: NoiseFlags,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 50)]
    pub per_class: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_order(s: &str, allowed: &[usize], what: &str) -> std::result::Result<usize, String> {
    let v: usize = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if allowed.contains(&v) {
        Ok(v)
    } else {
        Err(format!(
            "{what} order must be odd and within {}..={}, got {v}",
            allowed[0],
            allowed[allowed.len() - 1]
        ))
    }
}

fn parse_quefrency(s: &str) -> std::result::Result<usize, String> {
    parse_order(s, &QUEFRENCY_SWEEP, "quefrency")
}

fn parse_temporal(s: &str) -> std::result::Result<usize, String> {
    parse_order(s, &TEMPORAL_SWEEP, "temporal")
}

/// Parses `args` (including the program name), runs the command, writes to
/// `out`, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn std::io::Write) -> Result<u8> {
    match command {
        Command::Extract(a) => cmd_extract(&a, out),
        Command::Train(a) => cmd_train(&a, out),
        Command::Predict(a) => cmd_predict(&a, out),
        Command::Scan(a) => cmd_scan(&a, out),
        Command::Evaluate(a) => cmd_evaluate(&a, out),
        Command::Noise(a) => cmd_noise(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Synth(a) => cmd_synth(&a, out),
    }
}

fn report_failure(path: &Path, err: &Error) {
    eprintln!("failed: {}: {err}", path.display());
}

fn status(failures: usize) -> u8 {
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_PARTIAL
    }
}

/// Extracts every admitted entry; returns the feature file and the number
/// of entries that failed.
fn extract_to_file(
    manifest: &DatasetManifest,
    split: SplitChoice,
    config: &FeatureConfig,
    noise: Option<NoiseSpec>,
) -> Result<(FeatureFile, usize)> {
    let entries: Vec<&ManifestEntry> = manifest.entries.iter().filter(|e| split.admits(e.split)).collect();
    let extractor = FeatureExtractor::new(config.clone())?;
    let vectors = extract_entries(manifest, &entries, &extractor, noise);
    let mut file = FeatureFile::new(config.clone());
    let mut failures = 0;
    for (entry, v) in entries.iter().zip(vectors) {
        match v {
            Ok(v) => file.push(entry.label, v)?,
            Err(e) => {
                report_failure(&manifest.resolve(entry), &e);
                failures += 1;
            }
        }
    }
    Ok((file, failures))
}

pub fn cmd_extract(a: &ExtractArgs, out: &mut dyn std::io::Write) -> Result<u8> {
    let manifest = DatasetManifest::load(&a.manifest)?;
    let config = a.features.config();
    let (file, failures) = extract_to_file(&manifest, a.split, &config, a.noise.spec())?;
    file.save(&a.out)?;
    writeln!(
        out,
        "wrote {} vectors ({} dims) to {}; {failures} failed",
        file.rows.len(),
        config.vector_dim(),
        a.out.display()
    )?;
    Ok(status(failures))
}

/// Grid search followed by a final fit on the whole training set.
pub fn train_model(
    vectors: &[Vec<f64>],
    labels: &[i8],
    grid: &[GridPoint],
    folds: usize,
    seed: u64,
    config: &FeatureConfig,
) -> Result<(SvmModel, GridPoint, f64)> {
    let base = TrainConfig {
        folds,
        rng_seed: seed,
        ..TrainConfig::default()
    };
    let (best, accuracy) = if grid.len() == 1 {
        (grid[0], f64::NAN)
    } else {
        let r = grid_search(vectors, labels, grid, &base)?;
        (r.best, r.best_accuracy)
    };
    let cfg = TrainConfig {
        c: best.c,
        gamma: best.gamma,
        ..base
    };
    let (model, _) = SvmModel::train(vectors, labels, &cfg, config.fingerprint())?;
    Ok((model.with_feature_config(config.clone()), best, accuracy))
}

pub fn cmd_train(a: &TrainArgs, out: &mut dyn std::io::Write) -> Result<u8> {
    let (file, failures) = match (&a.features_file, &a.manifest) {
        (Some(path), _) => (FeatureFile::load(path)?, 0),
        (None, Some(m)) => {
            let manifest = DatasetManifest::load(m)?;
            extract_to_file(&manifest, SplitChoice::Train, &a.features.config(), None)?
        }
        (None, None) => {
            return Err(Error::InvalidArgument(
                "train needs --features-file or --manifest".into(),
            ))
        }
    };
    let (vectors, labels) = file.training_data();
    let (model, best, accuracy) =
        train_model(&vectors, &labels, &a.grid.grid(), a.grid.folds, a.seed, &file.config)?;
    model.save(&a.out)?;
    writeln!(
        out,
        "C={} gamma={} cv_accuracy={:.4} support_vectors={} -> {}",
        best.c,
        best.gamma,
        accuracy,
        model.num_support_vectors(),
        a.out.display()
    )?;
    Ok(status(failures))
}

fn model_extractor(model: &SvmModel) -> Result<FeatureExtractor> {
    let config = model.feature_config.clone().ok_or_else(|| {
        Error::ModelFormat("model lacks a feature_config; classify a feature file instead".into())
    })?;
    if config.fingerprint() != model.feature_fingerprint {
        return Err(Error::FingerprintMismatch {
            expected: model.feature_fingerprint.clone(),
            actual: config.fingerprint(),
        });
    }
    FeatureExtractor::new(config)
}

pub fn cmd_predict(a: &PredictArgs, out: &mut dyn std::io::Write) -> Result<u8> {
    let model = SvmModel::load(&a.model)?;
    if let Some(path) = &a.features_file {
        let file = FeatureFile::load(path)?;
        for (i, v) in file.vectors().enumerate() {
            let p = model.predict(&v)?;
            writeln!(out, "{i}\t{}\t{}", p.label, p.decision_value)?;
        }
        return Ok(EXIT_OK);
    }
    if a.audio.is_empty() {
        return Err(Error::InvalidArgument("predict needs --audio or --features-file".into()));
    }
    let extractor = model_extractor(&model)?;
    let results: Vec<Result<_>> = a
        .audio
        .par_iter()
        .map(|p| model.predict(&extractor.extract(&load_audio(p)?)?))
        .collect();
    let mut failures = 0;
    for (path, r) in a.audio.iter().zip(results) {
        match r {
            Ok(p) => writeln!(out, "{}\t{}\t{}", path.display(), p.label, p.decision_value)?,
            Err(e) => {
                report_failure(path, &e);
                failures += 1;
            }
        }
    }
    Ok(status(failures))
}

/// Per-clip decisions over a recording cut into consecutive 10 s clips.
pub fn scan_clips(model: &SvmModel, extractor: &FeatureExtractor, recording: &PcmClip) -> Result<Vec<ClipDecision>> {
    let clips = split_into_clips(recording, CLIP_LEN_S)?;
    clips
        .par_iter()
        .map(|clip| {
            let p = model.predict(&extractor.extract(clip)?)?;
            Ok(ClipDecision {
                offset_s: clip.source_offset_s(),
                label: p.label,
                decision_value: p.decision_value,
            })
        })
        .collect()
}

pub fn cmd_scan(a: &ScanArgs, out: &mut dyn std::io::Write) -> Result<u8> {
    let model = SvmModel::load(&a.model)?;
    let extractor = model_extractor(&model)?;
    let recording = load_audio(&a.audio)?;
    let report = harmful_rate(scan_clips(&model, &extractor, &recording)?, a.threshold_pct)?;
    writeln!(out, "offset_s\tclass\tdecision_value")?;
    for d in &report.clip_decisions {
        writeln!(out, "{:.1}\t{}\t{}", d.offset_s, d.label, d.decision_value)?;
    }
    writeln!(
        out,
        "harmful_rate={:.2}% threshold={}% verdict={}",
        report.harmful_rate_pct,
        report.threshold_pct,
        serde_json::to_value(report.verdict)?.as_str().unwrap_or_default()
    )?;
    if let Some(path) = &a.out {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_evaluate(a: &EvaluateArgs, out: &mut dyn std::io::Write) -> Result<u8> {
    let model = SvmModel::load(&a.model)?;
    let config = model
        .feature_config
        .clone()
        .ok_or_else(|| Error::ModelFormat("model lacks a feature_config".into()))?;
    let manifest = DatasetManifest::load(&a.manifest)?;
    let report = evaluate_manifest(&model, &manifest, &config, a.noise.spec())?;
    for f in &report.failures {
        eprintln!("failed: {}: {}", f.path.display(), f.reason);
    }
    write!(out, "{}", report.to_text())?;
    if let Some(path) = &a.out {
        std::fs::write(path, report.to_json()?)?;
    }
    Ok(status(report.failures.len()))
}

pub fn cmd_noise(a: &NoiseArgs, out: &mut dyn std::io::Write) -> Result<u8> {
    let manifest = DatasetManifest::load(&a.manifest)?;
    std::fs::create_dir_all(&a.out)?;
    let spec = NoiseSpec {
        snr_db: a.snr_db,
        seed: a.seed,
    };
    let results: Vec<Result<ManifestEntry>> = manifest
        .entries
        .par_iter()
        .enumerate()
        .map(|(i, entry)| {
            let src = manifest.resolve(entry);
            if !a.split.admits(entry.split) {
                let path = std::path::absolute(&src)?;
                return Ok(ManifestEntry { path, ..entry.clone() });
            }
            let noisy = add_awgn(&load_audio(&src)?, spec.snr_db, spec.seed_for(i))?;
            let name = PathBuf::from(format!("{i:05}.wav"));
            write_wav(a.out.join(&name), &noisy, WavEncoding::Float32)?;
            Ok(ManifestEntry {
                path: name,
                ..entry.clone()
            })
        })
        .collect();
    let mut entries = Vec::new();
    let mut failures = 0;
    for (entry, r) in manifest.entries.iter().zip(results) {
        match r {
            Ok(e) => entries.push(e),
            Err(e) => {
                report_failure(&manifest.resolve(entry), &e);
                failures += 1;
            }
        }
    }
    let noisy = DatasetManifest::new(entries, a.out.clone())?;
    let path = a.out.join("manifest.jsonl");
    noisy.save(&path)?;
    writeln!(
        out,
        "wrote {} entries at {} dB SNR to {}; {failures} failed",
        noisy.entries.len(),
        a.snr_db,
        path.display()
    )?;
    Ok(status(failures))
}

/// One (quefrency, temporal) point of an order sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub quefrency_order: usize,
    pub temporal_order: usize,
    pub c: f64,
    pub gamma: f64,
    pub original: Metrics,
    pub noisy: Option<Metrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub family: FeatureFamily,
    pub snr_db: Option<f64>,
    /// Sorted by original F1, best first.
    pub rows: Vec<SweepRow>,
    pub failures: usize,
}

pub struct SweepSpec<'a> {
    pub family: FeatureFamily,
    pub quefrency_orders: &'a [usize],
    pub temporal_orders: &'a [usize],
    pub grid: &'a [GridPoint],
    pub folds: usize,
    pub seed: u64,
    pub noise: Option<NoiseSpec>,
}

struct Prepared {
    label: Label,
    clean: FrameAnalysis,
    noisy: Option<FrameAnalysis>,
}

/// Trains on clean training clips and tests on clean (and optionally noisy)
/// test clips for every order pair. Framing work is shared across orders.
pub fn run_sweep(manifest: &DatasetManifest, spec: &SweepSpec<'_>) -> Result<SweepOutcome> {
    let family = spec.family;
    let qs: &[usize] = if family.uses_cepstrum() { spec.quefrency_orders } else { &[13] };
    let ts: &[usize] = if family == FeatureFamily::Rcsf { spec.temporal_orders } else { &[15] };
    if qs.is_empty() || ts.is_empty() {
        return Err(Error::InvalidArgument("empty order list".into()));
    }
    let base = FeatureConfig::with_family(family, qs[0]);
    let extractor = FeatureExtractor::new(base)?;
    let keep_spectra = !family.uses_cepstrum();

    let prepare = |split: Split, noise: Option<NoiseSpec>| -> (Vec<Prepared>, usize) {
        let entries: Vec<&ManifestEntry> = manifest.split(split).collect();
        let results: Vec<Result<Prepared>> = entries
            .par_iter()
            .enumerate()
            .map(|(i, entry)| {
                let clip = load_audio(manifest.resolve(entry))?;
                let noisy = match noise {
                    Some(n) => {
                        let c = add_awgn(&clip, n.snr_db, n.seed_for(i))?;
                        Some(extractor.analyze(&c, keep_spectra)?)
                    }
                    None => None,
                };
                Ok(Prepared {
                    label: entry.label,
                    clean: extractor.analyze(&clip, keep_spectra)?,
                    noisy,
                })
            })
            .collect();
        let mut ok = Vec::new();
        let mut failures = 0;
        for (entry, r) in entries.iter().zip(results) {
            match r {
                Ok(p) => ok.push(p),
                Err(e) => {
                    report_failure(&manifest.resolve(entry), &e);
                    failures += 1;
                }
            }
        }
        (ok, failures)
    };
    let (train, train_failures) = prepare(Split::Train, None);
    let (test, test_failures) = prepare(Split::Test, spec.noise);
    if test.is_empty() {
        return Err(Error::InvalidArgument("no usable test clips".into()));
    }

    let mut rows = Vec::new();
    for &q in qs {
        for &t in ts {
            let mut config = FeatureConfig::with_family(family, q);
            config.temporal_order = t;
            let featurize = |a: &FrameAnalysis| features_from_analysis(a, &config);
            let train_vecs: Vec<Vec<f64>> = train
                .par_iter()
                .map(|p| Ok(featurize(&p.clean)?.values))
                .collect::<Result<_>>()?;
            let labels: Vec<i8> = train.iter().map(|p| p.label.sign()).collect();
            let (model, best, _) = train_model(&train_vecs, &labels, spec.grid, spec.folds, spec.seed, &config)?;
            let score = |pick: &(dyn Fn(&Prepared) -> &FrameAnalysis + Sync)| -> Result<Metrics> {
                let preds: Vec<(Label, Label)> = test
                    .par_iter()
                    .map(|p| Ok((p.label, model.predict(&featurize(pick(p))?)?.label)))
                    .collect::<Result<_>>()?;
                Ok(metrics(&ConfusionCounts::from_pairs(preds)))
            };
            let original = score(&|p| &p.clean)?;
            let noisy = if spec.noise.is_some() {
                Some(score(&|p| p.noisy.as_ref().expect("noisy analysis prepared"))?)
            } else {
                None
            };
            rows.push(SweepRow {
                quefrency_order: q,
                temporal_order: t,
                c: best.c,
                gamma: best.gamma,
                original,
                noisy,
            });
        }
    }
    rows.sort_by(|a, b| {
        let f = |r: &SweepRow| r.original.f1_pct.unwrap_or(f64::NEG_INFINITY);
        f(b).total_cmp(&f(a))
    });
    Ok(SweepOutcome {
        family,
        snr_db: spec.noise.map(|n| n.snr_db),
        rows,
        failures: train_failures + test_failures,
    })
}

impl SweepOutcome {
    /// F1 / precision / recall table with a Mean and Std (n − 1) footer.
    pub fn to_text(&self) -> String {
        let noisy = self.snr_db.is_some();
        let snr = self.snr_db.map(|s| format!("{s}dB")).unwrap_or_default();
        let mut out = String::new();
        let _ = writeln!(out, "Q\tT\tF1-score(%)\t\tPrecision(%)\t\tRecall(%)");
        let _ = writeln!(out, "\t\tOrig.\t{snr}\tOrig.\t{snr}\tOrig.\t{snr}");
        let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"));
        let columns = |r: &SweepRow| -> [Option<f64>; 6] {
            let n = r.noisy;
            [
                r.original.f1_pct,
                n.and_then(|m| m.f1_pct),
                r.original.precision_pct,
                n.and_then(|m| m.precision_pct),
                r.original.recall_pct,
                n.and_then(|m| m.recall_pct),
            ]
        };
        for r in &self.rows {
            let cols = columns(r);
            let _ = write!(out, "{}\t{}", r.quefrency_order, r.temporal_order);
            for (i, c) in cols.iter().enumerate() {
                if noisy || i % 2 == 0 {
                    let _ = write!(out, "\t{}", cell(*c));
                } else {
                    out.push('\t');
                }
            }
            out.push('\n');
        }
        let summary: Vec<(f64, f64)> = (0..6)
            .map(|i| {
                let vals: Vec<f64> = self.rows.iter().filter_map(|r| columns(r)[i]).collect();
                mean_and_sample_std(&vals)
            })
            .collect();
        for (name, pick) in [("Mean", 0usize), ("Std", 1)] {
            let _ = write!(out, "{name}\t");
            for (i, s) in summary.iter().enumerate() {
                let v = if pick == 0 { s.0 } else { s.1 };
                if (noisy || i % 2 == 0) && v.is_finite() {
                    let _ = write!(out, "\t{v:.2}");
                } else {
                    out.push('\t');
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn std::io::Write) -> Result<u8> {
    let manifest = DatasetManifest::load(&a.manifest)?;
    let qs = if a.quefrency_order.is_empty() { QUEFRENCY_SWEEP.to_vec() } else { a.quefrency_order.clone() };
    let ts = if a.temporal_order.is_empty() { TEMPORAL_SWEEP.to_vec() } else { a.temporal_order.clone() };
    let grid = a.grid.grid();
    let outcome = run_sweep(
        &manifest,
        &SweepSpec {
            family: a.family,
            quefrency_orders: &qs,
            temporal_orders: &ts,
            grid: &grid,
            folds: a.grid.folds,
            seed: a.noise.seed,
            noise: a.noise.spec(),
        },
    )?;
    write!(out, "{}", outcome.to_text())?;
    if let Some(path) = &a.out {
        std::fs::write(path, serde_json::to_string_pretty(&outcome)?)?;
    }
    Ok(status(outcome.failures))
}

pub fn cmd_synth(a: &SynthArgs, out: &mut dyn std::io::Write) -> Result<u8> {
    let manifest = crate::synth::generate_corpus(&a.out, a.per_class, a.seed)?;
    writeln!(
        out,
        "wrote {} clips and manifest.jsonl to {}",
        manifest.entries.len(),
        a.out.display()
    )?;
    Ok(EXIT_OK)
}
