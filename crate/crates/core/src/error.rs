use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read audio file {path}: {reason}")]
    AudioRead { path: PathBuf, reason: String },

    #[error("unsupported audio encoding in {path}: {reason}")]
    UnsupportedCodec { path: PathBuf, reason: String },

    #[error("audio file {0} contains no samples")]
    EmptyAudio(PathBuf),

    #[error("cannot write audio file {path}: {reason}")]
    AudioWrite { path: PathBuf, reason: String },

    #[error("clip at offset {offset_s} s is silent, SNR is undefined")]
    SilentClip { offset_s: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("signal of {len} samples is shorter than one {what} of {needed} samples")]
    TooShort {
        what: &'static str,
        len: usize,
        needed: usize,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("frame length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("feature fingerprint mismatch: model expects {expected}, vector has {actual}")]
    FingerprintMismatch { expected: String, actual: String },

    #[error("training data must contain both classes")]
    SingleClass,

    #[error("non-finite feature value at sample {sample}, dimension {dim}")]
    NonFinite { sample: usize, dim: usize },

    #[error("class {label} has {count} samples, fewer than {folds} folds")]
    TooFewForFolds {
        label: i8,
        count: usize,
        folds: usize,
    },

    #[error("manifest {path}, line {line}: {reason}")]
    Manifest {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("feature file {path}, line {line}: {reason}")]
    FeatureFile {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("model file: {0}")]
    ModelFormat(String),

    #[error("recording yields no clips")]
    NoClips,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
