//! Obscene-sound detection for audio clips and X-rated classification of
//! whole recordings.
//!
//! The pipeline: [`audio_io`] canonicalizes audio to 16 kHz mono and cuts
//! 10 s clips, [`features`] turns each clip into a fixed-length vector
//! (the repeated curve-like spectrum feature or one of the comparison
//! families), [`svm`] trains and applies an RBF support vector machine, and
//! [`eval`] scores clips and aggregates clip decisions into a harmful rate
//! per recording.

pub mod audio_io;
pub mod cli;
pub mod dsp;
pub mod error;
pub mod eval;
pub mod featurefile;
pub mod features;
pub mod svm;
pub mod synth;

pub use error::{Error, Result};
