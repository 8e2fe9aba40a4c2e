//! Binary soft-margin SVM with an RBF kernel.
//!
//! Features are min/max scaled to `[-1, 1]` with parameters from the
//! training set, the dual is solved by SMO, and `(C, γ)` is chosen by
//! stratified k-fold cross-validation over a log grid.

mod cv;
mod kernel;
mod model;
mod scaling;
mod smo;

pub use cv::{
    cross_validate, default_grid, grid_search, stratified_folds, CvResult, GridEvaluation,
    GridPoint, GridSearchResult,
};
pub use kernel::{rbf_kernel, squared_distance, DenseGram, KernelRows, LazyRbfGram, SquaredDistances};
pub use model::{smo_train, Prediction, SvmModel, MODEL_VERSION};
pub use scaling::{apply_scaling, fit_scaling, ScalingParams};
pub use smo::{max_kkt_violation, smo_solve, SmoSolution, TrainConfig, SUPPORT_THRESHOLD};
