use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{squared_distance, DenseGram, SquaredDistances};
use super::model::validate_training;
use super::scaling::ScalingParams;
use super::smo::{smo_solve, TrainConfig};
use crate::error::{Error, Result};

/// Fold index per sample. Each class is shuffled with the seed and dealt
/// round-robin, so class proportions match across folds.
pub fn stratified_folds(labels: &[i8], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {folds}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in [1i8, -1] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < folds {
            return Err(Error::TooFewForFolds {
                label: class,
                count: members.len(),
                folds,
            });
        }
        members.shuffle(&mut rng);
        for i in members {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok(assignment)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub mean_accuracy: f64,
    pub fold_accuracies: Vec<f64>,
}

/// One fold, scaled with parameters fitted on its training part only.
struct PreparedFold {
    train_labels: Vec<i8>,
    test_labels: Vec<i8>,
    train_dist: SquaredDistances,
    /// `test × train` squared distances, row-major.
    cross_dist: Vec<f64>,
}

impl PreparedFold {
    fn accuracy(&self, config: &TrainConfig) -> Result<f64> {
        let gram = DenseGram::from_sq_distances(&self.train_dist, config.gamma);
        let sol = smo_solve(&gram, &self.train_labels, config)?;
        let n_train = self.train_labels.len();
        let weights: Vec<f64> = sol
            .alphas
            .iter()
            .zip(&self.train_labels)
            .map(|(a, &m)| a * f64::from(m))
            .collect();
        let correct = self
            .test_labels
            .iter()
            .enumerate()
            .filter(|&(t, &m)| {
                let row = &self.cross_dist[t * n_train..(t + 1) * n_train];
                let f: f64 = weights
                    .iter()
                    .zip(row)
                    .filter(|(w, _)| **w != 0.0)
                    .map(|(w, d)| w * (-config.gamma * d).exp())
                    .sum::<f64>()
                    + sol.bias;
                let predicted = if f >= 0.0 { 1 } else { -1 };
                predicted == m
            })
            .count();
        Ok(correct as f64 / self.test_labels.len() as f64)
    }
}

fn prepare_folds(vectors: &[Vec<f64>], labels: &[i8], folds: usize, seed: u64) -> Result<Vec<PreparedFold>> {
    if vectors.is_empty() {
        return Err(Error::InvalidArgument("empty data set".into()));
    }
    validate_training(vectors, labels)?;
    let assignment = stratified_folds(labels, folds, seed)?;
    (0..folds)
        .into_par_iter()
        .map(|f| {
            let (mut train, mut test) = (Vec::new(), Vec::new());
            let (mut train_labels, mut test_labels) = (Vec::new(), Vec::new());
            for (i, &a) in assignment.iter().enumerate() {
                if a == f {
                    test.push(vectors[i].clone());
                    test_labels.push(labels[i]);
                } else {
                    train.push(vectors[i].clone());
                    train_labels.push(labels[i]);
                }
            }
            let scaling = ScalingParams::fit(&train)?;
            let train = scaling.apply_all(&train)?;
            let test = scaling.apply_all(&test)?;
            let cross_dist = test
                .iter()
                .flat_map(|t| train.iter().map(move |x| squared_distance(t, x)))
                .collect();
            Ok(PreparedFold {
                train_labels,
                test_labels,
                train_dist: SquaredDistances::new(&train),
                cross_dist,
            })
        })
        .collect()
}

fn mean_accuracy(folds: &[PreparedFold], config: &TrainConfig) -> Result<CvResult> {
    let fold_accuracies = folds
        .iter()
        .map(|f| f.accuracy(config))
        .collect::<Result<Vec<_>>>()?;
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64;
    Ok(CvResult {
        mean_accuracy,
        fold_accuracies,
    })
}

/// Stratified k-fold cross-validation with scaling refit inside each fold.
pub fn cross_validate(vectors: &[Vec<f64>], labels: &[i8], config: &TrainConfig) -> Result<CvResult> {
    config.validate()?;
    let folds = prepare_folds(vectors, labels, config.folds, config.rng_seed)?;
    mean_accuracy(&folds, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub c: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEvaluation {
    pub point: GridPoint,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best: GridPoint,
    pub best_accuracy: f64,
    /// In the order the grid was given.
    pub evaluations: Vec<GridEvaluation>,
}

/// `C ∈ {2^-5, 2^-3, …, 2^15}` × `γ ∈ {2^-15, 2^-13, …, 2^3}`.
pub fn default_grid() -> Vec<GridPoint> {
    let cs = (-5..=15).step_by(2).map(|e| 2f64.powi(e));
    cs.flat_map(|c| {
        (-15..=3)
            .step_by(2)
            .map(move |e| GridPoint { c, gamma: 2f64.powi(e) })
    })
    .collect()
}

/// Cross-validates every grid point and returns the most accurate one.
/// Ties go to the smaller `C`, then the smaller `γ`.
pub fn grid_search(
    vectors: &[Vec<f64>],
    labels: &[i8],
    grid: &[GridPoint],
    base: &TrainConfig,
) -> Result<GridSearchResult> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty parameter grid".into()));
    }
    for p in grid {
        TrainConfig {
            c: p.c,
            gamma: p.gamma,
            ..base.clone()
        }
        .validate()?;
    }
    let folds = prepare_folds(vectors, labels, base.folds, base.rng_seed)?;
    let evaluations = grid
        .par_iter()
        .map(|p| {
            let cfg = TrainConfig {
                c: p.c,
                gamma: p.gamma,
                ..base.clone()
            };
            Ok(GridEvaluation {
                point: *p,
                accuracy: mean_accuracy(&folds, &cfg)?.mean_accuracy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = evaluations
        .iter()
        .min_by(|a, b| {
            b.accuracy
                .total_cmp(&a.accuracy)
                .then(a.point.c.total_cmp(&b.point.c))
                .then(a.point.gamma.total_cmp(&b.point.gamma))
        })
        .expect("grid is nonempty");
    Ok(GridSearchResult {
        best: best.point,
        best_accuracy: best.accuracy,
        evaluations,
    })
}
