use std::borrow::Cow;

use crate::error::{Error, Result};

pub fn squared_distance(x: &[f64], z: &[f64]) -> f64 {
    x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `exp(-γ·‖x − z‖²)`.
pub fn rbf_kernel(x: &[f64], z: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != z.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: z.len(),
        });
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    Ok((-gamma * squared_distance(x, z)).exp())
}

/// Row access to a training Gram matrix.
pub trait KernelRows: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn row(&self, i: usize) -> Cow<'_, [f64]>;

    fn diag(&self, i: usize) -> f64;
}

/// Fully materialized Gram matrix.
#[derive(Debug, Clone)]
pub struct DenseGram {
    n: usize,
    values: Vec<f64>,
}

impl DenseGram {
    pub fn rbf(points: &[Vec<f64>], gamma: f64) -> Self {
        Self::from_sq_distances(&SquaredDistances::new(points), gamma)
    }

    pub fn from_sq_distances(d: &SquaredDistances, gamma: f64) -> Self {
        Self {
            n: d.n,
            values: d.values.iter().map(|&v| (-gamma * v).exp()).collect(),
        }
    }
}

impl KernelRows for DenseGram {
    fn len(&self) -> usize {
        self.n
    }

    fn row(&self, i: usize) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.values[i * self.n..(i + 1) * self.n])
    }

    fn diag(&self, i: usize) -> f64 {
        self.values[i * self.n + i]
    }
}

/// RBF rows computed on demand, for training sets too large to hold the
/// full matrix.
#[derive(Debug, Clone)]
pub struct LazyRbfGram<'a> {
    pub points: &'a [Vec<f64>],
    pub gamma: f64,
}

impl KernelRows for LazyRbfGram<'_> {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn row(&self, i: usize) -> Cow<'_, [f64]> {
        let xi = &self.points[i];
        Cow::Owned(
            self.points
                .iter()
                .map(|xj| (-self.gamma * squared_distance(xi, xj)).exp())
                .collect(),
        )
    }

    fn diag(&self, _i: usize) -> f64 {
        1.0
    }
}

/// Symmetric matrix of pairwise squared distances. Shared across every
/// `gamma` of a grid search.
#[derive(Debug, Clone)]
pub struct SquaredDistances {
    n: usize,
    values: Vec<f64>,
}

impl SquaredDistances {
    pub fn new(points: &[Vec<f64>]) -> Self {
        let n = points.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = squared_distance(&points[i], &points[j]);
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Self { n, values }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}
