//! Sequential minimal optimization for the soft-margin SVM dual
//!
//! ```text
//! maximize   W(α) = Σ α_i − ½ Σ_ij α_i α_j m_i m_j K(x_i, x_j)
//! subject to 0 ≤ α_i ≤ C,  Σ α_i m_i = 0
//! ```
//!
//! Each step updates two multipliers analytically. The first multiplier is
//! the worst KKT violator that may move up; the second is the violator on
//! the opposite side that maximizes `|E_i − E_j|`. Because the bias cancels
//! in `E_i − E_j`, the solver tracks `F_i = Σ_j α_j m_j K_ij − m_i` and sets
//! the bias once at the end.

use serde::{Deserialize, Serialize};

use super::kernel::KernelRows;
use crate::error::{Error, Result};

/// Multipliers at or below this are dropped from the support set.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Box constraint.
    pub c: f64,
    /// RBF width parameter.
    pub gamma: f64,
    pub kkt_tolerance: f64,
    /// Iteration budget, in units of the training-set size.
    pub max_passes: usize,
    pub folds: usize,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            gamma: 1.0,
            kkt_tolerance: 1e-3,
            max_passes: 2000,
            folds: 5,
            rng_seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn new(c: f64, gamma: f64) -> Self {
        Self {
            c,
            gamma,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidArgument(format!("C must be positive, got {}", self.c)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.kkt_tolerance > 0.0) {
            return Err(Error::InvalidArgument("KKT tolerance must be positive".into()));
        }
        if self.folds < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 folds, got {}",
                self.folds
            )));
        }
        Ok(())
    }
}

/// Raw solver result over the full training set.
#[derive(Debug, Clone)]
pub struct SmoSolution {
    /// One multiplier per training point.
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Dual objective after initialization and after every accepted step.
    pub objective_history: Vec<f64>,
    /// `Σ_j α_j m_j K_ij` per training point, without bias.
    pub margins: Vec<f64>,
}

impl SmoSolution {
    /// Decision value on training point `i`.
    pub fn decision(&self, i: usize) -> f64 {
        self.margins[i] + self.bias
    }

    pub fn objective(&self) -> f64 {
        *self.objective_history.last().unwrap_or(&0.0)
    }
}

pub(crate) fn check_labels(labels: &[i8]) -> Result<()> {
    if let Some(bad) = labels.iter().find(|&&m| m != 1 && m != -1) {
        return Err(Error::InvalidArgument(format!("label {bad} is not ±1")));
    }
    let pos = labels.iter().any(|&m| m == 1);
    let neg = labels.iter().any(|&m| m == -1);
    if !(pos && neg) {
        return Err(Error::SingleClass);
    }
    Ok(())
}

fn dual_objective(alphas: &[f64], labels: &[i8], margins: &[f64]) -> f64 {
    alphas
        .iter()
        .zip(labels)
        .zip(margins)
        .map(|((&a, &m), &g)| a - 0.5 * a * f64::from(m) * g)
        .sum()
}

/// Solves the dual over a precomputed (or lazily computed) Gram matrix.
pub fn smo_solve(gram: &dyn KernelRows, labels: &[i8], config: &TrainConfig) -> Result<SmoSolution> {
    config.validate()?;
    check_labels(labels)?;
    let n = labels.len();
    if gram.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: gram.len(),
        });
    }
    let c = config.c;
    let y: Vec<f64> = labels.iter().map(|&m| f64::from(m)).collect();
    let mut alpha = vec![0.0; n];
    // margins[i] = Σ_j α_j y_j K_ij
    let mut margins = vec![0.0; n];
    let mut history = vec![0.0f64];
    let budget = config.max_passes.saturating_mul(n).max(1);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < budget {
        // up: α_i m_i may increase; low: α_i m_i may decrease
        let mut up = None;
        let mut low = None;
        let (mut f_up, mut f_low) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let f = margins[i] - y[i];
            let can_up = if y[i] > 0.0 { alpha[i] < c } else { alpha[i] > 0.0 };
            let can_low = if y[i] > 0.0 { alpha[i] > 0.0 } else { alpha[i] < c };
            if can_up && f < f_up {
                f_up = f;
                up = Some(i);
            }
            if can_low && f > f_low {
                f_low = f;
                low = Some(i);
            }
        }
        let (Some(i2), Some(i1)) = (up, low) else {
            converged = true;
            break;
        };
        if f_low - f_up <= config.kkt_tolerance {
            converged = true;
            break;
        }

        let row1 = gram.row(i1);
        let row2 = gram.row(i2);
        let k12 = row1[i2];
        let eta = (gram.diag(i1) + gram.diag(i2) - 2.0 * k12).max(1e-12);
        let (a1, a2) = (alpha[i1], alpha[i2]);
        let (lo, hi) = if y[i1] != y[i2] {
            ((a2 - a1).max(0.0), (c + a2 - a1).min(c))
        } else {
            ((a1 + a2 - c).max(0.0), (a1 + a2).min(c))
        };
        // E1 - E2 = f_low - f_up > 0
        let mut a2_new = (a2 + y[i2] * (f_low - f_up) / eta).clamp(lo, hi);
        if a2_new - lo < 1e-12 * c.max(1.0) {
            a2_new = lo;
        } else if hi - a2_new < 1e-12 * c.max(1.0) {
            a2_new = hi;
        }
        let mut a1_new = a1 + y[i1] * y[i2] * (a2 - a2_new);
        a1_new = a1_new.clamp(0.0, c);
        if a1_new < 1e-12 * c.max(1.0) {
            a1_new = 0.0;
        } else if c - a1_new < 1e-12 * c.max(1.0) {
            a1_new = c;
        }
        let (d1, d2) = ((a1_new - a1) * y[i1], (a2_new - a2) * y[i2]);
        iterations += 1;
        if d1 == 0.0 && d2 == 0.0 {
            // Numerically stuck pair; further steps would repeat it.
            break;
        }
        alpha[i1] = a1_new;
        alpha[i2] = a2_new;
        for (k, g) in margins.iter_mut().enumerate() {
            *g += d1 * row1[k] + d2 * row2[k];
        }
        let w = dual_objective(&alpha, labels, &margins);
        let prev = *history.last().unwrap();
        debug_assert!(
            w >= prev - 1e-9 * (1.0 + prev.abs()),
            "dual objective decreased from {prev} to {w}"
        );
        history.push(w);
    }

    let bias = compute_bias(&alpha, &y, &margins, c);
    Ok(SmoSolution {
        alphas: alpha,
        bias,
        iterations,
        converged,
        objective_history: history,
        margins,
    })
}

/// Average of `m_i − Σ_j α_j m_j K_ij` over unbound multipliers; without
/// any, the midpoint of the feasible interval.
fn compute_bias(alpha: &[f64], y: &[f64], margins: &[f64], c: f64) -> f64 {
    let (mut sum, mut count) = (0.0, 0usize);
    let (mut f_up, mut f_low) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..alpha.len() {
        let f = margins[i] - y[i];
        if alpha[i] > 0.0 && alpha[i] < c {
            sum += f;
            count += 1;
        }
        let can_up = if y[i] > 0.0 { alpha[i] < c } else { alpha[i] > 0.0 };
        let can_low = if y[i] > 0.0 { alpha[i] > 0.0 } else { alpha[i] < c };
        if can_up {
            f_up = f_up.min(f);
        }
        if can_low {
            f_low = f_low.max(f);
        }
    }
    if count > 0 {
        -sum / count as f64
    } else if f_up.is_finite() && f_low.is_finite() {
        -(f_up + f_low) / 2.0
    } else if f_up.is_finite() {
        -f_up
    } else {
        -f_low
    }
}

/// Largest KKT violation of a solution on its own training set, measured on
/// `m_i·f(x_i)`. Zero means every condition holds exactly.
pub fn max_kkt_violation(solution: &SmoSolution, labels: &[i8], c: f64) -> f64 {
    solution
        .alphas
        .iter()
        .zip(labels)
        .enumerate()
        .map(|(i, (&a, &m))| {
            let r = f64::from(m) * solution.decision(i) - 1.0;
            if a <= 0.0 {
                (-r).max(0.0)
            } else if a >= c {
                r.max(0.0)
            } else {
                r.abs()
            }
        })
        .fold(0.0, f64::max)
}
