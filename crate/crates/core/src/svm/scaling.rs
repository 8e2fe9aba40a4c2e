use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-dimension min/max from the training set, mapping onto `[-1, 1]`.
///
/// Constant training dimensions map to 0. Vectors outside the training
/// range extrapolate linearly and are not clamped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl ScalingParams {
    pub fn fit(train: &[Vec<f64>]) -> Result<Self> {
        let first = train
            .first()
            .ok_or_else(|| Error::InvalidArgument("cannot fit scaling on an empty set".into()))?;
        let mut mins = first.clone();
        let mut maxs = first.clone();
        for (i, v) in train.iter().enumerate() {
            if v.len() != mins.len() {
                return Err(Error::LengthMismatch {
                    expected: mins.len(),
                    actual: v.len(),
                });
            }
            for (d, &x) in v.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { sample: i, dim: d });
                }
                mins[d] = mins[d].min(x);
                maxs[d] = maxs[d].max(x);
            }
        }
        Ok(Self { mins, maxs })
    }

    pub fn dim(&self) -> usize {
        self.mins.len()
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                actual: v.len(),
            });
        }
        Ok(v.iter()
            .zip(self.mins.iter().zip(&self.maxs))
            .map(|(&x, (&lo, &hi))| {
                if hi > lo {
                    -1.0 + 2.0 * (x - lo) / (hi - lo)
                } else {
                    0.0
                }
            })
            .collect())
    }

    pub fn apply_all(&self, vs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        vs.iter().map(|v| self.apply(v)).collect()
    }
}

pub fn fit_scaling(train: &[Vec<f64>]) -> Result<ScalingParams> {
    ScalingParams::fit(train)
}

pub fn apply_scaling(params: &ScalingParams, v: &[f64]) -> Result<Vec<f64>> {
    params.apply(v)
}
