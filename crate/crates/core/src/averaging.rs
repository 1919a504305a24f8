//! Determinant-weighted averaging of local estimates.
//!
//! Each machine reports `F(Ĥ_t⁻¹)` together with `ln det Ĥ_t`. The combined
//! estimate is `Σ det(Ĥ_t) F_t / Σ det(Ĥ_t)`, evaluated entirely from log
//! weights: every weight is shifted by the running maximum before
//! exponentiation, so neither sum can overflow even when the determinants
//! themselves are far outside `f64` range.
//!
//! Values are flat `f64` slices; scalars, vectors and row-major matrices all
//! go through the same code.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AveragingError {
    #[error("cannot combine an empty batch")]
    EmptyBatch,
    #[error("estimate has {got} entries, accumulator expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("log-weight must be finite, got {0}")]
    NonFiniteWeight(f64),
}

/// One machine's contribution: a value and `ln det` of its local matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEstimate {
    pub value: Vec<f64>,
    pub log_weight: f64,
}

impl LocalEstimate {
    pub fn new(value: Vec<f64>, log_weight: f64) -> Self {
        Self { value, log_weight }
    }

    pub fn scalar(value: f64, log_weight: f64) -> Self {
        Self::new(vec![value], log_weight)
    }
}

/// Running log-domain weighted sum.
///
/// Holds `S = Σ exp(ℓ_t - max)` and `V = Σ exp(ℓ_t - max) v_t`; the result
/// `V / S` does not depend on the shift.
#[derive(Debug, Clone)]
pub struct WeightedAccumulator {
    max_log_weight: f64,
    weight_sum: f64,
    value_sum: Vec<f64>,
    count: usize,
}

impl WeightedAccumulator {
    pub fn new(dim: usize) -> Self {
        Self {
            max_log_weight: f64::NEG_INFINITY,
            weight_sum: 0.0,
            value_sum: vec![0.0; dim],
            count: 0,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dim(&self) -> usize {
        self.value_sum.len()
    }

    fn rebase(&mut self, new_max: f64) {
        if new_max > self.max_log_weight {
            if self.count > 0 {
                let factor = (self.max_log_weight - new_max).exp();
                self.weight_sum *= factor;
                self.value_sum.iter_mut().for_each(|v| *v *= factor);
            }
            self.max_log_weight = new_max;
        }
    }

    pub fn push(&mut self, estimate: &LocalEstimate) -> Result<(), AveragingError> {
        if estimate.value.len() != self.dim() {
            return Err(AveragingError::DimensionMismatch {
                expected: self.dim(),
                got: estimate.value.len(),
            });
        }
        if !estimate.log_weight.is_finite() {
            return Err(AveragingError::NonFiniteWeight(estimate.log_weight));
        }
        self.rebase(estimate.log_weight);
        let w = (estimate.log_weight - self.max_log_weight).exp();
        self.weight_sum += w;
        self.value_sum
            .iter_mut()
            .zip(&estimate.value)
            .for_each(|(acc, v)| *acc += w * v);
        self.count += 1;
        Ok(())
    }

    /// Folds another accumulator into this one.
    pub fn merge(&mut self, other: &WeightedAccumulator) -> Result<(), AveragingError> {
        if other.dim() != self.dim() {
            return Err(AveragingError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        if other.count == 0 {
            return Ok(());
        }
        self.rebase(other.max_log_weight);
        let factor = (other.max_log_weight - self.max_log_weight).exp();
        self.weight_sum += factor * other.weight_sum;
        self.value_sum
            .iter_mut()
            .zip(&other.value_sum)
            .for_each(|(acc, v)| *acc += factor * v);
        self.count += other.count;
        Ok(())
    }

    pub fn finalize(&self) -> Result<Vec<f64>, AveragingError> {
        if self.count == 0 {
            return Err(AveragingError::EmptyBatch);
        }
        Ok(self.value_sum.iter().map(|v| v / self.weight_sum).collect())
    }
}

fn batch_dim(estimates: &[LocalEstimate]) -> Result<usize, AveragingError> {
    let first = estimates.first().ok_or(AveragingError::EmptyBatch)?;
    Ok(first.value.len())
}

/// `Σ exp(ℓ_t) v_t / Σ exp(ℓ_t)`
pub fn combine_determinantal(estimates: &[LocalEstimate]) -> Result<Vec<f64>, AveragingError> {
    let dim = batch_dim(estimates)?;
    let mut acc = WeightedAccumulator::new(dim);
    // take the max up front so no rescaling happens mid-sum
    let max = estimates
        .iter()
        .map(|e| e.log_weight)
        .fold(f64::NEG_INFINITY, f64::max);
    if max.is_finite() {
        acc.rebase(max);
    }
    for e in estimates {
        acc.push(e)?;
    }
    acc.finalize()
}

/// Plain arithmetic mean; the log weights are ignored.
pub fn combine_uniform(estimates: &[LocalEstimate]) -> Result<Vec<f64>, AveragingError> {
    let dim = batch_dim(estimates)?;
    let mut sum = vec![0.0; dim];
    for e in estimates {
        if e.value.len() != dim {
            return Err(AveragingError::DimensionMismatch {
                expected: dim,
                got: e.value.len(),
            });
        }
        sum.iter_mut().zip(&e.value).for_each(|(s, v)| *s += v);
    }
    let m = estimates.len() as f64;
    Ok(sum.into_iter().map(|s| s / m).collect())
}
