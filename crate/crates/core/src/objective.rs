//! Regularized finite-sum loss
//! `L(w) = (1/n) Σ ℓ(wᵀx_i; y_i) + (λ/2)‖w‖²`
//! with exact gradient, Hessian and Newton step.

use crate::linalg::{self, dot, LinalgError, SymMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("dataset must have at least one example and one feature (n = {n}, d = {d})")]
    Empty { n: usize, d: usize },
    #[error("row {row} has {got} features, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("label count {labels} does not match row count {rows}")]
    LabelCount { rows: usize, labels: usize },
    #[error("non-finite value at row {row}")]
    NonFinite { row: usize },
    #[error("regularization must be positive and finite, got {0}")]
    InvalidLambda(f64),
}

/// Dense design matrix with one label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    d: usize,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Dataset {
    /// `x` is row-major n×d.
    pub fn new(n: usize, d: usize, x: Vec<f64>, y: Vec<f64>) -> Result<Self, DataError> {
        if n == 0 || d == 0 {
            return Err(DataError::Empty { n, d });
        }
        if x.len() != n * d {
            return Err(DataError::RaggedRow {
                row: x.len() / d,
                expected: d,
                got: x.len() % d,
            });
        }
        if y.len() != n {
            return Err(DataError::LabelCount {
                rows: n,
                labels: y.len(),
            });
        }
        for (row, (xs, label)) in x.chunks_exact(d).zip(&y).enumerate() {
            if !label.is_finite() || xs.iter().any(|v| !v.is_finite()) {
                return Err(DataError::NonFinite { row });
            }
        }
        Ok(Self { n, d, x, y })
    }

    pub fn from_rows(rows: &[Vec<f64>], y: Vec<f64>) -> Result<Self, DataError> {
        let d = rows.first().map_or(0, Vec::len);
        let mut x = Vec::with_capacity(rows.len() * d);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(DataError::RaggedRow {
                    row,
                    expected: d,
                    got: r.len(),
                });
            }
            x.extend_from_slice(r);
        }
        Self::new(rows.len(), d, x, y)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.x.chunks_exact(self.d)
    }

    pub fn labels(&self) -> &[f64] {
        &self.y
    }

    pub fn features(&self) -> &[f64] {
        &self.x
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    /// Sample second-moment matrix `(1/n) XᵀX`.
    pub fn covariance(&self) -> SymMatrix {
        let mut s = SymMatrix::zeros(self.d);
        let w = 1.0 / self.n as f64;
        s.add_outer_many(self.rows().map(|r| (r, w)));
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    /// `(z - y)²`
    Square,
    /// `log(1 + e^z) - y z` with labels in {0, 1}
    Logistic,
}

impl LossKind {
    pub fn value(self, z: f64, y: f64) -> f64 {
        match self {
            LossKind::Square => (z - y) * (z - y),
            LossKind::Logistic => softplus(z) - y * z,
        }
    }

    pub fn first(self, z: f64, y: f64) -> f64 {
        match self {
            LossKind::Square => 2.0 * (z - y),
            LossKind::Logistic => sigmoid(z) - y,
        }
    }

    pub fn second(self, z: f64) -> f64 {
        match self {
            LossKind::Square => 2.0,
            LossKind::Logistic => {
                let s = sigmoid(z);
                s * (1.0 - s)
            }
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

#[derive(Debug, Clone)]
pub struct Objective {
    data: Dataset,
    loss: LossKind,
    lambda: f64,
}

impl Objective {
    pub fn new(data: Dataset, loss: LossKind, lambda: f64) -> Result<Self, DataError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(DataError::InvalidLambda(lambda));
        }
        Ok(Self { data, loss, lambda })
    }

    /// Uses `λ = 1/n`.
    pub fn with_default_lambda(data: Dataset, loss: LossKind) -> Self {
        let lambda = 1.0 / data.n() as f64;
        Self { data, loss, lambda }
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn loss(&self) -> LossKind {
        self.loss
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.data.d()
    }

    /// `ℓ''(wᵀx_i)` for every example.
    pub fn curvatures(&self, w: &[f64]) -> Vec<f64> {
        self.data
            .rows()
            .map(|x| self.loss.second(dot(w, x)))
            .collect()
    }

    pub fn loss_value(&self, w: &[f64]) -> f64 {
        let n = self.data.n() as f64;
        let sum: f64 = self
            .data
            .rows()
            .zip(self.data.labels())
            .map(|(x, &y)| self.loss.value(dot(w, x), y))
            .sum();
        sum / n + 0.5 * self.lambda * dot(w, w)
    }

    pub fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let n = self.data.n() as f64;
        let mut g = vec![0.0; self.dim()];
        for (x, &y) in self.data.rows().zip(self.data.labels()) {
            let c = self.loss.first(dot(w, x), y);
            g.iter_mut().zip(x).for_each(|(gj, xj)| *gj += c * xj);
        }
        g.iter_mut()
            .zip(w)
            .for_each(|(gj, wj)| *gj = *gj / n + self.lambda * wj);
        g
    }

    pub fn hessian(&self, w: &[f64]) -> SymMatrix {
        let n = self.data.n() as f64;
        let curv = self.curvatures(w);
        let mut h = SymMatrix::zeros(self.dim());
        h.add_outer_many(self.data.rows().zip(&curv).map(|(x, c)| (x, c / n)));
        h.add_diagonal(self.lambda);
        h
    }

    /// `p = ∇²L(w)⁻¹ ∇L(w)`
    pub fn exact_newton_step(&self, w: &[f64]) -> Result<Vec<f64>, LinalgError> {
        linalg::solve_psd(&self.hessian(w), &self.gradient(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cholesky, norm2, sub};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_objective(rng: &mut ChaCha8Rng, loss: LossKind) -> Objective {
        let n = rng.random_range(3..12);
        let d = rng.random_range(1..5);
        let x: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.5..1.5)).collect();
        let y: Vec<f64> = (0..n)
            .map(|_| match loss {
                LossKind::Square => rng.random_range(-2.0..2.0),
                LossKind::Logistic => f64::from(rng.random_bool(0.5) as u8),
            })
            .collect();
        let lambda = rng.random_range(0.05..1.0);
        Objective::new(Dataset::new(n, d, x, y).unwrap(), loss, lambda).unwrap()
    }

    fn fd_step(w: &[f64]) -> f64 {
        1e-5 * (1.0 + norm2(w))
    }

    #[test]
    fn dataset_validation() {
        assert!(matches!(
            Dataset::new(0, 1, vec![], vec![]),
            Err(DataError::Empty { .. })
        ));
        assert!(matches!(
            Dataset::new(1, 2, vec![1.0, f64::NAN], vec![0.0]),
            Err(DataError::NonFinite { row: 0 })
        ));
        assert!(matches!(
            Dataset::new(2, 1, vec![1.0, 2.0], vec![0.0]),
            Err(DataError::LabelCount { .. })
        ));
        let data = Dataset::new(1, 1, vec![1.0], vec![1.0]).unwrap();
        assert!(matches!(
            Objective::new(data, LossKind::Square, 0.0),
            Err(DataError::InvalidLambda(_))
        ));
    }

    #[test]
    fn loss_value_examples() {
        let data = Dataset::new(2, 2, vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 0.0]).unwrap();
        let obj = Objective::new(data, LossKind::Square, 1.0).unwrap();
        assert_eq!(obj.loss_value(&[0.0, 0.0]), 0.0);

        let data = Dataset::new(1, 1, vec![1.0], vec![1.0]).unwrap();
        let obj = Objective::new(data, LossKind::Square, 2.0).unwrap();
        assert_eq!(obj.loss_value(&[0.0]), 1.0);

        let data = Dataset::new(2, 2, vec![1.0, 0.0, 0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let obj = Objective::new(data, LossKind::Square, 1.0).unwrap();
        assert_eq!(obj.loss_value(&[1.0, 1.0]), 1.0);
    }

    #[test]
    fn zero_rows_reduce_to_ridge() {
        let data = Dataset::new(3, 2, vec![0.0; 6], vec![0.5, -1.0, 2.0]).unwrap();
        let obj = Objective::new(data.clone(), LossKind::Square, 1.0).unwrap();
        assert_eq!(obj.gradient(&[0.7, -0.2]), vec![0.7, -0.2]);

        let obj = Objective::new(data, LossKind::Logistic, 3.0).unwrap();
        assert_eq!(obj.hessian(&[0.4, 1.0]), SymMatrix::scaled_identity(2, 3.0));
        let w = [0.4, -2.5];
        let p = obj.exact_newton_step(&w).unwrap();
        assert!(norm2(&sub(&p, &w)) <= 1e-15);
    }

    #[test]
    fn square_hessian_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let obj = random_objective(&mut rng, LossKind::Square);
        let n = obj.data().n() as f64;
        let mut expect = obj.data().covariance();
        expect.scale(2.0);
        expect.add_diagonal(obj.lambda());
        let h1 = obj.hessian(&vec![0.0; obj.dim()]);
        let h2 = obj.hessian(&vec![3.0; obj.dim()]);
        assert!(h1.max_abs_diff(&expect) <= 1e-13 * n);
        assert_eq!(h1, h2);
    }

    #[test]
    fn one_newton_step_solves_ridge_regression() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let obj = random_objective(&mut rng, LossKind::Square);
            let w0 = vec![0.0; obj.dim()];
            let p = obj.exact_newton_step(&w0).unwrap();
            let w1 = sub(&w0, &p);
            assert!(norm2(&obj.gradient(&w1)) <= 1e-8);
        }
    }

    #[test]
    fn stationary_point_has_zero_gradient() {
        // one example, x = 1, y = 2: minimizer of (w-2)² + (λ/2) w² is 4/(2+λ)
        let data = Dataset::new(1, 1, vec![1.0], vec![2.0]).unwrap();
        let obj = Objective::new(data, LossKind::Square, 0.5).unwrap();
        let w_star = [4.0 / 2.5];
        assert!(obj.gradient(&w_star)[0].abs() <= 1e-10);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for case in 0..40 {
            let loss = if case % 2 == 0 {
                LossKind::Square
            } else {
                LossKind::Logistic
            };
            let obj = random_objective(&mut rng, loss);
            let w: Vec<f64> = (0..obj.dim())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let h = fd_step(&w);
            let g = obj.gradient(&w);
            for j in 0..obj.dim() {
                let mut wp = w.clone();
                let mut wm = w.clone();
                wp[j] += h;
                wm[j] -= h;
                let fd = (obj.loss_value(&wp) - obj.loss_value(&wm)) / (2.0 * h);
                assert!(
                    (fd - g[j]).abs() <= 1e-5 * g[j].abs().max(1.0),
                    "case {case} coord {j}: fd {fd} vs {}",
                    g[j]
                );
            }
        }
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for case in 0..40 {
            let loss = if case % 2 == 0 {
                LossKind::Logistic
            } else {
                LossKind::Square
            };
            let obj = random_objective(&mut rng, loss);
            let d = obj.dim();
            let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let h = fd_step(&w);
            let hess = obj.hessian(&w);
            for j in 0..d {
                let mut wp = w.clone();
                let mut wm = w.clone();
                wp[j] += h;
                wm[j] -= h;
                let gp = obj.gradient(&wp);
                let gm = obj.gradient(&wm);
                for i in 0..d {
                    let fd = (gp[i] - gm[i]) / (2.0 * h);
                    assert!(
                        (fd - hess.get(i, j)).abs() <= 1e-4 * hess.get(i, j).abs().max(1.0),
                        "case {case} ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn hessian_dominates_ridge() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..25 {
            let obj = random_objective(&mut rng, LossKind::Logistic);
            let w: Vec<f64> = (0..obj.dim())
                .map(|_| rng.random_range(-3.0..3.0))
                .collect();
            let mut shifted = obj.hessian(&w);
            // H - λI must stay PSD: adding a hair of ridge must factor
            shifted.add_diagonal(-obj.lambda() + 1e-12);
            assert!(cholesky(&shifted).is_ok());
        }
    }

    #[test]
    fn newton_step_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let obj = random_objective(&mut rng, LossKind::Logistic);
            let w: Vec<f64> = (0..obj.dim())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let p = obj.exact_newton_step(&w).unwrap();
            let g = obj.gradient(&w);
            let r = sub(&obj.hessian(&w).matvec(&p), &g);
            assert!(norm2(&r) <= 1e-8 * norm2(&g).max(1e-300));
        }
    }

    #[test]
    fn logistic_is_stable_for_large_margins() {
        let l = LossKind::Logistic;
        assert!(l.value(800.0, 1.0).abs() < 1e-12);
        assert!((l.value(-800.0, 1.0) - 800.0).abs() < 1e-9);
        assert_eq!(l.second(-800.0), 0.0);
        assert!((l.second(0.0) - 0.25).abs() < 1e-15);
    }
}
