//! Exact expectations by enumerating every outcome of a small random matrix
//! `A = B + Σ_i s_i Z_i` with independent, finitely supported `s_i`.
//!
//! Determinants and adjugates of each outcome are taken by cofactor
//! expansion, so singular outcomes (an empty sample with `B = 0`) are exact.
//! The engine is used to check that, for rank-1 `Z_i`,
//! `E[det A] = det E[A]` and `E[adj A] = adj E[A]`, and hence that
//! determinant-weighted inverses are unbiased while plain inverses are not.

use crate::linalg::{
    self, adjugate_cofactor, cholesky, det_cofactor, LinalgError, SymMatrix, COFACTOR_MAX_DIM,
};
use crate::objective::Objective;
use crate::sketch::{local_hessian, SketchMask};
use crate::Result;
use thiserror::Error;

/// Largest number of random components the oracle will enumerate.
pub const MAX_COMPONENTS: usize = 20;
/// Largest number of joint outcomes (`2^20`).
pub const MAX_OUTCOMES: u64 = 1 << MAX_COMPONENTS;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("enumeration budget exceeded: {components} components / {outcomes} outcomes (limit {MAX_COMPONENTS} / {MAX_OUTCOMES})")]
    EnumerationBudgetExceeded { components: usize, outcomes: u128 },
    #[error("invalid distribution for component {index}: {reason}")]
    InvalidDistribution { index: usize, reason: String },
    #[error("component {index} is {got}x{got}, model is {expected}x{expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("oracle dimension {0} exceeds the cofactor limit {COFACTOR_MAX_DIM}")]
    DimensionTooLarge(usize),
}

/// A random scalar taking finitely many values.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    outcomes: Vec<(f64, f64)>,
}

impl FiniteDistribution {
    /// `(value, probability)` pairs; probabilities must be non-negative and
    /// sum to one.
    pub fn new(outcomes: Vec<(f64, f64)>) -> std::result::Result<Self, String> {
        if outcomes.is_empty() {
            return Err("no outcomes".into());
        }
        if outcomes
            .iter()
            .any(|&(v, p)| !v.is_finite() || !(0.0..=1.0).contains(&p))
        {
            return Err("values must be finite and probabilities in [0, 1]".into());
        }
        let total: f64 = outcomes.iter().map(|o| o.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(format!("probabilities sum to {total}"));
        }
        Ok(Self { outcomes })
    }

    /// `scale · Bernoulli(p)`
    pub fn scaled_bernoulli(p: f64, scale: f64) -> std::result::Result<Self, String> {
        Self::new(vec![(0.0, 1.0 - p), (scale, p)])
    }

    pub fn constant(value: f64) -> Self {
        Self {
            outcomes: vec![(value, 1.0)],
        }
    }

    pub fn mean(&self) -> f64 {
        self.outcomes.iter().map(|(v, p)| v * p).sum()
    }

    pub fn outcomes(&self) -> &[(f64, f64)] {
        &self.outcomes
    }
}

#[derive(Debug, Clone)]
pub struct Component {
    pub matrix: SymMatrix,
    pub weight: FiniteDistribution,
}

/// `A = B + Σ_i s_i Z_i`.
#[derive(Debug, Clone)]
pub struct RandomRankOneSum {
    base: SymMatrix,
    components: Vec<Component>,
}

impl RandomRankOneSum {
    pub fn new(
        base: SymMatrix,
        components: Vec<Component>,
    ) -> std::result::Result<Self, OracleError> {
        let d = base.dim();
        if d > COFACTOR_MAX_DIM {
            return Err(OracleError::DimensionTooLarge(d));
        }
        for (index, c) in components.iter().enumerate() {
            if c.matrix.dim() != d {
                return Err(OracleError::DimensionMismatch {
                    index,
                    expected: d,
                    got: c.matrix.dim(),
                });
            }
        }
        Ok(Self { base, components })
    }

    /// `A = (1/γ_i) Σ b_i Z_i + B` with `b_i ~ Bernoulli(γ_i)`.
    pub fn bernoulli(
        base: SymMatrix,
        matrices: Vec<SymMatrix>,
        gammas: &[f64],
    ) -> std::result::Result<Self, OracleError> {
        let components = matrices
            .into_iter()
            .zip(gammas)
            .enumerate()
            .map(|(index, (matrix, &g))| {
                if !(g > 0.0 && g <= 1.0) {
                    return Err(OracleError::InvalidDistribution {
                        index,
                        reason: format!("inclusion probability {g} outside (0, 1]"),
                    });
                }
                let weight = FiniteDistribution::scaled_bernoulli(g, 1.0 / g)
                    .map_err(|reason| OracleError::InvalidDistribution { index, reason })?;
                Ok(Component { matrix, weight })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(base, components)
    }

    /// The random local Hessian of a subsampled objective at `w`:
    /// `(1/k) Σ b_i ℓ''(wᵀx_i) x_i x_iᵀ + λI` with `b_i ~ Bernoulli(k/n)`.
    pub fn from_subsampled_hessian(
        obj: &Objective,
        w: &[f64],
        k: f64,
    ) -> std::result::Result<Self, OracleError> {
        let data = obj.data();
        let d = obj.dim();
        let p = k / data.n() as f64;
        let components = data
            .rows()
            .enumerate()
            .map(|(index, x)| {
                let mut z = SymMatrix::zeros(d);
                z.add_outer(x, obj.loss().second(linalg::dot(w, x)) / k);
                let weight = FiniteDistribution::scaled_bernoulli(p, 1.0)
                    .map_err(|reason| OracleError::InvalidDistribution { index, reason })?;
                Ok(Component { matrix: z, weight })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(SymMatrix::scaled_identity(d, obj.lambda()), components)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn outcome_count(&self) -> u128 {
        self.components
            .iter()
            .map(|c| c.weight.outcomes.len() as u128)
            .product()
    }

    fn check_budget(&self) -> std::result::Result<(), OracleError> {
        let outcomes = self.outcome_count();
        if self.components.len() > MAX_COMPONENTS || outcomes > MAX_OUTCOMES as u128 {
            return Err(OracleError::EnumerationBudgetExceeded {
                components: self.components.len(),
                outcomes,
            });
        }
        Ok(())
    }

    /// `E[A] = B + Σ E[s_i] Z_i`
    pub fn mean(&self) -> SymMatrix {
        let mut m = self.base.clone();
        for c in &self.components {
            m.add_scaled(&c.matrix, c.weight.mean());
        }
        m
    }

    /// Calls `visit(probability, A)` for every joint outcome with non-zero
    /// probability.
    pub fn for_each_outcome<F>(&self, mut visit: F) -> std::result::Result<(), OracleError>
    where
        F: FnMut(f64, &SymMatrix),
    {
        self.check_budget()?;
        let n = self.components.len();
        let mut digits = vec![0usize; n];
        loop {
            let mut prob = 1.0;
            let mut a = self.base.clone();
            for (c, &j) in self.components.iter().zip(&digits) {
                let (s, p) = c.weight.outcomes[j];
                prob *= p;
                if s != 0.0 {
                    a.add_scaled(&c.matrix, s);
                }
            }
            if prob > 0.0 {
                visit(prob, &a);
            }
            // mixed-radix increment
            let mut pos = 0;
            loop {
                if pos == n {
                    return Ok(());
                }
                digits[pos] += 1;
                if digits[pos] < self.components[pos].weight.outcomes.len() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// `E[det A]`
pub fn expect_det(model: &RandomRankOneSum) -> Result<f64> {
    let mut acc = 0.0;
    let mut err = None;
    model.for_each_outcome(|p, a| match det_cofactor(a) {
        Ok(det) => acc += p * det,
        Err(e) => err = Some(e),
    })?;
    finish(acc, err)
}

/// `E[adj A]`
pub fn expect_adjugate(model: &RandomRankOneSum) -> Result<SymMatrix> {
    let mut acc = SymMatrix::zeros(model.dim());
    let mut err = None;
    model.for_each_outcome(|p, a| match adjugate_cofactor(a) {
        Ok(adj) => acc.add_scaled(&adj, p),
        Err(e) => err = Some(e),
    })?;
    finish(acc, err)
}

/// `E[det(A) A⁻¹] / E[det A]`, using `det(A) A⁻¹ = adj(A)`.
pub fn expect_weighted_inverse(model: &RandomRankOneSum) -> Result<SymMatrix> {
    let mut num = SymMatrix::zeros(model.dim());
    let mut den = 0.0;
    let mut err = None;
    model.for_each_outcome(|p, a| match (adjugate_cofactor(a), det_cofactor(a)) {
        (Ok(adj), Ok(det)) => {
            num.add_scaled(&adj, p);
            den += p * det;
        }
        (Err(e), _) | (_, Err(e)) => err = Some(e),
    })?;
    let mut out = finish(num, err)?;
    if den.is_nan() || den <= 0.0 {
        return Err(LinalgError::NotPositiveDefinite {
            pivot: 0,
            value: den,
        }
        .into());
    }
    out.scale(1.0 / den);
    Ok(out)
}

/// Unweighted `E[A⁻¹]`; every outcome must be positive definite.
pub fn expect_inverse(model: &RandomRankOneSum) -> Result<SymMatrix> {
    let mut acc = SymMatrix::zeros(model.dim());
    let mut err = None;
    model.for_each_outcome(|p, a| match cholesky(a) {
        Ok(c) => acc.add_scaled(&c.inverse(), p),
        Err(e) => err = Some(e),
    })?;
    finish(acc, err)
}

/// Relative deviations of the three exact identities on one model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityDeviation {
    /// `|E[det A] − det E[A]| / |det E[A]|`
    pub det: f64,
    /// `‖E[adj A] − adj E[A]‖_max / ‖adj E[A]‖_max`
    pub adjugate: f64,
    /// `‖E[det(A) A⁻¹]/E[det A] − (E A)⁻¹‖_max / ‖(E A)⁻¹‖_max`
    pub weighted_inverse: f64,
}

impl IdentityDeviation {
    pub fn max(&self) -> f64 {
        self.det.max(self.adjugate).max(self.weighted_inverse)
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

pub fn identity_deviations(model: &RandomRankOneSum) -> Result<IdentityDeviation> {
    let mean = model.mean();
    let det_mean = det_cofactor(&mean)?;
    let adj_mean = adjugate_cofactor(&mean)?;
    let det = rel((expect_det(model)? - det_mean).abs(), det_mean.abs());
    let adjugate = rel(
        expect_adjugate(model)?.max_abs_diff(&adj_mean),
        adj_mean.max_abs(),
    );
    let weighted_inverse = match cholesky(&mean) {
        Ok(c) => {
            let inv = c.inverse();
            rel(
                expect_weighted_inverse(model)?.max_abs_diff(&inv),
                inv.max_abs(),
            )
        }
        // (E A)⁻¹ does not exist, only the first two identities apply
        Err(_) => 0.0,
    };
    Ok(IdentityDeviation {
        det,
        adjugate,
        weighted_inverse,
    })
}

/// A random model with `B = λI`, Gaussian rank-1 components, and a mix of
/// rescaled Bernoulli(γ) and general finite-support weights.
pub fn random_model<R: rand::Rng>(
    rng: &mut R,
    d: usize,
    n: usize,
    lambda: f64,
) -> std::result::Result<RandomRankOneSum, OracleError> {
    use rand_distr::{Distribution, StandardNormal};
    let mut outcomes_so_far: u64 = 1;
    let components = (0..n)
        .map(|index| {
            let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
            let mut matrix = SymMatrix::zeros(d);
            matrix.add_outer(&v, 1.0);
            // leave room for two outcomes per remaining component
            let rest = 1u64 << (n - index - 1).min(MAX_COMPONENTS);
            let max_support =
                (MAX_OUTCOMES / outcomes_so_far.saturating_mul(rest).max(1)).clamp(2, 4);
            let weight = if max_support == 2 || rng.random_bool(0.5) {
                outcomes_so_far = outcomes_so_far.saturating_mul(2);
                let gamma = rng.random_range(0.1..=1.0);
                FiniteDistribution::scaled_bernoulli(gamma, 1.0 / gamma)
            } else {
                let support = rng.random_range(2..=max_support);
                outcomes_so_far = outcomes_so_far.saturating_mul(support);
                let raw: Vec<f64> = (0..support).map(|_| rng.random_range(0.05..1.0)).collect();
                let total: f64 = raw.iter().sum();
                let mut outcomes: Vec<(f64, f64)> = raw
                    .iter()
                    .map(|p| (rng.random_range(0.0..2.0), p / total))
                    .collect();
                // absorb rounding so probabilities sum to one
                let head: f64 = outcomes[1..].iter().map(|o| o.1).sum();
                outcomes[0].1 = 1.0 - head;
                FiniteDistribution::new(outcomes)
            }
            .map_err(|reason| OracleError::InvalidDistribution { index, reason })?;
            Ok(Component { matrix, weight })
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    RandomRankOneSum::new(SymMatrix::scaled_identity(d, lambda), components)
}

/// `A = s·I` with `s ~ Bernoulli(½)` on `d = 2`: the component has rank 2,
/// and `E[det A] = ½` while `det E[A] = ¼`.
pub fn rank_two_counterexample() -> RandomRankOneSum {
    RandomRankOneSum::new(
        SymMatrix::zeros(2),
        vec![Component {
            matrix: SymMatrix::identity(2),
            weight: FiniteDistribution::scaled_bernoulli(0.5, 1.0).expect("valid probability"),
        }],
    )
    .expect("dimensions agree")
}

fn finish<T>(value: T, err: Option<LinalgError>) -> Result<T> {
    match err {
        Some(e) => Err(e.into()),
        None => Ok(value),
    }
}

/// Exact distribution of local Newton steps over all `2^n` masks.
struct NewtonEnumeration {
    /// `E[p̂]`
    mean_step: Vec<f64>,
    /// `E[det(Ĥ) p̂] / E[det Ĥ]`
    weighted_step: Vec<f64>,
    exact: Vec<f64>,
}

fn enumerate_newton(obj: &Objective, w: &[f64], k: f64) -> Result<NewtonEnumeration> {
    let n = obj.data().n();
    if n > MAX_COMPONENTS {
        return Err(OracleError::EnumerationBudgetExceeded {
            components: n,
            outcomes: 1u128 << n.min(127),
        }
        .into());
    }
    let d = obj.dim();
    let p = k / n as f64;
    let g = obj.gradient(w);
    let exact = obj.exact_newton_step(w)?;
    let mut mean_step = vec![0.0; d];
    let mut weighted = vec![0.0; d];
    let mut log_dets = Vec::with_capacity(1 << n);
    let mut steps = Vec::with_capacity(1 << n);
    let mut probs = Vec::with_capacity(1 << n);
    for bits in 0u64..(1u64 << n) {
        let include: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        let count = include.iter().filter(|&&b| b).count() as i32;
        let prob = p.powi(count) * (1.0 - p).powi(n as i32 - count);
        if prob == 0.0 {
            continue;
        }
        let mask = SketchMask::from_include(include, k)?;
        let chol = cholesky(&local_hessian(obj, w, &mask)?)?;
        let step = chol.solve(&g)?;
        mean_step
            .iter_mut()
            .zip(&step)
            .for_each(|(m, s)| *m += prob * s);
        log_dets.push(chol.log_det());
        steps.push(step);
        probs.push(prob);
    }
    let shift = log_dets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut den = 0.0;
    for ((step, ld), prob) in steps.iter().zip(&log_dets).zip(&probs) {
        let a = prob * (ld - shift).exp();
        den += a;
        weighted
            .iter_mut()
            .zip(step)
            .for_each(|(acc, s)| *acc += a * s);
    }
    weighted.iter_mut().for_each(|v| *v /= den);
    Ok(NewtonEnumeration {
        mean_step,
        weighted_step: weighted,
        exact,
    })
}

/// `E[p̂] − p` for uniform averaging: the level at which the uniform
/// estimator stops improving as machines are added.
pub fn expect_uniform_newton_bias(obj: &Objective, w: &[f64], k: f64) -> Result<Vec<f64>> {
    let e = enumerate_newton(obj, w, k)?;
    Ok(linalg::sub(&e.mean_step, &e.exact))
}

/// `E[p̂]` itself.
pub fn expect_local_newton_step(obj: &Objective, w: &[f64], k: f64) -> Result<Vec<f64>> {
    Ok(enumerate_newton(obj, w, k)?.mean_step)
}

/// `E[det(Ĥ) p̂] / E[det Ĥ]`; equals the exact Newton step.
pub fn expect_determinantal_newton_step(obj: &Objective, w: &[f64], k: f64) -> Result<Vec<f64>> {
    Ok(enumerate_newton(obj, w, k)?.weighted_step)
}
