//! Bernoulli(k/n) subsampling and the local matrices one machine builds
//! from its sample.

use crate::linalg::SymMatrix;
use crate::objective::{Dataset, Objective};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SketchError {
    #[error("expected sample size k must satisfy 0 < k <= n (k = {k}, n = {n})")]
    InvalidSampleSize { k: f64, n: usize },
    #[error("mask covers {mask} examples but the dataset has {data}")]
    LengthMismatch { mask: usize, data: usize },
}

/// Identifies one independent random stream: the mask drawn by `machine`
/// during `trial` of a run seeded with `master_seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial: u64,
    pub machine: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial: u64, machine: u64) -> Self {
        Self {
            master_seed,
            trial,
            machine,
        }
    }

    /// ChaCha keyed by (seed, trial), with the machine index as stream id.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(
            self.master_seed ^ splitmix64(self.trial.wrapping_add(0x5eed)),
        ));
        rng.set_stream(self.machine);
        rng
    }
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// One machine's local sample: example `i` is included with probability
/// `k/n`, independently of all others.
#[derive(Debug, Clone, PartialEq)]
pub struct SketchMask {
    include: Vec<bool>,
    k: f64,
}

impl SketchMask {
    /// Wraps an explicit inclusion vector (used by exact enumeration).
    pub fn from_include(include: Vec<bool>, k: f64) -> Result<Self, SketchError> {
        validate_k(include.len(), k)?;
        Ok(Self { include, k })
    }

    pub fn n(&self) -> usize {
        self.include.len()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn include(&self) -> &[bool] {
        &self.include
    }

    pub fn count(&self) -> usize {
        self.include.iter().filter(|&&b| b).count()
    }

    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.include
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }
}

fn validate_k(n: usize, k: f64) -> Result<(), SketchError> {
    if !(k > 0.0 && k <= n as f64) {
        return Err(SketchError::InvalidSampleSize { k, n });
    }
    Ok(())
}

pub fn draw_mask(n: usize, k: f64, seed: SeedSpec) -> Result<SketchMask, SketchError> {
    validate_k(n, k)?;
    let p = k / n as f64;
    let mut rng = seed.rng();
    let include = (0..n).map(|_| rng.random_bool(p)).collect();
    Ok(SketchMask { include, k })
}

fn check_len(mask: &SketchMask, data: &Dataset) -> Result<(), SketchError> {
    if mask.n() != data.n() {
        return Err(SketchError::LengthMismatch {
            mask: mask.n(),
            data: data.n(),
        });
    }
    Ok(())
}

/// `(1/k) Σ_{i in mask} ℓ''(wᵀx_i) x_i x_iᵀ + λI`
pub fn local_hessian(
    obj: &Objective,
    w: &[f64],
    mask: &SketchMask,
) -> Result<SymMatrix, SketchError> {
    let data = obj.data();
    check_len(mask, data)?;
    let loss = obj.loss();
    let inv_k = 1.0 / mask.k();
    let mut h = SymMatrix::zeros(obj.dim());
    h.add_outer_many(mask.selected().map(|i| {
        let x = data.row(i);
        (x, inv_k * loss.second(crate::linalg::dot(w, x)))
    }));
    h.add_diagonal(obj.lambda());
    Ok(h)
}

/// `(1/k) Σ_{i in mask} x_i x_iᵀ`; may be singular.
pub fn local_covariance(data: &Dataset, mask: &SketchMask) -> Result<SymMatrix, SketchError> {
    check_len(mask, data)?;
    let inv_k = 1.0 / mask.k();
    let mut s = SymMatrix::zeros(data.d());
    s.add_outer_many(mask.selected().map(|i| (data.row(i), inv_k)));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::LossKind;
    use rand_distr::{Distribution, StandardNormal};

    fn small_objective(loss: LossKind) -> Objective {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 30;
        let d = 3;
        let x: Vec<f64> = (0..n * d)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let y: Vec<f64> = (0..n).map(|i| f64::from((i % 3 == 0) as u8)).collect();
        Objective::new(Dataset::new(n, d, x, y).unwrap(), loss, 0.2).unwrap()
    }

    #[test]
    fn full_probability_gives_full_mask() {
        let m = draw_mask(50, 50.0, SeedSpec::new(1, 2, 3)).unwrap();
        assert_eq!(m.count(), 50);
    }

    #[test]
    fn invalid_sample_sizes() {
        for k in [0.0, -1.0, 10.5, f64::NAN] {
            assert!(matches!(
                draw_mask(10, k, SeedSpec::new(0, 0, 0)),
                Err(SketchError::InvalidSampleSize { .. })
            ));
        }
    }

    #[test]
    fn masks_are_deterministic_and_streams_differ() {
        let s = SeedSpec::new(42, 7, 3);
        let a = draw_mask(1000, 100.0, s).unwrap();
        let b = draw_mask(1000, 100.0, s).unwrap();
        assert_eq!(a, b);
        let c = draw_mask(1000, 100.0, SeedSpec::new(42, 7, 4)).unwrap();
        let e = draw_mask(1000, 100.0, SeedSpec::new(42, 8, 3)).unwrap();
        let f = draw_mask(1000, 100.0, SeedSpec::new(43, 7, 3)).unwrap();
        assert_ne!(a, c);
        assert_ne!(a, e);
        assert_ne!(a, f);
    }

    #[test]
    fn inclusion_count_concentrates() {
        let n = 100_000;
        let k = 1000.0;
        let sigma = (k * (1.0 - k / n as f64)).sqrt();
        for machine in 0..5 {
            let m = draw_mask(n, k, SeedSpec::new(9, 0, machine)).unwrap();
            assert!((m.count() as f64 - k).abs() <= 3.0 * sigma);
        }
    }

    #[test]
    fn degenerate_masks() {
        let obj = small_objective(LossKind::Logistic);
        let w = [0.3, -0.1, 0.5];
        let empty = SketchMask::from_include(vec![false; 30], 5.0).unwrap();
        assert_eq!(
            local_hessian(&obj, &w, &empty).unwrap(),
            SymMatrix::scaled_identity(3, 0.2)
        );
        assert_eq!(
            local_covariance(obj.data(), &empty).unwrap(),
            SymMatrix::zeros(3)
        );

        let full = SketchMask::from_include(vec![true; 30], 30.0).unwrap();
        let h = local_hessian(&obj, &w, &full).unwrap();
        assert!(h.max_abs_diff(&obj.hessian(&w)) <= 1e-14);
        let s = local_covariance(obj.data(), &full).unwrap();
        assert!(s.max_abs_diff(&obj.data().covariance()) <= 1e-14);
    }

    #[test]
    fn length_mismatch_is_reported() {
        let obj = small_objective(LossKind::Square);
        let m = SketchMask::from_include(vec![true; 5], 5.0).unwrap();
        assert!(matches!(
            local_hessian(&obj, &[0.0; 3], &m),
            Err(SketchError::LengthMismatch { mask: 5, data: 30 })
        ));
    }

    /// Entrywise mean over `trials` masks is within 3 empirical standard
    /// errors of `target`.
    fn assert_unbiased<F>(target: &SymMatrix, trials: u64, mut sample: F)
    where
        F: FnMut(u64) -> SymMatrix,
    {
        let d = target.dim();
        let mut sum = vec![0.0; d * d];
        let mut sum_sq = vec![0.0; d * d];
        for t in 0..trials {
            let m = sample(t);
            for (idx, v) in m.as_slice().iter().enumerate() {
                sum[idx] += v;
                sum_sq[idx] += v * v;
            }
        }
        let t = trials as f64;
        for idx in 0..d * d {
            let mean = sum[idx] / t;
            let var = (sum_sq[idx] / t - mean * mean) * t / (t - 1.0);
            let se = (var / t).sqrt();
            let exact = target.as_slice()[idx];
            assert!(
                (mean - exact).abs() <= 3.0 * se + 1e-12,
                "entry {idx}: mean {mean} exact {exact} se {se}"
            );
        }
    }

    #[test]
    fn local_hessian_is_unbiased() {
        let obj = small_objective(LossKind::Logistic);
        let w = [0.5, 0.2, -0.4];
        assert_unbiased(&obj.hessian(&w), 10_000, |t| {
            let mask = draw_mask(30, 6.0, SeedSpec::new(77, t, 0)).unwrap();
            local_hessian(&obj, &w, &mask).unwrap()
        });
    }

    #[test]
    fn local_covariance_is_unbiased() {
        let obj = small_objective(LossKind::Square);
        assert_unbiased(&obj.data().covariance(), 10_000, |t| {
            let mask = draw_mask(30, 6.0, SeedSpec::new(78, t, 1)).unwrap();
            local_covariance(obj.data(), &mask).unwrap()
        });
    }
}
