//! Distributed Newton simulation.
//!
//! Every machine draws its own Bernoulli(k/n) sample, forms the local
//! Hessian `Ĥ_t`, and returns `p̂_t = Ĥ_t⁻¹ ∇L(w)` using the exact global
//! gradient. The driver merges the `p̂_t` either uniformly or with weights
//! `det Ĥ_t`, and measures the result against the exact Newton step.

use crate::averaging::{combine_determinantal, combine_uniform, LocalEstimate};
use crate::linalg::{self, cholesky, mahalanobis_norm, norm2, sub, SymMatrix};
use crate::objective::Objective;
use crate::sketch::{draw_mask, local_hessian, SeedSpec, SketchMask};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Gradient-norm target for the reference minimizer.
pub const REFERENCE_GRAD_TOL: f64 = 1e-12;
const REFERENCE_MAX_ITERS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Uniform,
    Determinantal,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Uniform => "uniform",
            Scheme::Determinantal => "determinantal",
        }
    }

    pub fn combine(self, estimates: &[LocalEstimate]) -> Result<Vec<f64>> {
        Ok(match self {
            Scheme::Uniform => combine_uniform(estimates)?,
            Scheme::Determinantal => combine_determinantal(estimates)?,
        })
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Scheme::Uniform),
            "determinantal" => Ok(Scheme::Determinantal),
            other => Err(Error::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MachineConfig {
    /// Number of machines `m`.
    pub machines: usize,
    /// Expected local sample size `k`.
    pub k: f64,
    pub scheme: Scheme,
}

impl MachineConfig {
    pub fn new(machines: usize, k: f64, scheme: Scheme) -> Self {
        Self {
            machines,
            k,
            scheme,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.machines == 0 {
            return Err(Error::Config(
                "number of machines must be at least 1".into(),
            ));
        }
        if !(self.k > 0.0 && self.k <= n as f64) {
            return Err(Error::Config(format!(
                "expected local sample size must satisfy 0 < k <= n (k = {}, n = {n})",
                self.k
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct StepReport {
    pub merged: Vec<f64>,
    pub exact: Vec<f64>,
    pub err_euclidean: f64,
    /// Error in the Mahalanobis norm of the exact Hessian.
    pub err_hnorm: f64,
    pub log_weights: Vec<f64>,
}

/// One machine's estimate given a precomputed global gradient.
pub fn local_newton_estimate_with_gradient(
    obj: &Objective,
    w: &[f64],
    gradient: &[f64],
    mask: &SketchMask,
) -> Result<LocalEstimate> {
    let h = local_hessian(obj, w, mask)?;
    let chol = cholesky(&h)?;
    Ok(LocalEstimate::new(chol.solve(gradient)?, chol.log_det()))
}

/// `p̂ = Ĥ⁻¹ ∇L(w)` with log-weight `ln det Ĥ`.
pub fn local_newton_estimate(
    obj: &Objective,
    w: &[f64],
    mask: &SketchMask,
) -> Result<LocalEstimate> {
    local_newton_estimate_with_gradient(obj, w, &obj.gradient(w), mask)
}

/// Estimates from machines `0..machines` of one trial, in machine order.
fn machine_estimates(
    obj: &Objective,
    w: &[f64],
    gradient: &[f64],
    k: f64,
    machines: usize,
    seed: u64,
    trial: u64,
) -> Result<Vec<LocalEstimate>> {
    let n = obj.data().n();
    (0..machines as u64)
        .into_par_iter()
        .map(|machine| {
            let mask = draw_mask(n, k, SeedSpec::new(seed, trial, machine))?;
            local_newton_estimate_with_gradient(obj, w, gradient, &mask)
        })
        .collect()
}

/// Exact Hessian, exact step and the two step-error metrics.
struct StepReference {
    hessian: SymMatrix,
    exact: Vec<f64>,
}

impl StepReference {
    fn new(obj: &Objective, w: &[f64], gradient: &[f64]) -> Result<Self> {
        let hessian = obj.hessian(w);
        let exact = linalg::solve_psd(&hessian, gradient)?;
        Ok(Self { hessian, exact })
    }

    fn errors(&self, merged: &[f64]) -> Result<(f64, f64)> {
        let diff = sub(merged, &self.exact);
        Ok((norm2(&diff), mahalanobis_norm(&diff, &self.hessian)?))
    }
}

/// Draws `cfg.machines` masks for `trial`, merges the local steps and
/// reports the error against the exact Newton step.
pub fn merged_step(
    obj: &Objective,
    w: &[f64],
    cfg: &MachineConfig,
    seed: u64,
    trial: u64,
) -> Result<StepReport> {
    cfg.validate(obj.data().n())?;
    let gradient = obj.gradient(w);
    let reference = StepReference::new(obj, w, &gradient)?;
    let estimates = machine_estimates(obj, w, &gradient, cfg.k, cfg.machines, seed, trial)?;
    let merged = cfg.scheme.combine(&estimates)?;
    let (err_euclidean, err_hnorm) = reference.errors(&merged)?;
    Ok(StepReport {
        merged,
        exact: reference.exact,
        err_euclidean,
        err_hnorm,
        log_weights: estimates.iter().map(|e| e.log_weight).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub m: usize,
    pub k: f64,
    pub trial: u64,
    pub err_euclidean: f64,
    pub err_hnorm: f64,
}

pub(crate) fn validate_m_list(m_list: &[usize]) -> Result<()> {
    if m_list.is_empty() {
        return Err(Error::Config("machine list is empty".into()));
    }
    if m_list[0] == 0 {
        return Err(Error::Config("machine counts must be at least 1".into()));
    }
    if m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(
            "machine list must be strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Step error for every (scheme, m, trial).
///
/// Machine `t` of trial `r` always uses stream `(seed, r, t)`, so the run
/// for `m` machines sees the first `m` masks of the run for any larger `m`,
/// and every row equals what [`merged_step`] returns for the same inputs.
/// Rows come back ordered by scheme, then `m`, then trial.
pub fn error_sweep(
    obj: &Objective,
    w: &[f64],
    k: f64,
    m_list: &[usize],
    trials: usize,
    schemes: &[Scheme],
    seed: u64,
) -> Result<Vec<SweepRow>> {
    validate_m_list(m_list)?;
    let max_m = *m_list.last().expect("validated non-empty");
    MachineConfig::new(max_m, k, Scheme::Uniform).validate(obj.data().n())?;
    let gradient = obj.gradient(w);
    let reference = StepReference::new(obj, w, &gradient)?;

    let per_trial: Vec<Vec<SweepRow>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let estimates = machine_estimates(obj, w, &gradient, k, max_m, seed, trial)?;
            let mut rows = Vec::with_capacity(schemes.len() * m_list.len());
            for &scheme in schemes {
                for &m in m_list {
                    let merged = scheme.combine(&estimates[..m])?;
                    let (err_euclidean, err_hnorm) = reference.errors(&merged)?;
                    rows.push(SweepRow {
                        scheme,
                        m,
                        k,
                        trial,
                        err_euclidean,
                        err_hnorm,
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;

    let per_scheme = m_list.len();
    let mut rows = Vec::with_capacity(trials * schemes.len() * per_scheme);
    for s in 0..schemes.len() {
        for j in 0..per_scheme {
            for trial_rows in &per_trial {
                rows.push(trial_rows[s * per_scheme + j].clone());
            }
        }
    }
    Ok(rows)
}

/// `μ = (1/d) max_i ℓ''(wᵀx_i) x_iᵀ ∇²L(w)⁻¹ x_i`
pub fn coherence(obj: &Objective, w: &[f64]) -> Result<f64> {
    let curv = obj.curvatures(w);
    coherence_from_parts(obj.data().rows(), &curv, &obj.hessian(w))
}

/// Coherence for explicit rows, curvatures and Hessian.
pub fn coherence_from_parts<'a, I>(rows: I, curvatures: &[f64], hessian: &SymMatrix) -> Result<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let chol = cholesky(hessian)?;
    let d = hessian.dim() as f64;
    let mut best = 0.0f64;
    for (x, &c) in rows.into_iter().zip(curvatures) {
        let leverage = linalg::dot(x, &chol.solve(x)?);
        best = best.max(c * leverage);
    }
    Ok(best / d)
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    /// `w_0 … w_T`
    pub iterates: Vec<Vec<f64>>,
    pub dist_to_opt: Vec<f64>,
    pub loss: Vec<f64>,
    pub optimum: Vec<f64>,
}

impl Trajectory {
    fn from_iterates(obj: &Objective, iterates: Vec<Vec<f64>>, optimum: Vec<f64>) -> Self {
        let dist_to_opt = iterates.iter().map(|w| norm2(&sub(w, &optimum))).collect();
        let loss = iterates.iter().map(|w| obj.loss_value(w)).collect();
        Self {
            iterates,
            dist_to_opt,
            loss,
            optimum,
        }
    }

    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }
}

/// Minimizer of `obj` by exact Newton iterations, to `‖∇L‖ <= 1e-12`.
pub fn reference_minimizer(obj: &Objective, w0: &[f64]) -> Result<Vec<f64>> {
    let mut w = w0.to_vec();
    let mut grad_norm = norm2(&obj.gradient(&w));
    for _ in 0..REFERENCE_MAX_ITERS {
        if grad_norm <= REFERENCE_GRAD_TOL {
            return Ok(w);
        }
        let p = obj.exact_newton_step(&w)?;
        w = sub(&w, &p);
        grad_norm = norm2(&obj.gradient(&w));
    }
    if grad_norm <= REFERENCE_GRAD_TOL {
        return Ok(w);
    }
    Err(Error::ReferenceNotConverged {
        grad_norm,
        iters: REFERENCE_MAX_ITERS,
    })
}

/// `w_{t+1} = w_t − merged step`, iteration `t` drawing its masks from
/// trial index `t`.
pub fn run_distributed_newton(
    obj: &Objective,
    w0: &[f64],
    iters: usize,
    cfg: &MachineConfig,
    seed: u64,
) -> Result<Trajectory> {
    if iters == 0 {
        return Err(Error::Config("iteration count must be at least 1".into()));
    }
    cfg.validate(obj.data().n())?;
    let optimum = reference_minimizer(obj, w0)?;
    let mut iterates = vec![w0.to_vec()];
    for t in 0..iters {
        let w = iterates.last().expect("non-empty");
        let gradient = obj.gradient(w);
        let estimates = machine_estimates(obj, w, &gradient, cfg.k, cfg.machines, seed, t as u64)?;
        let step = cfg.scheme.combine(&estimates)?;
        let next = sub(w, &step);
        iterates.push(next);
    }
    Ok(Trajectory::from_iterates(obj, iterates, optimum))
}

/// Exact Newton iterations, for comparison with the distributed runs.
pub fn run_exact_newton(obj: &Objective, w0: &[f64], iters: usize) -> Result<Trajectory> {
    if iters == 0 {
        return Err(Error::Config("iteration count must be at least 1".into()));
    }
    let optimum = reference_minimizer(obj, w0)?;
    let mut iterates = vec![w0.to_vec()];
    for _ in 0..iters {
        let w = iterates.last().expect("non-empty");
        let next = sub(w, &obj.exact_newton_step(w)?);
        iterates.push(next);
    }
    Ok(Trajectory::from_iterates(obj, iterates, optimum))
}
