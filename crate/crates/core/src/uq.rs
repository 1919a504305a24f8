//! Distributed estimation of `tr(Σ⁻¹)` and `diag(Σ⁻¹)` for the sample
//! second-moment matrix `Σ = (1/n) XᵀX`.
//!
//! Machine `t` holds `Σ̂_t = (1/k) Σ b_i x_i x_iᵀ`, which is often singular,
//! so it inverts `Σ̂_t + (η/√m) I` instead. The ridge vanishes as `m` grows,
//! and determinantal weights `det(Σ̂_t + (η/√m) I)` make the combined
//! estimate consistent for the ridge-free quantity.

use crate::averaging::{combine_determinantal, LocalEstimate};
use crate::linalg::{cholesky, norm2, sub, SymMatrix};
use crate::newton::validate_m_list;
use crate::objective::Dataset;
use crate::sketch::{draw_mask, local_covariance, SeedSpec, SketchMask};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Trace,
    Diagonal,
}

impl Statistic {
    pub fn as_str(self) -> &'static str {
        match self {
            Statistic::Trace => "trace",
            Statistic::Diagonal => "diagonal",
        }
    }

    fn reduce_diagonal(self, diag: Vec<f64>) -> Vec<f64> {
        match self {
            Statistic::Trace => vec![diag.iter().sum()],
            Statistic::Diagonal => diag,
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace" => Ok(Statistic::Trace),
            "diagonal" => Ok(Statistic::Diagonal),
            other => Err(Error::Config(format!("unknown statistic '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UqConfig {
    pub machines: usize,
    pub k: f64,
    pub eta: f64,
    pub statistic: Statistic,
}

impl UqConfig {
    pub fn new(machines: usize, k: f64, eta: f64, statistic: Statistic) -> Self {
        Self {
            machines,
            k,
            eta,
            statistic,
        }
    }

    pub fn ridge(&self) -> f64 {
        ridge(self.eta, self.machines)
    }
}

/// Ridge added by every machine when `m` machines take part: `η/√m`.
pub fn ridge(eta: f64, machines: usize) -> f64 {
    eta / (machines as f64).sqrt()
}

fn validate(eta: f64, machines: usize) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::Config(format!("eta must be positive, got {eta}")));
    }
    if machines == 0 {
        return Err(Error::Config(
            "number of machines must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `F((Σ̂ + rI)⁻¹)` for a given local covariance and ridge, with log-weight
/// `ln det(Σ̂ + rI)`.
fn ridged_estimate(cov: &SymMatrix, ridge: f64, statistic: Statistic) -> Result<LocalEstimate> {
    let mut a = cov.clone();
    a.add_diagonal(ridge);
    let chol = cholesky(&a)?;
    Ok(LocalEstimate::new(
        statistic.reduce_diagonal(chol.inverse_diagonal()),
        chol.log_det(),
    ))
}

pub fn local_uq_estimate(
    data: &Dataset,
    mask: &SketchMask,
    eta: f64,
    machines: usize,
    statistic: Statistic,
) -> Result<LocalEstimate> {
    validate(eta, machines)?;
    let cov = local_covariance(data, mask)?;
    ridged_estimate(&cov, ridge(eta, machines), statistic)
}

/// `F(Σ⁻¹)` for the full, unridged sample covariance.
pub fn exact_precision_statistic(data: &Dataset, statistic: Statistic) -> Result<Vec<f64>> {
    let chol = cholesky(&data.covariance()).map_err(|_| Error::SingularCovariance)?;
    Ok(statistic.reduce_diagonal(chol.inverse_diagonal()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionEstimate {
    pub estimate: Vec<f64>,
    pub exact: Vec<f64>,
    /// `|F̂ − F|` for the trace, Euclidean norm of the difference for the
    /// diagonal.
    pub abs_err: f64,
}

impl PrecisionEstimate {
    fn new(estimate: Vec<f64>, exact: Vec<f64>) -> Self {
        let abs_err = norm2(&sub(&estimate, &exact));
        Self {
            estimate,
            exact,
            abs_err,
        }
    }
}

fn local_covariances(
    data: &Dataset,
    k: f64,
    machines: usize,
    seed: u64,
    trial: u64,
) -> Result<Vec<SymMatrix>> {
    (0..machines as u64)
        .into_par_iter()
        .map(|machine| {
            let mask = draw_mask(data.n(), k, SeedSpec::new(seed, trial, machine))?;
            Ok(local_covariance(data, &mask)?)
        })
        .collect()
}

fn combine_ridged(covs: &[SymMatrix], ridge: f64, statistic: Statistic) -> Result<Vec<f64>> {
    let estimates = covs
        .iter()
        .map(|c| ridged_estimate(c, ridge, statistic))
        .collect::<Result<Vec<_>>>()?;
    Ok(combine_determinantal(&estimates)?)
}

/// Determinantal estimate of `F(Σ⁻¹)` from `cfg.machines` machines of
/// `trial`, alongside the exact value.
pub fn estimate_precision_statistic(
    data: &Dataset,
    cfg: &UqConfig,
    seed: u64,
    trial: u64,
) -> Result<PrecisionEstimate> {
    validate(cfg.eta, cfg.machines)?;
    let exact = exact_precision_statistic(data, cfg.statistic)?;
    let covs = local_covariances(data, cfg.k, cfg.machines, seed, trial)?;
    let estimate = combine_ridged(&covs, cfg.ridge(), cfg.statistic)?;
    Ok(PrecisionEstimate::new(estimate, exact))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UqRow {
    pub statistic: Statistic,
    pub m: usize,
    pub k: f64,
    pub eta: f64,
    pub trial: u64,
    /// The trace, or the Euclidean norm of the estimated diagonal.
    pub estimate: f64,
    pub exact: f64,
    pub abs_err: f64,
}

/// The scalar itself, or the Euclidean norm of a vector statistic.
fn summary(v: &[f64]) -> f64 {
    match v {
        [x] => *x,
        _ => norm2(v),
    }
}

/// One row per (m, trial), ordered by `m` then trial. Masks are shared
/// across `m` the same way as in [`crate::newton::error_sweep`]; only the
/// ridge changes with `m`.
pub fn uq_sweep(
    data: &Dataset,
    k: f64,
    eta: f64,
    m_list: &[usize],
    trials: usize,
    statistic: Statistic,
    seed: u64,
) -> Result<Vec<UqRow>> {
    validate_m_list(m_list)?;
    let max_m = *m_list.last().expect("validated non-empty");
    validate(eta, max_m)?;
    if !(k > 0.0 && k <= data.n() as f64) {
        return Err(Error::Config(format!(
            "expected local sample size must satisfy 0 < k <= n (k = {k}, n = {})",
            data.n()
        )));
    }
    let exact = exact_precision_statistic(data, statistic)?;
    let exact_summary = summary(&exact);

    let per_trial: Vec<Vec<UqRow>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let covs = local_covariances(data, k, max_m, seed, trial)?;
            m_list
                .iter()
                .map(|&m| {
                    let est = combine_ridged(&covs[..m], ridge(eta, m), statistic)?;
                    let r = PrecisionEstimate::new(est, exact.clone());
                    Ok(UqRow {
                        statistic,
                        m,
                        k,
                        eta,
                        trial,
                        estimate: summary(&r.estimate),
                        exact: exact_summary,
                        abs_err: r.abs_err,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(trials * m_list.len());
    for j in 0..m_list.len() {
        for trial_rows in &per_trial {
            rows.push(trial_rows[j].clone());
        }
    }
    Ok(rows)
}
