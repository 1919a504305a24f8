#![allow(dead_code)]

use detavg::dataio::{synth_classification, synth_regression};
use detavg::objective::{Dataset, LossKind, Objective};

/// Machine counts 8, 16, …, 1024.
pub const NEWTON_M: [usize; 8] = [8, 16, 32, 64, 128, 256, 512, 1024];
/// Machine counts 16, 32, …, 1024.
pub const UQ_M: [usize; 7] = [16, 32, 64, 128, 256, 512, 1024];

/// n = 2000, d = 10 Gaussian regression data.
pub fn reference_data() -> Dataset {
    synth_regression(2000, 10, 1.0, 0).unwrap()
}

/// Square loss on [`reference_data`] with λ = 1/n.
pub fn reference_instance() -> Objective {
    Objective::with_default_lambda(reference_data(), LossKind::Square)
}

/// Logistic loss, n = 2000, d = 10, λ = 1/n.
pub fn logistic_instance() -> Objective {
    let data = synth_classification(2000, 10, 1.0, 0).unwrap();
    Objective::with_default_lambda(data, LossKind::Logistic)
}

/// n = 4, d = 2 square-loss problem, λ = 0.1.
pub fn tiny_square() -> Objective {
    let data = Dataset::from_rows(
        &[
            vec![1.0, 0.5],
            vec![-0.3, 1.2],
            vec![0.8, -1.0],
            vec![1.5, 0.7],
        ],
        vec![1.0, -0.5, 2.0, 0.3],
    )
    .unwrap();
    Objective::new(data, LossKind::Square, 0.1).unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    assert!(!v.is_empty());
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
