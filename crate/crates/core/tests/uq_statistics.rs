mod common;

use common::*;
use detavg::uq::{uq_sweep, Statistic, UqRow};

fn median_errors(rows: &[UqRow], m_list: &[usize]) -> Vec<f64> {
    m_list
        .iter()
        .map(|&m| {
            median(
                rows.iter()
                    .filter(|r| r.m == m)
                    .map(|r| r.abs_err)
                    .collect(),
            )
        })
        .collect()
}

#[test]
fn trace_error_halves_from_64_to_1024() {
    let data = reference_data();
    let m_list = [64, 1024];
    let rows = uq_sweep(&data, 200.0, 1.0, &m_list, 25, Statistic::Trace, 21).unwrap();
    let med = median_errors(&rows, &m_list);
    assert!(med[1] <= 0.5 * med[0], "{med:?}");
}

/// `|F̂_m − tr Σ⁻¹| / tr Σ⁻¹ ≈ c·η/√m` with one constant `c` for the whole sweep.
#[test]
fn relative_error_follows_eta_over_sqrt_m() {
    let data = reference_data();
    for eta in [0.5, 1.0, 2.0] {
        let rows = uq_sweep(&data, 200.0, eta, &UQ_M, 25, Statistic::Trace, 22).unwrap();
        let exact = rows[0].exact;
        let c: Vec<f64> = median_errors(&rows, &UQ_M)
            .iter()
            .zip(UQ_M)
            .map(|(err, m)| err / exact * (m as f64).sqrt() / eta)
            .collect();
        let hi = c.iter().copied().fold(f64::MIN, f64::max);
        let lo = c.iter().copied().fold(f64::MAX, f64::min);
        assert!(hi <= 3.0 * lo, "eta {eta}: constants {c:?}");
    }
}

#[test]
fn diagonal_statistic_also_improves() {
    let data = reference_data();
    let m_list = [16, 1024];
    let rows = uq_sweep(&data, 200.0, 1.0, &m_list, 25, Statistic::Diagonal, 23).unwrap();
    let med = median_errors(&rows, &m_list);
    assert!(med[1] <= 0.5 * med[0], "{med:?}");
}
