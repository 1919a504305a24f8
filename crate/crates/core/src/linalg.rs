//! Dense symmetric linear algebra.
//!
//! Everything here works on small dense matrices (d up to a few hundred).
//! Positive-definite work goes through a Cholesky factor; the adjugate and
//! small determinants are also available by exact cofactor expansion so that
//! singular matrices (which show up in the enumeration oracle) are handled.

#![allow(clippy::needless_range_loop)]

use thiserror::Error;

/// Largest dimension for which the adjugate is formed by cofactor expansion.
pub const COFACTOR_MAX_DIM: usize = 5;

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("quadratic form is negative ({0:e}); matrix is indefinite")]
    NegativeQuadraticForm(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric: |M[{i}][{j}] - M[{j}][{i}]| = {gap:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },
    #[error("cofactor expansion limited to d <= {max}, got d = {d}")]
    TooLargeForCofactor { d: usize, max: usize },
    #[error("matrix dimension must be positive")]
    EmptyMatrix,
}

/// Symmetric d×d matrix, stored densely in row-major order.
///
/// Every mutating method writes (i,j) and (j,i) together, so the stored
/// matrix is exactly symmetric at all times.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, 1.0)
    }

    pub fn scaled_identity(dim: usize, scale: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = scale;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = v;
        }
        m
    }

    /// Builds from rows, checking symmetry to a relative tolerance and then
    /// symmetrizing exactly.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    pub fn from_row_major(dim: usize, mut data: Vec<f64>) -> Result<Self, LinalgError> {
        if dim == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let a = data[i * dim + j];
                let b = data[j * dim + i];
                let gap = (a - b).abs();
                if gap > SYMMETRY_TOL * a.abs().max(b.abs()).max(1.0) {
                    return Err(LinalgError::NotSymmetric { i, j, gap });
                }
                let avg = 0.5 * (a + b);
                data[i * dim + j] = avg;
                data[j * dim + i] = avg;
            }
        }
        Ok(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets (i,j) and (j,i).
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
        self.data[j * self.dim + i] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `self += scale * v vᵀ`
    pub fn add_outer(&mut self, v: &[f64], scale: f64) {
        debug_assert_eq!(v.len(), self.dim);
        let d = self.dim;
        for i in 0..d {
            let si = scale * v[i];
            if si == 0.0 {
                continue;
            }
            for j in i..d {
                self.data[i * d + j] += si * v[j];
            }
        }
        self.mirror_upper();
    }

    /// Accumulates `Σ scale_r v_r v_rᵀ` over an iterator, touching only the
    /// upper triangle until the end.
    pub fn add_outer_many<'a, I>(&mut self, terms: I)
    where
        I: IntoIterator<Item = (&'a [f64], f64)>,
    {
        let d = self.dim;
        for (v, scale) in terms {
            for i in 0..d {
                let si = scale * v[i];
                if si == 0.0 {
                    continue;
                }
                let row = &mut self.data[i * d..(i + 1) * d];
                for j in i..d {
                    row[j] += si * v[j];
                }
            }
        }
        self.mirror_upper();
    }

    fn mirror_upper(&mut self) {
        let d = self.dim;
        for i in 0..d {
            for j in (i + 1)..d {
                self.data[j * d + i] = self.data[i * d + j];
            }
        }
    }

    pub fn add_diagonal(&mut self, shift: f64) {
        for i in 0..self.dim {
            self.data[i * self.dim + i] += shift;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|x| *x *= factor);
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &SymMatrix, scale: f64) {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a += scale * b);
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| dot(row, v))
            .collect()
    }

    /// `vᵀ M v`
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.matvec(v))
    }

    /// Plain (not necessarily symmetric) product `self · other`, row-major.
    pub fn matmul(&self, other: &SymMatrix) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for l in 0..d {
                let a = self.get(i, l);
                for j in 0..d {
                    out[i * d + j] += a * other.get(l, j);
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = M`.
#[derive(Debug, Clone)]
pub struct CholFactor {
    dim: usize,
    lower: Vec<f64>,
}

impl CholFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.dim + j]
    }

    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.dim).map(|i| self.get(i, i).ln()).sum::<f64>()
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if rhs.len() != self.dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim,
                got: rhs.len(),
            });
        }
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let d = self.dim;
        // L y = b
        for i in 0..d {
            let row = &self.lower[i * d..i * d + i];
            let s = x[i] - dot(row, &x[..i]);
            x[i] = s / self.get(i, i);
        }
        // Lᵀ x = y
        for i in (0..d).rev() {
            let mut s = x[i];
            for j in (i + 1)..d {
                s -= self.get(j, i) * x[j];
            }
            x[i] = s / self.get(i, i);
        }
    }

    /// Full inverse `M⁻¹`, one solve per basis vector.
    pub fn inverse(&self) -> SymMatrix {
        let d = self.dim;
        let mut data = vec![0.0; d * d];
        let mut col = vec![0.0; d];
        for j in 0..d {
            col.iter_mut().for_each(|x| *x = 0.0);
            col[j] = 1.0;
            self.solve_in_place(&mut col);
            for i in 0..d {
                data[i * d + j] = col[i];
            }
        }
        let mut inv = SymMatrix { dim: d, data };
        // solves agree only to rounding; average the two triangles
        for i in 0..d {
            for j in (i + 1)..d {
                let avg = 0.5 * (inv.get(i, j) + inv.get(j, i));
                inv.set(i, j, avg);
            }
        }
        inv
    }

    /// Diagonal of `M⁻¹` without forming the whole inverse.
    pub fn inverse_diagonal(&self) -> Vec<f64> {
        // diag(M⁻¹)_j = ‖L⁻¹ e_j‖²
        let d = self.dim;
        let mut out = vec![0.0; d];
        let mut y = vec![0.0; d];
        for (j, slot) in out.iter_mut().enumerate() {
            y.iter_mut().for_each(|x| *x = 0.0);
            y[j] = 1.0 / self.get(j, j);
            for i in (j + 1)..d {
                let mut s = 0.0;
                for l in j..i {
                    s += self.get(i, l) * y[l];
                }
                y[i] = -s / self.get(i, i);
            }
            *slot = y[j..].iter().map(|v| v * v).sum();
        }
        out
    }

    pub fn reconstruct(&self) -> SymMatrix {
        let d = self.dim;
        let mut m = SymMatrix::zeros(d);
        for i in 0..d {
            for j in 0..=i {
                let s: f64 = (0..=j).map(|l| self.get(i, l) * self.get(j, l)).sum();
                m.set(i, j, s);
            }
        }
        m
    }
}

pub fn cholesky(m: &SymMatrix) -> Result<CholFactor, LinalgError> {
    let d = m.dim();
    let mut lower = vec![0.0; d * d];
    for j in 0..d {
        let row_j = &lower[j * d..j * d + j];
        let pivot = m.get(j, j) - dot(row_j, row_j);
        // pivots at rounding level of the diagonal mean a numerically singular matrix
        if pivot.is_nan() || pivot <= d as f64 * f64::EPSILON * m.get(j, j).abs() {
            return Err(LinalgError::NotPositiveDefinite {
                pivot: j,
                value: pivot,
            });
        }
        let ljj = pivot.sqrt();
        lower[j * d + j] = ljj;
        for i in (j + 1)..d {
            let (head, tail) = lower.split_at_mut(i * d);
            let s = m.get(i, j) - dot(&tail[..j], &head[j * d..j * d + j]);
            tail[j] = s / ljj;
        }
    }
    Ok(CholFactor { dim: d, lower })
}

/// `ln det M` for positive-definite `M`.
pub fn log_det_psd(m: &SymMatrix) -> Result<f64, LinalgError> {
    Ok(cholesky(m)?.log_det())
}

pub fn solve_psd(m: &SymMatrix, v: &[f64]) -> Result<Vec<f64>, LinalgError> {
    cholesky(m)?.solve(v)
}

/// `√(vᵀ M v)`. Small negative round-off is clamped to zero; anything
/// below `-1e-12` means `M` is indefinite.
pub fn mahalanobis_norm(v: &[f64], m: &SymMatrix) -> Result<f64, LinalgError> {
    if v.len() != m.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.dim(),
            got: v.len(),
        });
    }
    let q = m.quad_form(v);
    if q < -1e-12 {
        return Err(LinalgError::NegativeQuadraticForm(q));
    }
    Ok(q.max(0.0).sqrt())
}

/// Adjugate: entry (i,j) is `(-1)^{i+j} det(M without row j, column i)`.
///
/// For `d <= COFACTOR_MAX_DIM` this is the exact cofactor expansion and works
/// for singular input. Larger matrices must be positive definite and go
/// through `det(M) M⁻¹`.
pub fn adjugate(m: &SymMatrix) -> Result<SymMatrix, LinalgError> {
    if m.dim() <= COFACTOR_MAX_DIM {
        adjugate_cofactor(m)
    } else {
        adjugate_via_inverse(m)
    }
}

pub fn adjugate_cofactor(m: &SymMatrix) -> Result<SymMatrix, LinalgError> {
    let d = m.dim();
    if d > COFACTOR_MAX_DIM {
        return Err(LinalgError::TooLargeForCofactor {
            d,
            max: COFACTOR_MAX_DIM,
        });
    }
    if d == 1 {
        return Ok(SymMatrix::identity(1));
    }
    let mut out = SymMatrix::zeros(d);
    let mut minor = vec![0.0; (d - 1) * (d - 1)];
    for i in 0..d {
        for j in 0..=i {
            // minor of M without row j and column i
            let mut k = 0;
            for r in (0..d).filter(|&r| r != j) {
                for c in (0..d).filter(|&c| c != i) {
                    minor[k] = m.get(r, c);
                    k += 1;
                }
            }
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            out.set(i, j, sign * laplace_det(&minor, d - 1));
        }
    }
    Ok(out)
}

pub fn adjugate_via_inverse(m: &SymMatrix) -> Result<SymMatrix, LinalgError> {
    let chol = cholesky(m)?;
    let mut inv = chol.inverse();
    inv.scale(chol.log_det().exp());
    Ok(inv)
}

/// Exact determinant by Laplace expansion (`d <= COFACTOR_MAX_DIM`).
pub fn det_cofactor(m: &SymMatrix) -> Result<f64, LinalgError> {
    if m.dim() > COFACTOR_MAX_DIM {
        return Err(LinalgError::TooLargeForCofactor {
            d: m.dim(),
            max: COFACTOR_MAX_DIM,
        });
    }
    Ok(laplace_det(m.as_slice(), m.dim()))
}

/// Laplace expansion along the first row of a general square row-major
/// matrix.
fn laplace_det(a: &[f64], n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => {
            let mut sub = vec![0.0; (n - 1) * (n - 1)];
            let mut total = 0.0;
            for col in 0..n {
                let pivot = a[col];
                if pivot == 0.0 {
                    continue;
                }
                let mut k = 0;
                for r in 1..n {
                    for c in (0..n).filter(|&c| c != col) {
                        sub[k] = a[r * n + c];
                        k += 1;
                    }
                }
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * pivot * laplace_det(&sub, n - 1);
            }
            total
        }
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m2(a: f64, b: f64, d: f64) -> SymMatrix {
        SymMatrix::from_rows(&[vec![a, b], vec![b, d]]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn cholesky_examples() {
        let l = cholesky(&SymMatrix::identity(2)).unwrap();
        assert_eq!(l.reconstruct(), SymMatrix::identity(2));
        assert_eq!((l.get(0, 0), l.get(1, 0), l.get(1, 1)), (1.0, 0.0, 1.0));

        let l = cholesky(&m2(4.0, 0.0, 9.0)).unwrap();
        assert_eq!((l.get(0, 0), l.get(1, 0), l.get(1, 1)), (2.0, 0.0, 3.0));

        let m = m2(2.0, 1.0, 2.0);
        let l = cholesky(&m).unwrap();
        assert_eq!(l.get(0, 1), 0.0);
        assert!(l.reconstruct().max_abs_diff(&m) <= 1e-14);
    }

    #[test]
    fn cholesky_rejects_indefinite_and_singular() {
        assert!(matches!(
            cholesky(&m2(1.0, 2.0, 1.0)),
            Err(LinalgError::NotPositiveDefinite { pivot: 1, .. })
        ));
        assert!(cholesky(&m2(1.0, 1.0, 1.0)).is_err());
        assert!(cholesky(&SymMatrix::zeros(3)).is_err());
        assert!(log_det_psd(&m2(-1.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn from_rows_validation() {
        assert!(matches!(
            SymMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]),
            Err(LinalgError::NotSymmetric { .. })
        ));
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
        assert!(SymMatrix::from_rows(&[]).is_err());
    }

    #[test]
    fn log_det_examples() {
        assert_eq!(log_det_psd(&SymMatrix::identity(4)).unwrap(), 0.0);
        assert!(close(
            log_det_psd(&m2(2.0, 0.0, 8.0)).unwrap(),
            16f64.ln(),
            1e-14
        ));
        assert!(close(
            log_det_psd(&m2(2.0, 1.0, 2.0)).unwrap(),
            3f64.ln(),
            1e-14
        ));
    }

    #[test]
    fn adjugate_examples() {
        for d in 1..=7 {
            let a = adjugate(&SymMatrix::identity(d)).unwrap();
            assert!(a.max_abs_diff(&SymMatrix::identity(d)) <= 1e-14, "d={d}");
        }
        assert_eq!(adjugate(&m2(2.0, 1.0, 2.0)).unwrap(), m2(2.0, -1.0, 2.0));
        assert_eq!(adjugate(&m2(1.0, 1.0, 1.0)).unwrap(), m2(1.0, -1.0, 1.0));
        assert_eq!(adjugate(&m2(5.0, -3.0, 7.0)).unwrap(), m2(7.0, 3.0, 5.0));
    }

    #[test]
    fn adjugate_large_path_requires_pd() {
        let mut m = SymMatrix::identity(6);
        m.set(5, 5, 0.0);
        assert!(matches!(
            adjugate(&m),
            Err(LinalgError::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            adjugate_cofactor(&m),
            Err(LinalgError::TooLargeForCofactor { d: 6, .. })
        ));
    }

    #[test]
    fn solve_examples() {
        let v = vec![0.3, -1.2, 4.0];
        assert_eq!(solve_psd(&SymMatrix::identity(3), &v).unwrap(), v);
        let x = solve_psd(&m2(2.0, 0.0, 4.0), &[2.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() <= 1e-15 && (x[1] - 1.0).abs() <= 1e-15);
        let x = solve_psd(&m2(2.0, 1.0, 2.0), &[1.0, 0.0]).unwrap();
        assert!(close(x[0], 2.0 / 3.0, 1e-14) && close(x[1], -1.0 / 3.0, 1e-14));
        assert!(matches!(
            solve_psd(&SymMatrix::identity(3), &[1.0]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mahalanobis_examples() {
        assert_eq!(
            mahalanobis_norm(&[1.0, 0.0], &SymMatrix::identity(2)).unwrap(),
            1.0
        );
        assert_eq!(
            mahalanobis_norm(&[0.0, 0.0], &m2(2.0, 1.0, 2.0)).unwrap(),
            0.0
        );
        assert!(close(
            mahalanobis_norm(&[1.0, 1.0], &m2(2.0, 1.0, 2.0)).unwrap(),
            6f64.sqrt(),
            1e-14
        ));
        assert!(matches!(
            mahalanobis_norm(&[1.0, -1.0], &m2(1.0, 2.0, 1.0)),
            Err(LinalgError::NegativeQuadraticForm(_))
        ));
        // round-off below the threshold clamps to zero
        assert_eq!(
            mahalanobis_norm(&[1.0], &SymMatrix::from_diagonal(&[-1e-13])).unwrap(),
            0.0
        );
    }

    #[test]
    fn inverse_diagonal_matches_inverse() {
        let m = SymMatrix::from_rows(&[
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, -0.2],
            vec![0.5, -0.2, 2.0],
        ])
        .unwrap();
        let c = cholesky(&m).unwrap();
        let full = c.inverse().diagonal();
        for (a, b) in c.inverse_diagonal().iter().zip(&full) {
            assert!(close(*a, *b, 1e-13));
        }
    }

    fn sym_strategy(max_d: usize) -> impl Strategy<Value = SymMatrix> {
        (1..=max_d).prop_flat_map(|d| {
            proptest::collection::vec(-2.0f64..2.0, d * d).prop_map(move |raw| {
                let mut m = SymMatrix::zeros(d);
                for i in 0..d {
                    for j in 0..=i {
                        m.set(i, j, raw[i * d + j]);
                    }
                }
                m
            })
        })
    }

    fn pd_strategy(max_d: usize) -> impl Strategy<Value = SymMatrix> {
        (1..=max_d).prop_flat_map(|d| {
            proptest::collection::vec(-1.0f64..1.0, d * (d + 2)).prop_map(move |raw| {
                let mut m = SymMatrix::scaled_identity(d, 0.1);
                for row in raw.chunks(d) {
                    m.add_outer(row, 1.0);
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn adjugate_identity_holds(m in sym_strategy(5)) {
            let d = m.dim();
            let adj = adjugate(&m).unwrap();
            let det = det_cofactor(&m).unwrap();
            let prod = adj.matmul(&m);
            let tol = 1e-9 * det.abs().max(1.0);
            for i in 0..d {
                for j in 0..d {
                    let expect = if i == j { det } else { 0.0 };
                    prop_assert!((prod[i * d + j] - expect).abs() <= tol);
                }
            }
        }

        #[test]
        fn adjugate_paths_agree(m in pd_strategy(5)) {
            let a = adjugate_cofactor(&m).unwrap();
            let b = adjugate_via_inverse(&m).unwrap();
            let scale = a.max_abs();
            prop_assert!(a.max_abs_diff(&b) <= 1e-8 * scale);
        }

        #[test]
        fn log_det_matches_cofactor(m in pd_strategy(4)) {
            let exact = det_cofactor(&m).unwrap();
            let via_chol = log_det_psd(&m).unwrap().exp();
            prop_assert!((via_chol - exact).abs() <= 1e-10 * exact.abs());
        }

        #[test]
        fn solve_residual_small(m in pd_strategy(8), seed in proptest::collection::vec(-3.0f64..3.0, 8)) {
            let v = &seed[..m.dim()];
            prop_assume!(norm2(v) > 1e-6);
            let x = solve_psd(&m, v).unwrap();
            let r = sub(&m.matvec(&x), v);
            prop_assert!(norm2(&r) <= 1e-8 * norm2(v));
        }

        #[test]
        fn cholesky_reconstructs(m in pd_strategy(8)) {
            let l = cholesky(&m).unwrap();
            prop_assert!(l.reconstruct().max_abs_diff(&m) <= 1e-10 * m.max_abs());
        }
    }
}
