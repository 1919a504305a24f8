//! Loading and generating datasets: a libsvm text parser and writer,
//! degree-2 feature expansion, column standardization, and seeded synthetic
//! regression/classification instances.

use crate::objective::{DataError, Dataset};
use crate::sketch::splitmix64;
use crate::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: invalid number {token:?}")]
    InvalidNumber { line: usize, token: String },
    #[error("line {line}: malformed feature {token:?} (expected index:value)")]
    MalformedPair { line: usize, token: String },
    #[error("line {line}: feature index {token:?} must be an integer >= 1")]
    InvalidIndex { line: usize, token: String },
    #[error("line {line}: feature index {got} does not increase (previous {prev})")]
    NonIncreasingIndex {
        line: usize,
        prev: usize,
        got: usize,
    },
    #[error("line {line}: non-finite value {token:?}")]
    NonFinite { line: usize, token: String },
    #[error("input contains no examples")]
    EmptyDataset,
    #[error("input has examples but no features")]
    NoFeatures,
    #[error("read failed: {0}")]
    Io(#[from] io::Error),
}

/// One parsed line: the label and its nonzero features, 1-based indices in
/// strictly increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    pub label: f64,
    pub pairs: Vec<(usize, f64)>,
}

fn parse_number(token: &str, line: usize) -> Result<f64, ParseError> {
    let v: f64 = token.parse().map_err(|_| ParseError::InvalidNumber {
        line,
        token: token.to_string(),
    })?;
    if !v.is_finite() {
        return Err(ParseError::NonFinite {
            line,
            token: token.to_string(),
        });
    }
    Ok(v)
}

/// Parses one line; `None` for blank and comment-only lines.
pub fn parse_line(text: &str, line: usize) -> Result<Option<SparseRow>, ParseError> {
    let content = text.split('#').next().unwrap_or("");
    let mut tokens = content.split_ascii_whitespace();
    let Some(label) = tokens.next() else {
        return Ok(None);
    };
    let label = parse_number(label, line)?;
    let mut pairs = Vec::new();
    let mut prev = 0usize;
    for token in tokens {
        let (idx, val) = token
            .split_once(':')
            .ok_or_else(|| ParseError::MalformedPair {
                line,
                token: token.to_string(),
            })?;
        let idx: usize = match idx.parse() {
            Ok(i) if i >= 1 => i,
            _ => {
                return Err(ParseError::InvalidIndex {
                    line,
                    token: idx.to_string(),
                })
            }
        };
        if idx <= prev {
            return Err(ParseError::NonIncreasingIndex {
                line,
                prev,
                got: idx,
            });
        }
        prev = idx;
        pairs.push((idx, parse_number(val, line)?));
    }
    Ok(Some(SparseRow { label, pairs }))
}

/// Reads libsvm-format text into a dense dataset whose width is the largest
/// feature index seen.
pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<Dataset, ParseError> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        if let Some(row) = parse_line(&line?, i + 1)? {
            rows.push(row);
        }
    }
    densify(&rows)
}

pub fn parse_libsvm_str(text: &str) -> Result<Dataset, ParseError> {
    parse_libsvm(text.as_bytes())
}

fn densify(rows: &[SparseRow]) -> Result<Dataset, ParseError> {
    if rows.is_empty() {
        return Err(ParseError::EmptyDataset);
    }
    let d = rows
        .iter()
        .filter_map(|r| r.pairs.last().map(|p| p.0))
        .max()
        .ok_or(ParseError::NoFeatures)?;
    let n = rows.len();
    let mut x = vec![0.0; n * d];
    for (i, r) in rows.iter().enumerate() {
        for &(j, v) in &r.pairs {
            x[i * d + j - 1] = v;
        }
    }
    let y = rows.iter().map(|r| r.label).collect();
    // values were checked finite during parsing
    Ok(Dataset::new(n, d, x, y).expect("parsed rows are consistent"))
}

/// Writes libsvm text. Zero entries are omitted except the last column,
/// which is always written so the width survives a round trip.
pub fn write_libsvm<W: Write>(data: &Dataset, mut out: W) -> io::Result<()> {
    let d = data.d();
    let mut line = String::new();
    for (row, label) in data.rows().zip(data.labels()) {
        line.clear();
        write!(line, "{label}").unwrap();
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 || j + 1 == d {
                write!(line, " {}:{}", j + 1, v).unwrap();
            }
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// A column of the expanded design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monomial {
    Linear(usize),
    /// `x_j x_l` with `j <= l`
    Product(usize, usize),
}

#[derive(Debug, Clone)]
pub struct Expansion {
    pub data: Dataset,
    /// Which monomial each kept column holds.
    pub columns: Vec<Monomial>,
    pub removed: usize,
}

/// Replaces the features by `{x_j} ∪ {x_j x_l : j <= l}`, dropping columns
/// that are constant or exactly equal to an earlier kept column.
pub fn expand_degree2(data: &Dataset) -> Result<Expansion, DataError> {
    let d = data.d();
    let mut candidates: Vec<Monomial> = (0..d).map(Monomial::Linear).collect();
    for j in 0..d {
        for l in j..d {
            candidates.push(Monomial::Product(j, l));
        }
    }
    let eval = |m: Monomial, row: &[f64]| match m {
        Monomial::Linear(j) => row[j],
        Monomial::Product(j, l) => row[j] * row[l],
    };
    let mut kept_cols: Vec<Vec<f64>> = Vec::new();
    let mut columns = Vec::new();
    for &m in &candidates {
        let col: Vec<f64> = data.rows().map(|r| eval(m, r)).collect();
        let constant = col.iter().all(|&v| v == col[0]);
        if constant || kept_cols.contains(&col) {
            continue;
        }
        kept_cols.push(col);
        columns.push(m);
    }
    let removed = candidates.len() - columns.len();
    let (n, width) = (data.n(), columns.len());
    let mut x = vec![0.0; n * width];
    for (c, col) in kept_cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            x[i * width + c] = *v;
        }
    }
    let data = Dataset::new(n, width, x, data.labels().to_vec())?;
    Ok(Expansion {
        data,
        columns,
        removed,
    })
}

/// Centers every column and scales it to unit (population) variance.
/// Constant columns become zero.
pub fn standardize(data: &Dataset) -> Dataset {
    let (n, d) = (data.n(), data.d());
    let mut x = data.features().to_vec();
    for j in 0..d {
        let col = data.column(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        let constant = col.iter().all(|&v| v == col[0]);
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let scale = if constant { 0.0 } else { 1.0 / var.sqrt() };
        for (i, v) in col.iter().enumerate() {
            x[i * d + j] = (v - mean) * scale;
        }
    }
    Dataset::new(n, d, x, data.labels().to_vec()).expect("standardized values are finite")
}

/// The fixed coefficient vector behind the synthetic generators:
/// alternating signs with norm 2.
pub fn planted_weights(d: usize) -> Vec<f64> {
    let scale = 2.0 / (d as f64).sqrt();
    (0..d)
        .map(|j| if j % 2 == 0 { scale } else { -scale })
        .collect()
}

fn synth_design(
    n: usize,
    d: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    if n == 0 || d == 0 {
        return Err(DataError::Empty { n, d }.into());
    }
    if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
        return Err(Error::Config(format!(
            "noise level must be finite and non-negative, got {noise_sd}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0xda7a));
    let x: Vec<f64> = (0..n * d)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let w = planted_weights(d);
    let scores = x
        .chunks_exact(d)
        .map(|row| {
            let eps: f64 = StandardNormal.sample(&mut rng);
            crate::linalg::dot(row, &w) + noise_sd * eps
        })
        .collect();
    Ok((x, scores))
}

/// Standard Gaussian rows with `y = x·w† + noise_sd·ε`.
pub fn synth_regression(n: usize, d: usize, noise_sd: f64, seed: u64) -> Result<Dataset, Error> {
    let (x, y) = synth_design(n, d, noise_sd, seed)?;
    Ok(Dataset::new(n, d, x, y)?)
}

/// Standard Gaussian rows with labels `1[x·w† + noise_sd·ε > 0]` in {0, 1}.
pub fn synth_classification(
    n: usize,
    d: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<Dataset, Error> {
    let (x, scores) = synth_design(n, d, noise_sd, seed)?;
    let y = scores
        .iter()
        .map(|&s| f64::from(u8::from(s > 0.0)))
        .collect();
    Ok(Dataset::new(n, d, x, y)?)
}
