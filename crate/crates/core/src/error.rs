use crate::averaging::AveragingError;
use crate::dataio::ParseError;
use crate::linalg::LinalgError;
use crate::objective::DataError;
use crate::oracle::OracleError;
use crate::sketch::SketchError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Averaging(#[from] AveragingError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("sample covariance is singular; the exact precision matrix does not exist")]
    SingularCovariance,
    #[error("reference minimizer did not converge (gradient norm {grad_norm:e} after {iters} Newton steps)")]
    ReferenceNotConverged { grad_norm: f64, iters: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by the numbers rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Linalg(_)
                | Error::Averaging(_)
                | Error::SingularCovariance
                | Error::ReferenceNotConverged { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
