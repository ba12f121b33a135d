use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate geometry: outer radius {outer} m must exceed inner radius {inner} m")]
    DegenerateGeometry { inner: f64, outer: f64 },

    #[error("affine heat transfer requested but alpha_mw0/alpha_mw1 are not set")]
    MissingAffineCoefficients,

    #[error("invalid signal `{name}`: {reason}")]
    InvalidSignal { name: String, reason: String },

    #[error("non-positive velocity {value} m/s at t = {t} s")]
    NonPositiveVelocity { t: f64, value: f64 },

    #[error("CFL condition violated: max(v)*dt/dz = {ratio:.4} > 1")]
    Cfl { ratio: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("model `{model}` cannot run this case: {reason}")]
    Unsupported { model: String, reason: String },

    #[error("series have no overlapping time support")]
    EmptyOverlap,

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("optimizer did not converge after {iterations} iterations (best loss {best_loss:.6e} at {best:?})")]
    NotConverged {
        iterations: usize,
        best_loss: f64,
        best: Vec<f64>,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
