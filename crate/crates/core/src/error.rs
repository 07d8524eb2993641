use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// failing routine was instantiated with.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Gamma function pole at z = {re}")]
    GammaPole { re: f64 },

    #[error("{method} did not converge within budget (achieved error estimate {achieved:e})")]
    NonConvergence { method: &'static str, achieved: f64 },

    #[error("grid does not resolve the problem: {0}")]
    Resolution(String),

    #[error("contour does not separate the pole families: {0}")]
    Contour(String),

    #[error("Mellin-Barnes integrand not decayed at the contour ends (tail estimate {tail:e})")]
    Truncation { tail: f64 },

    #[error("loss of precision: {0}")]
    Precision(String),

    #[error("negative undershoot {undershoot:e} of the solution exceeds the ringing floor; enlarge the grid extent or resolution")]
    Aliasing { undershoot: f64 },

    #[error("kernel singularity: {0}")]
    Singularity(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("inadmissible Harnack tuple: {0}")]
    Admissibility(String),

    #[error("ratio undefined: supremum and infimum are both zero")]
    UndefinedRatio,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
