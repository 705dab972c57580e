//! Crate error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// `|x|^ℓ` is not locally integrable for `ℓ ≤ -n`.
    #[error("non-integrable weight: ell = {ell} requires ell > -{n}")]
    NonIntegrableWeight { ell: f64, n: u32 },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    /// The boundary passes through the origin, which the theory forbids.
    #[error("origin lies on the boundary (distance {dist:.3e} < tolerance {tol:.3e})")]
    OriginOnBoundary { dist: f64, tol: f64 },

    #[error("boundary is not rectifiable as closed curve")]
    OpenBoundary,

    #[error("empty domain: weighted measure must be positive, got {0}")]
    EmptyDomain(f64),

    /// One of (H1)-(H4) or condition (9) does not hold for the given data.
    #[error("hypothesis {name} violated: {detail}")]
    HypothesisViolated { name: &'static str, detail: String },

    #[error("solver did not converge: residual {residual:.3e} after {iterations} iterations")]
    SolverDiverged { residual: f64, iterations: usize },

    #[error("eigenvalue bracket failure: {0}")]
    EigenBracket(String),

    #[error("not in Lorentz space: quasi-norm integral diverges")]
    NotInLorentzSpace,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config parse error at line {line}, field `{field}`: {message}")]
    ConfigParse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("unknown shape: {0}")]
    UnknownShape(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigParse { .. } | Error::UnknownShape(_) => 2,
            Error::HypothesisViolated { .. }
            | Error::NonIntegrableWeight { .. }
            | Error::OriginOnBoundary { .. } => 3,
            Error::SolverDiverged { .. } | Error::EigenBracket(_) => 4,
            _ => 1,
        }
    }
}
