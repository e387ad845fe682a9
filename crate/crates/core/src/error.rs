use thiserror::Error;

/// Errors surfaced by construction and verification routines.
#[derive(Debug, Error)]
pub enum JordanError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("element is not hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("element lies outside the algebra (residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },

    #[error("{0}")]
    NotAJordanSubalgebra(String),

    #[error("the exceptional Jordan algebra has no faithful associative embedding; \
             its universal envelope is trivial, so it admits no composites and is not constructible here")]
    ExceptionalNotRepresentable,

    #[error("no anti-automorphism with the required fixed set exists: {0}")]
    NoAntiAutomorphism(String),

    #[error("anti-automorphism is not unique: fixed set does not generate the ambient algebra")]
    AmbiguousAntiAutomorphism,

    #[error("conditional expectation failed: {0}")]
    ConditionalExpectation(String),

    #[error("parse error in algebra spec '{spec}': {msg}")]
    Parse { spec: String, msg: String },

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, JordanError>;
