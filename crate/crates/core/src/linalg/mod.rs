//! Exact scalar and dense-matrix arithmetic over GF(p) and the rationals.

mod elim;
pub mod field;
mod fitting;
pub mod json;
mod kron;
mod mat;
mod scalar;

pub use field::{is_prime, Field, FieldDesc, PrimeField, Rationals};
pub use fitting::{fitting_decompose, FittingDecomposition};
pub use kron::perfect_shuffle;
pub use mat::Mat;
pub use scalar::{ArithOp, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldDesc, FieldDesc),
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}
