use thiserror::Error;

use crate::extremal::Theorem3Report;

/// Errors raised by the arithmetic kernels, the set constructions and the
/// experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus in [5, 2^31)")]
    InvalidModulus(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("curve is singular (discriminant vanishes)")]
    SingularCurve,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("p = {p} exceeds the configured cap {cap}")]
    CapExceeded { p: u64, cap: u64 },
    #[error("N·P ≠ O for N = {0}; the group order is wrong")]
    OrderNotDividing(u64),
    #[error("point does not have exact order {0}")]
    OrderMismatch(u64),
    #[error("{a} is not a unit modulo {modulus}")]
    NotAUnit { a: u64, modulus: u64 },
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("k ≡ 0 (mod T) indexes the point at infinity, which has no x-coordinate")]
    IdentityHasNoX,
    #[error("domain error: {0}")]
    DomainError(&'static str),
    #[error("the trivial character is not allowed here")]
    TrivialCharacter,
    #[error("extremal construction is empty")]
    EmptyConstruction(Box<Theorem3Report<f64>>),
    #[error("requested {k} elements but only {available} units exist")]
    TooLarge { k: usize, available: usize },
    #[error("sets are defined modulo {left} and {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("no ordinary curve with a point of order ≥ 2 found for p = {0}")]
    NoCurveFound(u64),
    #[error("orbit cache: {0}")]
    Cache(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable identifier written into the error column of sweep output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::ZeroInverse => "ZeroInverse",
            Error::SingularCurve => "SingularCurve",
            Error::NotOnCurve => "NotOnCurve",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::OrderNotDividing(_) => "OrderNotDividing",
            Error::OrderMismatch(_) => "OrderMismatch",
            Error::NotAUnit { .. } => "NotAUnit",
            Error::ModulusTooSmall(_) => "ModulusTooSmall",
            Error::IdentityHasNoX => "IdentityHasNoX",
            Error::DomainError(_) => "DomainError",
            Error::TrivialCharacter => "TrivialCharacter",
            Error::EmptyConstruction(_) => "EmptyConstruction",
            Error::TooLarge { .. } => "TooLarge",
            Error::ModulusMismatch { .. } => "ModulusMismatch",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::NoCurveFound(_) => "NoCurveFound",
            Error::Cache(_) => "Cache",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
