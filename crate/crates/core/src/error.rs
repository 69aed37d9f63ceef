use thiserror::Error;

use crate::scalar::Backend;

/// Errors raised anywhere in the kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("backend mismatch: {left} vs {right}")]
    BackendMismatch { left: Backend, right: Backend },

    #[error("division by a series that is zero to its truncation order")]
    DivisionByZero,

    #[error("empty truncation window: no coefficient survives alignment")]
    EmptyWindow,

    #[error("leading coefficient not an exact {n}-th power")]
    NotExactRoot { n: u64 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error(
        "insufficient precision: requested O(q^{requested}) but only O(q^{available}) is known"
    )]
    InsufficientPrecision {
        requested: String,
        available: String,
    },

    #[error("complex backend comparison requires a tolerance")]
    MissingTolerance,

    #[error("unknown form name `{0}`")]
    UnknownForm(String),

    #[error("h locally constant at truncation: D h vanishes to working order")]
    LocallyConstant,

    #[error("not a holomorphic weight-4 candidate: lead exponent {0} < 0")]
    NotHolomorphic(String),

    #[error("F vanishes at the cusp: no admissible indicial exponent")]
    VanishesAtCusp,

    #[error(
        "constant term {0} is not the square of a rational: the indicial exponent is irrational"
    )]
    NonSquareIndicial(String),

    #[error("enumeration exceeded max_cosets = {max}")]
    EnumerationExceeded { max: usize },

    #[error("no torsion-free kernel: {0}")]
    NoTorsionFreeKernel(String),

    #[error("inconsistent ramification data: degree {0} is not an integer")]
    InconsistentRamification(String),

    #[error("insufficient precision budget: order {order} exceeds limit {limit}")]
    BudgetExceeded { order: i64, limit: i64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
