use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed field spec `{0}`")]
    BadFieldSpec(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is reducible over GF({1})")]
    ReducibleModulus(String, u32),
    #[error("unsupported field size p={p}, k={k} (q must be at most 128)")]
    UnsupportedSize { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("operation requires a finite field")]
    InfiniteField,
    #[error("element code {0} out of range for the field")]
    BadElement(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("zero matrix has no standard form")]
    ZeroMatrix,
    #[error("matrix size n={0} unsupported (n must be 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("tuple length m must be at least 1")]
    EmptyTuple,
    #[error("m={m} exceeds the representative generation cap of {cap}")]
    TooManyMatrices { m: usize, cap: usize },
    #[error("invariant index {index} out of range for m={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("work estimate {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("inexact division while evaluating {0}")]
    InexactDivision(String),
    #[error("gamma mismatch at q={q}, m={m}: case formula {formula}, log bound {log}")]
    GammaMismatch { q: u64, m: u32, formula: u32, log: u32 },
    #[error("alpha matrix has duplicate columns {0} and {1}")]
    DuplicateColumns(usize, usize),
    #[error("alpha matrix shape {rows}x{cols} does not fit {kappa} orbits")]
    AlphaShape { rows: usize, cols: usize, kappa: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
