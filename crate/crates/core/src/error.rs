use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1, got {0}")]
    InvalidDegree(u32),

    #[error("field order {p}^{k} exceeds the supported budget of {max}")]
    OrderTooLarge { p: u64, k: u32, max: u64 },

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("element code {code} is not in [0, {q})")]
    InvalidElement { code: u64, q: u64 },

    #[error("inversion of zero")]
    InverseOfZero,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("operands live over different fields")]
    FieldMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,

    #[error("{what} has {size} elements, over the cap of {cap}; raise --cap or use `mc`")]
    CapExceeded { what: String, size: String, cap: u64 },

    #[error("invalid group descriptor: {0}")]
    InvalidGroup(String),

    #[error("element is not fat")]
    NotFat,

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("factorization of {0} exceeded its budget")]
    FactorBudget(String),

    #[error("no usable algebra element found within {0} random words")]
    NortonBudget(usize),

    #[error("subspace is not invariant under the generators")]
    NotInvariant,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
