use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("operands live in different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("characteristic {0} is not supported here")]
    UnsupportedCharacteristic(u32),
    #[error("{q} is not a power of the characteristic {p}")]
    NotCharacteristicPower { q: u64, p: u32 },
    #[error("F_{{p^{from}}} does not embed into F_{{p^{to}}}")]
    NotSubfield { from: usize, to: usize },
    #[error("{what}: size {size} exceeds guard {guard}")]
    GuardExceeded { what: &'static str, size: String, guard: u64 },
    #[error("invalid field element: {0}")]
    InvalidElement(String),

    #[error("singular curve: 4a^3 + 27b^2 = 0")]
    SingularCurve,
    #[error("point is not on the curve")]
    OffCurve,
    #[error("points live at different field levels")]
    MixedLevels,

    #[error("{0} is not square-free")]
    NotSquareFree(u64),
    #[error("deg tau_{{{r}/1}} = {order} is divisible by p = {p}")]
    DegreeNotCoprime { r: u64, order: u64, p: u32 },
    #[error("kernel order mismatch for r = {r}: filtered {found}, expected {expected}")]
    KernelOrder { r: u64, found: usize, expected: String },

    #[error("indeterminate evaluation: a denominator line vanishes at the point")]
    Indeterminate,
    #[error("function has a pole at the point")]
    Pole,

    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("retry budget of {attempts} exhausted: {what}")]
    RetryExhausted { attempts: usize, what: String },
    #[error("error-correcting pair condition failed: {0}")]
    PairCondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
