use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    BadSpec(String),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("root of the modulus is not a primitive element (order {order}, expected {expected})")]
    NotPrimitiveRoot { order: u64, expected: u64 },
    #[error("budget exceeded: need {needed}, allowed {allowed}")]
    BudgetExceeded { needed: u128, allowed: u128 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different algebras")]
    CtxMismatch,
    #[error("trace function parameters must be nonzero")]
    ZeroParameter,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("equivalence map is not invertible")]
    NotInvertible,
    #[error("search timed out after {elapsed_ms} ms")]
    Timeout { elapsed_ms: u128 },
    #[error("degenerate denominator: N(lambda) and D(lambda) both vanish")]
    DegenerateDenominator,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("field too small: {0}")]
    NeedsBiggerField(String),
    #[error("instance is not in the required solution class: {0}")]
    WrongClass(String),
    #[error("bad lambda: {0}")]
    BadLambda(String),
    #[error("bad Z: {0}")]
    BadZ(String),
}
