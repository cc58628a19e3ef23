use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid automorphism: {0} is not prime to p")]
    InvalidAutomorphism(i64),
    #[error("log^{power} does not have logarithmic order {order}")]
    OrderTooSmall { power: u32, order: u32 },
    #[error("series is not in the image of phi_H: {0}")]
    NotInImage(String),
    #[error("equation is unsolvable: {0}")]
    Unsolvable(String),
    #[error("order h = {h} is smaller than -ord(lambda) = {neg_ord}")]
    SlopeTooLarge { h: u32, neg_ord: i64 },
    #[error("cannot decide whether lambda * p^{index} = 1 at tracked precision")]
    IndeterminateCase { index: u32 },
    #[error("inconsistent family: {0}")]
    InconsistentFamily(String),
    #[error("mismatched primes {0} and {1}")]
    PrimeMismatch(u32, u32),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
