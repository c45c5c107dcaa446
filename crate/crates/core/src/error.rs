use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero is infinite")]
    ValuationOfZero,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("expected an integer >= 2, got {0}")]
    BelowTwo(String),
    #[error("cannot factor zero")]
    FactorZero,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("divisor must have degree >= 1")]
    ConstantDivisor,
    #[error("polynomial must have degree >= {min}, got {got}")]
    DegreeTooSmall { min: usize, got: isize },
    #[error("the zero polynomial has no valuation")]
    ZeroPolynomial,
    #[error("not squarefree as a polynomial, so f is not irreducible")]
    ZeroDiscriminant,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("lift stability applies only when l_i >= 2")]
    SimpleFactor,
    #[error("factor index {index} out of range ({count} factors)")]
    FactorIndex { index: usize, count: usize },
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("prime {0} exceeds the 64-bit residue arithmetic")]
    PrimeTooLarge(String),
}
