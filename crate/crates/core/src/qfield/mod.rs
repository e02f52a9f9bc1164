//! Exact arithmetic in `Q(sqrt(d1), sqrt(d2))` restricted to the span of
//! `{1, sqrt(d1), sqrt(d2)}`.

mod decimal;
mod exact;
mod parse;
mod quad;

pub(crate) use exact::lin;
pub use exact::{sign_radical_sum, Basis, Coeff, MAX_PRECISION_BITS};
pub use parse::ParseError;
pub use quad::{squarefree_part, QuadExpr};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QfError {
    #[error("result would need more than two distinct radicands ({0:?})")]
    RadicandOverflow(Vec<u64>),
    #[error("InternalPrecisionExceeded: sign undecided at {bits} bits")]
    InternalPrecisionExceeded { bits: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand must be a positive integer, got {0}")]
    InvalidRadicand(BigInt),
}

/// `a/b` as a rational. Panics if `b == 0`.
pub fn ratio(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}
