//! Exact arithmetic for real algebraic numbers and their number fields.
//!
//! A number `q` is an [`AlgebraicReal`]: a squarefree integer polynomial plus
//! a rational interval isolating one of its real roots. Elements of `Q(q)`
//! are [`FieldElement`]s, stored as integer polynomials in `q` reduced modulo
//! the defining polynomial, over a positive integer denominator. Every sign,
//! comparison and equality decision is exact.

mod field;
mod interval;
mod poly;
mod real;

use serde::Serialize;
use thiserror::Error;

pub use field::{element_arith, ArithOp, ElementIndex, FieldElement};
pub use interval::{F64Interval, RationalInterval};
pub use poly::{parse_polynomial, parse_polynomial_in, IntPolynomial};
pub use real::{isolate_real_roots, root_bound, AlgebraicReal, SturmSequence};

/// Shared handle to the number generating a field.
pub type Context = std::sync::Arc<AlgebraicReal>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraicError {
    #[error("empty polynomial input")]
    EmptyInput,
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("non-integer coefficient at position {position}")]
    NonIntegerCoefficient { position: usize },
    #[error("field elements belong to different number fields")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("defining polynomial is not squarefree")]
    NotSquarefree,
    #[error("the zero polynomial does not define a number")]
    ZeroPolynomial,
    #[error("interval [{lo}, {hi}] contains {count} roots of the defining polynomial, expected exactly one")]
    NotIsolating { lo: String, hi: String, count: usize },
    #[error("invalid interval: lower end exceeds upper end")]
    InvalidInterval,
    #[error("refinement tolerance must be positive")]
    NonPositiveTolerance,
}

/// Exact sign of a real quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn from_i8(s: i8) -> Self {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn negate(self) -> Self {
        Self::from_i8(-self.as_i8())
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, o: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * o.as_i8())
    }
}
