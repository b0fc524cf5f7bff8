//! Exact coefficients: rational functions in `Q = q^{1/2}` whose denominators
//! are products of q-integers `(1 - q^k)`, tensored with polynomials in `T`.
//!
//! The same field hosts `q^{1/2}`, `e^{-t}` (as `T`) and `e^{lambda/2}` (as `Q`)
//! depending on the model being verified.

mod poly;
mod ring;
mod scalar;
mod text;

pub use ring::{determinant, Module, Ring};
pub use scalar::{sign_pow, Factor, Scalar};
pub use text::parse_scalar;

pub(crate) use scalar::factorial;

use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{0}` is not invertible over the (1-q^k) localization")]
    NotInvertible(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Which finite product [`qfactorial`] returns.
#[derive(Debug, Clone)]
pub enum QFactorialStyle {
    /// `prod_{k=1}^n (1 - q^k)`
    OneMinusQ,
    /// `[n]! = prod_{k=1}^n (q^{k/2} - q^{-k/2})`
    Brackets,
    /// `(a; q)_n = prod_{k=1}^n (1 - a q^{k-1})`
    APochhammer(Scalar),
}

pub fn qfactorial(n: u32, style: &QFactorialStyle) -> Scalar {
    let mut acc = Scalar::one();
    for k in 1..=i64::from(n) {
        let f = match style {
            QFactorialStyle::OneMinusQ => Scalar::one_minus_q(k),
            QFactorialStyle::Brackets => Scalar::from_terms([
                (0, k, BigRational::from_integer(1.into())),
                (0, -k, BigRational::from_integer((-1).into())),
            ]),
            QFactorialStyle::APochhammer(a) => &Scalar::one() - &a.mul_q_half_pow(2 * (k - 1)),
        };
        acc = &acc * &f;
    }
    acc
}

/// The q-integer `[n] = q^{n/2} - q^{-n/2}`.
pub fn q_bracket(n: i64) -> Scalar {
    Scalar::from_terms([
        (0, n, BigRational::from_integer(1.into())),
        (0, -n, BigRational::from_integer((-1).into())),
    ])
}
