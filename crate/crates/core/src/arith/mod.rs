//! Exact-arithmetic substrate: sieves, totally multiplicative weights,
//! divisor summatory functions, real zeta values and named constants.

pub mod constants;
pub mod divisor;
pub mod multiplicative;
pub mod sieve;
pub mod zeta;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use constants::Constants;
pub use divisor::divisor_summatory;
pub use multiplicative::{g_fold_sum, mertens_oracle, partial_sum, MultiplicativeFunctionSpec, Tabulated};
pub use sieve::{sieve_mobius, MobiusTable};
pub use zeta::{zeta_partial_window, zeta_real};

/// Ring elements the identity engines accumulate in.
///
/// `i128` carries the integer-valued weights (principal, Liouville) so that
/// every identity can be checked with exact equality; `Complex64` carries
/// characters and complex powers.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn into_value(self) -> Value;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        i128::from(v)
    }
    fn into_value(self) -> Value {
        Value::Integer(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn into_value(self) -> Value {
        Value::Complex(self)
    }
}

/// A computed sum: exact when the weights are integral, complex otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Integer(i128),
    Complex(Complex64),
}

impl Value {
    /// Relative tolerance used whenever either side is non-integral.
    pub const COMPLEX_TOLERANCE: f64 = 1e-9;

    pub fn as_complex(&self) -> Complex64 {
        match *self {
            Value::Integer(v) => Complex64::new(v as f64, 0.0),
            Value::Complex(z) => z,
        }
    }

    pub fn as_integer(&self) -> Option<i128> {
        match *self {
            Value::Integer(v) => Some(v),
            Value::Complex(_) => None,
        }
    }

    /// Exact equality for two integers; otherwise
    /// `|a − b| ≤ 1e−9·(1 + |a|)`.
    pub fn matches(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Integer(a), Value::Integer(b)) => a == b,
            _ => {
                let a = self.as_complex();
                let b = other.as_complex();
                (a - b).norm() <= Self::COMPLEX_TOLERANCE * (1.0 + a.norm())
            }
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Integer(v) => write!(f, "{v}"),
            Value::Complex(z) if z.im == 0.0 => write!(f, "{}", z.re),
            Value::Complex(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}
