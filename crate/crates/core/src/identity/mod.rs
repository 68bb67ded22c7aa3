//! Identities expressing M(g, K) through μ(1..N) with N far below K, each
//! checked against the sieve.
//!
//! * [`mertens_via_bilinear`]: M(g, N²) = 2M(g, N) − mᵀA(g, N)m.
//! * [`mertens_via_uniform`]: the d-fold version with one range 1..N.
//! * [`mertens_via_flexible`]: independent ranges N₁, …, N_d, valid
//!   whenever K < Π(1 + Nⱼ).
//! * [`meissel_sum`] and [`eratosthenes_pi_check`]: the classical
//!   relatives.

mod classic;
mod engines;
mod survey;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{MultiplicativeFunctionSpec, Value};

pub use classic::{eratosthenes_pi_check, meissel_sum, PiCheck};
pub use engines::{
    bilinear_quadratic_form, mertens_via_bilinear, mertens_via_flexible, mertens_via_flexible_mode,
    mertens_via_uniform, mertens_via_uniform_mode, mobius_via_identity, FoldMode,
};
pub use survey::{inclusion_exclusion_check, term_count, term_count_survey, TermCountRow};

/// A binary word V of length d; bit i set means nᵢ runs over 1..Nᵢ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    bits: u32,
    len: u32,
}

impl Word {
    pub fn new(bits: u32, len: u32) -> Self {
        assert!(len <= 31 && bits < (1 << len), "word does not fit in {len} bits");
        Self { bits, len }
    }

    /// All 2^d words in increasing binary order.
    pub fn all(len: u32) -> impl Iterator<Item = Word> {
        (0..1u32 << len).map(move |bits| Word::new(bits, len))
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: u32) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// μ*(V) = (−1)^{w(V)}.
    pub fn mobius(&self) -> i64 {
        if self.weight().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Indices in the support, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.bit(i)).map(|i| i as usize)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    Bilinear,
    Uniform,
    Flexible,
    Meissel,
    Eratosthenes,
}

/// Parameters an identity was evaluated at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityParams {
    pub g: MultiplicativeFunctionSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranges: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub params: IdentityParams,
    #[serde(rename = "value")]
    pub value_identity: Value,
    #[serde(rename = "oracle")]
    pub value_oracle: Value,
    pub term_count: u64,
    /// Wall time; not serialized so that reports are reproducible.
    #[serde(skip)]
    pub elapsed: f64,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        let w = Word::new(0b101, 3);
        assert_eq!(w.weight(), 2);
        assert_eq!(w.mobius(), 1);
        assert_eq!(w.support().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(w.to_string(), "101");
        assert_eq!(Word::all(3).count(), 8);
        assert_eq!(Word::all(4).map(|w| w.mobius()).sum::<i64>(), 0);
    }
}
