//! Summatory functions of the ordered-factorization counts τ_r.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Largest r accepted by [`divisor_summatory`].
pub const MAX_ORDER: u32 = 8;

/// D_r(x) = Σ_{ℓ≤x} τ_r(ℓ), where τ_r(ℓ) counts ordered factorizations of
/// ℓ into r factors.
///
/// Uses the recursion D_r(x) = Σ_{k≤x} D_{r−1}(x/k) with D_0(x) = [x ≥ 1];
/// runs of k sharing the quotient ⌊x/k⌋ are added in one step. Negative x
/// gives 0.
pub fn divisor_summatory(r: u32, x: f64) -> Result<u128> {
    if r > MAX_ORDER {
        return Err(Error::InvalidArgument(format!("order {r} exceeds the cap {MAX_ORDER}")));
    }
    if x.is_nan() {
        return Err(Error::InvalidArgument("x is NaN".into()));
    }
    if x < 1.0 {
        return Ok(0);
    }
    if !x.is_finite() || x >= u64::MAX as f64 {
        return Err(Error::InvalidArgument(format!("x = {x} is out of range")));
    }
    Ok(DivisorSums::new().get(r, x.floor() as u64))
}

/// Memoised D_r over integer arguments.
#[derive(Debug, Default)]
pub struct DivisorSums {
    memo: HashMap<(u32, u64), u128>,
}

impl DivisorSums {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, r: u32, x: u64) -> u128 {
        match r {
            _ if x == 0 => 0,
            0 => 1,
            1 => u128::from(x),
            _ => {
                if let Some(&v) = self.memo.get(&(r, x)) {
                    return v;
                }
                let mut acc = 0u128;
                let mut lo = 1u64;
                while lo <= x {
                    let q = x / lo;
                    let hi = x / q;
                    acc += u128::from(hi - lo + 1) * self.get(r - 1, q);
                    lo = hi + 1;
                }
                self.memo.insert((r, x), acc);
                acc
            }
        }
    }
}
