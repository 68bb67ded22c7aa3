use serde::{Deserialize, Serialize};

use crate::arith::sieve::{floor_nonneg, prime_flags};
use crate::arith::MobiusTable;
use crate::error::{Error, Result};

/// Largest N² accepted by [`eratosthenes_pi_check`].
pub const PI_CHECK_CAPACITY: u64 = 50_000_000;

/// Σ_{n≤x} ⌊x/n⌋ μ(n), which is 1 for x ≥ 1 and 0 for 0 < x < 1.
pub fn meissel_sum(x: f64, table: &MobiusTable) -> Result<i64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::InvalidArgument(format!("Meissel's sum needs x > 0, got {x}")));
    }
    let n = floor_nonneg(x)?;
    table.check(n)?;
    let mut acc = 0i64;
    for k in 1..=n {
        acc += (n / k) as i64 * i64::from(table.mu(k));
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiCheck {
    /// π(N²) from a prime sieve.
    pub lhs: i64,
    /// π(N) − 1 + Σ μ(d)⌊N²/d⌋ over squarefree d ≤ N² with prime factors ≤ N.
    pub rhs: i64,
    #[serde(rename = "match")]
    pub matched: bool,
}

/// Legendre's form of the sieve of Eratosthenes for π(N²).
///
/// The d are built as products of distinct primes ≤ N, so μ(d) is the sign
/// carried along the construction and no factorization is needed.
pub fn eratosthenes_pi_check(n: u64) -> Result<PiCheck> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
    }
    let n2 = n
        .checked_mul(n)
        .filter(|&v| v <= PI_CHECK_CAPACITY)
        .ok_or_else(|| Error::InvalidArgument(format!("N² exceeds the sieve capacity {PI_CHECK_CAPACITY}")))?;
    let flags = prime_flags(n2 as usize);
    let lhs = flags.iter().filter(|&&p| p).count() as i64;
    let primes: Vec<u64> = (2..=n).filter(|&p| flags[p as usize]).collect();

    fn walk(primes: &[u64], start: usize, d: u64, sign: i64, n2: u64, acc: &mut i64) {
        *acc += sign * (n2 / d) as i64;
        for (i, &p) in primes.iter().enumerate().skip(start) {
            match d.checked_mul(p) {
                Some(next) if next <= n2 => walk(primes, i + 1, next, -sign, n2, acc),
                _ => break,
            }
        }
    }
    let mut sum = 0i64;
    walk(&primes, 0, 1, 1, n2, &mut sum);
    let rhs = primes.len() as i64 - 1 + sum;
    Ok(PiCheck { lhs, rhs, matched: lhs == rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_mobius;

    #[test]
    fn meissel_examples() {
        let t = sieve_mobius(100).unwrap();
        assert_eq!(meissel_sum(1.0, &t).unwrap(), 1);
        assert_eq!(meissel_sum(0.5, &t).unwrap(), 0);
        assert_eq!(meissel_sum(2.5, &t).unwrap(), 1);
        assert!(meissel_sum(0.0, &t).is_err());
        assert!(meissel_sum(101.0, &t).is_err());
    }

    #[test]
    fn meissel_is_one_everywhere() {
        let t = sieve_mobius(2000).unwrap();
        for x in 1..=2000 {
            assert_eq!(meissel_sum(x as f64, &t).unwrap(), 1);
        }
    }

    #[test]
    fn pi_examples() {
        let c = eratosthenes_pi_check(2).unwrap();
        assert_eq!((c.lhs, c.rhs), (2, 2));
        let c = eratosthenes_pi_check(3).unwrap();
        assert_eq!(c.lhs, 4);
        assert!(c.matched);
        let c = eratosthenes_pi_check(10).unwrap();
        assert_eq!(c.lhs, 25);
        assert!(c.matched);
        assert!(eratosthenes_pi_check(1).is_err());
        assert!(eratosthenes_pi_check(100_000).is_err());
    }

    #[test]
    fn pi_matches_up_to_200() {
        for n in 2..=200 {
            assert!(eratosthenes_pi_check(n).unwrap().matched, "N={n}");
        }
    }
}
