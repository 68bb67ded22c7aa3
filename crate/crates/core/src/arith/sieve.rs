//! Linear sieves for the Möbius function, the Liouville function and primes.

use crate::error::{Error, Result};

/// μ(1..N) together with the Mertens prefix sums M(1..N).
///
/// Both vectors are stored with a dummy slot at index 0 so that `mu[n]` is
/// μ(n); accessors hide the dummy slot and treat M(0) as 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    limit: u64,
    mu: Vec<i8>,
    mertens: Vec<i64>,
}

impl MobiusTable {
    /// Sieve μ up to `limit` in linear time.
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidArgument("sieve limit must be at least 1".into()));
        }
        let n = usize::try_from(limit)
            .map_err(|_| Error::InvalidArgument(format!("sieve limit {limit} exceeds memory")))?;
        let mut mu = vec![0i8; n + 1];
        let mut composite = vec![false; n + 1];
        let mut primes: Vec<usize> = Vec::new();
        mu[1] = 1;
        for i in 2..=n {
            if !composite[i] {
                primes.push(i);
                mu[i] = -1;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > n {
                    break;
                }
                composite[ip] = true;
                if i % p == 0 {
                    mu[ip] = 0;
                    break;
                }
                mu[ip] = -mu[i];
            }
        }
        let mut mertens = vec![0i64; n + 1];
        for i in 1..=n {
            mertens[i] = mertens[i - 1] + i64::from(mu[i]);
        }
        Ok(Self { limit, mu, mertens })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// μ(n) for 1 ≤ n ≤ limit.
    ///
    /// Panics when `n` is 0 or beyond the table.
    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        assert!(n >= 1 && n <= self.limit, "μ({n}) outside table 1..={}", self.limit);
        self.mu[n as usize]
    }

    /// M(n) for 0 ≤ n ≤ limit, with M(0) = 0.
    #[inline]
    pub fn mertens(&self, n: u64) -> i64 {
        assert!(n <= self.limit, "M({n}) outside table 0..={}", self.limit);
        self.mertens[n as usize]
    }

    /// M(⌊x⌋) for real x ≥ 0.
    pub fn mertens_at(&self, x: f64) -> Result<i64> {
        let n = floor_nonneg(x)?;
        self.check(n)?;
        Ok(self.mertens(n))
    }

    /// μ(1..=limit) as a slice.
    pub fn mu_values(&self) -> &[i8] {
        &self.mu[1..]
    }

    /// M(1..=limit) as a slice.
    pub fn mertens_values(&self) -> &[i64] {
        &self.mertens[1..]
    }

    /// Error unless the table covers `n`.
    pub fn check(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::TableTooSmall { needed: n, limit: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Sieve μ(1..N) and M(1..N).
pub fn sieve_mobius(limit: u64) -> Result<MobiusTable> {
    MobiusTable::new(limit)
}

/// λ(0..=limit) with λ(0) = 0, via λ(pk) = −λ(k).
pub fn liouville_values(limit: usize) -> Vec<i8> {
    let mut lambda = vec![0i8; limit + 1];
    if limit == 0 {
        return lambda;
    }
    let mut spf = vec![0usize; limit + 1];
    let mut primes = Vec::new();
    lambda[1] = 1;
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i;
            primes.push(i);
        }
        lambda[i] = -lambda[i / spf[i]];
        for &p in &primes {
            if p > spf[i] || i * p > limit {
                break;
            }
            spf[i * p] = p;
        }
    }
    lambda
}

/// Primality flags for 0..=limit.
pub fn prime_flags(limit: usize) -> Vec<bool> {
    let mut flags = vec![true; limit + 1];
    flags[0] = false;
    if limit >= 1 {
        flags[1] = false;
    }
    let mut p = 2;
    while p * p <= limit {
        if flags[p] {
            let mut q = p * p;
            while q <= limit {
                flags[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    flags
}

/// ⌊x⌋ for finite x ≥ 0.
pub(crate) fn floor_nonneg(x: f64) -> Result<u64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(format!("expected a finite real ≥ 0, got {x}")));
    }
    Ok(x.floor() as u64)
}
