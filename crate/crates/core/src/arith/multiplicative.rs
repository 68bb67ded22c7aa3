//! Totally multiplicative weights g, their partial sums and iterated
//! (Dirichlet-power) summatory functions.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::sieve::{floor_nonneg, liouville_values, MobiusTable};
use super::{Scalar, Value};
use crate::error::{Error, Result};

/// Largest argument for which table-backed weights (Liouville, complex
/// powers) are summed directly.
pub const DIRECT_SUM_CUTOFF: u64 = 50_000_000;

/// A totally multiplicative arithmetic function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplicativeFunctionSpec {
    /// g ≡ 1.
    Principal,
    /// λ(n) = (−1)^Ω(n).
    Liouville,
    /// A Dirichlet character given by its values on residues 0..q−1.
    /// Build with [`MultiplicativeFunctionSpec::character`] to validate.
    DirichletCharacter { modulus: u64, values: Vec<Complex64> },
    /// g(n) = n^{−s}.
    ComplexPower { s: Complex64 },
}

impl MultiplicativeFunctionSpec {
    /// A Dirichlet character mod `modulus`, checked to be periodic,
    /// supported exactly on units, and completely multiplicative on residues.
    pub fn character(modulus: u64, values: Vec<Complex64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("character modulus must be positive".into()));
        }
        if values.len() as u64 != modulus {
            return Err(Error::InvalidArgument(format!(
                "character mod {modulus} needs {modulus} values, got {}",
                values.len()
            )));
        }
        const EPS: f64 = 1e-12;
        for (r, v) in values.iter().enumerate() {
            let unit = (r as u64).gcd(&modulus) == 1;
            if unit && (v.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!("χ({r}) must have modulus 1 on units")));
            }
            if !unit && v.norm() > EPS {
                return Err(Error::InvalidArgument(format!("χ({r}) must vanish off units")));
            }
        }
        if modulus > 1 && (values[1] - Complex64::new(1.0, 0.0)).norm() > EPS {
            return Err(Error::InvalidArgument("χ(1) must be 1".into()));
        }
        let q = modulus as usize;
        for a in 0..q {
            for b in a..q {
                let lhs = values[(a * b) % q];
                if (lhs - values[a] * values[b]).norm() > 1e-9 {
                    return Err(Error::InvalidArgument(format!(
                        "not multiplicative: χ({a})χ({b}) ≠ χ({})",
                        (a * b) % q
                    )));
                }
            }
        }
        Ok(Self::DirichletCharacter { modulus, values })
    }

    /// The real character n ↦ (n/p) for an odd prime p.
    pub fn legendre(p: u64) -> Result<Self> {
        if p < 3 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
        }
        let values = (0..p)
            .map(|a| {
                if a == 0 {
                    return Complex64::new(0.0, 0.0);
                }
                let e = pow_mod(a, (p - 1) / 2, p);
                Complex64::new(if e == 1 { 1.0 } else { -1.0 }, 0.0)
            })
            .collect();
        Self::character(p, values)
    }

    pub fn complex_power(s: Complex64) -> Self {
        Self::ComplexPower { s }
    }

    /// Whether every value is an integer, so sums are exact in `i128`.
    pub fn is_integral(&self) -> bool {
        matches!(self, Self::Principal | Self::Liouville)
    }

    /// Whether every value is real.
    pub fn is_real(&self) -> bool {
        match self {
            Self::Principal | Self::Liouville => true,
            Self::DirichletCharacter { values, .. } => values.iter().all(|v| v.im == 0.0),
            Self::ComplexPower { s } => s.im == 0.0,
        }
    }

    /// g(n) for n ≥ 1. Liouville is evaluated by trial division.
    pub fn eval(&self, n: u64) -> Complex64 {
        assert!(n >= 1);
        match self {
            Self::Principal => Complex64::new(1.0, 0.0),
            Self::Liouville => Complex64::new(f64::from(liouville_by_trial_division(n)), 0.0),
            Self::DirichletCharacter { modulus, values } => values[(n % modulus) as usize],
            Self::ComplexPower { s } => (-s * (n as f64).ln()).exp(),
        }
    }

    /// Integer-valued weights tabulated to `limit`, or `None` when g is not
    /// integral.
    pub fn tabulate_exact(&self, limit: u64) -> Result<Option<Tabulated<i128>>> {
        match self {
            Self::Principal => Ok(Some(Tabulated { limit, rule: Rule::One })),
            Self::Liouville => {
                let n = table_size(limit)?;
                let values: Vec<i128> = liouville_values(n).into_iter().map(i128::from).collect();
                Ok(Some(Tabulated::from_values(limit, values)))
            }
            _ => Ok(None),
        }
    }

    /// Complex weights tabulated to `limit`.
    pub fn tabulate_complex(&self, limit: u64) -> Result<Tabulated<Complex64>> {
        match self {
            Self::Principal => Ok(Tabulated { limit, rule: Rule::One }),
            Self::Liouville => {
                let n = table_size(limit)?;
                let values = liouville_values(n).into_iter().map(|v| Complex64::new(f64::from(v), 0.0)).collect();
                Ok(Tabulated::from_values(limit, values))
            }
            Self::DirichletCharacter { modulus, values } => {
                let mut prefix = Vec::with_capacity(values.len() + 1);
                let mut acc = Complex64::new(0.0, 0.0);
                prefix.push(acc);
                // prefix[r] = χ(1) + … + χ(r) for 0 ≤ r ≤ q
                for j in 1..=*modulus {
                    acc += values[(j % modulus) as usize];
                    prefix.push(acc);
                }
                Ok(Tabulated { limit, rule: Rule::Periodic { modulus: *modulus, values: values.clone(), prefix } })
            }
            Self::ComplexPower { s } => {
                let n = table_size(limit)?;
                let mut values = Vec::with_capacity(n + 1);
                values.push(Complex64::new(0.0, 0.0));
                values.extend((1..=n).map(|k| (-s * (k as f64).ln()).exp()));
                Ok(Tabulated::from_values(limit, values))
            }
        }
    }
}

impl fmt::Display for MultiplicativeFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Principal => write!(f, "principal"),
            Self::Liouville => write!(f, "liouville"),
            Self::DirichletCharacter { modulus, .. } => write!(f, "character mod {modulus}"),
            Self::ComplexPower { s } => write!(f, "n^-({}{:+}i)", s.re, s.im),
        }
    }
}

fn table_size(limit: u64) -> Result<usize> {
    if limit > DIRECT_SUM_CUTOFF {
        return Err(Error::InvalidArgument(format!(
            "direct summation is capped at {DIRECT_SUM_CUTOFF}, asked for {limit}"
        )));
    }
    Ok(limit as usize)
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn liouville_by_trial_division(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            n /= p;
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[derive(Debug, Clone)]
enum Rule<S> {
    One,
    Table { values: Vec<S>, prefix: Vec<S> },
    Periodic { modulus: u64, values: Vec<S>, prefix: Vec<S> },
}

/// g(n) and P(y) = Σ_{k≤y} g(k) for arguments up to a fixed limit.
///
/// The principal function and characters have no effective limit; table
/// rules panic past it, so callers check [`Tabulated::limit`] up front.
#[derive(Debug, Clone)]
pub struct Tabulated<S> {
    limit: u64,
    rule: Rule<S>,
}

impl<S: Scalar> Tabulated<S> {
    fn from_values(limit: u64, values: Vec<S>) -> Self {
        let mut prefix = Vec::with_capacity(values.len());
        let mut acc = S::zero();
        prefix.push(acc);
        for &v in &values[1..] {
            acc = acc + v;
            prefix.push(acc);
        }
        Self { limit, rule: Rule::Table { values, prefix } }
    }

    pub fn limit(&self) -> u64 {
        match self.rule {
            Rule::Table { .. } => self.limit,
            _ => u64::MAX,
        }
    }

    /// g(n) for n ≥ 1.
    #[inline]
    pub fn value(&self, n: u64) -> S {
        match &self.rule {
            Rule::One => S::one(),
            Rule::Table { values, .. } => values[n as usize],
            Rule::Periodic { modulus, values, .. } => values[(n % modulus) as usize],
        }
    }

    /// Σ_{k≤y} g(k) for integer y ≥ 0.
    #[inline]
    pub fn partial(&self, y: u64) -> S {
        match &self.rule {
            Rule::One => S::from_i64(y as i64),
            Rule::Table { prefix, .. } => prefix[y as usize],
            Rule::Periodic { modulus, prefix, .. } => {
                let full = prefix[*modulus as usize];
                let mut acc = S::zero();
                // Multiply by repeated doubling; S has no scalar product.
                let mut reps = y / modulus;
                let mut block = full;
                while reps > 0 {
                    if reps & 1 == 1 {
                        acc = acc + block;
                    }
                    block = block + block;
                    reps >>= 1;
                }
                acc + prefix[(y % modulus) as usize]
            }
        }
    }
}

/// Memoised G_r(y) = Σ_{k₁⋯k_r ≤ y} g(k₁)⋯g(k_r) over integer y.
///
/// Evaluated through G_r(y) = Σ_{k≤y} g(k) G_{r−1}(⌊y/k⌋), with the k-sum
/// grouped into runs of equal quotient ⌊y/k⌋ so that each evaluation costs
/// O(√y) calls. Arguments reached from one top-level y are all of the form
/// ⌊y/m⌋, so the memo stays small.
#[derive(Debug)]
pub struct FoldCache<'a, S> {
    weights: &'a Tabulated<S>,
    memo: HashMap<(u32, u64), S>,
}

impl<'a, S: Scalar> FoldCache<'a, S> {
    pub fn new(weights: &'a Tabulated<S>) -> Self {
        Self { weights, memo: HashMap::new() }
    }

    pub fn weights(&self) -> &Tabulated<S> {
        self.weights
    }

    pub fn get(&mut self, r: u32, y: u64) -> S {
        match r {
            _ if y == 0 => S::zero(),
            0 => S::one(),
            1 => self.weights.partial(y),
            _ => {
                if let Some(&v) = self.memo.get(&(r, y)) {
                    return v;
                }
                let mut acc = S::zero();
                let mut lo = 1u64;
                while lo <= y {
                    let q = y / lo;
                    let hi = y / q;
                    let run = self.weights.partial(hi) - self.weights.partial(lo - 1);
                    acc = acc + run * self.get(r - 1, q);
                    lo = hi + 1;
                }
                self.memo.insert((r, y), acc);
                acc
            }
        }
    }
}

/// G_r(y) by enumerating every (k₁,…,k_r) literally. Cross-check only.
pub fn g_fold_literal<S: Scalar>(weights: &Tabulated<S>, r: u32, y: u64) -> S {
    fn go<S: Scalar>(w: &Tabulated<S>, r: u32, y: u64, acc_g: S) -> S {
        if r == 0 {
            return if y >= 1 { acc_g } else { S::zero() };
        }
        let mut total = S::zero();
        for k in 1..=y {
            total = total + go(w, r - 1, y / k, acc_g * w.value(k));
        }
        total
    }
    go(weights, r, y, S::one())
}

/// M(g, x) = Σ_{n≤x} μ(n) g(n), summed in order n = 1, 2, ….
pub fn mertens_oracle(g: &MultiplicativeFunctionSpec, x: f64, table: &MobiusTable) -> Result<Value> {
    let n = floor_nonneg(x)?;
    table.check(n)?;
    match g {
        MultiplicativeFunctionSpec::Principal => Ok(Value::Integer(i128::from(table.mertens(n)))),
        _ => {
            if let Some(w) = g.tabulate_exact(n)? {
                Ok(Value::Integer(weighted_mertens(&w, n, table)))
            } else {
                let w = g.tabulate_complex(n)?;
                Ok(Value::Complex(weighted_mertens(&w, n, table)))
            }
        }
    }
}

pub(crate) fn weighted_mertens<S: Scalar>(w: &Tabulated<S>, n: u64, table: &MobiusTable) -> S {
    let mut acc = S::zero();
    for k in 1..=n {
        match table.mu(k) {
            0 => {}
            1 => acc = acc + w.value(k),
            _ => acc = acc - w.value(k),
        }
    }
    acc
}

/// Σ_{k≤x} g(k).
pub fn partial_sum(g: &MultiplicativeFunctionSpec, x: f64) -> Result<Value> {
    let n = floor_nonneg(x)?;
    Ok(match g.tabulate_exact(n)? {
        Some(w) => Value::Integer(w.partial(n)),
        None => Value::Complex(g.tabulate_complex(n)?.partial(n)),
    })
}

/// G_r(x) = Σ_{k₁⋯k_r ≤ x} g(k₁)⋯g(k_r), with G_0 ≡ 1 on x ≥ 1.
pub fn g_fold_sum(g: &MultiplicativeFunctionSpec, r: u32, x: f64) -> Result<Value> {
    if r > super::divisor::MAX_ORDER {
        return Err(Error::InvalidArgument(format!("fold order {r} exceeds the cap {}", super::divisor::MAX_ORDER)));
    }
    let y = if x < 0.0 { 0 } else { floor_nonneg(x)? };
    Ok(match g.tabulate_exact(y)? {
        Some(w) => Value::Integer(FoldCache::new(&w).get(r, y)),
        None => {
            let w = g.tabulate_complex(y)?;
            Value::Complex(FoldCache::new(&w).get(r, y))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::divisor::divisor_summatory;
    use crate::arith::sieve::sieve_mobius;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn oracle_examples() {
        let t = sieve_mobius(100).unwrap();
        let p = MultiplicativeFunctionSpec::Principal;
        assert_eq!(mertens_oracle(&p, 4.0, &t).unwrap(), Value::Integer(-1));
        assert_eq!(mertens_oracle(&p, 0.5, &t).unwrap(), Value::Integer(0));
        let half = mertens_oracle(&MultiplicativeFunctionSpec::complex_power(c(1.0)), 2.0, &t).unwrap();
        assert!(half.matches(&Value::Complex(c(0.5))));
        assert!(matches!(mertens_oracle(&p, 101.0, &t), Err(Error::TableTooSmall { .. })));
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(partial_sum(&MultiplicativeFunctionSpec::Principal, 7.9).unwrap(), Value::Integer(7));
        assert_eq!(partial_sum(&MultiplicativeFunctionSpec::Liouville, 10.0).unwrap(), Value::Integer(0));
        assert_eq!(partial_sum(&MultiplicativeFunctionSpec::Principal, 0.3).unwrap(), Value::Integer(0));
    }

    #[test]
    fn fold_examples() {
        let p = MultiplicativeFunctionSpec::Principal;
        assert_eq!(g_fold_sum(&p, 2, 10.0).unwrap(), Value::Integer(27));
        assert_eq!(g_fold_sum(&MultiplicativeFunctionSpec::Liouville, 0, 1.0).unwrap(), Value::Integer(1));
        let one = MultiplicativeFunctionSpec::complex_power(c(0.0));
        assert!(g_fold_sum(&one, 1, 5.0).unwrap().matches(&Value::Complex(c(5.0))));
    }

    #[test]
    fn principal_fold_equals_divisor_summatory() {
        let w = MultiplicativeFunctionSpec::Principal.tabulate_exact(10_000).unwrap().unwrap();
        for r in 0..=4u32 {
            let mut cache = FoldCache::new(&w);
            for x in (0..=10_000u64).step_by(97).chain([1, 2, 3, 9_999, 10_000]) {
                assert_eq!(cache.get(r, x), divisor_summatory(r, x as f64).unwrap() as i128, "r={r} x={x}");
            }
        }
    }

    #[test]
    fn collapsed_fold_matches_literal_enumeration() {
        let chi = MultiplicativeFunctionSpec::legendre(5).unwrap();
        let wc = chi.tabulate_complex(200).unwrap();
        let wl = MultiplicativeFunctionSpec::Liouville.tabulate_exact(200).unwrap().unwrap();
        for r in 0..=3 {
            for y in [0u64, 1, 2, 7, 30, 61, 200] {
                let mut cache = FoldCache::new(&wl);
                assert_eq!(cache.get(r, y), g_fold_literal(&wl, r, y));
                let mut cache = FoldCache::new(&wc);
                assert!((cache.get(r, y) - g_fold_literal(&wc, r, y)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn character_validation() {
        assert!(MultiplicativeFunctionSpec::character(4, vec![c(0.0), c(1.0), c(0.0), c(-1.0)]).is_ok());
        // not zero on the non-unit 2
        assert!(MultiplicativeFunctionSpec::character(4, vec![c(0.0), c(1.0), c(1.0), c(-1.0)]).is_err());
        // not multiplicative
        assert!(MultiplicativeFunctionSpec::character(5, vec![c(0.0), c(1.0), c(-1.0), c(1.0), c(-1.0)]).is_err());
        assert!(MultiplicativeFunctionSpec::legendre(9).is_err());
    }

    #[test]
    fn periodic_partial_sums() {
        let chi = MultiplicativeFunctionSpec::legendre(7).unwrap();
        let w = chi.tabulate_complex(0).unwrap();
        let mut direct = c(0.0);
        for y in 1..=500u64 {
            direct += chi.eval(y);
            assert!((w.partial(y) - direct).norm() < 1e-9);
        }
    }

    #[test]
    fn multiplicativity_sampled() {
        let specs = [
            MultiplicativeFunctionSpec::Liouville,
            MultiplicativeFunctionSpec::legendre(11).unwrap(),
            MultiplicativeFunctionSpec::complex_power(Complex64::new(0.5, 14.0)),
        ];
        for g in &specs {
            for r in 1..40u64 {
                for s in 1..40u64 {
                    assert!((g.eval(r * s) - g.eval(r) * g.eval(s)).norm() < 1e-9, "{g} at {r}·{s}");
                }
            }
        }
    }
}
