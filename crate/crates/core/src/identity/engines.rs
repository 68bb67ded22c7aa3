use std::time::Instant;

use num_complex::Complex64;

use super::{IdentityId, IdentityParams, IdentityReport, Word};
use crate::arith::multiplicative::{g_fold_literal, weighted_mertens, FoldCache};
use crate::arith::{mertens_oracle, MobiusTable, MultiplicativeFunctionSpec, Scalar, Tabulated, Value};
use crate::error::{Error, Result};

/// How the inner k-sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FoldMode {
    /// Through the memoised G_r, grouped by quotient.
    #[default]
    Collapsed,
    /// By enumerating every (k₁, …, k_{r−1}); small K only.
    Literal,
}

struct Folds<'a, S> {
    cache: FoldCache<'a, S>,
    mode: FoldMode,
}

impl<'a, S: Scalar> Folds<'a, S> {
    fn new(weights: &'a Tabulated<S>, mode: FoldMode) -> Self {
        Self { cache: FoldCache::new(weights), mode }
    }

    fn get(&mut self, r: u32, y: u64) -> S {
        match self.mode {
            FoldMode::Collapsed => self.cache.get(r, y),
            FoldMode::Literal => g_fold_literal(self.cache.weights(), r, y),
        }
    }
}

/// Signed weights m_n = μ(n) g(n) for n ≤ len, with index 0 unused.
fn m_vector<S: Scalar>(w: &Tabulated<S>, len: u64, table: &MobiusTable) -> Vec<S> {
    let mut m = Vec::with_capacity(len as usize + 1);
    m.push(S::zero());
    for n in 1..=len {
        m.push(match table.mu(n) {
            0 => S::zero(),
            1 => w.value(n),
            _ => -w.value(n),
        });
    }
    m
}

/// Σ over (n₁, …, n_r) with nᵢ ≤ limits[i], μ(nᵢ) ≠ 0 and Π nᵢ ≤ K of
/// Π m_{nᵢ} · G_{r−1}(⌊K/Π nᵢ⌋), enumerated lexicographically.
///
/// Returns the sum and the number of contributing tuples.
fn tuple_sum<S: Scalar>(limits: &[u64], m: &[S], k: u64, folds: &mut Folds<'_, S>) -> (S, u64) {
    #[allow(clippy::too_many_arguments)]
    fn go<S: Scalar>(
        limits: &[u64],
        depth: usize,
        prod: u64,
        weight: S,
        m: &[S],
        k: u64,
        folds: &mut Folds<'_, S>,
        acc: &mut (S, u64),
    ) {
        if depth == limits.len() {
            let r = limits.len() as u32;
            acc.0 = acc.0 + weight * folds.get(r - 1, k / prod);
            acc.1 += 1;
            return;
        }
        let cap = limits[depth].min(k / prod);
        for n in 1..=cap {
            let mn = m[n as usize];
            if mn == S::zero() {
                continue;
            }
            go(limits, depth + 1, prod * n, weight * mn, m, k, folds, acc);
        }
    }
    let mut acc = (S::zero(), 0);
    go(limits, 0, 1, S::one(), m, k, folds, &mut acc);
    acc
}

fn binomial(n: u64, r: u64) -> i64 {
    let mut acc = 1i64;
    for i in 0..r {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

fn signed<S: Scalar>(v: S, sign: i64) -> S {
    if sign >= 0 {
        v
    } else {
        -v
    }
}

fn scale<S: Scalar>(v: S, c: i64) -> S {
    v * S::from_i64(c)
}

/// Run `f` with integer weights when g is integral, complex otherwise.
fn dispatch<T>(
    g: &MultiplicativeFunctionSpec,
    limit: u64,
    exact: impl FnOnce(&Tabulated<i128>) -> T,
    complex: impl FnOnce(&Tabulated<Complex64>) -> T,
) -> Result<T> {
    if let Some(w) = g.tabulate_exact(limit)? {
        Ok(exact(&w))
    } else {
        Ok(complex(&g.tabulate_complex(limit)?))
    }
}

/// mᵀA(g, N)m with a_{mn} = Σ_{k ≤ N²/(mn)} g(k).
pub fn bilinear_quadratic_form(g: &MultiplicativeFunctionSpec, n: u64, table: &MobiusTable) -> Result<Value> {
    table.check(n)?;
    dispatch(g, n * n, |w| bilinear_parts(w, n, table).1.into_value(), |w| bilinear_parts(w, n, table).1.into_value())
}

/// (M(g, N), mᵀAm, nonzero pairs).
fn bilinear_parts<S: Scalar>(w: &Tabulated<S>, n: u64, table: &MobiusTable) -> (S, S, u64) {
    let m = m_vector(w, n, table);
    let n2 = n * n;
    let mut form = S::zero();
    let mut pairs = 0u64;
    for i in 1..=n {
        if m[i as usize] == S::zero() {
            continue;
        }
        let mut row = S::zero();
        for j in 1..=n {
            if m[j as usize] == S::zero() {
                continue;
            }
            pairs += 1;
            row = row + m[j as usize] * w.partial(n2 / (i * j));
        }
        form = form + m[i as usize] * row;
    }
    (weighted_mertens(w, n, table), form, pairs)
}

fn report(
    id: IdentityId,
    params: IdentityParams,
    value: Value,
    oracle: Value,
    term_count: u64,
    start: Instant,
) -> IdentityReport {
    IdentityReport {
        identity_id: id,
        matched: value.matches(&oracle),
        params,
        value_identity: value,
        value_oracle: oracle,
        term_count,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

/// M(g, N²) = 2M(g, N) − mᵀA(g, N)m, compared with the sieve.
pub fn mertens_via_bilinear(g: &MultiplicativeFunctionSpec, n: u64, table: &MobiusTable) -> Result<IdentityReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let start = Instant::now();
    let k = n.checked_mul(n).ok_or_else(|| Error::InvalidArgument(format!("N = {n} too large")))?;
    table.check(k)?;
    let (value, pairs) = dispatch(
        g,
        k,
        |w| {
            let (mg, form, pairs) = bilinear_parts(w, n, table);
            ((mg + mg - form).into_value(), pairs)
        },
        |w| {
            let (mg, form, pairs) = bilinear_parts(w, n, table);
            ((mg + mg - form).into_value(), pairs)
        },
    )?;
    let oracle = mertens_oracle(g, k as f64, table)?;
    let params = IdentityParams { g: g.clone(), d: Some(2), k, n: Some(n), ranges: None };
    Ok(report(IdentityId::Bilinear, params, value, oracle, pairs, start))
}

/// Exact check of (N + 1)^d > K.
fn uniform_hypothesis(d: u32, k: u64, n: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d must be at least 2, got {d}")));
    }
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("K and N must be positive".into()));
    }
    if k < n {
        return Err(Error::Precondition(format!("K ≥ N fails: K = {k} < N = {n}")));
    }
    let lhs = u128::from(n + 1).checked_pow(d);
    if matches!(lhs, Some(v) if v <= u128::from(k)) {
        return Err(Error::Precondition(format!(
            "N > K^(1/d) − 1 fails: (N + 1)^d = {} ≤ K = {k} (N = {n}, d = {d})",
            lhs.unwrap()
        )));
    }
    Ok(())
}

pub fn mertens_via_uniform(
    g: &MultiplicativeFunctionSpec,
    d: u32,
    k: u64,
    n: u64,
    table: &MobiusTable,
) -> Result<IdentityReport> {
    mertens_via_uniform_mode(g, d, k, n, table, FoldMode::Collapsed)
}

/// M(g, K) = d·M(g, N) − Σ_{r=2}^{d} (−1)^r C(d, r) Σ_{n₁…n_r ≤ N} Π μ(nᵢ)g(nᵢ) · G_{r−1}(K/(n₁⋯n_r)),
/// valid for K ≥ N > K^{1/d} − 1.
pub fn mertens_via_uniform_mode(
    g: &MultiplicativeFunctionSpec,
    d: u32,
    k: u64,
    n: u64,
    table: &MobiusTable,
    mode: FoldMode,
) -> Result<IdentityReport> {
    uniform_hypothesis(d, k, n)?;
    table.check(k)?;
    let start = Instant::now();
    fn eval<S: Scalar>(w: &Tabulated<S>, d: u32, k: u64, n: u64, table: &MobiusTable, mode: FoldMode) -> (S, u64) {
        let m = m_vector(w, n, table);
        let mut folds = Folds::new(w, mode);
        let mut total = scale(weighted_mertens(w, n, table), i64::from(d));
        let mut terms = m.iter().skip(1).filter(|&&x| x != S::zero()).count() as u64;
        for r in 2..=d {
            let limits = vec![n; r as usize];
            let (sum, count) = tuple_sum(&limits, &m, k, &mut folds);
            let coeff = binomial(u64::from(d), u64::from(r)) * if r % 2 == 0 { 1 } else { -1 };
            total = total - scale(sum, coeff);
            terms += count;
        }
        (total, terms)
    }
    let (value, terms) = dispatch(
        g,
        k,
        |w| {
            let (v, t) = eval(w, d, k, n, table, mode);
            (v.into_value(), t)
        },
        |w| {
            let (v, t) = eval(w, d, k, n, table, mode);
            (v.into_value(), t)
        },
    )?;
    let oracle = mertens_oracle(g, k as f64, table)?;
    let params = IdentityParams { g: g.clone(), d: Some(d), k, n: Some(n), ranges: None };
    Ok(report(IdentityId::Uniform, params, value, oracle, terms, start))
}

/// Exact check of K < Π(1 + Nⱼ).
fn flexible_hypothesis(k: u64, ranges: &[u64]) -> Result<()> {
    if ranges.len() < 2 {
        return Err(Error::InvalidArgument(format!("need d ≥ 2 ranges, got {}", ranges.len())));
    }
    if ranges.len() > 16 {
        return Err(Error::InvalidArgument("at most 16 ranges are supported".into()));
    }
    if k == 0 || ranges.contains(&0) {
        return Err(Error::InvalidArgument("K and every Nⱼ must be positive".into()));
    }
    let mut prod = 1u128;
    for &r in ranges {
        prod = prod.saturating_mul(u128::from(r) + 1);
    }
    if prod <= u128::from(k) {
        return Err(Error::Precondition(format!(
            "K < (1 + N₁)⋯(1 + N_d) fails: K = {k}, product = {prod} for ranges {ranges:?}"
        )));
    }
    Ok(())
}

pub fn mertens_via_flexible(
    g: &MultiplicativeFunctionSpec,
    k: u64,
    ranges: &[u64],
    table: &MobiusTable,
) -> Result<IdentityReport> {
    mertens_via_flexible_mode(g, k, ranges, table, FoldMode::Collapsed)
}

/// M(g, K) = Σᵢ M(g, min{Nᵢ, K}) − Σ_{w(V) ≥ 2} (−1)^{w(V)} Σ₁¹(V) Π μ(nᵢ)g(nᵢ) · G_{w(V)−1}(K/(n₁⋯n_d)),
/// valid for K < Π(1 + Nⱼ). Variables outside the support of V are frozen
/// at 1.
pub fn mertens_via_flexible_mode(
    g: &MultiplicativeFunctionSpec,
    k: u64,
    ranges: &[u64],
    table: &MobiusTable,
    mode: FoldMode,
) -> Result<IdentityReport> {
    flexible_hypothesis(k, ranges)?;
    table.check(k)?;
    let start = Instant::now();
    let (value, terms) = dispatch(
        g,
        k,
        |w| {
            let (v, t) = flexible_eval(w, k, ranges, table, mode);
            (v.into_value(), t)
        },
        |w| {
            let (v, t) = flexible_eval(w, k, ranges, table, mode);
            (v.into_value(), t)
        },
    )?;
    let oracle = mertens_oracle(g, k as f64, table)?;
    let params =
        IdentityParams { g: g.clone(), d: Some(ranges.len() as u32), k, n: None, ranges: Some(ranges.to_vec()) };
    Ok(report(IdentityId::Flexible, params, value, oracle, terms, start))
}

fn flexible_eval<S: Scalar>(w: &Tabulated<S>, k: u64, ranges: &[u64], table: &MobiusTable, mode: FoldMode) -> (S, u64) {
    let capped: Vec<u64> = ranges.iter().map(|&r| r.min(k)).collect();
    let longest = capped.iter().copied().max().unwrap_or(1);
    let m = m_vector(w, longest, table);
    let mut folds = Folds::new(w, mode);
    let mut total = S::zero();
    let mut terms = 0u64;
    for &r in &capped {
        total = total + weighted_mertens(w, r, table);
        terms += r;
    }
    for word in Word::all(ranges.len() as u32) {
        if word.weight() < 2 {
            continue;
        }
        let limits: Vec<u64> = word.support().map(|i| capped[i]).collect();
        let (sum, count) = tuple_sum(&limits, &m, k, &mut folds);
        total = total - signed(sum, word.mobius());
        terms += count;
    }
    (total, terms)
}

/// μ(K) as M(K) − M(K − 1), both sides from the flexible identity with the
/// principal weight.
pub fn mobius_via_identity(k: u64, ranges: &[u64], table: &MobiusTable) -> Result<i64> {
    let g = MultiplicativeFunctionSpec::Principal;
    let upper = mertens_via_flexible(&g, k, ranges, table)?;
    let upper = upper.value_identity.as_integer().expect("principal sums are integral");
    let lower = if k == 1 {
        0
    } else {
        let r = mertens_via_flexible(&g, k - 1, ranges, table)?;
        r.value_identity.as_integer().expect("principal sums are integral")
    };
    Ok((upper - lower) as i64)
}
