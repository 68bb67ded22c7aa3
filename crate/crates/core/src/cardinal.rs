//! Cardinal's matrices Uₙ, Tₙ, Vₙ over the set S of values ρ and ⌊n/ρ⌋,
//! ρ ≤ √n, and the exact identity TUₙ⁻¹T = V.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::MobiusTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalSystem {
    pub n: u64,
    /// σ₁ < … < σ_s.
    pub set: Vec<u64>,
    /// ⌊n/(σᵢσⱼ)⌋.
    pub u: Vec<Vec<i64>>,
    /// 1 where 2 ≤ i + j ≤ s + 1.
    pub t: Vec<Vec<i64>>,
    /// M(u_ij).
    pub v: Vec<Vec<i64>>,
}

impl CardinalSystem {
    pub fn s(&self) -> usize {
        self.set.len()
    }
}

pub fn build_cardinal(n: u64, table: &MobiusTable) -> Result<CardinalSystem> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    table.check(n)?;
    let r = n.isqrt();
    let mut set: Vec<u64> = (1..=r).chain((1..=r).map(|p| n / p)).collect();
    set.sort_unstable();
    set.dedup();
    let s = set.len();
    let excess = 2 * r as usize - s;
    if excess > 1 {
        return Err(Error::Inconsistent(format!("2⌊√n⌋ − s = {excess} for n = {n}")));
    }
    let u: Vec<Vec<i64>> = set.iter().map(|&a| set.iter().map(|&b| (n / (a * b)) as i64).collect()).collect();
    let t = (0..s).map(|i| (0..s).map(|j| i64::from(i + j < s)).collect()).collect();
    let v = u.iter().map(|row| row.iter().map(|&x| table.mertens(x as u64)).collect()).collect();
    Ok(CardinalSystem { n, set, u, t, v })
}

/// det U and U⁻¹ = adj / det.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalInverse {
    pub det: BigInt,
    pub adj: Vec<Vec<BigInt>>,
}

/// Integer operations needed by fraction-free elimination; `None` on
/// overflow.
trait Exact: Clone {
    fn from_i64(v: i64) -> Self;
    fn vanishes(&self) -> bool;
    /// (a·b − c·d) / e, the division being exact.
    fn step(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Exact for i128 {
    fn from_i64(v: i64) -> Self {
        i128::from(v)
    }

    fn vanishes(&self) -> bool {
        *self == 0
    }

    fn step(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        Some(a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)? / e)
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Exact for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn step(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        Some((a * b - c * d) / e)
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Bareiss-style Gauss–Jordan on [M | I]. Ends with [d·I | d·(PM)⁻¹],
/// d = det(PM) for the row permutation P used.
fn bareiss<T: Exact>(m: &[Vec<i64>]) -> Option<Result<CardinalInverse>> {
    let s = m.len();
    let w = 2 * s;
    let mut a: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter().map(|&x| T::from_i64(x)).chain((0..s).map(|j| T::from_i64(i64::from(i == j)))).collect()
        })
        .collect();
    let mut prev = T::from_i64(1);
    let mut swaps = 0usize;
    for k in 0..s {
        let Some(p) = (k..s).find(|&i| !a[i][k].vanishes()) else {
            return Some(Err(Error::Singular));
        };
        if p != k {
            a.swap(p, k);
            swaps += 1;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let lead = row[k].clone();
            for j in 0..w {
                if j != k {
                    row[j] = T::step(&pivot_row[k], &row[j], &lead, &pivot_row[j], &prev)?;
                }
            }
            row[k] = T::from_i64(0);
        }
        prev = pivot_row[k].clone();
    }
    let d = prev.to_big();
    let sign = if swaps.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let adj = a.iter().map(|row| row[s..].iter().map(|x| x.to_big() * &sign).collect()).collect();
    Some(Ok(CardinalInverse { det: d * &sign, adj }))
}

/// Exact det and adjugate of U, in i128 when the intermediates fit and in
/// arbitrary precision otherwise.
pub fn invert(sys: &CardinalSystem) -> Result<CardinalInverse> {
    match bareiss::<i128>(&sys.u) {
        Some(r) => r,
        None => bareiss::<BigInt>(&sys.u).expect("arbitrary precision does not overflow"),
    }
}

/// T·X·T. Row i of T is ones in columns 0..s−i, so both products are
/// partial sums.
fn t_sandwich(x: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let s = x.len();
    // (TX)_{ij} = Σ_{k < s−i} x_kj
    let mut cols = vec![vec![BigInt::zero(); s]; s];
    let mut acc = vec![BigInt::zero(); s];
    for k in 0..s {
        for j in 0..s {
            acc[j] += &x[k][j];
        }
        cols[s - 1 - k] = acc.clone();
    }
    cols.iter()
        .map(|row| {
            let mut out = vec![BigInt::zero(); s];
            let mut run = BigInt::zero();
            for k in 0..s {
                run += &row[k];
                out[s - 1 - k] = run.clone();
            }
            out
        })
        .collect()
}

fn identity_holds(sys: &CardinalSystem, inv: &CardinalInverse) -> bool {
    let lhs = t_sandwich(&inv.adj);
    lhs.iter().zip(&sys.v).all(|(l, v)| l.iter().zip(v).all(|(x, &y)| *x == &inv.det * y))
}

/// T·U⁻¹·T = V, checked as T·adj(U)·T = det(U)·V.
pub fn verify_cardinal_identity(sys: &CardinalSystem) -> Result<bool> {
    Ok(identity_holds(sys, &invert(sys)?))
}

/// The sum of all entries of U⁻¹, which is v₁₁ = M(n).
pub fn mertens_via_cardinal(n: u64, table: &MobiusTable) -> Result<i64> {
    let sys = build_cardinal(n, table)?;
    inverse_sum(&invert(&sys)?)
}

fn inverse_sum(inv: &CardinalInverse) -> Result<i64> {
    let total: BigInt = inv.adj.iter().flatten().sum();
    let (q, r) = total.div_rem(&inv.det);
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!("sum of U⁻¹ = {total}/{} is not an integer", inv.det)));
    }
    q.to_i64().ok_or_else(|| Error::Inconsistent(format!("sum of U⁻¹ = {q} out of range")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalReport {
    pub n: u64,
    pub s: usize,
    /// det U, as a decimal string since it may exceed 64 bits.
    pub det: String,
    pub identity_holds: bool,
    pub mertens: i64,
    pub oracle: i64,
    #[serde(rename = "match")]
    pub matched: bool,
}

impl CardinalReport {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.matched
    }
}

/// Builds, inverts and checks the system for one n.
pub fn cardinal_report(n: u64, table: &MobiusTable) -> Result<CardinalReport> {
    let sys = build_cardinal(n, table)?;
    let inv = invert(&sys)?;
    let identity_holds = identity_holds(&sys, &inv);
    let mertens = inverse_sum(&inv)?;
    let oracle = table.mertens(n);
    Ok(CardinalReport {
        n,
        s: sys.s(),
        det: inv.det.to_string(),
        identity_holds,
        mertens,
        oracle,
        matched: mertens == oracle,
    })
}

/// For n = N², whether the leading N×N block of U is A(N).
pub fn top_left_is_a(sys: &CardinalSystem) -> Option<bool> {
    let big_n = sys.n.isqrt();
    if big_n * big_n != sys.n {
        return None;
    }
    let k = big_n as usize;
    Some((0..k).all(|i| (0..k).all(|j| sys.u[i][j] as u64 == sys.n / ((i as u64 + 1) * (j as u64 + 1)))))
}
