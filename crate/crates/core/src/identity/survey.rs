use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Word;
use crate::arith::divisor::DivisorSums;
use crate::arith::MobiusTable;
use crate::error::{Error, Result};

/// Every (n₁, …, n_d) of positive integers with n₁⋯n_d ≤ K, lexicographic.
fn support(d: usize, k: u64) -> Vec<Vec<u64>> {
    fn go(d: usize, k: u64, prod: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for n in 1..=k / prod {
            cur.push(n);
            go(d, k, prod * n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, k, 1, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Σ₁^K(V) f for every word V, given f on the support tuples.
pub fn word_sums(ranges: &[u64], tuples: &[Vec<u64>], f: &[i64]) -> Vec<(Word, i128)> {
    Word::all(ranges.len() as u32)
        .map(|word| {
            let s = tuples
                .iter()
                .zip(f)
                .filter(|(t, _)| word.support().all(|i| t[i] <= ranges[i]))
                .map(|(_, &v)| i128::from(v))
                .sum();
            (word, s)
        })
        .collect()
}

/// Checks Σ_V μ*(V) Σ₁^K(V) f = 0 for `trials` random integer-valued f
/// supported on {n₁⋯n_d ≤ K}, each word sum enumerated literally.
pub fn inclusion_exclusion_check(d: u32, k: u64, ranges: &[u64], trials: u32, seed: u64) -> Result<bool> {
    if d < 2 || ranges.len() != d as usize {
        return Err(Error::InvalidArgument(format!("need d ≥ 2 and {d} ranges, got {}", ranges.len())));
    }
    let prod = ranges.iter().fold(1u128, |acc, &r| acc.saturating_mul(u128::from(r) + 1));
    if prod <= u128::from(k) {
        return Err(Error::Precondition(format!("K < (1 + N₁)⋯(1 + N_d) fails: K = {k}, product = {prod}")));
    }
    let tuples = support(d as usize, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let f: Vec<i64> = tuples.iter().map(|_| rng.gen_range(-1000..=1000)).collect();
        let total: i128 = word_sums(ranges, &tuples, &f).into_iter().map(|(w, s)| i128::from(w.mobius()) * s).sum();
        if total != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermCountRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub d: u32,
    pub term_count: u128,
    /// term_count / (N^d · L^{2d−2}) with L = max(log N, 1).
    pub ratio: f64,
}

/// Number of (n₁, …, n_r, k₁, …, k_{r−1}) products the d-fold identity at
/// K = N^d expands into, counting only squarefree nᵢ (the others carry
/// μ = 0 and are skipped): Σ_r Σ_{n₁…n_r} D_{r−1}(K/(n₁⋯n_r)).
pub fn term_count(d: u32, n: u64, table: &MobiusTable) -> Result<u128> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d must be at least 2, got {d}")));
    }
    table.check(n)?;
    let k = n.checked_pow(d).ok_or_else(|| Error::InvalidArgument(format!("N^d overflows for N = {n}, d = {d}")))?;
    let squarefree: Vec<u64> = (1..=n).filter(|&i| table.mu(i) != 0).collect();
    let mut sums = DivisorSums::new();
    let mut total = squarefree.len() as u128;
    for r in 2..=d {
        fn go(sf: &[u64], depth: u32, r: u32, prod: u64, k: u64, sums: &mut DivisorSums, acc: &mut u128) {
            if depth == r {
                *acc += sums.get(r - 1, k / prod);
                return;
            }
            for &n in sf {
                if prod * n > k {
                    break;
                }
                go(sf, depth + 1, r, prod * n, k, sums, acc);
            }
        }
        go(&squarefree, 0, r, 1, k, &mut sums, &mut total);
    }
    Ok(total)
}

pub fn term_count_survey(d: u32, n_list: &[u64], table: &MobiusTable) -> Result<Vec<TermCountRow>> {
    n_list
        .iter()
        .map(|&n| {
            let count = term_count(d, n, table)?;
            let log = (n as f64).ln().max(1.0);
            let scale = (n as f64).powi(d as i32) * log.powi(2 * d as i32 - 2);
            Ok(TermCountRow { n, d, term_count: count, ratio: count as f64 / scale })
        })
        .collect()
}
