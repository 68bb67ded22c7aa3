use serde::{Deserialize, Serialize};

use super::eigen::{full_spectrum, SpectralResult, SpectrumMode};
use super::operator::{build_operator, OperatorKind};
use super::stats::SpectralStats;
use crate::arith::constants::D4_ANNOTATION;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    /// `None` when the check is vacuous or needs data that was not computed.
    pub passed: Option<bool>,
    pub detail: String,
}

impl BoundCheck {
    fn new(name: &str, passed: Option<bool>, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }

    fn skipped(name: &str, why: &str) -> Self {
        Self::new(name, None, why.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub checks: Vec<BoundCheck>,
    /// ‖e_N − (±f̂)‖ · N / log N.
    pub alignment_constant: Option<f64>,
}

impl BoundsReport {
    /// No check failed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
    }

    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks the eigenvalue window for λ_N, the bound on Σ_{k<N} λ_k², the
/// pointwise bound on |λ_k|, the alignment of e_N with f̂ and the Rayleigh
/// bound λ₁ ≤ wᵀAw/‖w‖².
///
/// An extreme-mode spectrum skips the two checks needing interior
/// eigenvalues.
pub fn bounds_report(stats: &SpectralStats, spectrum: &SpectralResult) -> Result<BoundsReport> {
    let n = stats.n;
    if spectrum.n as u64 != n {
        return Err(Error::DimensionMismatch { expected: n as usize, got: spectrum.n });
    }
    let nf = n as f64;
    let z2 = stats.zeta2;
    let log = nf.ln();
    let high = spectrum.highest();
    let low = spectrum.lowest();
    let mut checks = Vec::new();

    let gap = high.lambda - z2 * nf * nf;
    let (lo, hi) = (-(1.0 + log).powi(2) / z2, 0.5 / z2);
    checks.push(BoundCheck::new(
        "lambda_n_window",
        Some(lo < gap && gap < hi),
        format!("{lo:.6} < λ_N − ζ₂N² = {gap:.6} < {hi:.6}"),
    ));

    if spectrum.mode == SpectrumMode::Full {
        let tail: f64 = spectrum.pairs[..spectrum.pairs.len() - 1].iter().map(|p| p.lambda * p.lambda).sum();
        let bound = stats.phi * nf * nf - stats.delta * stats.delta / (z2 * z2);
        let slack = 1e-9 * nf * nf;
        checks.push(BoundCheck::new(
            "tail_square_sum",
            Some(tail <= bound + slack && bound < nf * nf),
            format!("Σ_{{k<N}} λ_k² = {tail:.6} ≤ φN² − δ²/ζ₂² = {bound:.6} < N² = {}", nf * nf),
        ));
        if n >= 2 {
            let mut worst = 0.0f64;
            let mut ok = true;
            for p in &spectrum.pairs[..spectrum.pairs.len() - 1] {
                let k = p.index as f64;
                let limit = nf / k.min(nf - k).sqrt();
                worst = worst.max(p.lambda.abs() / limit);
                ok &= p.lambda.abs() < limit;
            }
            checks.push(BoundCheck::new("pointwise", Some(ok), format!("max_k |λ_k|·√min(k, N−k)/N = {worst:.6}")));
        } else {
            checks.push(BoundCheck::skipped("pointwise", "no k with 1 ≤ k ≤ N − 1"));
        }
    } else {
        checks.push(BoundCheck::skipped("tail_square_sum", "needs the full spectrum"));
        checks.push(BoundCheck::skipped("pointwise", "needs the full spectrum"));
    }

    let mut alignment_constant = None;
    if n >= 2 {
        let fnorm = z2.sqrt();
        let fdot: f64 = high.vector.iter().enumerate().map(|(i, x)| x / ((i + 1) as f64 * fnorm)).sum();
        let dist = (2.0 * (1.0 - fdot.abs()).max(0.0)).sqrt();
        // 1 − F_N² < (½ + (1 + log N)²)/(λ_N − N), valid once λ_N > N.
        let c = dist * nf / log;
        alignment_constant = Some(c);
        if high.lambda > nf {
            let one_minus = ((0.5 + (1.0 + log).powi(2)) / (high.lambda - nf)).min(1.0);
            let f2 = 1.0 - one_minus;
            let limit = (2.0 * one_minus / (1.0 + f2.sqrt())).sqrt();
            checks.push(BoundCheck::new(
                "alignment",
                Some(dist <= limit + 1e-12),
                format!("‖e_N − (±f̂)‖ = {dist:.3e} ≤ {limit:.3e}; C = {c:.6}"),
            ));
        } else {
            checks.push(BoundCheck::skipped("alignment", "λ_N ≤ N"));
        }
    } else {
        checks.push(BoundCheck::skipped("alignment", "vacuous at N = 1"));
    }

    if stats.w_norm2 > 0.0 {
        let rayleigh = stats.w_quadform / stats.w_norm2;
        let slack = 1e-9 * (1.0 + rayleigh.abs());
        checks.push(BoundCheck::new(
            "rayleigh_w",
            Some(low.lambda <= rayleigh + slack),
            format!("λ₁ = {:.6} ≤ wᵀAw/‖w‖² = {rayleigh:.6}", low.lambda),
        ));
    } else {
        checks.push(BoundCheck::skipped("rayleigh_w", "w = 0"));
    }
    Ok(BoundsReport { n, checks, alignment_constant })
}

/// Sample points θ of the eigenvector tails; each reports √N·e_{k,ℓ} at
/// ℓ = ⌊θN⌋ + 1.
pub const SCAN_THETAS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub k: i64,
    #[serde(rename = "N")]
    pub n: usize,
    /// N − k for k > 0, |k| for k < 0.
    pub index: usize,
    pub lambda_over_n: f64,
    /// (θ, ℓ, √N·e_{index,ℓ}).
    pub tail: Vec<(f64, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Per k: whether λ_index/N moved monotonically along the N list.
    pub monotone: Vec<(i64, bool)>,
    pub d4_annotation: f64,
}

/// λ_{{−k/N}N}/N and eigenvector samples for every (k, N). Observational:
/// nothing is asserted.
pub fn scaling_scan(k_values: &[i64], n_values: &[usize], dense_cap: usize) -> Result<ScanReport> {
    for &k in k_values {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be nonzero".into()));
        }
        for &n in n_values {
            if n as u64 <= k.unsigned_abs() {
                return Err(Error::Precondition(format!("N > |k| fails: N = {n}, k = {k}")));
            }
        }
    }
    let mut rows = Vec::new();
    for &n in n_values {
        let spectrum = full_spectrum(&build_operator(OperatorKind::APrincipal, n, dense_cap)?)?;
        for &k in k_values {
            let index = if k > 0 { n - k as usize } else { k.unsigned_abs() as usize };
            let pair =
                spectrum.pair(index).ok_or_else(|| Error::InvalidArgument(format!("index {index} out of range")))?;
            let scale = (n as f64).sqrt();
            let tail = SCAN_THETAS
                .iter()
                .map(|&t| {
                    let l = ((t * n as f64).floor() as usize + 1).min(n);
                    (t, l, scale * pair.vector[l - 1])
                })
                .collect();
            rows.push(ScanRow { k, n, index, lambda_over_n: pair.lambda / n as f64, tail });
        }
    }
    let monotone = k_values
        .iter()
        .map(|&k| {
            let seq: Vec<f64> = rows.iter().filter(|r| r.k == k).map(|r| r.lambda_over_n).collect();
            let up = seq.windows(2).all(|w| w[0] <= w[1]);
            let down = seq.windows(2).all(|w| w[0] >= w[1]);
            (k, up || down)
        })
        .collect();
    Ok(ScanReport { rows, monotone, d4_annotation: D4_ANNOTATION })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigen::{extreme_eigenpairs, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};
    use crate::spectral::stats::compute_stats;

    fn report(n: usize) -> BoundsReport {
        let op = build_operator(OperatorKind::APrincipal, n, 4000).unwrap();
        bounds_report(&compute_stats(n as u64).unwrap(), &full_spectrum(&op).unwrap()).unwrap()
    }

    #[test]
    fn n_two_window() {
        let r = report(2);
        let c = r.check("lambda_n_window").unwrap();
        assert_eq!(c.passed, Some(true));
        assert!(c.detail.contains("-2.29"), "{}", c.detail);
    }

    #[test]
    fn n_one_is_degenerate() {
        let r = report(1);
        assert_eq!(r.check("pointwise").unwrap().passed, None);
        assert_eq!(r.check("alignment").unwrap().passed, None);
        assert!(r.all_passed());
    }

    #[test]
    fn all_pass_at_100() {
        let r = report(100);
        assert!(r.checks.iter().all(|c| c.passed == Some(true)), "{r:?}");
        assert!(r.alignment_constant.unwrap() > 0.0);
    }

    #[test]
    fn extreme_mode_skips_interior_checks() {
        let op = build_operator(OperatorKind::APrincipal, 60, 4000).unwrap();
        let s = extreme_eigenpairs(&op, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER).unwrap();
        let r = bounds_report(&compute_stats(60).unwrap(), &s).unwrap();
        assert_eq!(r.check("tail_square_sum").unwrap().passed, None);
        assert_eq!(r.check("rayleigh_w").unwrap().passed, Some(true));
        assert!(r.all_passed());
    }

    #[test]
    fn scan_rows() {
        let r = scaling_scan(&[1, -1], &[40, 80], 4000).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert_eq!(r.rows[0].index, 39);
        assert_eq!(r.rows[1].index, 1);
        assert!(r.rows[1].lambda_over_n < 0.0);
        assert!(r.rows.iter().all(|row| row.tail.len() == SCAN_THETAS.len()));
        assert!(scaling_scan(&[5], &[5], 4000).is_err());
        assert!(scaling_scan(&[0], &[5], 4000).is_err());
    }
}
