//! ζ(σ) for real σ > 0 and the Euler–Maclaurin window θ(K, σ).

use crate::error::{Error, Result};

/// Accuracy request for [`zeta_real`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quality {
    /// Target absolute error of the returned value.
    pub tolerance: f64,
}

impl Default for Quality {
    fn default() -> Self {
        Self { tolerance: 1e-15 }
    }
}

const MAX_TERMS: usize = 80;

/// ζ(σ) for real σ > 0, σ ≠ 1.
///
/// Evaluates the alternating series η(σ) = Σ (−1)^{k}(k+1)^{−σ} with
/// Borwein's Chebyshev-weighted acceleration and returns
/// η(σ) / (1 − 2^{1−σ}). With n terms the η error is at most
/// 3 / (3 + √8)^n, so n is the smallest count that pushes that bound,
/// divided by |1 − 2^{1−σ}|, below the requested tolerance (capped at 80
/// terms, past which f64 rounding dominates).
pub fn zeta_real(sigma: f64, quality: Quality) -> Result<f64> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidArgument(format!("ζ(σ) needs σ > 0, got {sigma}")));
    }
    if sigma == 1.0 {
        return Err(Error::InvalidArgument("ζ has a pole at σ = 1".into()));
    }
    let factor = 1.0 - 2f64.powf(1.0 - sigma);
    let rate = (3.0 + 8f64.sqrt()).ln();
    let tol = quality.tolerance.max(f64::MIN_POSITIVE);
    let needed = ((3.0 / (tol * factor.abs())).ln() / rate).ceil();
    let n = if needed.is_finite() { (needed.max(8.0) as usize).min(MAX_TERMS) } else { MAX_TERMS };
    Ok(eta_borwein(sigma, n) / factor)
}

/// Borwein's algorithm 2 for η(s), s real.
fn eta_borwein(s: f64, n: usize) -> f64 {
    // d_k = n Σ_{i=0}^{k} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / n as f64; // i = 0 term divided by n
    let mut acc = term;
    d.push(acc);
    for i in 1..=n {
        let i_f = i as f64;
        let n_f = n as f64;
        term *= (n_f + i_f - 1.0) * (n_f - i_f + 1.0) * 4.0 / ((2.0 * i_f - 1.0) * (2.0 * i_f));
        acc += term;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = 0.0;
    for k in (0..n).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (d[k] - dn) / ((k + 1) as f64).powf(s);
    }
    -sum / dn
}

/// θ(K, σ) = K^σ (Σ_{ℓ≤K} ℓ^{−σ} − K^{1−σ}/(1−σ) − ζ(σ)), returned with
/// ζ(σ). For σ > 0 this lies strictly between 0 and 1.
pub fn zeta_partial_window(k: u64, sigma: f64) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be positive".into()));
    }
    let z = zeta_real(sigma, Quality::default())?;
    let kf = k as f64;
    // Summed from the small terms up.
    if let Some(theta) = window_series(kf, sigma) {
        return Ok((theta, z));
    }
    let partial: f64 = (1..=k).rev().map(|l| (l as f64).powf(-sigma)).sum();
    let theta = kf.powf(sigma) * (partial - kf.powf(1.0 - sigma) / (1.0 - sigma) - z);
    Ok((theta, z))
}

/// B₂, B₄, …, B₂₀.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// θ = ½ − Σ_j B₂ⱼ/(2j)! · σ(σ+1)…(σ+2j−2) / K^{2j−1}, the Euler–Maclaurin
/// expansion of the window. The direct form multiplies a difference of
/// nearly equal numbers by K^σ and loses every digit once K^σ ≳ 10¹⁶; this
/// one does not. `None` when the asymptotic series has not settled below
/// 1e−17 by its tenth term.
fn window_series(k: f64, sigma: f64) -> Option<f64> {
    let mut theta = 0.5;
    // coefficient (σ)_{2j−1} / ((2j)! K^{2j−1}) built up incrementally
    let mut c = sigma / (2.0 * k);
    for (j, b) in BERNOULLI.iter().enumerate() {
        let term = b * c;
        theta -= term;
        if term.abs() < 1e-17 {
            return Some(theta);
        }
        let m = 2.0 * j as f64 + 2.0;
        c *= (sigma + m - 1.0) * (sigma + m) / ((m + 1.0) * (m + 2.0) * k * k);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Independent route: direct partial sum to M plus the Euler–Maclaurin
    /// tail M^{1−σ}/(σ−1) − M^{−σ}/2 + σ M^{−σ−1}/12 − σ(σ+1)(σ+2) M^{−σ−3}/720.
    fn zeta_euler_maclaurin(sigma: f64, m: u64) -> f64 {
        let head: f64 = (1..m).rev().map(|k| (k as f64).powf(-sigma)).sum();
        let mf = m as f64;
        head + mf.powf(1.0 - sigma) / (sigma - 1.0) + 0.5 * mf.powf(-sigma) + sigma * mf.powf(-sigma - 1.0) / 12.0
            - sigma * (sigma + 1.0) * (sigma + 2.0) * mf.powf(-sigma - 3.0) / 720.0
    }

    #[test]
    fn known_values() {
        let q = Quality::default();
        assert!((zeta_real(2.0, q).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta_real(4.0, q).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((zeta_real(0.5, q).unwrap() + 1.4603545088095868).abs() < 1e-12);
    }

    #[test]
    fn sigma_four_against_independent_series() {
        let oracle = zeta_euler_maclaurin(4.0, 1000);
        assert!((zeta_real(4.0, Quality::default()).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_euler_maclaurin_on_a_grid() {
        for &s in &[0.25, 0.5, 0.75, 1.5, 2.5, 3.0, 7.0] {
            let a = zeta_real(s, Quality::default()).unwrap();
            let b = zeta_euler_maclaurin(s, 2000);
            assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()), "σ={s}: {a} vs {b}");
        }
    }

    #[test]
    fn pole_and_domain() {
        assert!(zeta_real(1.0, Quality::default()).is_err());
        assert!(zeta_real(0.0, Quality::default()).is_err());
        assert!(zeta_real(-1.0, Quality::default()).is_err());
        assert!(zeta_partial_window(5, 1.0).is_err());
    }

    #[test]
    fn window_examples() {
        let (theta, z) = zeta_partial_window(1, 2.0).unwrap();
        assert!((theta - (2.0 - PI * PI / 6.0)).abs() < 1e-14);
        assert!((z - PI * PI / 6.0).abs() < 1e-14);
        for (k, s) in [(100, 0.5), (10, 3.0)] {
            let (theta, _) = zeta_partial_window(k, s).unwrap();
            assert!(theta > 0.0 && theta < 1.0, "K={k} σ={s}: θ={theta}");
        }
    }

    #[test]
    fn series_agrees_with_direct_form() {
        for k in [30u64, 60, 100] {
            for &s in &[0.25, 0.5, 1.5, 3.0] {
                let kf = k as f64;
                let partial: f64 = (1..=k).rev().map(|l| (l as f64).powf(-s)).sum();
                let z = zeta_real(s, Quality::default()).unwrap();
                let direct = kf.powf(s) * (partial - kf.powf(1.0 - s) / (1.0 - s) - z);
                let series = window_series(kf, s).unwrap();
                assert!((direct - series).abs() < 1e-9, "K={k} σ={s}: {direct} vs {series}");
            }
        }
        assert!(window_series(1.0, 2.0).is_none());
        let (theta, _) = zeta_partial_window(526, 5.744942660076016).unwrap();
        assert!((theta - 0.5).abs() < 0.01);
    }

    #[test]
    fn window_in_unit_interval_on_grid() {
        for k in 1..=100 {
            for &s in &[0.25, 0.5, 0.75, 1.5, 2.0, 3.0] {
                let (theta, _) = zeta_partial_window(k, s).unwrap();
                assert!(theta > 0.0 && theta < 1.0, "K={k} σ={s}: θ={theta}");
            }
        }
    }
}
