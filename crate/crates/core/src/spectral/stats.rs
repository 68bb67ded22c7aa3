use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::divisor::DivisorSums;
use crate::arith::Constants;
use crate::error::{Error, Result};

/// The double sums of A(N) against f = (1/m), u = (1) and w = u − (ζ₁/ζ₂)f.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralStats {
    #[serde(rename = "N")]
    pub n: u64,
    pub zeta1: f64,
    pub zeta2: f64,
    /// Σ {N²/(mn)}/(mn).
    pub delta: f64,
    /// N^{−2} Σ {N²/(mn)}².
    pub phi: f64,
    pub trace_a: u128,
    pub trace_a2: u128,
    pub f_quadform: f64,
    pub u_quadform: u128,
    pub uf_form: f64,
    pub w_norm2: f64,
    pub w_quadform: f64,
}

#[derive(Default, Clone, Copy)]
struct RowSums {
    delta: f64,
    frac2: f64,
    trace_a2: u128,
    f_form: f64,
    u_form: u128,
    uf_form: f64,
    w_form: f64,
}

/// All statistics of A(N) by direct summation over m ≤ n, row by row.
///
/// Row partial sums are combined in index order, so the result does not
/// depend on the thread count.
pub fn compute_stats(n: u64) -> Result<SpectralStats> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let n2 = n.checked_mul(n).ok_or_else(|| Error::InvalidArgument(format!("N = {n} too large")))?;
    let zeta1: f64 = (1..=n).map(|m| 1.0 / m as f64).sum();
    let zeta2: f64 = (1..=n).map(|m| 1.0 / (m as f64 * m as f64)).sum();
    let ratio = zeta1 / zeta2;
    let w = |m: u64| 1.0 - ratio / m as f64;

    let rows: Vec<RowSums> = (1..=n)
        .into_par_iter()
        .map(|m| {
            let mut r = RowSums::default();
            for k in m..=n {
                let mk = m * k;
                let a = n2 / mk;
                let frac = (n2 % mk) as f64 / mk as f64;
                let c: u128 = if k == m { 1 } else { 2 };
                let cf = c as f64;
                let inv = 1.0 / mk as f64;
                r.delta += cf * frac * inv;
                r.frac2 += cf * frac * frac;
                r.trace_a2 += c * u128::from(a) * u128::from(a);
                r.f_form += cf * a as f64 * inv;
                r.u_form += c * u128::from(a);
                r.uf_form += a as f64 * (1.0 / m as f64 + 1.0 / k as f64) / if k == m { 2.0 } else { 1.0 };
                r.w_form += cf * a as f64 * w(m) * w(k);
            }
            r
        })
        .collect();

    let mut t = RowSums::default();
    for r in &rows {
        t.delta += r.delta;
        t.frac2 += r.frac2;
        t.trace_a2 += r.trace_a2;
        t.f_form += r.f_form;
        t.u_form += r.u_form;
        t.uf_form += r.uf_form;
        t.w_form += r.w_form;
    }
    let divisor_form = u_quadform_by_divisor_sums(n);
    if divisor_form != t.u_form {
        return Err(Error::Inconsistent(format!("uᵀAu = {} but D₁ − 2D₂ = {divisor_form}", t.u_form)));
    }
    Ok(SpectralStats {
        n,
        zeta1,
        zeta2,
        delta: t.delta,
        phi: t.frac2 / n2 as f64,
        trace_a: trace(n),
        trace_a2: t.trace_a2,
        f_quadform: t.f_form,
        u_quadform: t.u_form,
        uf_form: t.uf_form,
        w_norm2: (1..=n).map(|m| w(m) * w(m)).sum(),
        w_quadform: t.w_form,
    })
}

fn trace(n: u64) -> u128 {
    (1..=n).map(|m| u128::from(n * n / (m * m))).sum()
}

/// uᵀA(N)u = D₁ − 2D₂ with D₁ = D₃(N²) and D₂ = Σ_{N<m≤N²} D₂(N²/m).
pub fn u_quadform_by_divisor_sums(n: u64) -> u128 {
    let n2 = n * n;
    let mut sums = DivisorSums::new();
    let d1 = sums.get(3, n2);
    let mut d2 = 0u128;
    let mut lo = n + 1;
    while lo <= n2 {
        let q = n2 / lo;
        let hi = n2 / q;
        d2 += u128::from(hi - lo + 1) * sums.get(2, q);
        lo = hi + 1;
    }
    d1 - 2 * d2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    #[serde(rename = "N")]
    pub n: u64,
    pub trace_exact: u128,
    /// ζ₂N² − (α − 1)N with the partial sum ζ₂.
    pub asymptotic: f64,
    pub deviation: f64,
    /// |deviation| / N^{2/3}.
    pub normalized: f64,
}

pub fn trace_closed_form_check(n: u64) -> Result<TraceCheck> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let c = Constants::new();
    let nf = n as f64;
    let zeta2: f64 = (1..=n).map(|m| 1.0 / (m as f64 * m as f64)).sum();
    let trace_exact = trace(n);
    let asymptotic = zeta2 * nf * nf - (c.alpha - 1.0) * nf;
    let deviation = trace_exact as f64 - asymptotic;
    Ok(TraceCheck { n, trace_exact, asymptotic, deviation, normalized: deviation.abs() / nf.powf(2.0 / 3.0) })
}

/// A computed quantity next to the constant it should approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitCheck {
    #[serde(rename = "N")]
    pub n: u64,
    pub value: f64,
    pub limit: f64,
    pub gap: f64,
}

impl LimitCheck {
    fn new(n: u64, value: f64, limit: f64) -> Self {
        Self { n, value, limit, gap: (value - limit).abs() }
    }
}

/// φ(N) against β.
pub fn phi_limit_check(stats: &SpectralStats) -> LimitCheck {
    LimitCheck::new(stats.n, stats.phi, Constants::new().beta)
}

/// wᵀAw/N² against c₄.
pub fn w_form_check(stats: &SpectralStats) -> LimitCheck {
    let n2 = (stats.n * stats.n) as f64;
    LimitCheck::new(stats.n, stats.w_quadform / n2, Constants::new().c4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn small_cases() {
        let s = compute_stats(1).unwrap();
        assert_eq!((s.trace_a, s.zeta2, s.delta, s.phi), (1, 1.0, 0.0, 0.0));
        assert_eq!(s.w_norm2, 0.0);
        assert_eq!(s.w_quadform, 0.0);
        let s = compute_stats(2).unwrap();
        assert_eq!(s.trace_a, 5);
        assert_eq!(s.zeta2 * 4.0, 5.0);
        assert_eq!(s.u_quadform, 9);
        assert_eq!(u_quadform_by_divisor_sums(2), 9);
    }

    #[test]
    fn algebraic_identities() {
        for n in [10u64, 100, 1000] {
            let s = compute_stats(n).unwrap();
            let nf = n as f64;
            let t2 = s.zeta2 * s.zeta2 * nf.powi(4) + (s.phi - 2.0 * s.delta) * nf * nf;
            assert!(rel(s.trace_a2 as f64, t2) < 1e-6, "N={n}");
            assert!(rel(s.f_quadform, s.zeta2 * s.zeta2 * nf * nf - s.delta) < 1e-9, "N={n}");
            assert!(rel(s.w_norm2, nf - s.zeta1 * s.zeta1 / s.zeta2) < 1e-9, "N={n}");
            let r = s.zeta1 / s.zeta2;
            let expanded = s.u_quadform as f64 - 2.0 * r * s.uf_form + r * r * s.f_quadform;
            assert!((s.w_quadform - expanded).abs() < 1e-9 * s.u_quadform as f64, "N={n}");
            assert!(0.0 <= s.delta && s.delta < s.zeta1 * s.zeta1);
            assert!((0.0..1.0).contains(&s.phi));
        }
    }

    #[test]
    fn stats_match_brute_force() {
        let n = 30u64;
        let s = compute_stats(n).unwrap();
        let (mut uf, mut ua) = (0.0, 0u128);
        for m in 1..=n {
            for k in 1..=n {
                let a = n * n / (m * k);
                uf += a as f64 / k as f64;
                ua += u128::from(a);
            }
        }
        assert!(rel(s.uf_form, uf) < 1e-13);
        assert_eq!(s.u_quadform, ua);
    }

    #[test]
    fn trace_check() {
        assert_eq!(trace_closed_form_check(1).unwrap().trace_exact, 1);
        assert!(trace_closed_form_check(1000).unwrap().normalized < 5.0);
    }

    #[test]
    fn limits_at_moderate_n() {
        let s = compute_stats(2000).unwrap();
        assert!(phi_limit_check(&s).gap < 0.05);
        let one = compute_stats(1).unwrap();
        let p = phi_limit_check(&one);
        assert_eq!(p.value, 0.0);
        assert_eq!(p.gap, p.limit);
    }
}
