//! Decompositions of mᵀA(N)m, m = (μ(1), …, μ(N)): through the spectrum of
//! A, through the split A = N²ffᵀ − ½uuᵀ + Z, and through the truncated
//! Fourier series of ψ.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::MobiusTable;
use crate::error::{Error, Result};
use crate::spectral::{build_operator, full_spectrum, MatrixOperator, OperatorKind, SpectralResult};

/// Hard tolerance of the full-index reconstructions, relative to 1 + |mᵀAm|.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-8;

/// M(s, N) = Σ_{n≤N} μ(n) n^{−s}.
pub fn mertens_power(s: Complex64, n: u64, table: &MobiusTable) -> Result<Complex64> {
    table.check(n)?;
    Ok((1..=n).filter(|&k| table.mu(k) != 0).map(|k| f64::from(table.mu(k)) * (-s * (k as f64).ln()).exp()).sum())
}

pub fn quadform(op: &MatrixOperator, v: &[f64]) -> Result<f64> {
    op.quadform(v)
}

/// Exact vᵀAv for A_principal and integer v.
pub fn quadform_exact(op: &MatrixOperator, v: &[i64]) -> Result<i128> {
    op.quadform_exact(v)
}

fn mobius_vector(n: usize, table: &MobiusTable) -> Result<Vec<i64>> {
    table.check(n as u64)?;
    Ok((1..=n as u64).map(|k| i64::from(table.mu(k))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Eigen-expansion of mᵀAm truncated to the extreme indices.
    Spectral,
    /// The same for mᵀZm after the rank split.
    ZSpectral,
    /// mᵀAm rebuilt from N²(m·f)² − ½(m·u)² + mᵀZm.
    Ranksplit,
    Fourier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadformReport {
    #[serde(rename = "N")]
    pub n: u64,
    /// mᵀAm, exact.
    pub m_quadform: i128,
    /// M(1, N) = Σ μ(n)/n.
    #[serde(rename = "M1N")]
    pub m1n: f64,
    /// M(N).
    #[serde(rename = "MN")]
    pub mn: i64,
    pub route: Route,
    /// K for the spectral routes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    /// The route's approximation to mᵀAm/N².
    pub route_value: f64,
    pub residual_terms: BTreeMap<String, f64>,
    /// |mᵀAm/N² − route_value|.
    pub discrepancy: f64,
    /// Outcome of the route's hard assertion, when it has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_check: Option<bool>,
}

impl QuadformReport {
    pub fn passed(&self) -> bool {
        self.exact_check != Some(false)
    }
}

struct Base {
    n: u64,
    m: Vec<i64>,
    m_quadform: i128,
    m1n: f64,
    mn: i64,
}

impl Base {
    fn new(n: usize, table: &MobiusTable) -> Result<Self> {
        let m = mobius_vector(n, table)?;
        let op = build_operator(OperatorKind::APrincipal, n, 0)?;
        let m_quadform = op.quadform_exact(&m)?;
        let m1n = m.iter().enumerate().map(|(i, &x)| x as f64 / (i + 1) as f64).sum();
        let mn = m.iter().sum();
        Ok(Self { n: n as u64, m, m_quadform, m1n, mn })
    }

    fn n2(&self) -> f64 {
        (self.n * self.n) as f64
    }

    fn normalized(&self) -> f64 {
        self.m_quadform as f64 / self.n2()
    }

    fn mf(&self) -> Vec<f64> {
        self.m.iter().map(|&x| x as f64).collect()
    }

    fn report(
        &self,
        route: Route,
        k: Option<u64>,
        value: f64,
        terms: BTreeMap<String, f64>,
        check: Option<bool>,
    ) -> QuadformReport {
        QuadformReport {
            n: self.n,
            m_quadform: self.m_quadform,
            m1n: self.m1n,
            mn: self.mn,
            route,
            k,
            route_value: value,
            residual_terms: terms,
            discrepancy: (self.normalized() - value).abs(),
            exact_check: check,
        }
    }
}

/// Checks A = N²ffᵀ − ½uuᵀ + Z entrywise in rational arithmetic, with
/// {N²/(mn)} = (N² mod mn)/(mn).
pub fn ranksplit_entrywise(n: u64) -> bool {
    let n2 = i128::from(n * n);
    (1..=i128::from(n)).all(|m| {
        (m..=i128::from(n)).all(|k| {
            let mk = m * k;
            let half = Ratio::new(1, 2);
            let z = half - Ratio::new(n2 % mk, mk);
            Ratio::from_integer(n2 / mk) == Ratio::new(n2, mk) - half + z
        })
    })
}

/// mᵀAm/N² = M(1, N)² − M(N)²/(2N²) + mᵀZm/N².
pub fn ranksplit_check(n: usize, table: &MobiusTable) -> Result<QuadformReport> {
    let base = Base::new(n, table)?;
    let entrywise = ranksplit_entrywise(base.n);
    let z = build_operator(OperatorKind::Z, n, 0)?;
    let mzm = z.quadform(&base.mf())?;
    let n2 = base.n2();
    let mut terms = BTreeMap::new();
    terms.insert("m1n_squared".to_string(), base.m1n * base.m1n);
    terms.insert("mertens_term".to_string(), -((base.mn * base.mn) as f64) / (2.0 * n2));
    terms.insert("z_term".to_string(), mzm / n2);
    let value: f64 = terms.values().sum();
    let exact = base.normalized();
    let close = (value - exact).abs() <= 1e-9 * exact.abs().max(1.0);
    terms.insert("entrywise_identity".to_string(), f64::from(u8::from(entrywise)));
    Ok(base.report(Route::Ranksplit, None, value, terms, Some(entrywise && close)))
}

/// Σ_k (e_k·v)² − ‖v‖², relative to ‖v‖².
pub fn parseval_defect(spectrum: &SpectralResult, v: &[f64]) -> f64 {
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    let total: f64 = spectrum.pairs.iter().map(|p| dot(&p.vector, v).powi(2)).sum();
    (total - norm2).abs() / norm2.max(f64::MIN_POSITIVE)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Truncations of the spectral expansion of mᵀAm for each K, from a full
/// spectrum of A(N).
///
/// route_value = M(1, N)² + N^{−2} Σ λ_k (e_k·m)² over k < N with
/// min(k, N − k) < K. The remainder against the exact value is reported
/// next to the shape K^{−1/2} + N^{−1/2} log N |M(1, N)| + N^{−1} log² N;
/// only the all-index reconstruction, λ_N(e_N·m)² included, is asserted.
pub fn spectral_truncation_from(
    spectrum: &SpectralResult,
    table: &MobiusTable,
    k_list: &[u64],
) -> Result<Vec<QuadformReport>> {
    let n = spectrum.n;
    let base = Base::new(n, table)?;
    let m = base.mf();
    let n2 = base.n2();
    let proj: Vec<f64> = spectrum.pairs.iter().map(|p| p.lambda * dot(&p.vector, &m).powi(2) / n2).collect();
    let top = proj[n - 1];
    let log = (n as f64).ln();
    k_list
        .iter()
        .map(|&k| {
            let truncated: f64 = (1..n).filter(|&i| (i.min(n - i) as u64) < k).map(|i| proj[i - 1]).sum();
            let value = base.m1n * base.m1n + truncated;
            let covers_all = (1..n).all(|i| (i.min(n - i) as u64) < k);
            let reconstruction = truncated + top;
            let shape = 1.0 / (k as f64).sqrt() + log * base.m1n.abs() / (n as f64).sqrt() + log * log / n as f64;
            let mut terms = BTreeMap::new();
            terms.insert("m1n_squared".to_string(), base.m1n * base.m1n);
            terms.insert("truncated_sum".to_string(), truncated);
            terms.insert("lambda_n_term".to_string(), top);
            terms.insert("remainder".to_string(), base.normalized() - value);
            terms.insert("remainder_shape".to_string(), shape);
            terms.insert("reconstruction".to_string(), reconstruction);
            let check = covers_all.then(|| {
                (reconstruction * n2 - base.m_quadform as f64).abs()
                    <= RECONSTRUCTION_TOLERANCE * (1.0 + base.m_quadform.abs() as f64)
            });
            Ok(base.report(Route::Spectral, Some(k), value, terms, check))
        })
        .collect()
}

pub fn spectral_truncation_report(
    n: usize,
    k_list: &[u64],
    table: &MobiusTable,
    dense_cap: usize,
) -> Result<Vec<QuadformReport>> {
    let spectrum = full_spectrum(&build_operator(OperatorKind::APrincipal, n, dense_cap)?)?;
    spectral_truncation_from(&spectrum, table, k_list)
}

/// The same truncation on the spectrum of Z:
/// route_value = M(1, N)² − M(N)²/(2N²) + N^{−2} Σ λ̃_k (ẽ_k·m)² over
/// 1 ≤ k ≤ N with min(k, N + 1 − k) < K.
pub fn z_spectral_from(spectrum: &SpectralResult, table: &MobiusTable, k_list: &[u64]) -> Result<Vec<QuadformReport>> {
    let n = spectrum.n;
    let base = Base::new(n, table)?;
    let m = base.mf();
    let n2 = base.n2();
    let proj: Vec<f64> = spectrum.pairs.iter().map(|p| p.lambda * dot(&p.vector, &m).powi(2) / n2).collect();
    let lead = base.m1n * base.m1n - (base.mn * base.mn) as f64 / (2.0 * n2);
    k_list
        .iter()
        .map(|&k| {
            let sel = |i: usize| (i.min(n + 1 - i) as u64) < k;
            let truncated: f64 = (1..=n).filter(|&i| sel(i)).map(|i| proj[i - 1]).sum();
            let value = lead + truncated;
            let covers_all = (1..=n).all(sel);
            let mut terms = BTreeMap::new();
            terms.insert("m1n_squared".to_string(), base.m1n * base.m1n);
            terms.insert("mertens_term".to_string(), -((base.mn * base.mn) as f64) / (2.0 * n2));
            terms.insert("truncated_sum".to_string(), truncated);
            terms.insert("remainder".to_string(), base.normalized() - value);
            terms.insert("remainder_shape".to_string(), 1.0 / (k as f64).sqrt());
            let check = covers_all.then(|| {
                (value * n2 - base.m_quadform as f64).abs()
                    <= RECONSTRUCTION_TOLERANCE * (1.0 + base.m_quadform.abs() as f64)
            });
            Ok(base.report(Route::ZSpectral, Some(k), value, terms, check))
        })
        .collect()
}

pub fn z_spectral_report(
    n: usize,
    k_list: &[u64],
    table: &MobiusTable,
    dense_cap: usize,
) -> Result<Vec<QuadformReport>> {
    let spectrum = full_spectrum(&build_operator(OperatorKind::Z, n, dense_cap)?)?;
    z_spectral_from(&spectrum, table, k_list)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceZ2 {
    #[serde(rename = "N")]
    pub n: u64,
    /// Tr(Z²)/N².
    pub ratio: f64,
    pub c5: f64,
    pub gap: f64,
    /// Tr(Z²) ≤ N²/4.
    pub below_quarter: bool,
}

pub fn trace_z2_check(n: u64) -> Result<TraceZ2> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let n2 = n * n;
    let rows: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|m| {
            let mut acc = 0.0;
            for k in m..=n {
                let mk = m * k;
                let z = 0.5 - (n2 % mk) as f64 / mk as f64;
                acc += if k == m { z * z } else { 2.0 * z * z };
            }
            acc
        })
        .collect();
    let trace: f64 = rows.iter().sum();
    let ratio = trace / n2 as f64;
    let c5 = crate::arith::Constants::new().c5;
    Ok(TraceZ2 { n, ratio, c5, gap: (ratio - c5).abs(), below_quarter: ratio <= 0.25 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierRow {
    #[serde(rename = "H")]
    pub h: u64,
    pub eta: f64,
    /// |mᵀZm − Σ_{h≤H} mᵀZ(h)m/(πh)|.
    pub error: f64,
    /// error·H / (N² log² N · log(H + 1)); absent at N = 1.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiTruncation {
    #[serde(rename = "N")]
    pub n: u64,
    pub m_z_m: f64,
    /// mᵀZ(h)m for h = 1..max H.
    pub per_h: Vec<f64>,
    pub rows: Vec<FourierRow>,
    pub max_ratio: Option<f64>,
    /// Whether the error fell from the first to the last H listed.
    pub broadly_decreasing: bool,
}

/// Fourier truncation of ψ inside Z. Observational apart from the range
/// check H ≤ N.
pub fn fourier_truncation_report(n: usize, h_list: &[u64], table: &MobiusTable) -> Result<PsiTruncation> {
    if let Some(&bad) = h_list.iter().find(|&&h| h == 0 || h > n as u64) {
        return Err(Error::Precondition(format!("1 ≤ H ≤ N fails: H = {bad}, N = {n}")));
    }
    let m = mobius_vector(n, table)?;
    let support: Vec<usize> = (0..n).filter(|&i| m[i] != 0).collect();
    let n2 = (n * n) as u64;
    let form = |entry: &dyn Fn(u64) -> f64| -> f64 {
        let mut acc = 0.0;
        for &i in &support {
            for &j in &support {
                let mk = ((i + 1) * (j + 1)) as u64;
                acc += (m[i] * m[j]) as f64 * entry(mk);
            }
        }
        acc
    };
    let m_z_m = form(&|mk| 0.5 - (n2 % mk) as f64 / mk as f64);
    let h_max = h_list.iter().copied().max().unwrap_or(0);
    let per_h: Vec<f64> = (1..=h_max)
        .map(|h| {
            form(&|mk| {
                let r = (u128::from(h) * u128::from(n2) % u128::from(mk)) as f64;
                (2.0 * PI * r / mk as f64).sin()
            })
        })
        .collect();
    let log_n = (n as f64).ln();
    let rows: Vec<FourierRow> = h_list
        .iter()
        .map(|&h| {
            let partial: f64 = (1..=h).map(|j| per_h[j as usize - 1] / (PI * j as f64)).sum();
            let error = (m_z_m - partial).abs();
            let ratio = (n > 1).then(|| error * h as f64 / (n2 as f64 * log_n * log_n * ((h + 1) as f64).ln()));
            FourierRow { h, eta: 1.0 / h as f64, error, ratio }
        })
        .collect();
    let max_ratio = rows.iter().filter_map(|r| r.ratio).reduce(f64::max);
    let broadly_decreasing = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) => b.error <= a.error,
        _ => true,
    };
    Ok(PsiTruncation { n: n as u64, m_z_m, per_h, rows, max_ratio, broadly_decreasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_mobius;
    use crate::arith::{MultiplicativeFunctionSpec, Value};
    use crate::identity::bilinear_quadratic_form;

    fn table() -> MobiusTable {
        sieve_mobius(250_000).unwrap()
    }

    #[test]
    fn mertens_power_examples() {
        let t = table();
        assert!((mertens_power(Complex64::new(1.0, 0.0), 2, &t).unwrap().re - 0.5).abs() < 1e-15);
        assert_eq!(mertens_power(Complex64::new(0.0, 0.0), 10, &t).unwrap().re, -1.0);
        assert_eq!(mertens_power(Complex64::new(1.0, 0.0), 1, &t).unwrap().re, 1.0);
    }

    #[test]
    fn ranksplit_examples() {
        let t = table();
        let r = ranksplit_check(2, &t).unwrap();
        assert_eq!(r.m_quadform, 1);
        assert!((r.route_value - 0.25).abs() < 1e-15);
        assert_eq!(r.residual_terms["z_term"], 0.0);
        assert!(r.passed());
        let r = ranksplit_check(1, &t).unwrap();
        assert_eq!(r.m_quadform, 1);
        assert!((r.route_value - 1.0).abs() < 1e-15);
        assert!(ranksplit_check(100, &t).unwrap().passed());
    }

    #[test]
    fn entrywise_split_exact() {
        assert!((1..=60).all(ranksplit_entrywise));
    }

    #[test]
    fn quadform_agrees_with_identity_engine() {
        let t = table();
        for n in [1usize, 2, 7, 64, 300] {
            let base = Base::new(n, &t).unwrap();
            let v = bilinear_quadratic_form(&MultiplicativeFunctionSpec::Principal, n as u64, &t).unwrap();
            assert_eq!(v, Value::Integer(base.m_quadform));
        }
    }

    #[test]
    fn spectral_routes_small() {
        let t = table();
        let r = spectral_truncation_report(2, &[2], &t, 4000).unwrap();
        assert_eq!(r[0].exact_check, Some(true));
        assert!((r[0].residual_terms["reconstruction"] - 0.25).abs() < 1e-12);
        let z = z_spectral_report(2, &[2], &t, 4000).unwrap();
        assert_eq!(z[0].exact_check, Some(true));
        let z = z_spectral_report(1, &[2], &t, 4000).unwrap();
        assert_eq!(z[0].exact_check, Some(true));
        let one = full_spectrum(&build_operator(OperatorKind::Z, 1, 1).unwrap()).unwrap();
        assert_eq!(one.eigenvalues(), vec![0.5]);
    }

    #[test]
    fn spectral_routes_at_100() {
        let t = table();
        let reports = spectral_truncation_report(100, &[1, 5, 100], &t, 4000).unwrap();
        assert_eq!(reports[0].exact_check, None);
        assert_eq!(reports[2].exact_check, Some(true));
        let z = z_spectral_report(100, &[1, 51], &t, 4000).unwrap();
        assert_eq!(z[1].exact_check, Some(true));
    }

    #[test]
    fn trace_z2() {
        let r = trace_z2_check(2).unwrap();
        assert_eq!(r.ratio, 0.25);
        assert!(r.below_quarter);
        assert!(trace_z2_check(1000).unwrap().gap < 0.03);
        assert!((1..60).all(|n| trace_z2_check(n).unwrap().below_quarter));
    }

    #[test]
    fn fourier_examples() {
        let t = table();
        let r = fourier_truncation_report(2, &[1], &t).unwrap();
        assert_eq!(r.rows[0].error, 0.0);
        let r = fourier_truncation_report(1, &[1], &t).unwrap();
        assert_eq!(r.rows[0].error, 0.5);
        assert_eq!(r.rows[0].ratio, None);
        let r = fourier_truncation_report(100, &[1, 2, 4, 8, 16, 32, 64], &t).unwrap();
        assert_eq!(r.rows.len(), 7);
        assert!(r.max_ratio.unwrap().is_finite());
        assert!(fourier_truncation_report(10, &[11], &t).is_err());
    }
}
