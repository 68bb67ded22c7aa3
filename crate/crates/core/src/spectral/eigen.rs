use serde::{Deserialize, Serialize};

use super::operator::{dot, norm, MatrixOperator};
use crate::error::{Error, Result};

/// Default relative residual target of [`extreme_eigenpairs`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 5000;
const JACOBI_MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMode {
    Full,
    Extreme,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// Position k in λ₁ ≤ … ≤ λ_N, from 1.
    pub index: usize,
    pub lambda: f64,
    /// Unit vector, largest-magnitude component positive.
    pub vector: Vec<f64>,
    /// ‖Av − λv‖.
    pub residual: f64,
}

/// One CSV row of a spectrum dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub lambda: f64,
    pub residual: f64,
}

/// Eigenpairs in ascending order: all N of them in full mode, (λ₁, λ_N)
/// in extreme mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub n: usize,
    pub mode: SpectrumMode,
    pub pairs: Vec<EigenPair>,
}

impl SpectralResult {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    pub fn lowest(&self) -> &EigenPair {
        &self.pairs[0]
    }

    pub fn highest(&self) -> &EigenPair {
        self.pairs.last().expect("at least one pair")
    }

    /// The pair with index k, if computed.
    pub fn pair(&self, k: usize) -> Option<&EigenPair> {
        self.pairs.iter().find(|p| p.index == k)
    }

    pub fn rows(&self) -> Vec<SpectrumRow> {
        self.pairs
            .iter()
            .map(|p| SpectrumRow { n: self.n, k: p.index, lambda: p.lambda, residual: p.residual })
            .collect()
    }

    /// max over pairs of ‖Av − λv‖ / (1 + |λ|).
    pub fn worst_residual(&self) -> f64 {
        self.pairs.iter().map(|p| p.residual / (1.0 + p.lambda.abs())).fold(0.0, f64::max)
    }

    /// max |e_i · e_j| over i ≠ j.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.pairs.iter().enumerate() {
            for b in &self.pairs[i + 1..] {
                worst = worst.max(dot(&a.vector, &b.vector).abs());
            }
        }
        worst
    }
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let s = norm(v);
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
    s
}

fn project_out(v: &mut [f64], e: &[f64]) {
    let c = dot(v, e);
    v.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
}

fn finish(op: &MatrixOperator, index: usize, mut vector: Vec<f64>) -> Result<EigenPair> {
    fix_sign(&mut vector);
    let av = op.matvec(&vector)?;
    let lambda = dot(&vector, &av);
    let residual = av.iter().zip(&vector).map(|(a, v)| (a - lambda * v).powi(2)).sum::<f64>().sqrt();
    Ok(EigenPair { index, lambda, vector, residual })
}

struct Power<'a> {
    op: &'a MatrixOperator,
    deflate: Option<&'a [f64]>,
    shift: f64,
    tol: f64,
    max_iter: usize,
    what: &'static str,
}

impl Power<'_> {
    /// Dominant eigenpair of P(A − shift·I)P, P the projector off `deflate`.
    /// Returns (eigenvalue of A, vector).
    fn run(&self, mut v: Vec<f64>, polish: usize) -> Result<(f64, Vec<f64>)> {
        let mut residual = f64::INFINITY;
        let mut extra = 0;
        for _ in 0..self.max_iter {
            if let Some(e) = self.deflate {
                project_out(&mut v, e);
            }
            if normalize(&mut v) == 0.0 {
                return Err(Error::Inconsistent(format!("{}: seed vanished after deflation", self.what)));
            }
            let mut y = self.op.matvec(&v)?;
            if let Some(e) = self.deflate {
                project_out(&mut y, e);
            }
            y.iter_mut().zip(&v).for_each(|(a, b)| *a -= self.shift * b);
            let rho = dot(&v, &y);
            residual = y.iter().zip(&v).map(|(a, b)| (a - rho * b).powi(2)).sum::<f64>().sqrt();
            let lambda = rho + self.shift;
            if residual <= self.tol * (1.0 + lambda.abs()) {
                if extra >= polish || norm(&y) == 0.0 {
                    return Ok((lambda, v));
                }
                extra += 1;
            }
            if norm(&y) == 0.0 {
                return Ok((lambda, v));
            }
            v = y;
        }
        Err(Error::NoConvergence { what: self.what, iterations: self.max_iter, residual })
    }
}

/// (λ₁, e₁) and (λ_N, e_N) by power iteration.
///
/// λ_N is found from the seed f̂ = f/‖f‖. The iteration is then repeated on
/// A − λ_N e_N e_Nᵀ from w = u − (ζ₁/ζ₂)f, projecting out e_N at every step.
/// When the dominant remaining eigenvalue μ turns out positive, a further
/// run on the deflated A − μI isolates the most negative one. Eigenvalues
/// are Rayleigh quotients of A.
pub fn extreme_eigenpairs(op: &MatrixOperator, tol: f64, max_iter: usize) -> Result<SpectralResult> {
    let n = op.n();
    let f: Vec<f64> = (1..=n).map(|m| 1.0 / m as f64).collect();
    let mut top = Power { op, deflate: None, shift: 0.0, tol, max_iter, what: "largest eigenvalue" };
    let (_, e_top) = top.run(f.clone(), 3)?;
    let high = finish(op, n, e_top)?;
    if n == 1 {
        let low = EigenPair { index: 1, ..high.clone() };
        return Ok(SpectralResult { n, mode: SpectrumMode::Extreme, pairs: vec![low] });
    }

    let zeta1: f64 = f.iter().sum();
    let zeta2: f64 = f.iter().map(|x| x * x).sum();
    let mut seed: Vec<f64> = f.iter().map(|x| 1.0 - zeta1 / zeta2 * x).collect();
    // A seed parallel to e_N (only possible for tiny N) is replaced by a
    // coordinate vector.
    project_out(&mut seed, &high.vector);
    if norm(&seed) < 1e-8 {
        seed = (0..n).map(|i| if i == n - 1 { 1.0 } else { 0.0 }).collect();
    }
    top.deflate = Some(&high.vector);
    top.what = "smallest eigenvalue";
    let (mu, v) = top.run(seed.clone(), 0)?;
    let v = if mu > 0.0 {
        let shifted = Power { shift: mu, ..top };
        shifted.run(seed, 0)?.1
    } else {
        v
    };
    let mut low = finish(op, 1, v)?;
    low.index = 1;
    Ok(SpectralResult { n, mode: SpectrumMode::Extreme, pairs: vec![low, high] })
}

/// Jacobi rotations in parallel (round-robin) order until the off-diagonal
/// Frobenius norm drops below 1e−12‖A‖_F.
///
/// Each round applies N/2 disjoint rotations: first to rows, then to
/// columns, both passes walking memory row by row.
pub fn full_spectrum(op: &MatrixOperator) -> Result<SpectralResult> {
    if !op.is_dense() {
        return Err(Error::InvalidArgument(format!(
            "full spectrum needs dense storage; N = {} is above the dense cap",
            op.n()
        )));
    }
    let n = op.n();
    let mut a = op.to_dense();
    let (values, vectors) = jacobi(&mut a, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut pairs =
        order.into_iter().map(|i| finish(op, 0, vectors[i * n..(i + 1) * n].to_vec())).collect::<Result<Vec<_>>>()?;
    // Rayleigh quotients can swap near-equal neighbours.
    pairs.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    for (k, p) in pairs.iter_mut().enumerate() {
        p.index = k + 1;
    }
    Ok(SpectralResult { n, mode: SpectrumMode::Full, pairs })
}

/// Diagonalizes the row-major symmetric `a` in place. Returns the diagonal
/// and the eigenvectors as rows.
fn jacobi(a: &mut [f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        w[i * n + i] = 1.0;
    }
    let total = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-12 * total;
    let skip = 1e-14 * total / n as f64;
    let off = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    // Round-robin schedule over an even number of slots; slot n is a bye.
    let slots = n + n % 2;
    let mut ring: Vec<usize> = (0..slots).collect();
    let mut rot: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(slots / 2);
    let mut residual = off(a);
    for _ in 0..JACOBI_MAX_SWEEPS {
        if residual <= target {
            let diag = (0..n).map(|i| a[i * n + i]).collect();
            return Ok((diag, w));
        }
        for _ in 0..slots.saturating_sub(1) {
            rot.clear();
            for k in 0..slots / 2 {
                let (p, q) = (ring[k].min(ring[slots - 1 - k]), ring[k].max(ring[slots - 1 - k]));
                if q >= n {
                    continue;
                }
                let apq = a[p * n + q];
                if apq.abs() <= skip {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                rot.push((p, q, c, t * c));
            }
            for &(p, q, c, s) in &rot {
                rotate_rows(a, n, p, q, c, s);
                rotate_rows(&mut w, n, p, q, c, s);
            }
            for row in a.chunks_exact_mut(n) {
                for &(p, q, c, s) in &rot {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
            for &(p, q, _, _) in &rot {
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
            ring[1..].rotate_right(1);
        }
        residual = off(a);
    }
    Err(Error::NoConvergence { what: "Jacobi sweeps", iterations: JACOBI_MAX_SWEEPS, residual })
}

fn rotate_rows(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = a.split_at_mut(q * n);
    let rp = &mut head[p * n..(p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (u, v) = (*x, *y);
        *x = c * u - s * v;
        *y = s * u + c * v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::operator::{build_operator, OperatorKind};
    use crate::spectral::stats::compute_stats;

    fn op(kind: OperatorKind, n: usize) -> MatrixOperator {
        build_operator(kind, n, 4000).unwrap()
    }

    #[test]
    fn tiny_full_spectra() {
        let s = full_spectrum(&op(OperatorKind::APrincipal, 2)).unwrap();
        let ev = s.eigenvalues();
        assert!(ev[0].abs() < 1e-12 && (ev[1] - 5.0).abs() < 1e-12);
        let s = full_spectrum(&op(OperatorKind::Z, 2)).unwrap();
        let ev = s.eigenvalues();
        assert!(ev[0].abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
        let s = full_spectrum(&op(OperatorKind::APrincipal, 1)).unwrap();
        assert_eq!(s.eigenvalues(), vec![1.0]);
        let free = build_operator(OperatorKind::APrincipal, 5, 2).unwrap();
        assert!(full_spectrum(&free).is_err());
    }

    #[test]
    fn tiny_extremes() {
        let s = extreme_eigenpairs(&op(OperatorKind::APrincipal, 2), 1e-12, 100).unwrap();
        assert!((s.highest().lambda - 5.0).abs() < 1e-10);
        assert!(s.lowest().lambda.abs() < 1e-10);
        let s = extreme_eigenpairs(&op(OperatorKind::APrincipal, 1), 1e-12, 100).unwrap();
        assert_eq!(s.pairs.len(), 1);
        assert_eq!((s.lowest().lambda, s.highest().lambda), (1.0, 1.0));
    }

    #[test]
    fn full_spectrum_invariants() {
        for n in [3usize, 10, 57, 200] {
            let a = op(OperatorKind::APrincipal, n);
            let s = full_spectrum(&a).unwrap();
            let st = compute_stats(n as u64).unwrap();
            assert!(s.worst_residual() <= 1e-8, "N={n} residual {}", s.worst_residual());
            assert!(s.orthogonality_defect() <= 1e-8);
            let tr: f64 = s.eigenvalues().iter().sum();
            let tr2: f64 = s.eigenvalues().iter().map(|x| x * x).sum();
            assert!((tr - st.trace_a as f64).abs() <= 1e-6 * st.trace_a as f64);
            assert!((tr2 - st.trace_a2 as f64).abs() <= 1e-6 * st.trace_a2 as f64);
            assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
            let top = s.highest().lambda;
            assert!(top < st.zeta2 * (n * n) as f64 + 0.5 / st.zeta2);
        }
    }

    #[test]
    fn power_matches_jacobi() {
        for n in [50usize, 200] {
            let a = op(OperatorKind::APrincipal, n);
            let full = full_spectrum(&a).unwrap();
            let ext = extreme_eigenpairs(&a, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER).unwrap();
            let (h, l) = (full.highest().lambda, full.lowest().lambda);
            assert!((ext.highest().lambda - h).abs() <= 1e-6 * h);
            assert!((ext.lowest().lambda - l).abs() <= 1e-6 * l.abs(), "{} {l}", ext.lowest().lambda);
            assert!(ext.worst_residual() <= 1e-8);
            let d: f64 = ext.highest().vector.iter().zip(&full.highest().vector).map(|(x, y)| (x - y).abs()).sum();
            assert!(d < 1e-6);
        }
    }

    #[test]
    fn small_n_extremes_match_full() {
        for n in 2..=12 {
            let a = op(OperatorKind::APrincipal, n);
            let full = full_spectrum(&a).unwrap();
            let ext = extreme_eigenpairs(&a, 1e-11, 100_000).unwrap();
            assert!((ext.lowest().lambda - full.lowest().lambda).abs() < 1e-6, "N={n}");
        }
    }

    #[test]
    fn sign_convention() {
        let s = full_spectrum(&op(OperatorKind::APrincipal, 30)).unwrap();
        for p in &s.pairs {
            let big = p.vector.iter().cloned().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(big > 0.0);
        }
    }
}
