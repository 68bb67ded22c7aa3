use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{MultiplicativeFunctionSpec, Tabulated};
use crate::error::{Error, Result};

/// Default largest N stored densely (about 128 MB of f64 at N = 4000).
pub const DEFAULT_DENSE_CAP: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorKind {
    /// ⌊N²/(mn)⌋.
    APrincipal,
    /// Σ_{k ≤ N²/(mn)} g(k) for a real-valued g.
    AGeneral { g: MultiplicativeFunctionSpec },
    /// −ψ(N²/(mn)) = ½ − {N²/(mn)}.
    Z,
    /// sin(2πhN²/(mn)).
    ZFourier { h: u64 },
}

#[derive(Debug, Clone)]
enum Storage {
    Dense(Vec<f64>),
    MatrixFree,
}

/// A symmetric N×N matrix indexed from 1, stored densely or generated on
/// demand.
#[derive(Debug, Clone)]
pub struct MatrixOperator {
    n: usize,
    kind: OperatorKind,
    weights: Option<Tabulated<Complex64>>,
    storage: Storage,
}

pub fn build_operator(kind: OperatorKind, n: usize, dense_cap: usize) -> Result<MatrixOperator> {
    MatrixOperator::new(kind, n, dense_cap)
}

impl MatrixOperator {
    pub fn new(kind: OperatorKind, n: usize, dense_cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        let weights = match &kind {
            OperatorKind::AGeneral { g } => {
                if !g.is_real() {
                    return Err(Error::InvalidArgument(format!("A(g, N) needs a real g, got {g}")));
                }
                Some(g.tabulate_complex((n * n) as u64)?)
            }
            OperatorKind::ZFourier { h: 0 } => {
                return Err(Error::InvalidArgument("Fourier mode h must be positive".into()));
            }
            _ => None,
        };
        let mut op = Self { n, kind, weights, storage: Storage::MatrixFree };
        if n <= dense_cap {
            let mut dense = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let v = op.entry(i + 1, j + 1);
                    dense[i * n + j] = v;
                    dense[j * n + i] = v;
                }
            }
            op.storage = Storage::Dense(dense);
        }
        Ok(op)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    fn n2(&self) -> u64 {
        (self.n * self.n) as u64
    }

    /// The (m, n) entry from its defining rule, 1 ≤ m, n ≤ N.
    pub fn entry(&self, m: usize, n: usize) -> f64 {
        let mn = (m * n) as u64;
        match &self.kind {
            OperatorKind::APrincipal => (self.n2() / mn) as f64,
            OperatorKind::AGeneral { .. } => self.weights.as_ref().expect("tabulated").partial(self.n2() / mn).re,
            OperatorKind::Z => 0.5 - (self.n2() % mn) as f64 / mn as f64,
            OperatorKind::ZFourier { h } => {
                let r = (u128::from(*h) * u128::from(self.n2()) % u128::from(mn)) as f64;
                (2.0 * PI * r / mn as f64).sin()
            }
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Dense(d) => d.clone(),
            Storage::MatrixFree => {
                let n = self.n;
                let mut d = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        d[i * n + j] = self.entry(i + 1, j + 1);
                    }
                }
                d
            }
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: len });
        }
        Ok(())
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v.len())?;
        let n = self.n;
        Ok(match (&self.storage, &self.kind) {
            (Storage::Dense(d), _) => d.chunks_exact(n).map(|row| dot(row, v)).collect(),
            (Storage::MatrixFree, OperatorKind::APrincipal) => floor_matvec_f64(n, v),
            (Storage::MatrixFree, _) => (1..=n).map(|m| (1..=n).map(|j| self.entry(m, j) * v[j - 1]).sum()).collect(),
        })
    }

    /// Exact product with an integer vector; A_principal only.
    pub fn matvec_exact(&self, v: &[i64]) -> Result<Vec<i128>> {
        self.check_len(v.len())?;
        if self.kind != OperatorKind::APrincipal {
            return Err(Error::InvalidArgument("exact products need integer entries (A_principal)".into()));
        }
        let n = self.n;
        Ok(match &self.storage {
            Storage::Dense(d) => {
                d.chunks_exact(n).map(|row| row.iter().zip(v).map(|(&a, &x)| a as i128 * i128::from(x)).sum()).collect()
            }
            Storage::MatrixFree => floor_matvec_exact(n, v),
        })
    }

    pub fn quadform(&self, v: &[f64]) -> Result<f64> {
        Ok(dot(v, &self.matvec(v)?))
    }

    /// vᵀAv in exact integer arithmetic; A_principal only.
    pub fn quadform_exact(&self, v: &[i64]) -> Result<i128> {
        let av = self.matvec_exact(v)?;
        Ok(v.iter().zip(&av).map(|(&x, &y)| i128::from(x) * y).sum())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Double-double value hi + lo.
#[derive(Clone, Copy, Default)]
struct Dd(f64, f64);

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    fn add(self, x: f64) -> Dd {
        let (s, e) = two_sum(self.0, x);
        let (hi, lo) = two_sum(s, e + self.1);
        Dd(hi, lo)
    }

    fn sub(self, o: Dd) -> f64 {
        let (s, e) = two_sum(self.0, -o.0);
        s + (e + (self.1 - o.1))
    }
}

/// Row m of A(N)v is Σ_n ⌊X/n⌋v_n with X = ⌊N²/m⌋. Columns n ≤ √X are
/// taken one by one, the rest in runs of equal quotient through prefix
/// sums of v, for O(N^{3/2}) work overall.
fn floor_matvec_f64(n: usize, v: &[f64]) -> Vec<f64> {
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = Dd::default();
    prefix.push(acc);
    for &x in v {
        acc = acc.add(x);
        prefix.push(acc);
    }
    let n2 = (n * n) as u64;
    (1..=n as u64)
        .map(|m| {
            let x = n2 / m;
            let direct = (x as f64).sqrt() as u64;
            let direct = direct.min(n as u64);
            let mut row = 0.0;
            for j in 1..=direct {
                row += (x / j) as f64 * v[j as usize - 1];
            }
            let mut lo = direct + 1;
            while lo <= n as u64 {
                let q = x / lo;
                let hi = (x / q).min(n as u64);
                row += q as f64 * prefix[hi as usize].sub(prefix[lo as usize - 1]);
                lo = hi + 1;
            }
            row
        })
        .collect()
}

fn floor_matvec_exact(n: usize, v: &[i64]) -> Vec<i128> {
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = 0i128;
    prefix.push(acc);
    for &x in v {
        acc += i128::from(x);
        prefix.push(acc);
    }
    let n2 = (n * n) as u64;
    (1..=n as u64)
        .map(|m| {
            let x = n2 / m;
            let mut row = 0i128;
            let mut lo = 1u64;
            while lo <= n as u64 {
                let q = x / lo;
                let hi = (x / q).min(n as u64);
                row += i128::from(q) * (prefix[hi as usize] - prefix[lo as usize - 1]);
                lo = hi + 1;
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_of(kind: OperatorKind, n: usize) -> Vec<f64> {
        build_operator(kind, n, DEFAULT_DENSE_CAP).unwrap().to_dense()
    }

    #[test]
    fn examples() {
        assert_eq!(dense_of(OperatorKind::APrincipal, 2), vec![4.0, 2.0, 2.0, 1.0]);
        assert_eq!(dense_of(OperatorKind::Z, 2), vec![0.5; 4]);
        assert_eq!(&dense_of(OperatorKind::APrincipal, 3)[..3], &[9.0, 4.0, 3.0]);
        assert!(build_operator(OperatorKind::APrincipal, 0, 10).is_err());
    }

    #[test]
    fn entry_ranges_and_symmetry() {
        for kind in [OperatorKind::APrincipal, OperatorKind::Z, OperatorKind::ZFourier { h: 3 }] {
            let op = build_operator(kind.clone(), 37, 100).unwrap();
            for m in 1..=37 {
                for n in 1..=37 {
                    let e = op.entry(m, n);
                    assert_eq!(e, op.entry(n, m));
                    match kind {
                        OperatorKind::Z => assert!((-0.5..=0.5).contains(&e) && e > -0.5),
                        OperatorKind::ZFourier { .. } => assert!(e.abs() <= 1.0),
                        _ => assert!(e >= 1.0),
                    }
                }
            }
        }
    }

    #[test]
    fn general_principal_matches_floor() {
        let g = MultiplicativeFunctionSpec::Principal;
        let a = dense_of(OperatorKind::AGeneral { g }, 20);
        assert_eq!(a, dense_of(OperatorKind::APrincipal, 20));
        let l = dense_of(OperatorKind::AGeneral { g: MultiplicativeFunctionSpec::Liouville }, 3);
        // Σ_{k≤9} λ(k) = 1 −1 −1 +1 −1 +1 −1 −1 +1 = −1
        assert_eq!(l[0], -1.0);
        let complex = MultiplicativeFunctionSpec::complex_power(Complex64::new(0.5, 1.0));
        assert!(build_operator(OperatorKind::AGeneral { g: complex }, 3, 10).is_err());
    }

    #[test]
    fn dense_and_matrix_free_agree_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 17, 120, 500] {
            let dense = build_operator(OperatorKind::APrincipal, n, n).unwrap();
            let free = build_operator(OperatorKind::APrincipal, n, 0).unwrap();
            assert!(dense.is_dense() && !free.is_dense());
            for _ in 0..20 {
                let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-50..=50)).collect();
                assert_eq!(dense.matvec_exact(&v).unwrap(), free.matvec_exact(&v).unwrap());
                let vf: Vec<f64> = v.iter().map(|&x| x as f64).collect();
                assert_eq!(dense.matvec(&vf).unwrap(), free.matvec(&vf).unwrap());
            }
        }
    }

    #[test]
    fn matrix_free_float_product_is_accurate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 300;
        let dense = build_operator(OperatorKind::APrincipal, n, n).unwrap();
        let free = build_operator(OperatorKind::APrincipal, n, 0).unwrap();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = dense.matvec(&v).unwrap();
        let b = free.matvec(&v).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "{x} {y}");
        }
        let z = build_operator(OperatorKind::Z, 40, 0).unwrap();
        let zd = build_operator(OperatorKind::Z, 40, 40).unwrap();
        let v = vec![1.0; 40];
        assert_eq!(z.matvec(&v).unwrap(), zd.matvec(&v).unwrap());
    }

    #[test]
    fn quadforms() {
        let a = build_operator(OperatorKind::APrincipal, 2, 10).unwrap();
        assert_eq!(a.quadform_exact(&[1, -1]).unwrap(), 1);
        assert_eq!(a.quadform_exact(&[0, 0]).unwrap(), 0);
        let z = build_operator(OperatorKind::Z, 2, 10).unwrap();
        assert_eq!(z.quadform(&[1.0, -1.0]).unwrap(), 0.0);
        assert!(z.quadform_exact(&[1, -1]).is_err());
        assert!(matches!(a.matvec(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
    }
}
