//! Acceptance criteria 1–14. Each test writes one `criterion N: PASS|FAIL`
//! line to stderr; `--test-threads=1` keeps them in order.

use std::io::Write;
use std::sync::OnceLock;

use mertens_lab::arith::{sieve_mobius, Constants, MobiusTable, MultiplicativeFunctionSpec, Value};
use mertens_lab::cardinal::cardinal_report;
use mertens_lab::identity::{
    meissel_sum, mertens_via_bilinear, mertens_via_flexible, mertens_via_uniform, term_count_survey,
};
use mertens_lab::quadform::{
    parseval_defect, ranksplit_entrywise, spectral_truncation_from, trace_z2_check, z_spectral_from,
};
use mertens_lab::spectral::{
    bounds_report, build_operator, compute_stats, extreme_eigenpairs, full_spectrum, phi_limit_check,
    trace_closed_form_check, w_form_check, OperatorKind, SpectralResult, SpectralStats, DEFAULT_MAX_ITER,
    DEFAULT_TOLERANCE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;

fn table() -> &'static MobiusTable {
    static T: OnceLock<MobiusTable> = OnceLock::new();
    T.get_or_init(|| sieve_mobius(100_000).unwrap())
}

struct Solved {
    stats: SpectralStats,
    spectrum: SpectralResult,
}

fn solved(n: usize) -> &'static Solved {
    static CACHE: [OnceLock<Solved>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match n {
        100 => 0,
        500 => 1,
        1000 => 2,
        _ => panic!("no cache slot for N = {n}"),
    };
    CACHE[slot].get_or_init(|| {
        let op = build_operator(OperatorKind::APrincipal, n, 4000).unwrap();
        Solved { stats: compute_stats(n as u64).unwrap(), spectrum: full_spectrum(&op).unwrap() }
    })
}

fn verdict(id: u32, ok: bool, detail: String) {
    // Straight to the stderr handle so the line survives the harness's output capture.
    let line = format!("criterion {id}: {} ({detail})\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {id} failed: {detail}");
}

fn principal() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::Principal
}

#[test]
fn criterion_01_bilinear_exact() {
    let t = table();
    let bad: Vec<u64> = (1..=200u64)
        .filter(|&n| {
            let r = mertens_via_bilinear(&principal(), n, t).unwrap();
            r.value_identity != Value::Integer(i128::from(t.mertens(n * n)))
        })
        .collect();
    verdict(1, bad.is_empty(), format!("N = 1..200, mismatches {bad:?}"));
}

#[test]
fn criterion_02_uniform_exact() {
    let t = table();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut bad = Vec::new();
    for d in 2..=4u32 {
        for _ in 0..50 {
            let k: u64 = rng.gen_range(1..=100_000);
            // smallest N with (N + 1)^d > K
            let mut lo = (k as f64).powf(1.0 / f64::from(d)) as u64;
            while (lo + 1).pow(d) <= k {
                lo += 1;
            }
            while lo > 1 && lo.pow(d) > k {
                lo -= 1;
            }
            let lo = lo.max(1).min(k);
            let n = rng.gen_range(lo..=k);
            let r = mertens_via_uniform(&principal(), d, k, n, t).unwrap();
            if r.value_identity != Value::Integer(i128::from(t.mertens(k))) {
                bad.push((d, k, n));
            }
        }
    }
    verdict(2, bad.is_empty(), format!("150 instances, mismatches {bad:?}"));
}

#[test]
fn criterion_03_flexible_exact() {
    let t = table();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut bad = Vec::new();
    let mut done = 0;
    while done < 200 {
        let d = rng.gen_range(2..=4usize);
        let k: u64 = rng.gen_range(1..=100_000);
        let ranges: Vec<u64> =
            (0..d).map(|_| (k as f64).powf(rng.gen_range(0.0..1.0)).round().max(1.0) as u64).collect();
        let prod = ranges.iter().fold(1u128, |a, &r| a.saturating_mul(u128::from(r) + 1));
        if prod <= u128::from(k) {
            continue;
        }
        done += 1;
        let r = mertens_via_flexible(&principal(), k, &ranges, t).unwrap();
        if r.value_identity != Value::Integer(i128::from(t.mertens(k))) {
            bad.push((k, ranges));
        }
    }
    let mut special = Vec::new();
    for g in [principal(), MultiplicativeFunctionSpec::Liouville] {
        for n in 1..=50u64 {
            let a = mertens_via_flexible(&g, n * n, &[n, n], t).unwrap();
            let b = mertens_via_bilinear(&g, n, t).unwrap();
            if a.value_identity != b.value_identity {
                special.push((g.clone(), n));
            }
        }
    }
    verdict(
        3,
        bad.is_empty() && special.is_empty(),
        format!("200 instances, mismatches {bad:?}; [N, N] specialization mismatches {special:?}"),
    );
}

#[test]
fn criterion_04_meissel() {
    let t = table();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut bad = Vec::new();
    for _ in 0..10_000 {
        // (0, 10⁴]: 1 − U with U in [0, 1) lands in (0, 1].
        let x = 10_000.0 * (1.0 - rng.gen::<f64>());
        let expected = i64::from(x >= 1.0);
        if meissel_sum(x, t).unwrap() != expected {
            bad.push(x);
        }
    }
    let small = meissel_sum(0.5, t).unwrap() == 0;
    verdict(4, bad.is_empty() && small, format!("10⁴ seeded x, mismatches {}", bad.len()));
}

#[test]
fn criterion_05_cardinal() {
    let t = table();
    let bad: Vec<u64> = (1..=2500u64).filter(|&n| !cardinal_report(n, t).unwrap().passed()).collect();
    verdict(5, bad.is_empty(), format!("n = 1..2500, failures {bad:?}"));
}

#[test]
fn criterion_06_lambda1_at_10321() {
    let n = 10321usize;
    let op = build_operator(OperatorKind::APrincipal, n, 4000).unwrap();
    let s = extreme_eigenpairs(&op, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER).unwrap();
    let ratio = s.lowest().lambda / n as f64;
    let ok = (ratio - -0.493678).abs() <= 1e-3 && s.worst_residual() <= 1e-8;
    verdict(6, ok, format!("λ₁/N = {ratio:.7}, residual {:.2e}", s.worst_residual()));
}

#[test]
fn criterion_07_lambda_n_window() {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [100usize, 500, 1000] {
        let s = solved(n);
        let z2 = s.stats.zeta2;
        let nf = n as f64;
        let gap = s.spectrum.highest().lambda - z2 * nf * nf;
        let inside = -(1.0 + nf.ln()).powi(2) / z2 < gap && gap < 0.5 / z2;
        ok &= inside;
        detail.push(format!("N={n}: λ_N − ζ₂N² = {gap:.4}"));
    }
    verdict(7, ok, detail.join(", "));
}

#[test]
fn criterion_08_bound_suite() {
    let s = solved(1000);
    let r = bounds_report(&s.stats, &s.spectrum).unwrap();
    let names = ["tail_square_sum", "pointwise", "rayleigh_w"];
    let ok = names.iter().all(|name| r.check(name).and_then(|c| c.passed) == Some(true));
    let detail: Vec<String> = names.iter().map(|name| r.check(name).unwrap().detail.clone()).collect();
    verdict(8, ok, detail.join("; "));
}

#[test]
fn criterion_09_alignment_constant() {
    let cs: Vec<f64> = [100usize, 500, 1000]
        .iter()
        .map(|&n| {
            let s = solved(n);
            bounds_report(&s.stats, &s.spectrum).unwrap().alignment_constant.unwrap()
        })
        .collect();
    let ok = cs.windows(2).all(|w| w[1] <= w[0]);
    verdict(9, ok, format!("C(100), C(500), C(1000) = {cs:.5?}"));
}

#[test]
fn criterion_10_trace_asymptotic() {
    let alpha_minus_one = Constants::new().alpha - 1.0;
    let printed = (alpha_minus_one - 0.4603545).abs() < 1e-7;
    let checks: Vec<f64> = [1000u64, 10_000].iter().map(|&n| trace_closed_form_check(n).unwrap().normalized).collect();
    let ok = printed && checks.iter().all(|&c| c < 5.0);
    verdict(10, ok, format!("α − 1 = {alpha_minus_one:.7}, |dev|/N^(2/3) = {checks:.4?}"));
}

#[test]
fn criterion_11_constants() {
    let stats = compute_stats(10_000).unwrap();
    let phi = phi_limit_check(&stats);
    let w = w_form_check(&stats);
    let z = trace_z2_check(10_000).unwrap();
    let c = Constants::new();
    let printed = (c.beta - 0.32712).abs() < 1e-5 && (c.c4 - -0.495600).abs() < 1e-6 && (c.c5 - 0.0815206).abs() < 1e-7;
    let ok = printed && phi.gap < 0.02 && w.gap < 0.02 && z.gap < 0.01;
    verdict(
        11,
        ok,
        format!(
            "φ = {:.5} (gap {:.5}), wᵀAw/N² = {:.5} (gap {:.5}), Tr(Z²)/N² = {:.5} (gap {:.5})",
            phi.value, phi.gap, w.value, w.gap, z.ratio, z.gap
        ),
    );
}

#[test]
fn criterion_12_reconstructions() {
    let t = table();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [100usize, 500] {
        let s = solved(n);
        let a_route = spectral_truncation_from(&s.spectrum, t, &[n as u64]).unwrap().remove(0);
        let z = full_spectrum(&build_operator(OperatorKind::Z, n, 4000).unwrap()).unwrap();
        let z_route = z_spectral_from(&z, t, &[n as u64]).unwrap().remove(0);
        let m: Vec<f64> = (1..=n as u64).map(|k| f64::from(t.mu(k))).collect();
        let parseval = parseval_defect(&s.spectrum, &m).max(parseval_defect(&z, &m));
        let good = a_route.exact_check == Some(true) && z_route.exact_check == Some(true) && parseval <= 1e-8;
        ok &= good;
        let n2 = (n * n) as f64;
        detail.push(format!(
            "N={n}: A-route error {:.1e}, Z-route error {:.1e}, Parseval {parseval:.1e}",
            (a_route.residual_terms["reconstruction"] * n2 - a_route.m_quadform as f64).abs()
                / (1.0 + a_route.m_quadform.abs() as f64),
            (z_route.route_value * n2 - z_route.m_quadform as f64).abs() / (1.0 + z_route.m_quadform.abs() as f64),
        ));
    }
    verdict(12, ok, detail.join("; "));
}

#[test]
fn criterion_13_ranksplit() {
    let bad: Vec<u64> = (1..=200u64).filter(|&n| !ranksplit_entrywise(n)).collect();
    verdict(13, bad.is_empty(), format!("N = 1..200, failures {bad:?}"));
}

#[test]
fn criterion_14_term_count_shape() {
    let rows = term_count_survey(2, &[50, 100, 200], table()).unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    verdict(14, max / min < 3.0, format!("ratios {ratios:.4?}, spread {:.3}", max / min));
}
