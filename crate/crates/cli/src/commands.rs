use mertens_lab::arith::{mertens_oracle, sieve_mobius, Constants, MobiusTable, MultiplicativeFunctionSpec};
use mertens_lab::cardinal::{build_cardinal, cardinal_report, mertens_via_cardinal};
use mertens_lab::identity::{
    eratosthenes_pi_check, inclusion_exclusion_check, meissel_sum, mertens_via_bilinear, mertens_via_flexible_mode,
    mertens_via_uniform_mode, mobius_via_identity, term_count_survey, FoldMode,
};
use mertens_lab::quadform::{
    fourier_truncation_report, ranksplit_check, spectral_truncation_report, trace_z2_check, z_spectral_report,
    QuadformReport,
};
use mertens_lab::spectral::{
    bounds_report, build_operator, compute_stats, extreme_eigenpairs, full_spectrum, phi_limit_check, scaling_scan,
    trace_closed_form_check, w_form_check, LimitCheck, OperatorKind, SpectralResult, DEFAULT_MAX_ITER,
    DEFAULT_TOLERANCE,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::args::{
    Command, GlobalOpts, IdentityArgs, IdentityMode, LimitArgs, OperatorChoice, QuadformCommand, SpectrumArgs,
    TruncationArgs,
};
use crate::error::{usage, CliError};
use crate::output::{Report, Table};

/// Caps past which a run needs --allow-slow.
const SIEVE_CAP: u64 = 10_000_000;
const STATS_CAP: u64 = 5_000;
const FULL_SPECTRUM_CAP: usize = 1_000;
const EXTREME_CAP: usize = 4_000;
const CARDINAL_CAP: u64 = 2_500;

/// The trace deviation normalized by N^{2/3} must stay below this.
const TRACE_WINDOW: f64 = 5.0;
/// Largest tolerated residual |Av − λv| / (1 + |λ|).
const RESIDUAL_LIMIT: f64 = 1e-8;

type Out = Result<Report, CliError>;
type TruncationFn = fn(usize, &[u64], &MobiusTable, usize) -> mertens_lab::Result<Vec<QuadformReport>>;

pub fn run(command: &Command, opts: &GlobalOpts) -> Out {
    match command {
        Command::Sieve { limit } => sieve(*limit, opts),
        Command::Mertens { x, g } => mertens(*x, g, opts),
        Command::Identity(a) => identity(a, opts),
        Command::Mobius { k, ranges } => mobius(*k, ranges.as_deref(), opts),
        Command::Meissel { x } => meissel(*x, opts),
        Command::PiCheck { n } => pi_check(*n),
        Command::Terms { d, n } => terms(*d, n, opts),
        Command::Stats { n } => stats(*n, opts),
        Command::Spectrum(a) => spectrum(a, opts),
        Command::Bounds { n, extreme, dense_cap } => bounds(*n, *extreme, *dense_cap, opts),
        Command::Phi(a) => limit("phi", a, opts, |s| Ok(phi_limit_check(&compute_stats(s)?))),
        Command::Wform(a) => limit("wform", a, opts, |s| Ok(w_form_check(&compute_stats(s)?))),
        Command::Scan { k, n, dense_cap } => scan(k, n, *dense_cap, opts),
        Command::Cardinal { n, verify, matrices } => cardinal(*n, *verify, *matrices, opts),
        Command::Quadform(q) => quadform(q, opts),
        Command::Constants => constants(),
    }
}

fn slow_guard(what: &str, value: u64, cap: u64, opts: &GlobalOpts) -> Result<(), CliError> {
    if value > cap && !opts.allow_slow {
        return Err(usage(format!("{what} = {value} exceeds {cap}; pass --allow-slow to run it")));
    }
    Ok(())
}

fn table(limit: u64, opts: &GlobalOpts) -> Result<MobiusTable, CliError> {
    slow_guard("sieve limit", limit, SIEVE_CAP, opts)?;
    Ok(sieve_mobius(limit.max(1))?)
}

pub fn parse_weight(spec: &str) -> Result<MultiplicativeFunctionSpec, CliError> {
    let bad = || usage(format!("weight g must be principal, liouville, legendre:P or power:RE[,IM]; got {spec:?}"));
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match (name, arg) {
        ("principal", "") => Ok(MultiplicativeFunctionSpec::Principal),
        ("liouville", "") => Ok(MultiplicativeFunctionSpec::Liouville),
        ("legendre", p) => Ok(MultiplicativeFunctionSpec::legendre(p.parse().map_err(|_| bad())?)?),
        ("power", s) => {
            let (re, im) = s.split_once(',').unwrap_or((s, "0"));
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            let im: f64 = im.trim().parse().map_err(|_| bad())?;
            Ok(MultiplicativeFunctionSpec::complex_power(Complex64::new(re, im)))
        }
        _ => Err(bad()),
    }
}

fn require<T>(value: Option<T>, flag: &str, mode: &str) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("--{flag} is required for {mode}")))
}

fn floor_arg(x: f64, what: &str) -> Result<u64, CliError> {
    if !x.is_finite() || x <= 0.0 {
        return Err(usage(format!("{what} must be positive and finite, got {x}")));
    }
    Ok(x.floor() as u64)
}

fn sieve(limit: u64, opts: &GlobalOpts) -> Out {
    if limit == 0 {
        return Err(usage("--limit must be positive"));
    }
    let t = table(limit, opts)?;
    let mut r = Report::new("sieve");
    r.field("limit", limit)?.field("mertens", t.mertens(limit))?;
    let mut rows = Table::new(&["n", "mu", "mertens"]);
    for n in 1..=limit {
        rows.push(vec![n.into(), t.mu(n).into(), t.mertens(n).into()]);
    }
    r.table = Some(rows);
    Ok(r)
}

fn mertens(x: f64, g: &str, opts: &GlobalOpts) -> Out {
    let g = parse_weight(g)?;
    let t = table(floor_arg(x, "x")?, opts)?;
    let mut r = Report::new("mertens");
    r.field("x", x)?.field("g", &g)?.field("value", mertens_oracle(&g, x, &t)?)?;
    Ok(r)
}

fn identity(a: &IdentityArgs, opts: &GlobalOpts) -> Out {
    let g = parse_weight(&a.g)?;
    let mode = if a.literal { FoldMode::Literal } else { FoldMode::Collapsed };
    let mut r = Report::new("identity");
    let (report, ie) = match a.mode {
        IdentityMode::Bilinear => {
            let n = require(a.n, "N", "--mode bilinear")?;
            let n2 = n.checked_mul(n).ok_or_else(|| usage(format!("N = {n} is too large")))?;
            let t = table(n2, opts)?;
            (mertens_via_bilinear(&g, n, &t)?, None)
        }
        IdentityMode::Uniform => {
            let d = require(a.d, "d", "--mode uniform")?;
            let k = require(a.k, "K", "--mode uniform")?;
            let n = require(a.n, "N", "--mode uniform")?;
            let t = table(k, opts)?;
            let report = mertens_via_uniform_mode(&g, d, k, n, &t, mode)?;
            let ie = ie_check(a, d, k, &vec![n; d as usize], opts)?;
            (report, ie)
        }
        IdentityMode::Flexible => {
            let k = require(a.k, "K", "--mode flexible")?;
            let ranges = require(a.ranges.clone(), "ranges", "--mode flexible")?;
            let t = table(k, opts)?;
            let report = mertens_via_flexible_mode(&g, k, &ranges, &t, mode)?;
            let ie = ie_check(a, ranges.len() as u32, k, &ranges, opts)?;
            (report, ie)
        }
    };
    r.extend(&report)?.require(report.matched);
    if let Some(ok) = ie {
        r.field("inclusion_exclusion", ok)?.field("seed", opts.seed)?.require(ok);
    }
    Ok(r)
}

fn ie_check(a: &IdentityArgs, d: u32, k: u64, ranges: &[u64], opts: &GlobalOpts) -> Result<Option<bool>, CliError> {
    if a.ie_trials == 0 {
        return Ok(None);
    }
    Ok(Some(inclusion_exclusion_check(d, k, ranges, a.ie_trials, opts.seed)?))
}

fn mobius(k: u64, ranges: Option<&[u64]>, opts: &GlobalOpts) -> Out {
    if k == 0 {
        return Err(usage("--K must be positive"));
    }
    let root = (1..).find(|r: &u64| r * r >= k).expect("some square reaches K");
    let ranges = ranges.map(<[u64]>::to_vec).unwrap_or_else(|| vec![root, root]);
    let t = table(k, opts)?;
    let value = mobius_via_identity(k, &ranges, &t)?;
    let sieve = i64::from(t.mu(k));
    let mut r = Report::new("mobius");
    r.field("K", k)?.field("ranges", &ranges)?.field("value", value)?.field("sieve", sieve)?;
    r.field("match", value == sieve)?.require(value == sieve);
    Ok(r)
}

fn meissel(x: f64, opts: &GlobalOpts) -> Out {
    let t = table(floor_arg(x, "x")?.max(1), opts)?;
    let value = meissel_sum(x, &t)?;
    let expected = i64::from(x >= 1.0);
    let mut r = Report::new("meissel");
    r.field("x", x)?.field("value", value)?.field("expected", expected)?.require(value == expected);
    Ok(r)
}

fn pi_check(n: u64) -> Out {
    let c = eratosthenes_pi_check(n)?;
    let mut r = Report::new("pi-check");
    r.field("N", n)?.extend(&c)?.require(c.matched);
    Ok(r)
}

fn terms(d: u32, ns: &[u64], opts: &GlobalOpts) -> Out {
    let max = ns.iter().max().copied().unwrap_or(1);
    let t = table(max.max(1), opts)?;
    let rows = term_count_survey(d, ns, &t)?;
    let mut r = Report::new("terms");
    r.field("d", d)?;
    r.table = Some(Table::from_serialized(&rows)?);
    Ok(r)
}

fn stats(n: u64, opts: &GlobalOpts) -> Out {
    slow_guard("N", n, STATS_CAP, opts)?;
    let s = compute_stats(n)?;
    let trace = trace_closed_form_check(n)?;
    let mut r = Report::new("stats");
    r.extend(&s)?.field("trace_check", trace)?.require(trace.normalized < TRACE_WINDOW);
    Ok(r)
}

fn operator_kind(a: &SpectrumArgs) -> Result<OperatorKind, CliError> {
    Ok(match a.operator {
        OperatorChoice::A => match parse_weight(&a.g)? {
            MultiplicativeFunctionSpec::Principal => OperatorKind::APrincipal,
            g => OperatorKind::AGeneral { g },
        },
        OperatorChoice::Z => OperatorKind::Z,
        OperatorChoice::ZFourier => OperatorKind::ZFourier { h: a.h },
    })
}

fn solve(
    n: usize,
    kind: OperatorKind,
    extreme: bool,
    dense_cap: usize,
    tol: f64,
    max_iter: usize,
    opts: &GlobalOpts,
) -> Result<SpectralResult, CliError> {
    if n == 0 {
        return Err(usage("--N must be positive"));
    }
    if extreme {
        slow_guard("N", n as u64, EXTREME_CAP as u64, opts)?;
    } else {
        slow_guard("N", n as u64, FULL_SPECTRUM_CAP as u64, opts)?;
        if n > dense_cap {
            return Err(usage(format!("a full spectrum needs N ≤ --dense-cap ({dense_cap}), got N = {n}")));
        }
    }
    let op = build_operator(kind, n, dense_cap)?;
    Ok(if extreme { extreme_eigenpairs(&op, tol, max_iter)? } else { full_spectrum(&op)? })
}

fn spectrum(a: &SpectrumArgs, opts: &GlobalOpts) -> Out {
    let kind = operator_kind(a)?;
    let s = solve(a.n, kind.clone(), a.extreme, a.dense_cap, a.tolerance, a.max_iter, opts)?;
    let mut r = Report::new("spectrum");
    r.field("N", a.n)?.field("mode", s.mode)?.field("operator", &kind)?;
    r.field("lambda_min", s.lowest().lambda)?.field("lambda_max", s.highest().lambda)?;
    r.field("worst_residual", s.worst_residual())?;
    if !a.extreme {
        r.field("orthogonality_defect", s.orthogonality_defect())?;
    }
    r.require(s.worst_residual() <= RESIDUAL_LIMIT);
    r.table = Some(Table::from_serialized(&s.rows())?);
    Ok(r)
}

fn bounds(n: usize, extreme: bool, dense_cap: usize, opts: &GlobalOpts) -> Out {
    slow_guard("N", n as u64, STATS_CAP, opts)?;
    let spectrum = solve(n, OperatorKind::APrincipal, extreme, dense_cap, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER, opts)?;
    let stats = compute_stats(n as u64)?;
    let b = bounds_report(&stats, &spectrum)?;
    let mut r = Report::new("bounds");
    r.field("N", n)?.field("mode", spectrum.mode)?.field("alignment_constant", b.alignment_constant)?;
    r.require(b.all_passed());
    r.table = Some(Table::from_serialized(&b.checks)?);
    Ok(r)
}

fn limit(
    command: &'static str,
    a: &LimitArgs,
    opts: &GlobalOpts,
    f: impl Fn(u64) -> mertens_lab::Result<LimitCheck>,
) -> Out {
    slow_guard("N", a.n, STATS_CAP, opts)?;
    let c = f(a.n)?;
    let mut r = Report::new(command);
    r.extend(&c)?;
    tolerance(&mut r, c.gap, a.tol)?;
    Ok(r)
}

fn tolerance(r: &mut Report, gap: f64, tol: Option<f64>) -> Result<(), CliError> {
    if let Some(tol) = tol {
        r.field("tol", tol)?.require(gap < tol);
    }
    Ok(())
}

fn scan(ks: &[i64], ns: &[usize], dense_cap: usize, opts: &GlobalOpts) -> Out {
    for &n in ns {
        slow_guard("N", n as u64, FULL_SPECTRUM_CAP as u64, opts)?;
    }
    let s = scaling_scan(ks, ns, dense_cap)?;
    let mut r = Report::new("scan");
    let monotone: Vec<Value> = s.monotone.iter().map(|(k, m)| json!({ "k": k, "monotone": m })).collect();
    r.field("monotone", monotone)?.field("d4_annotation", s.d4_annotation)?;
    r.table = Some(Table::from_serialized(&s.rows)?);
    Ok(r)
}

fn cardinal(n: u64, verify: bool, matrices: bool, opts: &GlobalOpts) -> Out {
    slow_guard("n", n, CARDINAL_CAP, opts)?;
    if n == 0 {
        return Err(usage("--n must be positive"));
    }
    let t = table(n, opts)?;
    let mut r = Report::new("cardinal");
    if verify {
        let c = cardinal_report(n, &t)?;
        r.extend(&c)?.require(c.passed());
    } else {
        let value = mertens_via_cardinal(n, &t)?;
        let oracle = t.mertens(n);
        r.field("n", n)?.field("mertens", value)?.field("oracle", oracle)?.field("match", value == oracle)?;
        r.require(value == oracle);
    }
    if matrices {
        let sys = build_cardinal(n, &t)?;
        r.field("set", &sys.set)?.field("U", &sys.u)?.field("T", &sys.t)?.field("V", &sys.v)?;
    }
    Ok(r)
}

fn quadform(q: &QuadformCommand, opts: &GlobalOpts) -> Out {
    match q {
        QuadformCommand::Ranksplit { n } => {
            slow_guard("N", *n as u64, STATS_CAP, opts)?;
            let t = table(*n as u64, opts)?;
            let rep = ranksplit_check(*n, &t)?;
            let mut r = Report::new("quadform");
            r.extend(&rep)?.require(rep.passed());
            Ok(r)
        }
        QuadformCommand::Spectral(a) => truncation(a, opts, spectral_truncation_report),
        QuadformCommand::ZSpectral(a) => truncation(a, opts, z_spectral_report),
        QuadformCommand::Fourier { n, h } => {
            slow_guard("N", *n as u64, FULL_SPECTRUM_CAP as u64, opts)?;
            let t = table(*n as u64, opts)?;
            let p = fourier_truncation_report(*n, h, &t)?;
            let mut r = Report::new("quadform");
            r.field("route", "fourier")?.field("N", p.n)?.field("m_z_m", p.m_z_m)?;
            r.field("max_ratio", p.max_ratio)?.field("broadly_decreasing", p.broadly_decreasing)?;
            r.table = Some(Table::from_serialized(&p.rows)?);
            Ok(r)
        }
        QuadformCommand::TraceZ2(a) => {
            slow_guard("N", a.n, STATS_CAP, opts)?;
            let z = trace_z2_check(a.n)?;
            let mut r = Report::new("quadform");
            r.field("route", "trace_z2")?.extend(&z)?.require(z.below_quarter);
            tolerance(&mut r, z.gap, a.tol)?;
            Ok(r)
        }
    }
}

fn truncation(a: &TruncationArgs, opts: &GlobalOpts, f: TruncationFn) -> Out {
    slow_guard("N", a.n as u64, FULL_SPECTRUM_CAP as u64, opts)?;
    let t = table(a.n as u64, opts)?;
    let reports = f(a.n, &a.k, &t, a.dense_cap)?;
    let first = reports.first().ok_or_else(|| usage("--K needs at least one value"))?;
    let mut r = Report::new("quadform");
    r.field("route", first.route)?.field("N", first.n)?.field("m_quadform", first.m_quadform)?;
    r.field("M1N", first.m1n)?.field("MN", first.mn)?;
    let term_names: Vec<&String> = first.residual_terms.keys().collect();
    let mut columns = vec!["K", "route_value", "discrepancy", "exact_check"];
    columns.extend(term_names.iter().map(|s| s.as_str()));
    let mut rows = Table::new(&columns);
    for q in &reports {
        let mut row: Vec<Value> = vec![q.k.into(), q.route_value.into(), q.discrepancy.into(), q.exact_check.into()];
        row.extend(term_names.iter().map(|name| Value::from(q.residual_terms.get(*name).copied())));
        rows.push(row);
        r.require(q.passed());
    }
    r.table = Some(rows);
    Ok(r)
}

fn constants() -> Out {
    let c = Constants::new();
    let mut r = Report::new("constants");
    let mut rows = Table::new(&["name", "value", "note"]);
    for (name, value, note) in c.rows() {
        rows.push(vec![name.into(), value.into(), note.into()]);
    }
    r.table = Some(rows);
    Ok(r)
}
