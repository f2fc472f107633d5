//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use igusa_cli::catalog::{builtin, find, CatalogEntry};
use igusa_cli::checks::{run_check, run_global, Check, CheckResult, GlobalCheck, Options, Status};
use igusa_cli::report::run;
use igusa_core::expsum::{crt_factors, exp_sum, s_f_composite, DEFAULT_BUDGET};
use igusa_core::numeric::rational::{int, rat};
use igusa_core::poly::{IntPolynomial, ZConstraint};
use igusa_core::resolution::{collapse_single, lct_values, thm_bound_check, BoundMode};
use igusa_core::Result;
use num_integer::Integer;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn opts(primes: Option<Vec<u64>>) -> Options {
    Options { primes, ..Options::new() }
}

fn catalog() -> Vec<CatalogEntry> {
    builtin().expect("shipped catalog loads")
}

fn entry_check(c: Check, e: &CatalogEntry, o: &Options) -> Result<CheckResult> {
    run_check(c, e, o)
}

fn bridge() -> Result<Outcome> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let o = opts(Some(vec![3, 5, 7]));
    let results: Vec<Result<(String, CheckResult)>> = pool.install(|| {
        use rayon::prelude::*;
        catalog().par_iter().map(|e| Ok((e.name.clone(), entry_check(Check::Bridge, e, &o)?))).collect()
    });
    let mut rows = 0;
    let mut bad = Vec::new();
    for r in results {
        let (name, c) = r?;
        rows += c.details["rows"].as_array().map_or(0, Vec::len);
        if c.status != Status::Pass {
            bad.push(name);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(bad.is_empty() && rows > 0 && secs <= 300.0, format!("{rows} (entry, p, m) cases, {secs:.1}s, failing: {bad:?}"))
}

fn denef() -> Result<Outcome> {
    let o = opts(Some(vec![5, 7, 11, 13]));
    let mut rows = 0;
    let mut bad = Vec::new();
    for e in catalog().iter().filter(|e| e.resolution().is_some()) {
        let c = entry_check(Check::Denef, e, &o)?;
        rows += c.details["rows"].as_array().map_or(0, Vec::len);
        if c.status != Status::Pass {
            bad.push(e.name.clone());
        }
    }
    outcome(bad.is_empty() && rows > 0, format!("{rows} (entry, q, chi) series of 10 coefficients, failing: {bad:?}"))
}

fn global(g: GlobalCheck) -> Result<Outcome> {
    let c = run_global(g, &Options::new())?;
    let summary = match g {
        GlobalCheck::Gauss => format!("max deviation {}", c.details["max_deviation"]),
        GlobalCheck::Langweil => format!("max ratio {}", c.details["max_ratio"]),
        GlobalCheck::Charsum => format!(
            "{} primes, exact orthogonality {}",
            c.details["rows"].as_array().map_or(0, Vec::len),
            c.details["orthogonality_exact"]
        ),
        _ => format!("{} cases, failures {}", c.details["cases"], c.details["failures"]),
    };
    outcome(c.status == Status::Pass, summary)
}

fn decay() -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut sups = Vec::new();
    for e in catalog() {
        let c = entry_check(Check::Decay, &e, &Options::new())?;
        let sup = c.details["supremum"].as_f64().unwrap_or(f64::NAN);
        sups.push(format!("{}={sup:.4}", e.name));
        if c.status != Status::Pass || !sup.is_finite() {
            bad.push(e.name.clone());
        }
        if e.name == "xsq" {
            let rows = c.details["rows"].as_array().unwrap();
            if rows.iter().any(|r| (r["ratio"].as_f64().unwrap() - 1.0).abs() > 1e-9) {
                bad.push("xsq ratio != 1".into());
            }
        }
    }
    outcome(bad.is_empty(), format!("suprema {}; failing: {bad:?}", sups.join(" ")))
}

fn lower_bound() -> Result<Outcome> {
    let f = IntPolynomial::parse("x^2", None)?;
    let mut worst = f64::INFINITY;
    for p in [3u64, 5, 7] {
        for m in (2..=8u32).step_by(2) {
            let e = exp_sum(&f, &ZConstraint::all(), p, m, DEFAULT_BUDGET)?;
            worst = worst.min(e.abs() / (0.5 * (p as f64).powf(-(m as f64) / 2.0)));
        }
    }
    outcome(worst >= 1.0, format!("min |E| / (p^(-m/2) / 2) = {worst:.6}"))
}

fn thm_bound() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, d, slack) in [("xsq", 2u64, int(0)), ("xcube", 3, int(0)), ("xquart", 2, rat(1, 4))] {
        let e = find(name)?;
        let res = e.resolution().expect("resolution data");
        let w = res.witnesses.iter().find(|w| w.d == d).expect("witness");
        let (lct, _) = lct_values(res)?;
        let b = thm_bound_check(res, w, &lct, BoundMode::Global)?;
        ok &= b.satisfied && b.slack == slack;
        parts.push(format!("{name} d={d} slack {}", igusa_core::numeric::rational::format(&b.slack)));
    }
    let collapse = run_global(GlobalCheck::Collapse, &Options::new())?;
    ok &= collapse.status == Status::Pass;
    // the single-divisor form on the x^2 data
    ok &= collapse_single(&[(2, 1)], 2)?.single_bound == rat(1, 2);
    outcome(ok, format!("{}; collapse cases {} failures {}", parts.join(", "), collapse.details["cases"], collapse.details["failures"]))
}

fn poles() -> Result<Outcome> {
    let o = Options::new();
    let moi = |name: &str| -> Result<String> {
        let c = entry_check(Check::Moi, &find(name)?, &o)?;
        Ok(c.details["estimate"]["value"].as_str().unwrap_or("?").to_string())
    };
    let (a, b, c) = (moi("xsq")?, moi("xcube")?, moi("x")?);
    let mut ok = a == "1/2" && b == "1/3" && c == "+inf";
    let mut audits = Vec::new();
    for name in ["xy", "xsq"] {
        let r = entry_check(Check::PoleAudit, &find(name)?, &o)?;
        ok &= r.status == Status::Pass;
        let rows = r.details["rows"].as_array().unwrap();
        let live: Vec<_> = rows.iter().filter(|r| !r["vacuous"].as_bool().unwrap()).collect();
        ok &= !live.is_empty();
        if name == "xy" {
            ok &= live.iter().any(|r| r["d"] == 1 && r["pole_order"] == 2 && r["lct_z"] == "1");
        }
        audits.push(format!("{name} {} live rows", live.len()));
    }
    outcome(ok, format!("moi x^2 = {a}, x^3 = {b}, x = {c}; audits {}", audits.join(", ")))
}

/// `|S_f(ab) - S_f(a) S_f(b)|` exactly as stated, with the twisted
/// factorization alongside for comparison.
fn crt() -> Result<Outcome> {
    let mut plain_fail = 0;
    let mut plain_worst = (0.0f64, 0u64, 0u64, "");
    let mut twisted_worst = 0.0f64;
    let mut pairs = 0;
    for (expr, bound) in [("x^2", 49u64), ("x^3", 49), ("x^2 + y^3", 25)] {
        let f = IntPolynomial::parse(expr, None)?;
        for a in 2..=bound {
            for b in a + 1..=bound {
                if a.gcd(&b) != 1 {
                    continue;
                }
                pairs += 1;
                let whole = s_f_composite(&f, a * b, DEFAULT_BUDGET)?;
                let plain = (whole - s_f_composite(&f, a, DEFAULT_BUDGET)? * s_f_composite(&f, b, DEFAULT_BUDGET)?).abs().to_f64();
                if plain > 1e-12 {
                    plain_fail += 1;
                }
                if plain > plain_worst.0 {
                    plain_worst = (plain, a, b, expr);
                }
                let (x, y) = crt_factors(&f, a, b, DEFAULT_BUDGET)?;
                twisted_worst = twisted_worst.max((whole - x * y).abs().to_f64());
            }
        }
    }
    outcome(
        plain_fail == 0,
        format!(
            "{pairs} pairs; untwisted product off on {plain_fail} (worst {:.3} at {} a={} b={}); \
             S_(b'f)(a) S_(a'f)(b) max deviation {twisted_worst:.1e}",
            plain_worst.0, plain_worst.3, plain_worst.1, plain_worst.2
        ),
    )
}

fn determinism() -> Result<Outcome> {
    let entries = catalog();
    let report = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let r = pool.install(|| run(&entries, Check::ALL, GlobalCheck::ALL, &Options::new()))?;
        Ok(r.to_json())
    };
    let one = report(1)?;
    let four = report(4)?;
    outcome(one == four, format!("{} bytes, identical: {}", one.len(), one == four))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Result<Outcome>)> = vec![
        ("bridge identity", bridge),
        ("denef vs empirical", denef),
        ("gauss magnitude", || global(GlobalCheck::Gauss)),
        ("decay bound", decay),
        ("lower-bound witness", lower_bound),
        ("power-condition bound", thm_bound),
        ("coefficient estimate", || global(GlobalCheck::EstimationRandom)),
        ("character-sum corollary", || global(GlobalCheck::Charsum)),
        ("lang-weil", || global(GlobalCheck::Langweil)),
        ("poles and moi", poles),
        ("crt multiplicativity", crt),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(o) => (if o.pass { "PASS" } else { "FAIL" }, o.detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} {:>2} {name}: {detail} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
