use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use igusa_core::charsum::{char_sum_variety, langweil_ratio, MultChar, VarietySpec};
use igusa_core::expsum::{budget_from_env, count_tensor, exp_sum, is_prime};
use igusa_core::numeric::rational;
use igusa_core::numeric::series_coefficients;
use igusa_core::poly::{IntPolynomial, ZConstraint};
use igusa_core::resolution::lct_values;
use igusa_core::zeta::{ac_distribution, bridge_spectral, denef_rational, poles, series_from_distribution};
use igusa_core::{Error, Result};
use igusa_cli::catalog::{self, CatalogEntry};
use igusa_cli::checks::{run_check, Check, GlobalCheck, Options};
use igusa_cli::report::{run, EntryReport, RunReport};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "igusa", version, about = "p-adic exponential sums and Igusa zeta functions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Primes, comma separated.
    #[arg(short = 'p', long = "prime", alias = "primes", value_delimiter = ',', global = true)]
    primes: Vec<u64>,
    /// Levels m, comma separated.
    #[arg(short = 'm', long = "level", value_delimiter = ',', global = true)]
    levels: Vec<u32>,
    /// Series truncation order K.
    #[arg(short = 'K', long = "order", default_value_t = 9, global = true)]
    order: usize,
    /// Point budget; defaults to IGUSA_BUDGET or the entry's own budget.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Checks to run, comma separated.
    #[arg(long, value_delimiter = ',', global = true)]
    checks: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; output does not depend on this
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Record wall-clock seconds per check (reports are then not reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args, Clone)]
struct Input {
    /// Catalog entry name or catalog file.
    #[arg(long)]
    entry: Option<String>,
    /// Polynomial expression, e.g. "x^2 + y^3".
    #[arg(long)]
    poly: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate E = p^{-mn} sum exp(2 pi i f(x) / p^m).
    Expsum(Input),
    /// Zeta coefficients via exact ball refinement.
    ZetaEmp {
        #[command(flatten)]
        input: Input,
        /// Order of the character (conductor 1).
        #[arg(long, default_value_t = 1)]
        chi_order: u64,
    },
    /// Zeta function from resolution data.
    ZetaDenef {
        entry: String,
        #[arg(long, default_value_t = 1)]
        chi_order: u64,
    },
    /// Compare the sum rebuilt from twisted zeta coefficients with the direct sum.
    Bridge(Input),
    /// Power-condition bound and coefficient estimate.
    Bound { entry: String },
    /// Pole-order audit and oscillation index.
    AuditPoles { entry: String },
    /// Decay ratios |E| p^{sigma m} / m^{n-1}.
    Decay { entry: String },
    /// Sum of chi(F(x)) over F_p^n, or the built-in corollary check.
    Charsum {
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, default_value_t = 2)]
        chi_order: u64,
    },
    /// Point counts against p^dim.
    Langweil {
        /// Equation of the variety.
        #[arg(long, default_value = "y^2 - x^3 + x")]
        poly: String,
    },
    /// Run checks on one entry or catalog file.
    Verify { target: String },
    /// Run every catalog entry and the global checks.
    RunAll,
    /// List catalog entries.
    List,
}

fn options(c: &Common) -> Options {
    Options {
        primes: (!c.primes.is_empty()).then(|| c.primes.clone()),
        levels: (!c.levels.is_empty()).then(|| c.levels.clone()),
        budget: c.budget.or_else(|| std::env::var("IGUSA_BUDGET").ok().map(|_| budget_from_env())),
        order: c.order,
        timings: c.timings,
    }
}

fn selected(names: &[String]) -> Result<(Vec<Check>, Vec<GlobalCheck>)> {
    if names.is_empty() {
        return Ok((Check::ALL.to_vec(), GlobalCheck::ALL.to_vec()));
    }
    let (mut local, mut global) = (Vec::new(), Vec::new());
    for n in names {
        if let Ok(c) = n.parse::<Check>() {
            local.push(c);
        } else {
            global.push(n.parse::<GlobalCheck>()?);
        }
    }
    Ok((local, global))
}

fn poly_input(input: &Input) -> Result<(IntPolynomial, ZConstraint, Option<CatalogEntry>)> {
    match (&input.entry, &input.poly) {
        (Some(name), None) => {
            let e = catalog::lookup(name)?.into_iter().next().ok_or_else(|| Error::InvalidArgument("empty catalog".into()))?;
            Ok((e.f.clone(), e.z_constraint(), Some(e)))
        }
        (None, Some(expr)) => Ok((IntPolynomial::parse(expr, None)?, ZConstraint::all(), None)),
        _ => Err(Error::InvalidArgument("give exactly one of --entry and --poly".into())),
    }
}

fn one_entry(name: &str) -> Result<CatalogEntry> {
    catalog::lookup(name)?.into_iter().next().ok_or_else(|| Error::InvalidArgument("empty catalog".into()))
}

fn need(v: &[u64], what: &str) -> Result<Vec<u64>> {
    if v.is_empty() {
        Err(Error::InvalidArgument(format!("{what} needs -p")))
    } else {
        Ok(v.to_vec())
    }
}

fn budget_for(o: &Options, e: Option<&CatalogEntry>) -> u64 {
    o.budget.or(e.map(|e| e.budget)).unwrap_or_else(budget_from_env)
}

enum Output {
    Value(Value),
    Report(RunReport),
}

fn checks_report(e: &CatalogEntry, checks: &[Check], o: &Options) -> Result<Output> {
    let res = checks.iter().map(|&c| run_check(c, e, o)).collect::<Result<Vec<_>>>()?;
    Ok(Output::Report(RunReport::new(vec![EntryReport { name: e.name.clone(), checks: res }], Vec::new())))
}

fn execute(cmd: &Cmd, c: &Common) -> Result<Output> {
    let o = options(c);
    match cmd {
        Cmd::Expsum(input) => {
            let (f, z, e) = poly_input(input)?;
            let budget = budget_for(&o, e.as_ref());
            let mut rows = Vec::new();
            for p in need(&c.primes, "expsum")? {
                for &m in &c.levels {
                    let v = exp_sum(&f, &z, p, m, budget)?;
                    let (re, im) = v.value.to_f64();
                    rows.push(json!({ "p": p, "m": m, "re": re, "im": im, "abs": v.abs(), "exact_zero": v.exact_zero }));
                }
            }
            Ok(Output::Value(json!({ "f": f.to_string(), "rows": rows })))
        }
        Cmd::ZetaEmp { input, chi_order } => {
            let (f, z, e) = poly_input(input)?;
            let budget = budget_for(&o, e.as_ref());
            let mut rows = Vec::new();
            for p in need(&c.primes, "zeta-emp")? {
                let chi = MultChar::of_order(p, *chi_order)?;
                let dist = ac_distribution(&f, &z, p, o.order, budget)?;
                let s = series_from_distribution(&dist, &chi)?;
                let coeffs: Vec<String> = s.coeffs.iter().map(ToString::to_string).collect();
                rows.push(json!({ "p": p, "chi": chi.to_string(), "coefficients": coeffs }));
            }
            Ok(Output::Value(json!({ "f": f.to_string(), "rows": rows })))
        }
        Cmd::ZetaDenef { entry, chi_order } => {
            let e = one_entry(entry)?;
            let res = e.resolution().ok_or_else(|| Error::InvalidArgument(format!("{} has no resolution data", e.name)))?;
            let primes = if c.primes.is_empty() { e.zeta_primes.clone() } else { c.primes.clone() };
            let mut rows = Vec::new();
            for q in primes {
                let chi = MultChar::of_order(q, *chi_order)?;
                let z = denef_rational(res, q, &chi)?;
                let s = series_coefficients(&z, o.order as i64)?;
                let coeffs: Vec<String> = s.coeffs.iter().map(ToString::to_string).collect();
                rows.push(json!({ "q": q, "chi": chi.to_string(), "terms": z.terms, "coefficients": coeffs, "poles": poles(&z)? }));
            }
            Ok(Output::Value(json!({ "entry": e.name, "rows": rows })))
        }
        Cmd::Bridge(input) => {
            if let (Some(name), None) = (&input.entry, &input.poly) {
                return checks_report(&one_entry(name)?, &[Check::Bridge], &o);
            }
            let (f, z, _) = poly_input(input)?;
            let budget = budget_for(&o, None);
            let mut rows = Vec::new();
            for p in need(&c.primes, "bridge")? {
                for &m in &c.levels {
                    let t = std::sync::Arc::new(count_tensor(&f, &z, p, m, m, budget)?);
                    let direct = igusa_core::expsum::exp_sum_from_tensor(t.clone());
                    let spectral = bridge_spectral(&t)?;
                    let (re, im) = spectral.to_f64();
                    let dev = (spectral - direct.value).abs().to_f64();
                    rows.push(json!({ "p": p, "m": m, "re": re, "im": im, "deviation": dev }));
                }
            }
            Ok(Output::Value(json!({ "f": f.to_string(), "rows": rows })))
        }
        Cmd::Bound { entry } => checks_report(&one_entry(entry)?, &[Check::ThmBound, Check::Estimation], &o),
        Cmd::AuditPoles { entry } => checks_report(&one_entry(entry)?, &[Check::PoleAudit, Check::Moi], &o),
        Cmd::Decay { entry } => checks_report(&one_entry(entry)?, &[Check::Decay], &o),
        Cmd::Charsum { poly: None, .. } => Ok(Output::Report(run(&[], &[], &[GlobalCheck::Charsum], &o)?)),
        Cmd::Charsum { poly: Some(expr), chi_order } => {
            let x = VarietySpec::affine(IntPolynomial::parse(expr, None)?);
            let budget = budget_for(&o, None);
            let mut rows = Vec::new();
            for p in need(&c.primes, "charsum")? {
                let chi = MultChar::of_order(p, *chi_order)?;
                let s = char_sum_variety(&x, &chi, p, budget)?;
                let (re, im) = s.to_complex().to_f64();
                rows.push(json!({ "p": p, "chi": chi.to_string(), "exact": s.to_string(), "re": re, "im": im }));
            }
            Ok(Output::Value(json!({ "f": expr, "rows": rows })))
        }
        Cmd::Langweil { poly } => {
            let eq = IntPolynomial::parse(poly, None)?;
            let n = eq.nvars();
            let one = IntPolynomial::constant(eq.vars().to_vec(), 1.into());
            let x = VarietySpec::new(vec![eq], one, n as u32 - 1);
            let primes = if c.primes.is_empty() { (5..=47).filter(|&p| is_prime(p)).collect() } else { c.primes.clone() };
            let r = langweil_ratio(&x, &primes, budget_for(&o, None))?;
            Ok(Output::Value(serde_json::to_value(r).expect("serializable")))
        }
        Cmd::Verify { target } => {
            let entries = catalog::lookup(target)?;
            let (local, global) = selected(&c.checks)?;
            Ok(Output::Report(run(&entries, &local, &global, &o)?))
        }
        Cmd::RunAll => {
            let (local, global) = selected(&c.checks)?;
            Ok(Output::Report(run(&catalog::builtin()?, &local, &global, &o)?))
        }
        Cmd::List => {
            let rows: Vec<Value> = catalog::builtin()?
                .iter()
                .map(|e| {
                    let lct_z = e.resolution().and_then(|r| lct_values(r).ok()).map(|(_, z)| rational::format(&z));
                    json!({
                        "name": e.name, "f": e.f.to_string(), "n": e.n(), "sigma": rational::format(&e.sigma),
                        "lct": rational::format(&e.lct), "lct_z": lct_z, "resolution": e.resolution().is_some(),
                    })
                })
                .collect();
            Ok(Output::Value(Value::Array(rows)))
        }
    }
}

fn list_table(v: &Value) -> String {
    let mut out = format!("{:<8} {:>2} {:>6} {:>6}  {}\n", "name", "n", "sigma", "lct", "f");
    for r in v.as_array().into_iter().flatten() {
        out += &format!(
            "{:<8} {:>2} {:>6} {:>6}  {}\n",
            r["name"].as_str().unwrap_or(""),
            r["n"],
            r["sigma"].as_str().unwrap_or(""),
            r["lct"].as_str().unwrap_or(""),
            r["f"].as_str().unwrap_or("")
        );
    }
    out
}

fn emit(text: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (text, code) = match execute(&cli.cmd, &cli.common) {
        Ok(Output::Value(v)) if matches!(cli.cmd, Cmd::List) && cli.common.out.is_none() => (list_table(&v), 0),
        Ok(Output::Value(v)) => (serde_json::to_string_pretty(&v).expect("serializable") + "\n", 0),
        Ok(Output::Report(r)) => {
            for f in &r.summary.failed {
                eprintln!("FAIL {f}");
            }
            (r.to_json(), r.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&text, &cli.common.out) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
