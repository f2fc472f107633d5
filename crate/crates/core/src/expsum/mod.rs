//! Exponential sums `E = p^{-mn} sum_{x mod p^m, x mod p in Z} e^{2 pi i f(x)/p^m}`
//! and `S_f(a)`, folded from exact value counts.

pub mod enumerate;
pub mod tensor;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::cyclo::dense_int_sum_is_zero;
use crate::numeric::hp::{Dd, HpComplex, RootTable};
use crate::numeric::rational;
use crate::poly::{IntPolynomial, ZConstraint};

pub use enumerate::{budget_from_env, check_budget, count_z_points, max_level, value_histogram, DEFAULT_BUDGET};
pub use tensor::{count_tensor, is_prime, validate_prime, CountTensor};

/// An evaluated sum together with the counts it came from.
#[derive(Clone, Debug)]
pub struct ExpSumValue {
    pub value: HpComplex,
    /// The integer combination of roots of unity is exactly zero.
    pub exact_zero: bool,
    pub counts: Arc<CountTensor>,
}

impl ExpSumValue {
    pub fn abs(&self) -> f64 {
        if self.exact_zero {
            0.0
        } else {
            self.value.abs().to_f64()
        }
    }

    /// `#Z(F_p) / p^n`.
    pub fn domain_measure(&self) -> BigRational {
        let t = &self.counts;
        rational::int(t.z_points as i64) * rational::pow_i(t.p, -(t.n as i64))
    }
}

/// `sum_j counts[j] zeta_order^j`, in index order, plus the exact-zero flag.
pub fn fold_counts(order: u64, counts: &[u64]) -> (HpComplex, bool) {
    let dense: Vec<i64> = counts.iter().map(|&c| c as i64).collect();
    if dense_int_sum_is_zero(order, dense) {
        return (HpComplex::ZERO, true);
    }
    let table = RootTable::new(order);
    let mut acc = HpComplex::ZERO;
    for (j, &c) in counts.iter().enumerate() {
        if c != 0 {
            acc += table.get(j as u64).scale(Dd::from_i128(c as i128));
        }
    }
    (acc, false)
}

/// Exponent-indexed counts `v -> #{f(x) = v mod p^m}` rebuilt from a full-depth tensor.
fn dense_values(t: &CountTensor) -> Vec<u64> {
    assert_eq!(t.c_max, t.m, "tensor must carry full unit depth");
    let mut out = vec![0u64; t.modulus() as usize];
    out[0] = t.at_least_m;
    for (k, row) in t.levels.iter().enumerate() {
        let pk = t.p.pow(k as u32) as usize;
        for (u, &c) in row.iter().enumerate() {
            if c != 0 {
                out[u * pk] += c;
            }
        }
    }
    out
}

pub fn exp_sum_from_tensor(t: Arc<CountTensor>) -> ExpSumValue {
    let vals = dense_values(&t);
    let (raw, zero) = fold_counts(t.modulus(), &vals);
    let scale = Dd::from_rational(&rational::pow_i(t.p, -((t.m as i64) * t.n as i64)));
    ExpSumValue { value: raw.scale(scale), exact_zero: zero, counts: t }
}

pub fn exp_sum(f: &IntPolynomial, z: &ZConstraint, p: u64, m: u32, budget: u64) -> Result<ExpSumValue> {
    let t = count_tensor(f, z, p, m, m, budget)?;
    Ok(exp_sum_from_tensor(Arc::new(t)))
}

/// `S_f(a) = a^{-n} sum_{x mod a} e^{2 pi i f(x)/a}`.
pub fn s_f_composite(f: &IntPolynomial, a: u64, budget: u64) -> Result<HpComplex> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!("modulus a must be >= 2, got {a}")));
    }
    let n = f.nvars();
    check_budget(a, n as u64, budget)?;
    let hist = value_histogram(f, a, None)?;
    let counts: Vec<u64> = hist.iter().map(|&c| c as u64).collect();
    let (raw, _) = fold_counts(a, &counts);
    let scale = Dd::ONE / Dd::from_i128(a as i128).powi(n as u32);
    Ok(raw.scale(scale))
}

/// The two factors of `S_f(ab)` for coprime `a, b`: `S_{b' f}(a)` and
/// `S_{a' f}(b)` with `b b' = 1 mod a`, `a a' = 1 mod b`.
pub fn crt_factors(f: &IntPolynomial, a: u64, b: u64, budget: u64) -> Result<(HpComplex, HpComplex)> {
    if a < 2 || b < 2 || a.gcd(&b) != 1 {
        return Err(Error::InvalidArgument(format!("need coprime moduli >= 2, got {a} and {b}")));
    }
    let inv = |x: u64, m: u64| -> BigInt {
        let e = (x as i64).extended_gcd(&(m as i64));
        BigInt::from(e.x.rem_euclid(m as i64))
    };
    let fa = s_f_composite(&f.scale(&inv(b, a)), a, budget)?;
    let fb = s_f_composite(&f.scale(&inv(a, b)), b, budget)?;
    Ok((fa, fb))
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitPart {
    pub z: String,
    pub re: f64,
    pub im: f64,
    pub exact_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalSplit {
    pub p: u64,
    pub m: u32,
    pub total_re: f64,
    pub total_im: f64,
    pub parts: Vec<SplitPart>,
    /// Integer-level check: the non-critical residue classes sum to zero.
    pub remainder_exact_zero: bool,
    pub deviation: f64,
    pub tolerance: f64,
}

/// `E^Z = sum_i E^{Z_i}` with `Z_i = Z cap {f = z_i mod p}`.
pub fn critical_split(
    f: &IntPolynomial,
    crit_values: &[BigInt],
    z: &ZConstraint,
    p: u64,
    m: u32,
    budget: u64,
) -> Result<CriticalSplit> {
    if m < 2 {
        return Err(Error::InvalidArgument("critical splitting needs m >= 2".into()));
    }
    let t = Arc::new(count_tensor(f, z, p, m, m, budget)?);
    let total = exp_sum_from_tensor(t.clone());
    let vals = dense_values(&t);
    let order = t.modulus();
    let scale = Dd::from_rational(&rational::pow_i(p, -((m as i64) * t.n as i64)));
    let pb = BigInt::from(p);
    let classes: Vec<u64> = crit_values.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    for (i, a) in classes.iter().enumerate() {
        if classes[..i].contains(a) {
            return Err(Error::IdentityViolation(format!("critical values collide modulo {p}")));
        }
    }
    let restrict = |keep: &dyn Fn(u64) -> bool| -> Vec<u64> {
        vals.iter().enumerate().map(|(v, &c)| if keep(v as u64 % p) { c } else { 0 }).collect()
    };
    let mut parts = Vec::new();
    let mut sum = HpComplex::ZERO;
    for (zi, &cls) in crit_values.iter().zip(&classes) {
        let (raw, zero) = fold_counts(order, &restrict(&|r| r == cls));
        let v = raw.scale(scale);
        sum += v;
        let (re, im) = v.to_f64();
        parts.push(SplitPart { z: zi.to_string(), re, im, exact_zero: zero });
    }
    let rest: Vec<i64> = restrict(&|r| !classes.contains(&r)).into_iter().map(|c| c as i64).collect();
    let remainder_exact_zero = dense_int_sum_is_zero(order, rest);
    let deviation = (total.value - sum).abs().to_f64();
    let floor = (p as f64).powf(-(m as f64) * t.n as f64 / 2.0);
    let tolerance = 1e-9 * total.abs().max(floor);
    let (total_re, total_im) = total.value.to_f64();
    let report = CriticalSplit { p, m, total_re, total_im, parts, remainder_exact_zero, deviation, tolerance };
    if !remainder_exact_zero || deviation > tolerance {
        return Err(Error::IdentityViolation(format!(
            "critical splitting fails at p = {p}, m = {m}: deviation {deviation:e}"
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub p: u64,
    pub m: u32,
    pub abs: f64,
    pub exact_zero: bool,
    /// `|E| p^{sigma m} / m^{n-1}`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecaySlope {
    pub p: u64,
    /// Least-squares slope of `-log_p |E|` against `m`; `None` with fewer than two nonzero values.
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub sigma: String,
    pub rows: Vec<DecayRow>,
    pub supremum: f64,
    pub slopes: Vec<DecaySlope>,
}

pub fn decay_ratio(abs: f64, p: u64, m: u32, n: usize, sigma: &BigRational) -> f64 {
    if abs == 0.0 {
        return 0.0;
    }
    let s = rational::to_f64(sigma);
    (abs.ln() + s * m as f64 * (p as f64).ln()).exp() / (m as f64).powi(n as i32 - 1)
}

fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

pub fn decay_fit(
    f: &IntPolynomial,
    z: &ZConstraint,
    sigma: &BigRational,
    primes: &[u64],
    m_range: std::ops::RangeInclusive<u32>,
    budget: u64,
) -> Result<DecayReport> {
    let n = f.nvars();
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for &p in primes {
        let mut pts = Vec::new();
        for m in m_range.clone() {
            let e = exp_sum(f, z, p, m, budget)?;
            let abs = e.abs();
            if !e.exact_zero {
                pts.push((m as f64, -abs.ln() / (p as f64).ln()));
            }
            rows.push(DecayRow { p, m, abs, exact_zero: e.exact_zero, ratio: decay_ratio(abs, p, m, n, sigma) });
        }
        slopes.push(DecaySlope { p, slope: least_squares_slope(&pts) });
    }
    let supremum = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(DecayReport { sigma: rational::format(sigma), rows, supremum, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    fn poly(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s, None).unwrap()
    }

    fn all() -> ZConstraint {
        ZConstraint::all()
    }

    #[test]
    fn basic_sums() {
        let e = exp_sum(&poly("x"), &all(), 5, 2, DEFAULT_BUDGET).unwrap();
        assert!(e.exact_zero);
        let e = exp_sum(&poly("x^2"), &all(), 3, 2, DEFAULT_BUDGET).unwrap();
        let (re, im) = e.value.to_f64();
        assert!((re - 1.0 / 3.0).abs() < 1e-15 && im.abs() < 1e-15);
        let zero = IntPolynomial::zero(vec!["x".into()]);
        let e = exp_sum(&zero, &all(), 7, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(e.value.to_f64(), (1.0, 0.0));
    }

    #[test]
    fn composite_sums() {
        let f = poly("x^2");
        let s9 = s_f_composite(&f, 9, DEFAULT_BUDGET).unwrap().to_f64();
        assert!((s9.0 - 1.0 / 3.0).abs() < 1e-15);
        let prod = s_f_composite(&f, 3, DEFAULT_BUDGET).unwrap() * s_f_composite(&f, 5, DEFAULT_BUDGET).unwrap();
        let s15 = s_f_composite(&f, 15, DEFAULT_BUDGET).unwrap();
        assert!((s15 - prod).abs().to_f64() < 1e-25);
        assert!(s_f_composite(&poly("x"), 7, DEFAULT_BUDGET).unwrap().abs().to_f64() < 1e-30);
        // the untwisted product fails at 12 = 3 * 4
        let plain = s_f_composite(&f, 3, DEFAULT_BUDGET).unwrap() * s_f_composite(&f, 4, DEFAULT_BUDGET).unwrap();
        let s12 = s_f_composite(&f, 12, DEFAULT_BUDGET).unwrap();
        assert!((s12 - plain).abs().to_f64() > 0.5);
        let (a, b) = crt_factors(&f, 3, 4, DEFAULT_BUDGET).unwrap();
        assert!((s12 - a * b).abs().to_f64() < 1e-25);
    }

    #[test]
    fn splitting() {
        let crit = [BigInt::from(-2), BigInt::from(2)];
        let r = critical_split(&poly("x^3 - 3*x"), &crit, &all(), 5, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.parts.len(), 2);
        let r = critical_split(&poly("x^2"), &[BigInt::from(0)], &all(), 7, 3, DEFAULT_BUDGET).unwrap();
        assert!((r.parts[0].re - r.total_re).abs() < 1e-15);
        let r = critical_split(&poly("x"), &[], &all(), 5, 2, DEFAULT_BUDGET).unwrap();
        assert!(r.parts.is_empty() && r.total_re == 0.0);
        // a wrong list is caught
        assert!(matches!(
            critical_split(&poly("x^3 - 3*x"), &[BigInt::from(2)], &all(), 5, 2, DEFAULT_BUDGET),
            Err(Error::IdentityViolation(_))
        ));
    }

    #[test]
    fn decay_of_squares_is_exact() {
        let r = decay_fit(&poly("x^2"), &all(), &rat(1, 2), &[3, 5, 7], 2..=8, DEFAULT_BUDGET).unwrap();
        for row in &r.rows {
            assert!((row.ratio - 1.0).abs() < 1e-9, "{row:?}");
        }
        for s in &r.slopes {
            assert!((s.slope.unwrap() - 0.5).abs() < 1e-9);
        }
        let r = decay_fit(&poly("x"), &all(), &rat(1, 1), &[5], 2..=6, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.supremum, 0.0);
        assert!(r.rows.iter().all(|row| row.exact_zero));
    }
}
