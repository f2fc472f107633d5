//! Point counts and character sums on affine varieties over `F_p`.

use serde::Serialize;

use super::MultChar;
use crate::error::{Error, Result};
use crate::expsum::{check_budget, validate_prime, value_histogram};
use crate::numeric::cyclo::CycloValue;
use crate::poly::{IntPolynomial, ZConstraint};

/// `X = {g_1 = .. = g_r = 0}` in `A^n`, a function `F` on it and the expected dimension.
#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub equations: ZConstraint,
    pub f: IntPolynomial,
    pub dim: u32,
}

impl VarietySpec {
    pub fn new(equations: Vec<IntPolynomial>, f: IntPolynomial, dim: u32) -> Self {
        VarietySpec { equations: ZConstraint::new(equations), f, dim }
    }

    /// All of `A^n` with the function `F`.
    pub fn affine(f: IntPolynomial) -> Self {
        let n = f.nvars() as u32;
        VarietySpec { equations: ZConstraint::all(), f, dim: n }
    }

    pub fn n(&self) -> usize {
        self.f.nvars()
    }

    /// `H[v] = #{x in X(F_p) : F(x) = v}`.
    pub fn value_counts(&self, p: u64, budget: u64) -> Result<Vec<u64>> {
        validate_prime(p)?;
        check_budget(p, self.n() as u64, budget)?;
        let h = value_histogram(&self.f, p, Some((&self.equations, p)))?;
        Ok(h.into_iter().map(u64::from).collect())
    }

    pub fn point_count(&self, p: u64, budget: u64) -> Result<u64> {
        Ok(self.value_counts(p, budget)?.iter().sum())
    }
}

/// `sum_{x in X(F_p)} chi(F(x))`, with `chi(0) = 0`.
pub fn char_sum_variety(x: &VarietySpec, chi: &MultChar, p: u64, budget: u64) -> Result<CycloValue> {
    if chi.p() != p || chi.conductor() != 1 {
        return Err(Error::InvalidArgument(format!("{chi:?} is not a character of F_{p}^x")));
    }
    let chi = chi.primitive();
    let h = x.value_counts(p, budget)?;
    let d = chi.order();
    let mut out = CycloValue::zero(d);
    for (v, &c) in h.iter().enumerate().skip(1) {
        if c > 0 {
            let j = chi.value_index(v as u64).unwrap();
            out.add_term(j, crate::numeric::rational::int(c as i64));
        }
    }
    Ok(out)
}

/// `#{(x, y) : x in X(F_p), F(x) = lambda y^d}`.
pub fn kummer_count(x: &VarietySpec, d: u64, lambda: u64, p: u64, budget: u64) -> Result<u64> {
    validate_prime(p)?;
    if d < 2 || d % p == 0 {
        return Err(Error::InvalidArgument(format!("need d > 1 prime to p, got d = {d}")));
    }
    if lambda % p == 0 {
        return Err(Error::InvalidArgument("lambda must be a unit".into()));
    }
    let h = x.value_counts(p, budget)?;
    let mut fiber = vec![0u64; p as usize];
    for y in 0..p {
        let w = crate::poly::mulmod(lambda % p, crate::poly::powmod(y, d, p), p);
        fiber[w as usize] += 1;
    }
    Ok(h.iter().zip(&fiber).map(|(a, b)| a * b).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct LangWeilRow {
    pub p: u64,
    pub points: u64,
    /// `|#X(F_p) - p^r| / p^{r - 1/2}`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LangWeilReport {
    pub rows: Vec<LangWeilRow>,
    pub max_ratio: f64,
}

pub fn langweil_ratio(x: &VarietySpec, primes: &[u64], budget: u64) -> Result<LangWeilReport> {
    let r = x.dim as i32;
    let mut rows = Vec::new();
    for &p in primes {
        let points = x.point_count(p, budget)?;
        let main = (p as i128).pow(r as u32);
        let dev = (points as i128 - main).unsigned_abs() as f64;
        rows.push(LangWeilRow { p, points, ratio: dev / (p as f64).powf(r as f64 - 0.5) });
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(LangWeilReport { rows, max_ratio })
}
