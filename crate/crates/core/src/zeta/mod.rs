//! Igusa local zeta functions `Z(s) = int_{x mod p in Z} chi(ac f) |f|^s`,
//! expanded in `t = p^{-s}`.

pub mod bridge;
pub mod hensel;
pub mod poles;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::charsum::MultChar;
use crate::error::{Error, Result};
use crate::expsum::{count_tensor, CountTensor};
use crate::numeric::cyclo::CycloValue;
use crate::numeric::rational::{self, int};
use crate::numeric::series::{denef_product_coeffs, Expandable, SeriesPrefix};
use crate::poly::{IntPolynomial, ZConstraint};
use crate::resolution::ResolutionData;

pub use bridge::{bridge_expsum, bridge_spectral, trivial_part};
pub use hensel::{ac_distribution, AcDistribution};
pub use poles::{moi_estimate, poles, MoiEstimate, MoiEvidence, Pole, PoleSet};

/// Coefficients `c_0..c_K` read from a tensor of level `m >= K + c(chi)`.
pub fn empirical_from_tensor(t: &CountTensor, chi: &MultChar, k_max: usize) -> Result<SeriesPrefix> {
    let prim = chi.primitive();
    let c = prim.level();
    if prim.p() != t.p {
        return Err(Error::InvalidArgument("character and tensor primes differ".into()));
    }
    if t.c_max < c || (t.m as usize) < k_max + c as usize {
        return Err(Error::ShortPrefix { need: k_max, have: (t.m as usize + 1).saturating_sub(c as usize) });
    }
    let d = prim.order();
    let width = t.p.pow(c);
    let scale = rational::pow_i(t.p, -((t.m as i64) * t.n as i64));
    let mut coeffs = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut buckets = vec![0u64; d as usize];
        for (u, &cnt) in t.levels[k].iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            if let Some(j) = prim.value_index(u as u64 % width) {
                buckets[j as usize] += cnt;
            }
        }
        coeffs.push(CycloValue::from_terms(
            d,
            buckets.iter().enumerate().map(|(j, &b)| (j as u64, int(b as i64) * &scale)),
        ));
    }
    Ok(SeriesPrefix::new(t.p, coeffs))
}

/// Empirical series by enumeration modulo `p^{K + c(chi)}`.
pub fn zeta_series_empirical(
    f: &IntPolynomial,
    z: &ZConstraint,
    p: u64,
    chi: &MultChar,
    k_max: usize,
    budget: u64,
) -> Result<SeriesPrefix> {
    let c = chi.conductor();
    let t = count_tensor(f, z, p, k_max as u32 + c, c, budget)?;
    empirical_from_tensor(&t, chi, k_max)
}

/// One term `c_I prod_{i in I} t^{N_i} q^{-nu_i} / (1 - t^{N_i} q^{-nu_i})`.
#[derive(Clone, Debug, Serialize)]
pub struct DenefTerm {
    pub ids: Vec<String>,
    pub coeff: CycloValue,
    /// `(N_i, nu_i)`.
    pub factors: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalZeta {
    pub q: u64,
    pub chi_order: u64,
    pub chi_exponent: u64,
    pub terms: Vec<DenefTerm>,
}

impl RationalZeta {
    pub fn is_trivial_char(&self) -> bool {
        self.chi_order == 1
    }

    /// Exact value at `s = 0`, i.e. `t = 1`.
    pub fn at_zero(&self) -> CycloValue {
        let mut acc = CycloValue::zero(1);
        for term in &self.terms {
            let mut v = BigRational::one();
            for &(_, nu) in &term.factors {
                let x = rational::pow_i(self.q, -(nu as i64));
                v *= &x / (BigRational::one() - &x);
            }
            acc += &term.coeff.scale(&v);
        }
        acc
    }
}

impl Expandable for RationalZeta {
    fn q(&self) -> u64 {
        self.q
    }

    fn expand(&self, len: usize) -> Result<Vec<CycloValue>> {
        let mut out = vec![CycloValue::zero(1); len];
        for term in &self.terms {
            let series = denef_product_coeffs(&term.factors, self.q, len);
            for (slot, c) in out.iter_mut().zip(series) {
                if !c.is_zero() {
                    *slot += &term.coeff.scale(&c);
                }
            }
        }
        Ok(out)
    }
}

/// Denef's formula: `c_I = (q-1)^{#I} q^{-n} sum_{a in E_I(F_q), h(a) in Z} chi(u(a))`.
pub fn denef_rational(res: &ResolutionData, q: u64, chi: &MultChar) -> Result<RationalZeta> {
    if chi.p() != q {
        return Err(Error::InvalidArgument(format!("character is not defined modulo {q}")));
    }
    let d = chi.order();
    let mut out = RationalZeta { q, chi_order: d, chi_exponent: chi.primitive().exponent(), terms: Vec::new() };
    if chi.conductor() > 1 {
        if res.vanish_on_z {
            return Ok(out);
        }
        return Err(Error::Unsupported(format!(
            "{}: coefficients for conductor {} need data beyond residue tables",
            res.name,
            chi.conductor()
        )));
    }
    let prim = chi.primitive();
    for s in &res.strata {
        if !s.nonempty {
            continue;
        }
        let divs = res.divisors_of(&s.ids)?;
        if divs.iter().any(|x| x.n % d != 0) {
            continue;
        }
        let table = s
            .unit_counts
            .get(&q)
            .ok_or_else(|| Error::MissingTable { stratum: format!("{:?}", s.ids), q })?;
        let mut coeff = CycloValue::zero(d);
        for (&u, &count) in table {
            if count > 0 {
                coeff.add_term(prim.value_index(u).expect("unit key"), int(count as i64));
            }
        }
        let scale = num_traits::pow(int(q as i64 - 1), s.ids.len()) * rational::pow_i(q, -(res.n as i64));
        let coeff = coeff.scale(&scale).canonical();
        if coeff.is_zero() {
            continue;
        }
        out.terms.push(DenefTerm {
            ids: s.ids.clone(),
            coeff,
            factors: divs.iter().map(|x| (x.n, x.nu)).collect(),
        });
    }
    Ok(out)
}

/// Every conductor-1 character mod `q` whose order divides `lcm N_i`.
pub fn matched_characters(res: &ResolutionData, q: u64) -> Result<Vec<MultChar>> {
    use num_integer::Integer;
    let l = res.divisors.iter().fold(1u64, |a, d| a.lcm(&d.n));
    crate::charsum::characters(
        q,
        1,
        crate::charsum::CharFilter { conductor: Some(1), order_divides: Some(l), include_trivial: true },
    )
}

/// Empirical conductor-1 series for each character from one distribution.
pub fn series_from_distribution(dist: &AcDistribution, chi: &MultChar) -> Result<SeriesPrefix> {
    if chi.conductor() != 1 || chi.p() != dist.p {
        return Err(Error::InvalidArgument("distribution engine handles conductor 1 only".into()));
    }
    let prim = chi.primitive();
    let d = prim.order();
    let coeffs = dist
        .dist
        .iter()
        .map(|row| {
            let mut buckets: BTreeMap<u64, BigRational> = BTreeMap::new();
            for (u, c) in row.iter().enumerate().skip(1) {
                if !c.is_zero() {
                    *buckets.entry(prim.value_index(u as u64).unwrap()).or_insert_with(BigRational::zero) += c;
                }
            }
            CycloValue::from_terms(d, buckets)
        })
        .collect();
    Ok(SeriesPrefix::new(dist.p, coeffs))
}
