//! Real parts and orders of the poles of a Denef-form zeta function, and the
//! oscillation index they bound.
//!
//! All factors of ratio `nu/N = a/b` (lowest terms) have the form
//! `1 - X^k` with `X = t^b q^{-a}`, so their poles sit at `t0 = theta^a eta`
//! with `theta = q^{1/b}` and `eta^{bL} = 1`. Each candidate is tested
//! exactly in `Q(zeta_D)[theta]/(theta^b - q)`: the order is the multiplicity
//! of `t0` in the common denominator minus its multiplicity in the numerator.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::RationalZeta;
use crate::error::{Error, Result};
use crate::numeric::cyclo::CycloValue;
use crate::numeric::rational::{self, int, rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pole {
    #[serde(with = "rational::serde_str")]
    pub real_part: BigRational,
    /// Pole order of the zeta function itself.
    pub order: u32,
    /// Pole order of `(t - q)^delta Z`.
    pub nontrivial_order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleSet {
    pub delta: u8,
    /// By decreasing real part.
    pub poles: Vec<Pole>,
}

impl PoleSet {
    /// The largest real part of a nontrivial pole.
    pub fn largest_nontrivial(&self) -> Option<BigRational> {
        self.poles.iter().filter(|p| p.nontrivial_order > 0).map(|p| p.real_part.clone()).max()
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 - q^{-nu} t^N`.
fn factor_poly(q: u64, n: u64, nu: u64) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n as usize + 1];
    v[0] = BigRational::one();
    v[n as usize] = -rational::pow_i(q, -(nu as i64));
    v
}

fn multiplicities(factors: &[(u64, u64)]) -> BTreeMap<(u64, u64), u32> {
    let mut m = BTreeMap::new();
    for &f in factors {
        *m.entry(f).or_insert(0) += 1;
    }
    m
}

/// Numerator `P` over the common denominator `Q = prod (1 - q^{-nu} t^N)^{e}`.
fn numerator(r: &RationalZeta, exps: &BTreeMap<(u64, u64), u32>, order: u64) -> Vec<CycloValue> {
    let deg: u64 = exps.iter().map(|(&(n, _), &e)| n * e as u64).sum();
    let mut out = vec![CycloValue::zero(order); deg as usize + 1];
    for term in &r.terms {
        let own = multiplicities(&term.factors);
        let mut poly = vec![BigRational::one()];
        let mut shift = 0usize;
        let mut lead = BigRational::one();
        for &(n, nu) in &term.factors {
            shift += n as usize;
            lead *= rational::pow_i(r.q, -(nu as i64));
        }
        for (&(n, nu), &e) in exps {
            for _ in own.get(&(n, nu)).copied().unwrap_or(0)..e {
                poly = poly_mul(&poly, &factor_poly(r.q, n, nu));
            }
        }
        let coeff = term.coeff.lift(order);
        for (i, c) in poly.iter().enumerate() {
            if !c.is_zero() {
                out[i + shift] += &coeff.scale(&(c * &lead));
            }
        }
    }
    out
}

/// Element of `Q(zeta_D)[theta]/(theta^b - q)`.
struct Radical {
    q: u64,
    b: u64,
    slots: Vec<CycloValue>,
}

impl Radical {
    fn zero(q: u64, b: u64, order: u64) -> Self {
        Radical { q, b, slots: vec![CycloValue::zero(order); b as usize] }
    }

    /// `+= c theta^e zeta_D^j`.
    fn add(&mut self, c: &CycloValue, s: &BigRational, e: u64, j: u64) {
        let order = self.slots[0].order();
        let w = s * num_traits::pow(int(self.q as i64), (e / self.b) as usize);
        let slot = &mut self.slots[(e % self.b) as usize];
        for (idx, x) in c.lift(order).terms() {
            slot.add_term(idx + j, x * &w);
        }
    }

    fn is_zero(&self) -> bool {
        self.slots.iter().all(CycloValue::is_zero)
    }
}

fn falling(i: usize, r: usize) -> BigRational {
    let mut v = BigRational::one();
    for k in 0..r {
        v *= int((i - k) as i64);
    }
    v
}

/// Poles of `Z`; the real part of `s` at `t0` is `-log_q |t0|`.
pub fn poles(r: &RationalZeta) -> Result<PoleSet> {
    let delta = u8::from(r.is_trivial_char());
    let mut exps: BTreeMap<(u64, u64), u32> = BTreeMap::new();
    let mut order = r.chi_order.max(1);
    for term in &r.terms {
        order = order.lcm(&term.coeff.order());
        for (f, e) in multiplicities(&term.factors) {
            let slot = exps.entry(f).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let p_num = numerator(r, &exps, order);
    if p_num.iter().all(CycloValue::is_zero) {
        return Ok(PoleSet { delta, poles: Vec::new() });
    }
    let mut by_ratio: BTreeMap<BigRational, Vec<((u64, u64), u32)>> = BTreeMap::new();
    for (&(n, nu), &e) in &exps {
        by_ratio.entry(rat(nu as i64, n as i64)).or_default().push(((n, nu), e));
    }
    let mut out = Vec::new();
    for (ratio, factors) in by_ratio.iter().rev() {
        let a = ratio.numer().try_into().unwrap_or(0u64);
        let b: u64 = ratio.denom().try_into().unwrap_or(0u64);
        let l = factors.iter().fold(1u64, |acc, ((n, _), _)| acc.lcm(&(n / b)));
        let cycle = b * l;
        if b % 2 == 0 && cycle % r.q == 0 {
            return Err(Error::Unsupported(format!(
                "poles at real part -{a}/{b}: q^(1/{b}) may lie in the cyclotomic field of order {cycle}"
            )));
        }
        let dd = order.lcm(&cycle);
        let step = dd / cycle;
        let (mut best, mut best_nontrivial) = (0u32, 0u32);
        for j in 0..cycle {
            let mult_q: u32 = factors.iter().filter(|((n, _), _)| (j * n) % cycle == 0).map(|(_, e)| *e).sum();
            if mult_q == 0 {
                continue;
            }
            // smallest r with P^{(r)}(t0) != 0
            let mut vanish = 0u32;
            while vanish < mult_q {
                let rr = vanish as usize;
                let mut v = Radical::zero(r.q, b, dd);
                for (i, c) in p_num.iter().enumerate().skip(rr) {
                    if !c.is_zero() {
                        let k = (i - rr) as u64;
                        v.add(c, &falling(i, rr), a * k, (j * k % cycle) * step);
                    }
                }
                if !v.is_zero() {
                    break;
                }
                vanish += 1;
            }
            let ord = mult_q - vanish;
            let at_q = delta == 1 && a == 1 && b == 1 && j == 0;
            best = best.max(ord);
            best_nontrivial = best_nontrivial.max(if at_q { ord.saturating_sub(1) } else { ord });
        }
        if best > 0 {
            out.push(Pole { real_part: -ratio.clone(), order: best, nontrivial_order: best_nontrivial });
        }
    }
    Ok(PoleSet { delta, poles: out })
}

/// Pole data for one prime and character.
#[derive(Clone, Debug, Serialize)]
pub struct MoiEvidence {
    pub p: u64,
    pub chi: String,
    pub poles: PoleSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoiEstimate {
    /// `None` is `+inf`: no nontrivial pole anywhere.
    #[serde(serialize_with = "ser_moi")]
    pub value: Option<BigRational>,
    pub attained_by: Vec<(u64, String)>,
    /// Every prime in the evidence attains the extremal real part.
    pub stabilized: bool,
}

fn ser_moi<S: Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&rational::format(r)),
        None => s.serialize_str("+inf"),
    }
}

/// `-max LNP` over the supplied evidence.
pub fn moi_estimate(evidence: &[MoiEvidence]) -> MoiEstimate {
    let best = evidence.iter().filter_map(|e| e.poles.largest_nontrivial()).max();
    let Some(best) = best else {
        return MoiEstimate { value: None, attained_by: Vec::new(), stabilized: !evidence.is_empty() };
    };
    let attained_by: Vec<(u64, String)> = evidence
        .iter()
        .filter(|e| e.poles.largest_nontrivial().as_ref() == Some(&best))
        .map(|e| (e.p, e.chi.clone()))
        .collect();
    let primes: std::collections::BTreeSet<u64> = evidence.iter().map(|e| e.p).collect();
    let stabilized = primes.iter().all(|p| attained_by.iter().any(|(q, _)| q == p));
    MoiEstimate { value: Some(-best), attained_by, stabilized }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::DenefTerm;

    fn zeta(q: u64, d: u64, terms: Vec<(BigRational, Vec<(u64, u64)>)>) -> RationalZeta {
        RationalZeta {
            q,
            chi_order: d,
            chi_exponent: if d == 1 { 0 } else { 1 },
            terms: terms
                .into_iter()
                .map(|(c, factors)| DenefTerm { ids: Vec::new(), coeff: CycloValue::from_rational(1, c), factors })
                .collect(),
        }
    }

    fn one_minus(q: u64) -> BigRational {
        int(1) - rat(1, q as i64)
    }

    #[test]
    fn quadratic_pole() {
        // (1 - 1/q)/(1 - t^2/q) = (1 - 1/q) + (1 - 1/q) x/(1 - x), x = t^2/q
        let q = 7;
        let z = zeta(q, 1, vec![(one_minus(q), vec![]), (one_minus(q), vec![(2, 1)])]);
        let ps = poles(&z).unwrap();
        assert_eq!(ps.poles, vec![Pole { real_part: rat(-1, 2), order: 1, nontrivial_order: 1 }]);
    }

    #[test]
    fn double_pole_of_a_crossing() {
        // xy after one blow-up: (1 - 1/q)^2 / (1 - t/q)^2
        let q = 5;
        let a = one_minus(q);
        let c0 = &a * &a;
        let c1 = &a * &a;
        let z = zeta(
            q,
            1,
            vec![
                (c0.clone(), vec![]),
                (c1.clone(), vec![(1, 1)]),
                (c1.clone(), vec![(1, 1)]),
                (&a * &a, vec![(2, 2)]),
                (&a * &a, vec![(1, 1), (2, 2)]),
                (&a * &a, vec![(1, 1), (2, 2)]),
            ],
        );
        let s = crate::numeric::series::series_coefficients(&z, 8).unwrap();
        let a2 = &a * &a;
        for (k, c) in s.coeffs.iter().enumerate() {
            let want = &a2 * int(k as i64 + 1) * rational::pow_i(q, -(k as i64));
            assert_eq!(c.to_rational(), Some(want), "k = {k}");
        }
        let ps = poles(&z).unwrap();
        assert_eq!(ps.poles, vec![Pole { real_part: int(-1), order: 2, nontrivial_order: 1 }]);
    }

    #[test]
    fn smooth_has_only_the_trivial_pole() {
        let q = 5;
        let z = zeta(q, 1, vec![(one_minus(q), vec![]), (one_minus(q), vec![(1, 1)])]);
        let ps = poles(&z).unwrap();
        assert_eq!(ps.poles, vec![Pole { real_part: int(-1), order: 1, nontrivial_order: 0 }]);
        assert_eq!(ps.largest_nontrivial(), None);
        assert!(poles(&zeta(q, 1, vec![(one_minus(q), vec![])])).unwrap().poles.is_empty());
    }

    #[test]
    fn exact_cancellation_is_detected() {
        // x/(1 - x) - x/(1 - x) with x = t^3/q
        let q = 7;
        let z = zeta(q, 1, vec![(int(1), vec![(3, 1)]), (int(-1), vec![(3, 1)])]);
        assert!(poles(&z).unwrap().poles.is_empty());
        // x^2/(1 - x)^2 - x/(1 - x) = (2x^2 - x)/(1 - x)^2 keeps its double pole
        let z = zeta(q, 1, vec![(int(1), vec![(3, 1), (3, 1)]), (int(-1), vec![(3, 1)])]);
        let ps = poles(&z).unwrap();
        assert_eq!(ps.poles.len(), 1);
        assert_eq!(ps.poles[0].order, 2);
        let z = zeta(q, 1, vec![(int(1), vec![(3, 1), (3, 1)]), (int(-1), vec![(3, 1), (3, 1)])]);
        assert!(poles(&z).unwrap().poles.is_empty());
    }

    #[test]
    fn pole_not_at_every_root() {
        // x/(1 - x) with x = t^2/q^2, minus y/(1 - y) with y = t/q leaves the pole at t = -q
        let q = 5;
        let z = zeta(q, 1, vec![(int(1), vec![(2, 2)]), (int(-1), vec![(1, 1)])]);
        let ps = poles(&z).unwrap();
        assert_eq!(ps.poles, vec![Pole { real_part: int(-1), order: 1, nontrivial_order: 1 }]);
    }

    #[test]
    fn moi_examples() {
        let half = PoleSet { delta: 1, poles: vec![Pole { real_part: rat(-1, 2), order: 1, nontrivial_order: 1 }] };
        let ev: Vec<MoiEvidence> = [5u64, 7, 11]
            .iter()
            .flat_map(|&p| {
                ["trivial", "quadratic"].map(|c| MoiEvidence { p, chi: c.into(), poles: half.clone() })
            })
            .collect();
        let est = moi_estimate(&ev);
        assert_eq!(est.value, Some(rat(1, 2)));
        assert!(est.stabilized);
        assert_eq!(est.attained_by.len(), 6);
        let flat = PoleSet { delta: 1, poles: vec![Pole { real_part: int(-1), order: 1, nontrivial_order: 0 }] };
        let est = moi_estimate(&[MoiEvidence { p: 5, chi: "trivial".into(), poles: flat }]);
        assert_eq!(est.value, None);
        assert_eq!(serde_json::to_value(&est).unwrap()["value"], "+inf");
    }
}
