//! Multiplicative characters of `(Z/p^c)^x` and their Gauss coefficients.

pub mod variety;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expsum::validate_prime;
use crate::numeric::cyclo::CycloValue;
use crate::numeric::hp::{Dd, HpComplex};
use crate::numeric::rational;
use crate::poly::{mulmod, powmod};

pub use variety::{char_sum_variety, kummer_count, langweil_ratio, LangWeilReport, LangWeilRow, VarietySpec};

/// `(Z/p^c)^x` with a primitive root and a discrete-log table.
#[derive(Debug)]
pub struct UnitGroup {
    pub p: u64,
    pub level: u32,
    pub modulus: u64,
    pub phi: u64,
    pub generator: u64,
    dlog: Vec<u32>,
}

const NOT_A_UNIT: u32 = u32::MAX;

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest `g` generating `(Z/p^c)^x` for every `c`: a primitive root mod
/// `p` with `g^{p-1} != 1 mod p^2`.
pub fn primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..)
        .find(|&g| {
            g % p != 0
                && factors.iter().all(|&r| powmod(g, (p - 1) / r, p) != 1)
                && powmod(g, p - 1, p * p) != 1
        })
        .unwrap()
}

impl UnitGroup {
    fn build(p: u64, level: u32) -> Self {
        let modulus = p.pow(level);
        let phi = modulus - modulus / p;
        let g = primitive_root(p) % modulus;
        let mut dlog = vec![NOT_A_UNIT; modulus as usize];
        let mut x = 1 % modulus;
        for l in 0..phi {
            dlog[x as usize] = l as u32;
            x = mulmod(x, g, modulus);
        }
        UnitGroup { p, level, modulus, phi, generator: g, dlog }
    }

    /// Shared instance for `(p, level)`.
    pub fn get(p: u64, level: u32) -> Result<Arc<UnitGroup>> {
        validate_prime(p)?;
        if level == 0 {
            return Err(Error::InvalidArgument("character level must be >= 1".into()));
        }
        let modulus = p.checked_pow(level).filter(|&m| m <= 1 << 26).ok_or_else(|| {
            Error::Unsupported(format!("unit group modulo {p}^{level} is too large"))
        })?;
        let _ = modulus;
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<UnitGroup>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = cache.lock().unwrap().get(&(p, level)) {
            return Ok(g.clone());
        }
        let g = Arc::new(UnitGroup::build(p, level));
        cache.lock().unwrap().entry((p, level)).or_insert(g.clone());
        Ok(g)
    }

    pub fn dlog(&self, u: u64) -> Option<u64> {
        match self.dlog[(u % self.modulus) as usize] {
            NOT_A_UNIT => None,
            l => Some(l as u64),
        }
    }
}

/// `chi_e(g^l) = zeta_phi^{e l}` on `(Z/p^level)^x`, with `chi(non-unit) = 0`.
#[derive(Clone)]
pub struct MultChar {
    group: Arc<UnitGroup>,
    e: u64,
}

impl fmt::Debug for MultChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi(p={}, level={}, e={})", self.p(), self.level(), self.e)
    }
}

impl fmt::Display for MultChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            write!(f, "trivial")
        } else {
            write!(f, "order {} conductor {} (e={} mod {}^{})", self.order(), self.conductor(), self.e, self.p(), self.level())
        }
    }
}

impl PartialEq for MultChar {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for MultChar {}

impl MultChar {
    pub fn new(group: Arc<UnitGroup>, e: u64) -> Self {
        let e = e % group.phi;
        MultChar { group, e }
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Ok(MultChar::new(UnitGroup::get(p, 1)?, 0))
    }

    /// The character of exact order `d` on `F_p^x` sending the primitive root to `zeta_d`.
    pub fn of_order(p: u64, d: u64) -> Result<Self> {
        if d == 0 || (p - 1) % d != 0 {
            return Err(Error::InvalidArgument(format!("no character of order {d} mod {p}")));
        }
        Ok(MultChar::new(UnitGroup::get(p, 1)?, (p - 1) / d))
    }

    pub fn p(&self) -> u64 {
        self.group.p
    }

    pub fn level(&self) -> u32 {
        self.group.level
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    /// `(p, level, e)`.
    pub fn key(&self) -> (u64, u32, u64) {
        (self.p(), self.level(), self.e)
    }

    pub fn is_trivial(&self) -> bool {
        self.e == 0
    }

    pub fn order(&self) -> u64 {
        self.group.phi / self.group.phi.gcd(&self.e)
    }

    /// Least `c >= 1` with `chi` trivial on `1 + p^c`.
    pub fn conductor(&self) -> u32 {
        if self.e == 0 {
            return 1;
        }
        let mut v = 0;
        let mut e = self.e;
        while e % self.p() == 0 && v < self.level() {
            e /= self.p();
            v += 1;
        }
        (self.level() - v).max(1)
    }

    /// The same character on `(Z/p^conductor)^x`.
    pub fn primitive(&self) -> MultChar {
        let c = self.conductor();
        if c == self.level() {
            return self.clone();
        }
        let shrink = self.p().pow(self.level() - c);
        MultChar::new(UnitGroup::get(self.p(), c).unwrap(), self.e / shrink)
    }

    /// The same character on `(Z/p^level)^x`, `level >= conductor`.
    pub fn at_level(&self, level: u32) -> Result<MultChar> {
        let prim = self.primitive();
        if level < prim.level() {
            return Err(Error::InvalidArgument(format!("level {level} is below the conductor {}", prim.level())));
        }
        let grow = self.p().pow(level - prim.level());
        Ok(MultChar::new(UnitGroup::get(self.p(), level)?, prim.e * grow))
    }

    pub fn inverse(&self) -> MultChar {
        MultChar::new(self.group.clone(), self.group.phi - self.e)
    }

    /// `j` with `chi(u) = zeta_order^j`, or `None` when `u` is not a unit.
    pub fn value_index(&self, u: u64) -> Option<u64> {
        let l = self.group.dlog(u)?;
        let d = self.order();
        let step = self.e / (self.group.phi / d);
        Some(mulmod(step % d, l % d, d))
    }

    pub fn value(&self, u: u64) -> CycloValue {
        let d = self.order();
        match self.value_index(u) {
            Some(j) => CycloValue::root(d, j),
            None => CycloValue::zero(d),
        }
    }

    pub fn value_hp(&self, u: u64) -> HpComplex {
        match self.value_index(u) {
            Some(j) => HpComplex::unit_root(j as i128, self.order()),
            None => HpComplex::ZERO,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CharFilter {
    pub conductor: Option<u32>,
    pub order_divides: Option<u64>,
    pub include_trivial: bool,
}

/// Characters of `(Z/p^level)^x` passing the filter, by increasing exponent.
pub fn characters(p: u64, level: u32, filter: CharFilter) -> Result<Vec<MultChar>> {
    let g = UnitGroup::get(p, level)?;
    Ok((0..g.phi)
        .map(|e| MultChar::new(g.clone(), e))
        .filter(|chi| {
            (filter.include_trivial || !chi.is_trivial())
                && filter.conductor.map_or(true, |c| chi.conductor() == c)
                && filter.order_divides.map_or(true, |d| d % chi.order() == 0)
        })
        .collect())
}

fn gauss_params(chi: &MultChar, m: u32) -> Result<MultChar> {
    if chi.is_trivial() {
        return Err(Error::InvalidArgument("Gauss coefficient of the trivial character".into()));
    }
    let prim = chi.primitive();
    if m < prim.level() {
        return Err(Error::InvalidArgument(format!("level {m} below conductor {}", prim.level())));
    }
    Ok(prim)
}

fn gauss_scale(p: u64, c: u32) -> BigRational {
    rational::pow_i(p, 1 - c as i64) / rational::int(p as i64 - 1)
}

/// `g_chi = q^{1-c} (q-1)^{-1} sum_{u in (Z/p^c)^x} chi(u) e^{2 pi i u / p^c}`, `c = c(chi)`,
/// exactly, in `Q(zeta_{lcm(d, p^c)})`.
pub fn gauss_coefficient(chi: &MultChar, m: u32) -> Result<CycloValue> {
    let prim = gauss_params(chi, m)?;
    let c = prim.level();
    let pc = prim.group.modulus;
    let d = prim.order();
    let big = d.lcm(&pc);
    let mut out = CycloValue::zero(big);
    let one = rational::int(1);
    for u in 1..pc {
        if let Some(j) = prim.value_index(u) {
            out.add_term(j * (big / d) + u * (big / pc), one.clone());
        }
    }
    Ok(out.scale(&gauss_scale(chi.p(), c)))
}

/// The same coefficient evaluated directly in double-double.
pub fn gauss_coefficient_hp(chi: &MultChar, m: u32) -> Result<HpComplex> {
    let prim = gauss_params(chi, m)?;
    let pc = prim.group.modulus;
    let mut acc = HpComplex::ZERO;
    for u in 1..pc {
        if prim.value_index(u).is_some() {
            acc += prim.value_hp(u) * HpComplex::unit_root(u as i128, pc);
        }
    }
    Ok(acc.scale(Dd::from_rational(&gauss_scale(chi.p(), prim.level()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::int;

    fn all(p: u64, level: u32) -> Vec<MultChar> {
        characters(p, level, CharFilter { include_trivial: true, ..Default::default() }).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let q = characters(5, 1, CharFilter { order_divides: Some(2), ..Default::default() }).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].value(2), CycloValue::from_rational(2, int(-1)));
        let t = characters(7, 1, CharFilter { order_divides: Some(1), include_trivial: true, ..Default::default() }).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].is_trivial());
        let nine = all(3, 2);
        assert_eq!(nine.len(), 6);
        assert_eq!(nine.iter().filter(|c| c.conductor() == 1).count(), 2);
        assert!(characters(2, 1, CharFilter::default()).is_err());
    }

    #[test]
    fn levels_and_conductors() {
        for chi in all(5, 3) {
            let prim = chi.primitive();
            assert_eq!(prim.level(), chi.conductor());
            assert_eq!(prim.order(), chi.order());
            for u in [1u64, 2, 3, 7, 24, 26, 124] {
                assert_eq!(prim.value(u), chi.value(u), "{chi:?} at {u}");
            }
            assert_eq!(prim.at_level(3).unwrap(), chi);
        }
        // chi(0) = 0 and chi(p) = 0
        let chi = MultChar::of_order(7, 3).unwrap();
        assert!(chi.value(0).is_zero() && chi.value(7).is_zero());
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, level) in [(5u64, 2u32), (7, 2), (3, 3), (13, 1)] {
            let m = p.pow(level);
            for chi in all(p, level) {
                for _ in 0..10_000 / (m as usize).min(50) {
                    let u = rng.gen_range(1..m);
                    let v = rng.gen_range(1..m);
                    let (a, b) = (chi.value_index(u), chi.value_index(v));
                    let uv = chi.value_index(u * v % m);
                    match (a, b) {
                        (Some(a), Some(b)) => assert_eq!(uv, Some((a + b) % chi.order())),
                        _ => assert_eq!(uv, None),
                    }
                }
            }
        }
    }

    #[test]
    fn quadratic_gauss_sum_mod_five() {
        let chi = MultChar::of_order(5, 2).unwrap();
        let g = gauss_coefficient(&chi, 1).unwrap();
        let (re, im) = g.to_complex().to_f64();
        assert!((re - 5f64.sqrt() / 4.0).abs() < 1e-15 && im.abs() < 1e-15);
        let g7 = gauss_coefficient_hp(&MultChar::of_order(7, 3).unwrap(), 1).unwrap();
        assert!((g7.abs().to_f64() - 7f64.sqrt() / 6.0).abs() < 1e-12);
        assert!(gauss_coefficient(&MultChar::trivial(5).unwrap(), 1).is_err());
    }

    #[test]
    fn exact_and_hp_gauss_agree_at_higher_conductor() {
        for chi in all(3, 2).into_iter().filter(|c| !c.is_trivial()) {
            let a = gauss_coefficient(&chi, 2).unwrap().to_complex();
            let b = gauss_coefficient_hp(&chi, 2).unwrap();
            assert!((a - b).abs().to_f64() < 1e-28);
            if chi.conductor() == 2 {
                // |G| = p^{c/2} for a primitive character mod p^c
                let want = 3f64.powf(-1.0) * 3.0 / 2.0;
                assert!((a.abs().to_f64() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orthogonality_over_cosets() {
        for p in [5u64, 7, 13, 31] {
            for d in 2..p {
                if (p - 1) % d != 0 {
                    continue;
                }
                let chi = MultChar::of_order(p, d).unwrap();
                let g = chi.group().generator;
                let mut s = CycloValue::zero(d);
                for i in 0..d {
                    s += &chi.value(powmod(g, i, p));
                }
                assert!(s.is_zero(), "p={p} d={d}");
            }
        }
    }
}
