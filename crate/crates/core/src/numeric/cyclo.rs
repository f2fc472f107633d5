//! Exact elements of the cyclotomic field Q(zeta_D).
//!
//! Values are kept as sparse vectors over the redundant power basis
//! `zeta_D^0 .. zeta_D^{D-1}`. Nothing is reduced during arithmetic;
//! reduction modulo Phi_D happens only in [`CycloValue::canonical`], which
//! equality and zero tests go through.
//!
//! The canonical form uses the CRT splitting `Q(zeta_D) = (x)_i Q(zeta_{q_i})`
//! over the prime powers `q_i || D`. On the `q = p^k` axis the relation
//! `sum_{s<p} w^{r + s q/p} = 0` rewrites every exponent `x >= phi(q)`,
//! leaving the standard basis `{w^x : x < phi(q)}`. The tensor product of
//! those bases is a Q-basis of Q(zeta_D), so the reduced vector is unique.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::hp::{Dd, HpComplex, RootTable};
use super::rational;

#[derive(Clone, Debug)]
pub struct CycloValue {
    order: u64,
    coeffs: BTreeMap<u64, BigRational>,
}

/// Prime-power factorisation `D = prod p^k` as `(p, p^k)` pairs.
pub fn prime_power_parts(mut d: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= d {
        if d % f == 0 {
            let mut q = 1;
            while d % f == 0 {
                d /= f;
                q *= f;
            }
            out.push((f, q));
        }
        f += 1;
    }
    if d > 1 {
        out.push((d, d));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    assert_eq!(g.gcd, 1, "{a} not invertible mod {m}");
    g.x.rem_euclid(m as i128) as u64
}

/// Reduce a sparse power-basis vector of order `order` to the canonical
/// CRT basis. Zero coefficients are dropped.
pub fn reduce_sparse<T>(order: u64, entries: BTreeMap<u64, T>) -> BTreeMap<u64, T>
where
    T: Clone + Zero + AddAssign + SubAssign,
{
    let mut cur: BTreeMap<u64, T> = entries.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    for (p, q) in prime_power_parts(order) {
        let e = order / q;
        let inv = mod_inverse(e % q, q);
        let sub = q / p;
        let phi = q - sub;
        let mut next: BTreeMap<u64, T> = BTreeMap::new();
        for (j, c) in cur {
            let x = (j % q) * inv % q;
            if x < phi {
                add_entry(&mut next, j, c);
                continue;
            }
            let r = x % sub;
            // w^x = -sum_{s < p-1} w^{r + s q/p}
            for s in 0..p - 1 {
                let x2 = r + s * sub;
                let j2 = ((j as u128 + (order as u128) * (q as u128) - (x as u128) * (e as u128)
                    + (x2 as u128) * (e as u128))
                    % order as u128) as u64;
                sub_entry(&mut next, j2, c.clone());
            }
        }
        cur = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    cur
}

fn add_entry<T: Zero + AddAssign>(m: &mut BTreeMap<u64, T>, j: u64, c: T) {
    *m.entry(j).or_insert_with(T::zero) += c;
}

fn sub_entry<T: Zero + SubAssign>(m: &mut BTreeMap<u64, T>, j: u64, c: T) {
    *m.entry(j).or_insert_with(T::zero) -= c;
}

/// True iff `sum_j coeffs[j] zeta_order^j == 0` for integer coefficients.
pub fn int_sum_is_zero(order: u64, coeffs: &[i64]) -> bool {
    let entries: BTreeMap<u64, i64> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(j, c)| (j as u64, *c))
        .collect();
    reduce_sparse(order, entries).is_empty()
}

/// Dense variant of [`int_sum_is_zero`] for long histograms; indices are
/// exponents of `zeta_order`.
pub fn dense_int_sum_is_zero(order: u64, mut c: Vec<i64>) -> bool {
    assert_eq!(c.len() as u64, order);
    for (p, q) in prime_power_parts(order) {
        let e = order / q;
        let inv = mod_inverse(e % q, q);
        let sub = q / p;
        let phi = q - sub;
        for j in 0..order {
            let cj = c[j as usize];
            if cj == 0 {
                continue;
            }
            let x = (j % q) * inv % q;
            if x < phi {
                continue;
            }
            c[j as usize] = 0;
            let r = x % sub;
            // j with its q-coordinate cleared, shifted back into 0..order
            let base = (j as u128 + order as u128 * q as u128 - x as u128 * e as u128) % order as u128;
            for s in 0..p - 1 {
                let j2 = ((base + ((r + s * sub) as u128) * e as u128) % order as u128) as usize;
                c[j2] -= cj;
            }
        }
    }
    c.iter().all(|&v| v == 0)
}

impl CycloValue {
    pub fn zero(order: u64) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        CycloValue { order, coeffs: BTreeMap::new() }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u64, r: BigRational) -> Self {
        let mut v = Self::zero(order);
        if !r.is_zero() {
            v.coeffs.insert(0, r);
        }
        v
    }

    /// `zeta_order^j`.
    pub fn root(order: u64, j: u64) -> Self {
        let mut v = Self::zero(order);
        v.coeffs.insert(j % order, BigRational::one());
        v
    }

    pub fn from_terms(order: u64, terms: impl IntoIterator<Item = (u64, BigRational)>) -> Self {
        let mut v = Self::zero(order);
        for (j, c) in terms {
            v.add_term(j, c);
        }
        v
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Stored (unreduced) coefficients in index order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.coeffs.iter().map(|(j, c)| (*j, c))
    }

    pub fn add_term(&mut self, j: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let j = j % self.order;
        let slot = self.coeffs.entry(j).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    /// Re-express in Q(zeta_{new_order}); `new_order` must be a multiple.
    pub fn lift(&self, new_order: u64) -> Self {
        assert!(new_order % self.order == 0, "cannot lift order {} to {}", self.order, new_order);
        if new_order == self.order {
            return self.clone();
        }
        let f = new_order / self.order;
        CycloValue {
            order: new_order,
            coeffs: self.coeffs.iter().map(|(j, c)| (j * f, c.clone())).collect(),
        }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = a.order.lcm(&b.order);
        (a.lift(l), b.lift(l))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.order);
        }
        CycloValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, c * s)).collect(),
        }
    }

    /// Reduced modulo Phi_D in the canonical CRT basis.
    pub fn canonical(&self) -> Self {
        CycloValue { order: self.order, coeffs: reduce_sparse(self.order, self.coeffs.clone()) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() || self.canonical().coeffs.is_empty()
    }

    /// The rational value, if this element lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        let c = self.canonical();
        match c.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => c.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn to_complex_with(&self, table: &RootTable) -> HpComplex {
        assert_eq!(table.order(), self.order, "root table order mismatch");
        let mut acc = HpComplex::ZERO;
        for (j, c) in &self.coeffs {
            acc += table.get(*j).scale(Dd::from_rational(c));
        }
        acc
    }

    pub fn to_complex(&self) -> HpComplex {
        if self.coeffs.is_empty() {
            return HpComplex::ZERO;
        }
        if self.coeffs.len() == 1 {
            let (j, c) = self.coeffs.iter().next().unwrap();
            return HpComplex::unit_root(*j as i128, self.order).scale(Dd::from_rational(c));
        }
        self.to_complex_with(&RootTable::new(self.order))
    }

    /// Complex conjugate: zeta^j -> zeta^{-j}.
    pub fn conj(&self) -> Self {
        CycloValue {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(j, c)| ((self.order - j) % self.order, c.clone()))
                .collect(),
        }
    }
}

/// Maps any cyclotomic scalar on the given root table order.
pub fn to_complex_cyclo(v: &CycloValue) -> HpComplex {
    v.to_complex()
}

impl PartialEq for CycloValue {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for CycloValue {}

impl<'a> Add<&'a CycloValue> for &'a CycloValue {
    type Output = CycloValue;
    fn add(self, b: &CycloValue) -> CycloValue {
        let (mut x, y) = CycloValue::common(self, b);
        for (j, c) in y.coeffs {
            x.add_term(j, c);
        }
        x
    }
}

impl<'a> Sub<&'a CycloValue> for &'a CycloValue {
    type Output = CycloValue;
    fn sub(self, b: &CycloValue) -> CycloValue {
        let (mut x, y) = CycloValue::common(self, b);
        for (j, c) in y.coeffs {
            x.add_term(j, -c);
        }
        x
    }
}

impl<'a> Mul<&'a CycloValue> for &'a CycloValue {
    type Output = CycloValue;
    fn mul(self, b: &CycloValue) -> CycloValue {
        let (x, y) = CycloValue::common(self, b);
        let d = x.order;
        let mut out = CycloValue::zero(d);
        for (i, a) in &x.coeffs {
            for (j, c) in &y.coeffs {
                out.add_term((i + j) % d, a * c);
            }
        }
        out
    }
}

impl Neg for &CycloValue {
    type Output = CycloValue;
    fn neg(self) -> CycloValue {
        CycloValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, -c)).collect(),
        }
    }
}

impl Add for CycloValue {
    type Output = CycloValue;
    fn add(self, b: CycloValue) -> CycloValue {
        &self + &b
    }
}

impl Sub for CycloValue {
    type Output = CycloValue;
    fn sub(self, b: CycloValue) -> CycloValue {
        &self - &b
    }
}

impl Mul for CycloValue {
    type Output = CycloValue;
    fn mul(self, b: CycloValue) -> CycloValue {
        &self * &b
    }
}

impl AddAssign<&CycloValue> for CycloValue {
    fn add_assign(&mut self, b: &CycloValue) {
        if self.order == b.order {
            for (j, c) in &b.coeffs {
                self.add_term(*j, c.clone());
            }
        } else {
            *self = &*self + b;
        }
    }
}

impl SubAssign<&CycloValue> for CycloValue {
    fn sub_assign(&mut self, b: &CycloValue) {
        *self = &*self - b;
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        if c.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, v) in &c.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *j == 0 {
                write!(f, "{}", rational::format(v))?;
            } else {
                write!(f, "({})*z{}^{}", rational::format(v), c.order, j)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct CycloRepr {
    order: u64,
    coeffs: Vec<(u64, String)>,
}

impl Serialize for CycloValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c = self.canonical();
        CycloRepr {
            order: c.order,
            coeffs: c.coeffs.iter().map(|(j, v)| (*j, rational::format(v))).collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn fourth_root_squared_is_minus_one() {
        let z = CycloValue::root(4, 1);
        let sq = &z * &z;
        assert_eq!(sq, CycloValue::from_rational(4, int(-1)));
        let (re, im) = sq.to_complex().to_f64();
        assert_eq!((re, im), (-1.0, 0.0));
    }

    #[test]
    fn full_root_sum_vanishes() {
        let s = CycloValue::from_terms(3, (0..3).map(|j| (j, int(1))));
        assert!(s.is_zero());
        assert!(s.to_complex().abs().to_f64() < 1e-30);
        let s12 = CycloValue::from_terms(12, [(1, int(1)), (5, int(1)), (9, int(1))]);
        // zeta_12 (1 + zeta_3 + zeta_3^2) = 0
        assert!(s12.is_zero());
    }

    #[test]
    fn golden_ratio_value() {
        let v = CycloValue::from_terms(5, [(1, int(1)), (4, int(1))]);
        let (re, im) = v.to_complex().to_f64();
        let expect = (5f64.sqrt() - 1.0) / 2.0;
        assert!((re - expect).abs() < 1e-15 && im.abs() < 1e-15);
        assert!((re - 0.618_033_988_7).abs() < 1e-10);
    }

    #[test]
    fn mixed_orders_compare_after_lift() {
        // zeta_6^2 = zeta_3
        assert_eq!(CycloValue::root(6, 2), CycloValue::root(3, 1));
        // zeta_4 != zeta_4^3
        assert_ne!(CycloValue::root(4, 1), CycloValue::root(4, 3));
        // -zeta_3^2 - zeta_3 = 1
        let v = CycloValue::from_terms(3, [(1, int(-1)), (2, int(-1))]);
        assert_eq!(v.to_rational(), Some(int(1)));
    }

    #[test]
    fn int_zero_test() {
        // sum over Z/9 of zeta_9^{x^2}: counts {0:3,1:2,4:2,7:2}
        let mut h = vec![0i64; 9];
        for x in 0..9 {
            h[(x * x) % 9] += 1;
        }
        assert!(!int_sum_is_zero(9, &h));
        let mut h2 = h.clone();
        h2[0] -= 3; // remove the zero class: 2(z + z^4 + z^7) = 0
        assert!(int_sum_is_zero(9, &h2));
        assert!(dense_int_sum_is_zero(9, h2.clone()));
        assert!(!dense_int_sum_is_zero(9, h.clone()));
    }

    #[test]
    fn dense_and_sparse_zero_tests_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for order in [1u64, 6, 12, 30, 45, 49, 60] {
            for _ in 0..50 {
                // random element of the ideal spanned by root sums, plus noise sometimes
                let mut v = vec![0i64; order as usize];
                for (p, _) in prime_power_parts(order) {
                    let step = order / p;
                    let start = rng.gen_range(0..order);
                    let k = rng.gen_range(-3i64..4);
                    for s in 0..p {
                        v[((start + s * step) % order) as usize] += k;
                    }
                }
                if rng.gen_bool(0.5) {
                    let j = rng.gen_range(0..order) as usize;
                    v[j] += 1;
                }
                assert_eq!(dense_int_sum_is_zero(order, v.clone()), int_sum_is_zero(order, &v));
            }
        }
    }

    fn arb_cyclo(order: u64) -> impl Strategy<Value = CycloValue> {
        proptest::collection::vec((0..order, -5i64..6, 1i64..4), 0..6).prop_map(move |ts| {
            CycloValue::from_terms(order, ts.into_iter().map(|(j, n, d)| (j, rat(n, d))))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms_hold(a in arb_cyclo(12), b in arb_cyclo(12), c in arb_cyclo(12)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &a), &CycloValue::zero(12));
        }

        #[test]
        fn canonical_is_idempotent_and_value_preserving(a in arb_cyclo(45)) {
            let c = a.canonical();
            prop_assert_eq!(c.canonical().coeffs.clone(), c.coeffs.clone());
            let d = (a.to_complex() - c.to_complex()).abs().to_f64();
            prop_assert!(d < 1e-25);
        }

        #[test]
        fn complex_embedding_is_multiplicative(a in arb_cyclo(20), b in arb_cyclo(20)) {
            let lhs = (&a * &b).to_complex();
            let rhs = a.to_complex() * b.to_complex();
            let scale = a.to_complex().abs().to_f64() * b.to_complex().abs().to_f64() + 1.0;
            prop_assert!((lhs - rhs).abs().to_f64() <= 2f64.powi(-50) * scale * 64.0);
        }
    }
}
