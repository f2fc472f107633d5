//! Double-double floating point (about 106 bits of mantissa) and complex
//! numbers built on it.
//!
//! Every operation is deterministic: no fused reductions, no parallel
//! summation. Sums are accumulated in the order the caller supplies.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const TWO_PI: Dd = Dd {
        hi: 6.283_185_307_179_586,
        lo: 2.449_293_598_294_706_4e-16,
    };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for |x| < 2^106, correctly rounded to double-double above that.
    pub fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        let rest = x - hi as i128;
        Dd::new(hi, rest as f64)
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        if let Some(v) = x.to_i128() {
            return Dd::from_i128(v);
        }
        let hi = x.to_f64().unwrap_or(f64::INFINITY);
        if !hi.is_finite() {
            return Dd::from_f64(hi);
        }
        let rest = x - float_to_bigint(hi);
        Dd::new(hi, rest.to_f64().unwrap_or(0.0))
    }

    pub fn from_rational(x: &BigRational) -> Self {
        let num = x.numer();
        let den = x.denom();
        // Scale huge operands so both parts stay finite in f64.
        let bits = num.bits().max(den.bits());
        if bits > 900 {
            let shift = bits - 900;
            let n = num >> shift;
            let d = den >> shift;
            if d.is_zero() {
                return Dd::from_f64(if num.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY });
            }
            return Dd::from_bigint(&n) / Dd::from_bigint(&d);
        }
        Dd::from_bigint(num) / Dd::from_bigint(den)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        Dd::new(p, e)
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        // One Newton step on the f64 root doubles the precision.
        let x = self.hi.sqrt();
        let ax = Dd::from_f64(x);
        let sq = ax * ax;
        let diff = self - sq;
        ax + Dd::from_f64(diff.hi / (2.0 * x))
    }

    pub fn powi(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

fn float_to_bigint(x: f64) -> BigInt {
    use num_traits::FromPrimitive;
    BigInt::from_f64(x).unwrap_or_default()
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::from_f64(q3)
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    #[inline]
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

/// High-precision complex number with double-double parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HpComplex {
    pub re: Dd,
    pub im: Dd,
}

impl HpComplex {
    pub const ZERO: HpComplex = HpComplex { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: HpComplex = HpComplex { re: Dd::ONE, im: Dd::ZERO };

    pub fn new(re: Dd, im: Dd) -> Self {
        HpComplex { re, im }
    }

    pub fn from_real(re: Dd) -> Self {
        HpComplex { re, im: Dd::ZERO }
    }

    pub fn conj(self) -> Self {
        HpComplex { re: self.re, im: -self.im }
    }

    pub fn scale(self, s: Dd) -> Self {
        HpComplex { re: self.re * s, im: self.im * s }
    }

    pub fn scale_f64(self, s: f64) -> Self {
        HpComplex { re: self.re.mul_f64(s), im: self.im.mul_f64(s) }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    /// `(re, im)` rounded to f64.
    pub fn to_f64(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `e^{2 pi i num / den}` for an integer fraction.
    pub fn unit_root(num: i128, den: u64) -> Self {
        assert!(den > 0, "root of unity of order zero");
        let den_i = den as i128;
        let r = num.rem_euclid(den_i);
        // Octant index k with |r/den - k/8| <= 1/16.
        let k = (8 * r + den_i / 2) / den_i;
        let resid = 8 * r - k * den_i; // angle = 2 pi resid / (8 den)
        let theta = Dd::TWO_PI * Dd::from_i128(resid) / Dd::from_i128(8 * den_i);
        let (s, c) = sin_cos_small(theta);
        let base = HpComplex::new(c, s);
        base * octant(k as u32 % 8)
    }
}

fn octant(k: u32) -> HpComplex {
    let h = Dd::from_f64(0.5).sqrt();
    let (re, im) = match k {
        0 => (Dd::ONE, Dd::ZERO),
        1 => (h, h),
        2 => (Dd::ZERO, Dd::ONE),
        3 => (-h, h),
        4 => (-Dd::ONE, Dd::ZERO),
        5 => (-h, -h),
        6 => (Dd::ZERO, -Dd::ONE),
        _ => (h, -h),
    };
    HpComplex::new(re, im)
}

/// Taylor series for |theta| <= pi/8.
fn sin_cos_small(theta: Dd) -> (Dd, Dd) {
    let x2 = theta * theta;
    let mut sin = theta;
    let mut cos = Dd::ONE;
    let mut term_s = theta;
    let mut term_c = Dd::ONE;
    let mut n = 1.0f64;
    loop {
        term_c = -(term_c * x2) / Dd::from_f64(n * (n + 1.0));
        term_s = -(term_s * x2) / Dd::from_f64((n + 1.0) * (n + 2.0));
        cos += term_c;
        sin += term_s;
        n += 2.0;
        if term_c.hi.abs() < 1e-34 && term_s.hi.abs() < 1e-34 {
            break;
        }
    }
    (sin, cos)
}

impl Add for HpComplex {
    type Output = HpComplex;
    #[inline]
    fn add(self, b: HpComplex) -> HpComplex {
        HpComplex { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for HpComplex {
    type Output = HpComplex;
    #[inline]
    fn sub(self, b: HpComplex) -> HpComplex {
        HpComplex { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Neg for HpComplex {
    type Output = HpComplex;
    fn neg(self) -> HpComplex {
        HpComplex { re: -self.re, im: -self.im }
    }
}

impl Mul for HpComplex {
    type Output = HpComplex;
    #[inline]
    fn mul(self, b: HpComplex) -> HpComplex {
        HpComplex {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl AddAssign for HpComplex {
    #[inline]
    fn add_assign(&mut self, b: HpComplex) {
        *self = *self + b;
    }
}

impl SubAssign for HpComplex {
    #[inline]
    fn sub_assign(&mut self, b: HpComplex) {
        *self = *self - b;
    }
}

/// Table of `e^{2 pi i j / order}` using a two-level split so that only
/// about `2 sqrt(order)` roots are evaluated from the series.
#[derive(Clone, Debug)]
pub struct RootTable {
    order: u64,
    block: u64,
    low: Vec<HpComplex>,
    high: Vec<HpComplex>,
}

impl RootTable {
    pub fn new(order: u64) -> Self {
        assert!(order > 0);
        let mut block = (order as f64).sqrt().ceil() as u64;
        block = block.max(1);
        let low = (0..block)
            .map(|j| HpComplex::unit_root(j as i128, order))
            .collect();
        let n_high = order.div_ceil(block);
        let high = (0..n_high)
            .map(|i| HpComplex::unit_root((i * block) as i128, order))
            .collect();
        RootTable { order, block, low, high }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    #[inline]
    pub fn get(&self, j: u64) -> HpComplex {
        let j = j % self.order;
        let hi = (j / self.block) as usize;
        let lo = (j % self.block) as usize;
        if hi == 0 {
            self.low[lo]
        } else {
            self.high[hi] * self.low[lo]
        }
    }

    /// `e^{-2 pi i j / order}`.
    #[inline]
    pub fn get_inv(&self, j: u64) -> HpComplex {
        self.get(j).conj()
    }
}

/// Fixed-order mixed-radix DFT `X[k] = sum_l x[l] w^{k l}` with
/// `w = e^{2 pi i / n}`, evaluated recursively over the prime factors
/// of `n` in ascending order.
pub fn dft(input: &[HpComplex], roots: &RootTable) -> Vec<HpComplex> {
    let n = input.len() as u64;
    assert_eq!(n, roots.order(), "root table order must match DFT length");
    let factors = prime_factors_small(n);
    dft_rec(input, 1, &factors, roots)
}

fn dft_rec(x: &[HpComplex], step: u64, factors: &[u64], roots: &RootTable) -> Vec<HpComplex> {
    let n = x.len();
    if n == 1 {
        return vec![x[0]];
    }
    let p = factors[0] as usize;
    let m = n / p;
    // x_r[j] = x[r + p j]
    let subs: Vec<Vec<HpComplex>> = (0..p)
        .map(|r| {
            let sub: Vec<HpComplex> = (0..m).map(|j| x[r + p * j]).collect();
            dft_rec(&sub, step * p as u64, &factors[1..], roots)
        })
        .collect();
    let mut out = vec![HpComplex::ZERO; n];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = subs[0][k % m];
        for (r, sub) in subs.iter().enumerate().skip(1) {
            // w_n^{r k} = w_N^{r k step}
            let idx = (r as u64 * k as u64 % n as u64) * step;
            acc += roots.get(idx) * sub[k % m];
        }
        *slot = acc;
    }
    out
}

fn prime_factors_small(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
