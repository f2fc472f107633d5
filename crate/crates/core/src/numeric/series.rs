//! Truncated power series in `t = q^{-s}` and rational functions of `t`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cyclo::CycloValue;
use super::rational;
use crate::error::{Error, Result};

/// Coefficients `c_0..c_K` of a series in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPrefix {
    pub q: u64,
    pub coeffs: Vec<CycloValue>,
}

impl SeriesPrefix {
    pub fn new(q: u64, coeffs: Vec<CycloValue>) -> Self {
        SeriesPrefix { q, coeffs }
    }

    pub fn from_rationals(q: u64, coeffs: Vec<BigRational>) -> Self {
        SeriesPrefix { q, coeffs: coeffs.into_iter().map(|c| CycloValue::from_rational(1, c)).collect() }
    }

    /// Truncation order `K`; a prefix of length 0 has none.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Result<&CycloValue> {
        self.coeffs.get(k).ok_or(Error::ShortPrefix { need: k, have: self.coeffs.len() })
    }

    /// Cauchy product, truncated to the shorter prefix.
    pub fn mul(&self, other: &SeriesPrefix) -> SeriesPrefix {
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = CycloValue::zero(1);
            for j in 0..=k {
                acc += &(&self.coeffs[j] * &other.coeffs[k - j]);
            }
            out.push(acc);
        }
        SeriesPrefix { q: self.q, coeffs: out }
    }

    pub fn add(&self, other: &SeriesPrefix) -> SeriesPrefix {
        let len = self.coeffs.len().min(other.coeffs.len());
        SeriesPrefix {
            q: self.q,
            coeffs: (0..len).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn scale(&self, s: &CycloValue) -> SeriesPrefix {
        SeriesPrefix { q: self.q, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// First index where the two prefixes differ exactly, over their common length.
    pub fn first_mismatch(&self, other: &SeriesPrefix) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }
}

/// Anything with a Taylor expansion at `t = 0`.
pub trait Expandable {
    fn q(&self) -> u64;
    fn expand(&self, len: usize) -> Result<Vec<CycloValue>>;
}

/// `num(t) / den(t)` with rational coefficients, `den(0) != 0`.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    pub q: u64,
    num: Vec<BigRational>,
    den: Vec<BigRational>,
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(out)
}

impl RationalFunction {
    pub fn new(q: u64, num: Vec<BigRational>, den: Vec<BigRational>) -> Result<Self> {
        if den.first().map_or(true, |d| d.is_zero()) {
            return Err(Error::InvalidArgument("denominator vanishes at t = 0".into()));
        }
        Ok(RationalFunction { q, num: trim(num), den: trim(den) })
    }

    pub fn polynomial(q: u64, coeffs: Vec<BigRational>) -> Self {
        RationalFunction { q, num: trim(coeffs), den: vec![BigRational::one()] }
    }

    pub fn constant(q: u64, c: BigRational) -> Self {
        Self::polynomial(q, vec![c])
    }

    /// `t^N q^{-nu} / (1 - t^N q^{-nu})`.
    pub fn denef_term(q: u64, n: usize, nu: i64) -> Self {
        assert!(n >= 1);
        let x = rational::pow_i(q, -nu);
        let mut num = vec![BigRational::zero(); n + 1];
        num[n] = x.clone();
        let mut den = vec![BigRational::zero(); n + 1];
        den[0] = BigRational::one();
        den[n] = -x;
        RationalFunction { q, num, den }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            q: self.q,
            num: poly_mul(&self.num, &other.num),
            den: poly_mul(&self.den, &other.den),
        }
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            q: self.q,
            num: poly_add(&poly_mul(&self.num, &other.den), &poly_mul(&other.num, &self.den)),
            den: poly_mul(&self.den, &other.den),
        }
    }

    pub fn scale(&self, s: &BigRational) -> RationalFunction {
        RationalFunction { q: self.q, num: trim(self.num.iter().map(|c| c * s).collect()), den: self.den.clone() }
    }

    /// Value at `t = 1`, if the denominator does not vanish there.
    pub fn at_one(&self) -> Option<BigRational> {
        let d: BigRational = self.den.iter().cloned().sum();
        if d.is_zero() {
            return None;
        }
        Some(self.num.iter().cloned().sum::<BigRational>() / d)
    }

    pub fn taylor(&self, len: usize) -> Vec<BigRational> {
        let d0 = &self.den[0];
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.num.get(k).cloned().unwrap_or_else(BigRational::zero);
            for j in 1..self.den.len().min(k + 1) {
                if !self.den[j].is_zero() {
                    acc -= &self.den[j] * &out[k - j];
                }
            }
            out.push(acc / d0);
        }
        out
    }
}

impl Expandable for RationalFunction {
    fn q(&self) -> u64 {
        self.q
    }

    fn expand(&self, len: usize) -> Result<Vec<CycloValue>> {
        Ok(self.taylor(len).into_iter().map(|c| CycloValue::from_rational(1, c)).collect())
    }
}

/// Taylor coefficients `c_0..c_K` of `r` at `t = 0`.
pub fn series_coefficients<R: Expandable + ?Sized>(r: &R, k: i64) -> Result<SeriesPrefix> {
    if k < 0 {
        return Err(Error::InvalidArgument(format!("truncation order must be >= 0, got {k}")));
    }
    Ok(SeriesPrefix { q: r.q(), coeffs: r.expand(k as usize + 1)? })
}

/// Coefficients of `prod_i t^{N_i} q^{-nu_i} / (1 - t^{N_i} q^{-nu_i})` up to `t^{len-1}`,
/// by sparse convolution of the geometric factors.
pub fn denef_product_coeffs(pairs: &[(u64, u64)], q: u64, len: usize) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); len];
    if len == 0 {
        return acc;
    }
    acc[0] = BigRational::one();
    for &(n, nu) in pairs {
        let n = n as usize;
        let mut next = vec![BigRational::zero(); len];
        for (k, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut j = 1;
            while k + j * n < len {
                next[k + j * n] += c * rational::pow_i(q, -((nu as i64) * j as i64));
                j += 1;
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};
    use proptest::prelude::*;

    fn rf(q: u64, num: &[BigRational], den: &[BigRational]) -> RationalFunction {
        RationalFunction::new(q, num.to_vec(), den.to_vec()).unwrap()
    }

    #[test]
    fn geometric_series() {
        let r = rf(5, &[int(1)], &[int(1), int(0), rat(-1, 5)]);
        let s = series_coefficients(&r, 4).unwrap();
        let want = SeriesPrefix::from_rationals(5, vec![int(1), int(0), rat(1, 5), int(0), rat(1, 25)]);
        assert_eq!(s, want);

        let r = RationalFunction::denef_term(3, 2, 1);
        let s = series_coefficients(&r, 4).unwrap();
        let want = SeriesPrefix::from_rationals(3, vec![int(0), int(0), rat(1, 3), int(0), rat(1, 9)]);
        assert_eq!(s, want);
    }

    #[test]
    fn bridge_kernel_coefficients() {
        let q = 5;
        let z = rf(q, &[rat(4, 5)], &[int(1), int(0), rat(-1, 5)]);
        let kernel = rf(q, &[int(-5), int(1)], &[int(4), int(-4)]);
        let prod = series_coefficients(&kernel.mul(&z), 3).unwrap();
        let zs = z.taylor(4);
        for k in 0..4 {
            let mut expect = -int(q as i64) * &zs[k];
            for zj in &zs[..k] {
                expect += int(1 - q as i64) * zj;
            }
            expect /= int(q as i64 - 1);
            assert_eq!(prod.coeffs[k].to_rational(), Some(expect));
        }
        assert_eq!(prod.coeffs[1].to_rational(), Some(rat(-4, 5)));
    }

    #[test]
    fn rejects_negative_order_and_pole_at_zero() {
        let r = RationalFunction::constant(3, int(1));
        assert!(series_coefficients(&r, -1).is_err());
        assert!(RationalFunction::new(3, vec![int(1)], vec![int(0), int(1)]).is_err());
        assert_eq!(series_coefficients(&r, 0).unwrap().coeffs.len(), 1);
    }

    #[test]
    fn short_prefix_is_reported() {
        let s = SeriesPrefix::from_rationals(3, vec![int(1)]);
        assert_eq!(s.coeff(2).unwrap_err(), Error::ShortPrefix { need: 2, have: 1 });
    }

    proptest! {
        #[test]
        fn single_denef_term_coefficients(n in 1usize..6, nu in 1i64..5, qi in 0usize..3) {
            let q = [3u64, 5, 7][qi];
            let t = RationalFunction::denef_term(q, n, nu).taylor(30);
            for (k, c) in t.iter().enumerate() {
                let want = if k > 0 && k % n == 0 {
                    rational::pow_i(q, -nu * (k / n) as i64)
                } else {
                    int(0)
                };
                prop_assert_eq!(c, &want);
            }
        }

        #[test]
        fn expansion_is_linear_and_multiplicative(
            a in proptest::collection::vec((1u64..4, 1u64..4), 1..3),
            b in proptest::collection::vec((1u64..4, 1u64..4), 1..3),
            s in -3i64..4,
        ) {
            let q = 5;
            let build = |v: &[(u64, u64)]| v.iter().fold(RationalFunction::constant(q, int(1)), |acc, &(n, nu)| {
                acc.mul(&RationalFunction::denef_term(q, n as usize, nu as i64))
            });
            let (ra, rb) = (build(&a), build(&b));
            let len = 16;
            let sa = series_coefficients(&ra, len - 1).unwrap();
            let sb = series_coefficients(&rb, len - 1).unwrap();
            prop_assert_eq!(series_coefficients(&ra.mul(&rb), len - 1).unwrap(), sa.mul(&sb));
            let lin = ra.scale(&int(s)).add(&rb);
            let want = sa.scale(&CycloValue::from_rational(1, int(s))).add(&sb);
            prop_assert_eq!(series_coefficients(&lin, len - 1).unwrap(), want);
            let direct = denef_product_coeffs(&a, q, len as usize);
            prop_assert_eq!(SeriesPrefix::from_rationals(q, direct), sa);
        }
    }
}
