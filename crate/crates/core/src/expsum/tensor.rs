use serde::Serialize;

use super::enumerate::{check_budget, count_z_points, value_histogram};
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, ZConstraint};

/// Counts of `(ord_p f(x), unit part of f(x))` over `x mod p^m` with
/// `x mod p` in `Z`. The unit part at order `k` is kept modulo
/// `p^{min(c_max, m - k)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTensor {
    pub p: u64,
    pub m: u32,
    pub n: usize,
    pub c_max: u32,
    /// `levels[k][u]`, `u` a residue modulo `p^depth(k)`; non-units stay 0.
    pub levels: Vec<Vec<u64>>,
    /// `#{x : f(x) = 0 mod p^m}`.
    pub at_least_m: u64,
    /// `#Z(F_p)`.
    pub z_points: u64,
}

impl CountTensor {
    pub fn depth(&self, k: u32) -> u32 {
        self.c_max.min(self.m - k)
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.m)
    }

    /// Total number of points, which must equal `#Z(F_p) p^{(m-1)n}`.
    pub fn mass(&self) -> u64 {
        self.levels.iter().flatten().sum::<u64>() + self.at_least_m
    }

    pub fn expected_mass(&self) -> u64 {
        self.z_points * self.p.pow((self.m - 1) * self.n as u32)
    }

    /// Re-bin a histogram of `f mod p^m`.
    pub fn from_histogram(p: u64, m: u32, n: usize, c_max: u32, z_points: u64, hist: &[u32]) -> Self {
        let c_max = c_max.min(m);
        let levels: Vec<Vec<u64>> = (0..m).map(|k| vec![0u64; p.pow(c_max.min(m - k)) as usize]).collect();
        let mut t = CountTensor { p, m, n, c_max, levels, at_least_m: hist[0] as u64, z_points };
        for (v, &count) in hist.iter().enumerate().skip(1) {
            if count == 0 {
                continue;
            }
            let mut u = v as u64;
            let mut k = 0u32;
            while u % p == 0 {
                u /= p;
                k += 1;
            }
            let width = t.levels[k as usize].len() as u64;
            t.levels[k as usize][(u % width) as usize] += count as u64;
        }
        t
    }

    /// The same data at a smaller unit depth.
    pub fn truncate_depth(&self, c: u32) -> CountTensor {
        let c = c.min(self.c_max);
        let mut levels = Vec::with_capacity(self.levels.len());
        for (k, row) in self.levels.iter().enumerate() {
            let w = self.p.pow(c.min(self.m - k as u32)) as usize;
            let mut out = vec![0u64; w];
            for (u, &cnt) in row.iter().enumerate() {
                out[u % w] += cnt;
            }
            levels.push(out);
        }
        CountTensor { c_max: c, levels, ..self.clone() }
    }
}

/// The single enumeration pass over `(Z/p^m)^n`.
pub fn count_tensor(f: &IntPolynomial, z: &ZConstraint, p: u64, m: u32, c_max: u32, budget: u64) -> Result<CountTensor> {
    validate_prime(p)?;
    if m == 0 {
        return Err(Error::InvalidArgument("level m must be >= 1".into()));
    }
    let n = f.nvars();
    check_budget(p, m as u64 * n as u64, budget)?;
    let modulus = p.pow(m);
    let hist = value_histogram(f, modulus, Some((z, p)))?;
    let zp = count_z_points(z, p, n);
    let t = CountTensor::from_histogram(p, m, n, c_max, zp, &hist);
    debug_assert_eq!(t.mass(), t.expected_mass());
    Ok(t)
}

pub fn validate_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::Unsupported("p = 2 is excluded".into()));
    }
    if p < 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::enumerate::DEFAULT_BUDGET;

    fn poly(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s, None).unwrap()
    }

    #[test]
    fn squares_mod_three() {
        let t = count_tensor(&poly("x^2"), &ZConstraint::all(), 3, 1, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.levels[0], vec![0, 2, 0]);
        assert_eq!(t.at_least_m, 1);
    }

    #[test]
    fn linear_mod_25() {
        let t = count_tensor(&poly("x"), &ZConstraint::all(), 5, 2, 1, DEFAULT_BUDGET).unwrap();
        // 20 units mod 25, five over each class mod 5
        assert_eq!(t.levels[0], vec![0, 5, 5, 5, 5]);
        assert_eq!(t.levels[1], vec![0, 1, 1, 1, 1]);
        assert_eq!(t.at_least_m, 1);
        assert_eq!(t.mass(), 25);
    }

    #[test]
    fn restricted_to_z() {
        let z = ZConstraint::new(vec![poly("x")]);
        let t = count_tensor(&poly("x^2"), &z, 3, 2, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.at_least_m, 3);
        assert!(t.levels.iter().flatten().all(|&c| c == 0));
        assert_eq!(t.mass(), t.expected_mass());
    }

    #[test]
    fn rejects_two_and_budget() {
        assert!(matches!(count_tensor(&poly("x"), &ZConstraint::all(), 2, 3, 1, DEFAULT_BUDGET), Err(Error::Unsupported(_))));
        let e = count_tensor(&poly("x*y"), &ZConstraint::all(), 7, 9, 1, DEFAULT_BUDGET).unwrap_err();
        assert_eq!(e, Error::Budget { base: 7, exponent: 18, limit: DEFAULT_BUDGET });
    }
}
