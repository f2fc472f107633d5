//! The enumeration hot loop: a histogram of `f(x) mod M` over `(Z/M)^n`,
//! optionally restricted to points whose reduction mod `p` lies in `Z`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, ModPoly, ZConstraint};

pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Point budget: `IGUSA_BUDGET` if set, else the default.
pub fn budget_from_env() -> u64 {
    std::env::var("IGUSA_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Fails unless `base^exponent <= limit`.
pub fn check_budget(base: u64, exponent: u64, limit: u64) -> Result<u64> {
    let over = Error::Budget { base, exponent, limit };
    let mut acc: u64 = 1;
    for _ in 0..exponent {
        acc = acc.checked_mul(base).ok_or(over.clone())?;
        if acc > limit {
            return Err(over);
        }
    }
    Ok(acc)
}

/// Largest `m` with `p^{m n} <= limit`.
pub fn max_level(p: u64, n: usize, limit: u64) -> u32 {
    let mut m = 0;
    while check_budget(p, (m + 1) * n as u64, limit).is_ok() {
        m += 1;
    }
    m as u32
}

/// Membership of `Z` as a bitmap over `F_p^n` (index `sum x_i p^i`), when small.
pub(crate) struct ZFilter {
    p: u64,
    bitmap: Option<Vec<bool>>,
    polys: Vec<ModPoly>,
}

impl ZFilter {
    pub(crate) fn new(z: &ZConstraint, p: u64, n: usize) -> Option<Self> {
        if z.is_all() {
            return None;
        }
        let polys = z.compile(p);
        let bitmap = p.checked_pow(n as u32).filter(|&s| s <= 1 << 22).map(|size| {
            let mut x = vec![0u64; n];
            (0..size)
                .map(|idx| {
                    let mut r = idx;
                    for xi in x.iter_mut() {
                        *xi = r % p;
                        r /= p;
                    }
                    polys.iter().all(|g| g.eval(&x) == 0)
                })
                .collect()
        });
        Some(ZFilter { p, bitmap, polys })
    }

    fn contains(&self, x: &[u64]) -> bool {
        match &self.bitmap {
            Some(b) => {
                let mut idx = 0u64;
                let mut w = 1u64;
                for xi in x {
                    idx += (xi % self.p) * w;
                    w *= self.p;
                }
                b[idx as usize]
            }
            None => {
                let red: Vec<u64> = x.iter().map(|v| v % self.p).collect();
                self.polys.iter().all(|g| g.eval(&red) == 0)
            }
        }
    }
}

/// `#Z(F_p)`.
pub fn count_z_points(z: &ZConstraint, p: u64, n: usize) -> u64 {
    let total = p.pow(n as u32);
    match ZFilter::new(z, p, n) {
        None => total,
        Some(filter) => {
            let mut x = vec![0u64; n];
            (0..total)
                .filter(|idx| {
                    let mut r = *idx;
                    for xi in x.iter_mut() {
                        *xi = r % p;
                        r /= p;
                    }
                    filter.contains(&x)
                })
                .count() as u64
        }
    }
}

/// One block of the enumeration: all points with leading coordinate in `lead`.
fn block(
    f: &ModPoly,
    lead: std::ops::Range<u64>,
    filter: Option<&ZFilter>,
    hist: &mut [u32],
) {
    let m = f.modulus;
    let n = f.nvars;
    let mut coeffs = Vec::new();
    let mut point = vec![0u64; n];
    if n == 1 {
        let mut dense = Vec::new();
        f.univariate_in_last(&[], &mut dense);
        for x in lead {
            point[0] = x;
            if let Some(z) = filter {
                if !z.contains(&point) {
                    continue;
                }
            }
            hist[horner(&dense, x, m) as usize] += 1;
        }
        return;
    }
    // odometer over the middle coordinates 1..n-1, last one innermost
    for x0 in lead {
        let mut prefix = vec![0u64; n - 1];
        prefix[0] = x0;
        loop {
            f.univariate_in_last(&prefix, &mut coeffs);
            point[..n - 1].copy_from_slice(&prefix);
            for y in 0..m {
                if let Some(z) = filter {
                    point[n - 1] = y;
                    if !z.contains(&point) {
                        continue;
                    }
                }
                hist[horner(&coeffs, y, m) as usize] += 1;
            }
            // advance coordinates 1..n-2
            let mut i = n - 2;
            loop {
                if i == 0 {
                    break;
                }
                prefix[i] += 1;
                if prefix[i] < m {
                    break;
                }
                prefix[i] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
        }
    }
}

#[inline]
fn horner(coeffs: &[u64], y: u64, m: u64) -> u64 {
    let mut v = 0u64;
    for &a in coeffs.iter().rev() {
        v = (v * y + a) % m;
    }
    v
}

/// Histogram `H[v] = #{x in (Z/M)^n : f(x) = v mod M}` restricted to `Z`
/// modulo `p` when a filter is supplied. `points` is `M^n`, already
/// checked against the budget by the caller.
pub fn value_histogram(f: &IntPolynomial, modulus: u64, z: Option<(&ZConstraint, u64)>) -> Result<Vec<u32>> {
    if modulus >= 1 << 32 {
        return Err(Error::Unsupported(format!("modulus {modulus} does not fit the 32-bit evaluator")));
    }
    let n = f.nvars();
    let mp = f.reduce_mod(modulus);
    let filter = z.and_then(|(zc, p)| ZFilter::new(zc, p, n));
    let m = modulus;
    let hist_len = m as usize;
    // Block the leading coordinate; blocks merge by integer addition so the
    // result is independent of scheduling.
    let parallel = hist_len <= 1 << 20 && (n > 1 || m >= 1 << 14);
    if !parallel {
        let mut hist = vec![0u32; hist_len];
        block(&mp, 0..m, filter.as_ref(), &mut hist);
        return Ok(hist);
    }
    let nblocks = m.min(256);
    let hist = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = m * b / nblocks;
            let hi = m * (b + 1) / nblocks;
            let mut h = vec![0u32; hist_len];
            block(&mp, lo..hi, filter.as_ref(), &mut h);
            h
        })
        .reduce(
            || vec![0u32; hist_len],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(hist)
}
