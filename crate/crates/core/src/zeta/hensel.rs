//! Exact distribution of `(ord f, ac f mod p)` on `Z_p^n` by recursive
//! refinement of residue balls.
//!
//! On a ball `y0 + p Z_p^n`: if `f(y0) != 0 mod p` the values are units with
//! fixed residue; if `f(y0) = 0` but the gradient is nonzero mod `p`, then
//! `f/p` pushes Haar measure forward to Haar measure on `Z_p`; otherwise we
//! substitute `x = y0 + p z`, strip the `p`-content and recurse. This reaches
//! orders far beyond what enumeration modulo `p^{K+1}` can afford.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expsum::{check_budget, validate_prime};
use crate::numeric::rational;
use crate::poly::{IntPolynomial, ModPoly, ZConstraint};

/// `dist[k][u]` = measure of `{x : x mod p in Z, ord f(x) = k, ac f(x) = u mod p}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AcDistribution {
    pub p: u64,
    pub n: usize,
    pub dist: Vec<Vec<BigRational>>,
}

type Memo = HashMap<(IntPolynomial, usize), Vec<Vec<BigRational>>>;

struct Refiner {
    p: u64,
    n: usize,
    cell: BigRational,
    points: Rc<Vec<Vec<u64>>>,
    memo: Memo,
}

impl Refiner {
    fn empty(&self, len: usize) -> Vec<Vec<BigRational>> {
        vec![vec![BigRational::zero(); self.p as usize]; len]
    }

    /// Distribution of `h` on the unit ball up to relative order `r`.
    fn refine(&mut self, h: &IntPolynomial, r: usize, z: Option<&[ModPoly]>) -> Vec<Vec<BigRational>> {
        if z.is_none() {
            if let Some(hit) = self.memo.get(&(h.clone(), r)) {
                return hit.clone();
            }
        }
        let p = self.p;
        let mut out = self.empty(r + 1);
        let hm = h.reduce_mod(p);
        let grads: Vec<ModPoly> = (0..self.n).map(|i| h.derivative(i).reduce_mod(p)).collect();
        let points = Rc::clone(&self.points);
        for y0 in points.iter() {
            if let Some(zs) = z {
                if !zs.iter().all(|g| g.eval(y0) == 0) {
                    continue;
                }
            }
            let v = hm.eval(y0);
            if v != 0 {
                out[0][v as usize] += &self.cell;
                continue;
            }
            if r == 0 {
                continue;
            }
            if grads.iter().any(|g| g.eval(y0) != 0) {
                // f = p g with g Haar-distributed: P(ord g = i, ac g = u) = p^{-i-1}
                for i in 0..r {
                    let w = &self.cell * rational::pow_i(p, -(i as i64) - 1);
                    for slot in out[1 + i].iter_mut().skip(1) {
                        *slot += &w;
                    }
                }
                continue;
            }
            let shift: Vec<BigInt> = y0.iter().map(|&c| BigInt::from(c)).collect();
            let h1 = h.affine_substitute(&shift, &BigInt::from(p));
            let Some(delta) = h1.content_valuation(p) else {
                continue; // h vanishes identically on the ball
            };
            let delta = delta as usize;
            if delta > r {
                continue;
            }
            let h2 = h1.div_exact(&num_traits::pow(BigInt::from(p), delta));
            let sub = self.refine(&h2, r - delta, None);
            for (j, row) in sub.into_iter().enumerate() {
                for (u, c) in row.into_iter().enumerate() {
                    if !c.is_zero() {
                        out[delta + j][u] += &self.cell * c;
                    }
                }
            }
        }
        if z.is_none() {
            self.memo.insert((h.clone(), r), out.clone());
        }
        out
    }
}

/// Exact `(ord, ac)` distribution of `f` for orders `0..=k_max`.
pub fn ac_distribution(f: &IntPolynomial, z: &ZConstraint, p: u64, k_max: usize, budget: u64) -> Result<AcDistribution> {
    validate_prime(p)?;
    let n = f.nvars();
    check_budget(p, n as u64, budget)?;
    let Some(delta) = f.content_valuation(p) else {
        return Err(Error::InvalidArgument("f is the zero polynomial".into()));
    };
    let delta = delta as usize;
    let total = p.pow(n as u32);
    let points: Vec<Vec<u64>> = (0..total)
        .map(|idx| {
            let mut r = idx;
            (0..n)
                .map(|_| {
                    let c = r % p;
                    r /= p;
                    c
                })
                .collect()
        })
        .collect();
    let mut refiner = Refiner { p, n, cell: rational::pow_i(p, -(n as i64)), points: Rc::new(points), memo: HashMap::new() };
    let mut dist = refiner.empty(k_max + 1);
    if delta <= k_max {
        let h = f.div_exact(&num_traits::pow(BigInt::from(p), delta));
        let zc = z.compile(p);
        let filter = (!z.is_all()).then_some(zc.as_slice());
        let sub = refiner.refine(&h, k_max - delta, filter);
        for (j, row) in sub.into_iter().enumerate() {
            dist[delta + j] = row;
        }
    }
    Ok(AcDistribution { p, n, dist })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsum::{characters, CharFilter};
    use crate::expsum::DEFAULT_BUDGET;
    use crate::zeta::{series_from_distribution, zeta_series_empirical};

    fn check_against_enumeration(expr: &str, z: &ZConstraint, p: u64, k: usize) {
        let f = IntPolynomial::parse(expr, None).unwrap();
        let dist = ac_distribution(&f, z, p, k, DEFAULT_BUDGET).unwrap();
        let chars = characters(p, 1, CharFilter { include_trivial: true, ..Default::default() }).unwrap();
        for chi in chars {
            let a = series_from_distribution(&dist, &chi).unwrap();
            let b = zeta_series_empirical(&f, z, p, &chi, k, DEFAULT_BUDGET).unwrap();
            assert_eq!(a, b, "{expr} p={p} {chi:?}");
        }
    }

    #[test]
    fn agrees_with_enumeration() {
        let all = ZConstraint::all();
        check_against_enumeration("x^2", &all, 5, 5);
        check_against_enumeration("x^3 - 3*x", &all, 5, 4);
        check_against_enumeration("x^2*(x-1)^3", &all, 3, 6);
        check_against_enumeration("x^2 + y^3", &all, 3, 4);
        check_against_enumeration("x*y", &all, 5, 3);
        check_against_enumeration("25*x^2 + 5*y", &all, 5, 3);
        let origin = ZConstraint::new(vec![
            IntPolynomial::parse("x", Some(&["x", "y"])).unwrap(),
            IntPolynomial::parse("y", Some(&["x", "y"])).unwrap(),
        ]);
        check_against_enumeration("x^2 + y^3", &origin, 5, 3);
    }

    #[test]
    fn total_mass_is_bounded() {
        let f = IntPolynomial::parse("x^2 + y^3", None).unwrap();
        let d = ac_distribution(&f, &ZConstraint::all(), 13, 10, DEFAULT_BUDGET).unwrap();
        let total: BigRational = d.dist.iter().flatten().cloned().sum();
        assert!(total < rational::int(1));
        // mass outside orders 0..=10 is at most the measure of ord f > 10
        assert!(rational::int(1) - total < rational::pow_i(13, -5));
    }
}
