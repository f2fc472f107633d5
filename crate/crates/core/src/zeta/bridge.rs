//! Reconstruction of `E` from twisted zeta coefficients:
//!
//! `E = Z(0) + Coeff_{t^{m-1}} ((t - q) Z / ((q - 1)(1 - t))) + sum_{chi != 1} g_{chi^{-1}} Coeff_{t^{m - c(chi)}} Z_chi`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::charsum::{gauss_coefficient_hp, MultChar, UnitGroup};
use crate::error::{Error, Result};
use crate::expsum::CountTensor;
use crate::numeric::hp::{dft, Dd, HpComplex, RootTable};
use crate::numeric::rational::{self, int};
use crate::numeric::series::SeriesPrefix;
use crate::poly::mulmod;

/// `Z(0) + Coeff_{t^{m-1}} ((t - q) Z / ((q - 1)(1 - t)))`, with `Z(0)` the domain measure.
pub fn trivial_part(z: &SeriesPrefix, q: u64, m: u32, domain_measure: &BigRational) -> Result<BigRational> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("level must be >= 2, got {m}")));
    }
    let top = (m - 1) as usize;
    let coeff = |k: usize| -> Result<BigRational> {
        z.coeff(k)?
            .to_rational()
            .ok_or_else(|| Error::InvalidArgument("trivial-character series has irrational coefficients".into()))
    };
    let mut head = BigRational::zero();
    for k in 0..top {
        head += coeff(k)?;
    }
    let qm1 = int(q as i64 - 1);
    let corr = (-int(q as i64) * coeff(top)? - &qm1 * head) / &qm1;
    Ok(domain_measure + corr)
}

/// The bridge from per-character series. `None` marks a character whose
/// zeta function is known to vanish. Every character of `(Z/p^m)^x` must be
/// present.
pub fn bridge_expsum(
    zetas: &[(MultChar, Option<SeriesPrefix>)],
    q: u64,
    m: u32,
    domain_measure: &BigRational,
) -> Result<HpComplex> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("level must be >= 2, got {m}")));
    }
    let group = UnitGroup::get(q, m)?;
    let mut by_exponent: BTreeMap<u64, (&MultChar, Option<&SeriesPrefix>)> = BTreeMap::new();
    for (chi, s) in zetas {
        if chi.p() != q {
            return Err(Error::InvalidArgument(format!("{chi:?} is not a character modulo a power of {q}")));
        }
        by_exponent.insert(chi.at_level(m)?.exponent(), (chi, s.as_ref()));
    }
    let mut acc = HpComplex::ZERO;
    for e in 0..group.phi {
        let (chi, s) = by_exponent
            .get(&e)
            .ok_or_else(|| Error::MissingCharacter(format!("exponent {e} modulo {q}^{m}")))?;
        let Some(s) = s else { continue };
        if e == 0 {
            let t = trivial_part(s, q, m, domain_measure)?;
            acc += HpComplex::from_real(Dd::from_rational(&t));
            continue;
        }
        let c = chi.conductor();
        let a = s.coeff((m - c) as usize)?;
        if a.is_zero() {
            continue;
        }
        acc += gauss_coefficient_hp(&chi.inverse(), m)? * a.to_complex();
    }
    if !by_exponent.contains_key(&0) {
        return Err(Error::MissingCharacter("trivial".into()));
    }
    Ok(acc)
}

/// The same right-hand side read directly from a full-depth tensor, with the
/// character sums for each conductor evaluated by one DFT over `(Z/p^c)^x`.
pub fn bridge_spectral(t: &CountTensor) -> Result<HpComplex> {
    let (p, m) = (t.p, t.m);
    if m < 2 {
        return Err(Error::InvalidArgument(format!("level must be >= 2, got {m}")));
    }
    if t.c_max < m {
        return Err(Error::InvalidArgument("bridge needs unit parts at full depth".into()));
    }
    let scale_n = rational::pow_i(p, -((m as i64) * t.n as i64));
    let domain = int(t.z_points as i64) * rational::pow_i(p, -(t.n as i64));
    // trivial character: z_k = p^{-mn} sum_u N[k][u]
    let z = SeriesPrefix::from_rationals(
        p,
        t.levels.iter().map(|row| int(row.iter().sum::<u64>() as i64) * &scale_n).collect(),
    );
    let mut acc = HpComplex::from_real(Dd::from_rational(&trivial_part(&z, p, m, &domain)?));
    let scale_hp = Dd::from_rational(&scale_n);
    for c in 1..=m {
        let group = UnitGroup::get(p, c)?;
        let (phi, pc) = (group.phi, group.modulus);
        let row = &t.levels[(m - c) as usize];
        let mut a = Vec::with_capacity(phi as usize);
        let mut b = Vec::with_capacity(phi as usize);
        let additive = RootTable::new(pc);
        let mut x = 1 % pc;
        for _ in 0..phi {
            a.push(HpComplex::from_real(Dd::from_i128(row[x as usize] as i128)));
            b.push(additive.get(x));
            x = mulmod(x, group.generator, pc);
        }
        let roots = RootTable::new(phi);
        let fa = dft(&a, &roots);
        let fb = dft(&b, &roots);
        let mut level = HpComplex::ZERO;
        for e in 1..phi {
            if c >= 2 && e % p == 0 {
                continue;
            }
            level += fa[e as usize] * fb[((phi - e) % phi) as usize];
        }
        let g_scale = Dd::from_rational(&(rational::pow_i(p, 1 - c as i64) / int(p as i64 - 1)));
        acc += level.scale(g_scale * scale_hp);
    }
    Ok(acc)
}
