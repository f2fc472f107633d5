//! Numerical data of a log resolution and the thresholds derived from it.

pub mod bounds;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::rational::{self, rat};

pub use bounds::{
    collapse_equivalent, collapse_single, estimation_bound_check, pole_order_audit, thm_bound_check, BoundMode,
    CollapseReport, EstimationReport, PoleAudit, ThmBound,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisor {
    pub id: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub nu: u64,
    pub meets_z: bool,
    /// Per residue field size `q`: whether `h(E_i)` meets `Z(F_q)`.
    #[serde(default)]
    pub image_meets_z_mod: BTreeMap<u64, bool>,
}

impl Divisor {
    pub fn ratio(&self) -> BigRational {
        rat(self.nu as i64, self.n as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    /// The index set `I`; empty for the complement of all divisors.
    pub ids: Vec<String>,
    pub nonempty: bool,
    /// The residual unit when it is a constant on the stratum.
    #[serde(default, with = "rational::serde_opt_str", skip_serializing_if = "Option::is_none")]
    pub constant_unit: Option<BigRational>,
    /// `q -> (u mod q -> #{a in E_I(F_q) : h(a) in Z, u(a) = u})`.
    #[serde(default)]
    pub unit_counts: BTreeMap<u64, BTreeMap<u64, u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub ids: Vec<String>,
    pub d: u64,
    #[serde(default)]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionData {
    pub name: String,
    /// Ambient dimension.
    pub n: usize,
    /// `f` vanishes on `Z(C)`.
    pub vanish_on_z: bool,
    #[serde(default)]
    pub provenance: Vec<String>,
    pub divisors: Vec<Divisor>,
    pub strata: Vec<Stratum>,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
}

fn key(ids: &[String]) -> BTreeSet<&str> {
    ids.iter().map(|s| s.as_str()).collect()
}

impl ResolutionData {
    pub fn from_json(text: &str) -> Result<Self> {
        let r: ResolutionData = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    pub fn divisor(&self, id: &str) -> Result<&Divisor> {
        self.divisors
            .iter()
            .find(|d| d.id == id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown divisor {id:?} in {}", self.name)))
    }

    pub fn divisors_of(&self, ids: &[String]) -> Result<Vec<&Divisor>> {
        ids.iter().map(|i| self.divisor(i)).collect()
    }

    pub fn stratum(&self, ids: &[String]) -> Option<&Stratum> {
        let k = key(ids);
        self.strata.iter().find(|s| key(&s.ids) == k)
    }

    /// Structural checks only; semantic validation is the zeta comparison.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(format!("{}: {msg}", self.name)));
        if self.n == 0 {
            return bad("dimension must be positive".into());
        }
        if self.divisors.is_empty() {
            return bad("no divisors".into());
        }
        let mut seen = BTreeSet::new();
        for d in &self.divisors {
            if !seen.insert(d.id.as_str()) {
                return bad(format!("duplicate divisor {:?}", d.id));
            }
            if d.n == 0 || d.nu == 0 {
                return bad(format!("divisor {:?} needs N, nu >= 1", d.id));
            }
        }
        let mut strata = BTreeSet::new();
        for s in &self.strata {
            self.divisors_of(&s.ids)?;
            if s.ids.len() > self.n {
                return bad(format!("stratum {:?} has more than n divisors", s.ids));
            }
            if !strata.insert(key(&s.ids)) {
                return bad(format!("duplicate stratum {:?}", s.ids));
            }
            for (q, table) in &s.unit_counts {
                if table.keys().any(|u| *u == 0 || u >= q) {
                    return bad(format!("stratum {:?} has a non-unit key at q = {q}", s.ids));
                }
                if !s.nonempty && table.values().any(|&c| c > 0) {
                    return bad(format!("empty stratum {:?} has points at q = {q}", s.ids));
                }
            }
        }
        for w in &self.witnesses {
            for d in self.divisors_of(&w.ids)? {
                if w.d < 2 || d.n % w.d != 0 {
                    return bad(format!("witness {:?} with d = {} fails d | N", w.ids, w.d));
                }
            }
        }
        Ok(())
    }
}

/// `(lct, lct_Z)`.
pub fn lct_values(res: &ResolutionData) -> Result<(BigRational, BigRational)> {
    let lct = res
        .divisors
        .iter()
        .map(Divisor::ratio)
        .min()
        .ok_or_else(|| Error::InvalidArgument("no divisors".into()))?;
    let lct_z = res
        .divisors
        .iter()
        .filter(|d| d.meets_z)
        .map(Divisor::ratio)
        .min()
        .ok_or_else(|| Error::Undefined(format!("no divisor of {} meets Z", res.name)))?;
    Ok((lct, lct_z))
}

/// `min nu_i / N_i` over divisors whose image meets `Z(F_q)`.
pub fn tau_q(res: &ResolutionData, q: u64) -> Result<BigRational> {
    let mut best: Option<BigRational> = None;
    for d in &res.divisors {
        let flag = d
            .image_meets_z_mod
            .get(&q)
            .ok_or_else(|| Error::InvalidArgument(format!("divisor {:?} has no entry for q = {q}", d.id)))?;
        if *flag {
            let r = d.ratio();
            best = Some(best.map_or(r.clone(), |b| b.min(r)));
        }
    }
    best.ok_or_else(|| Error::Undefined(format!("no divisor image meets Z(F_{q})")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalValueEntry {
    /// Pre-scaled integer critical value.
    #[serde(with = "rational::serde_bigint")]
    pub z: BigInt,
    #[serde(with = "rational::serde_str")]
    pub lct_at: BigRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionData>,
}

impl CriticalValueEntry {
    pub fn new(z: i64, lct_at: BigRational) -> Self {
        CriticalValueEntry { z: BigInt::from(z), lct_at, resolution: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lct_at <= BigRational::zero() || self.lct_at > BigRational::one() {
            return Err(Error::InvalidArgument(format!("local lct {} outside (0, 1]", rational::format(&self.lct_at))));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaZ {
    #[serde(with = "rational::serde_str")]
    pub value: BigRational,
    pub no_critical_points: bool,
}

/// `sigma_Z = min lct_at`; `1` with a flag when there are no critical values.
pub fn sigma_z(entries: &[CriticalValueEntry]) -> SigmaZ {
    match entries.iter().map(|e| e.lct_at.clone()).min() {
        Some(v) => SigmaZ { value: v, no_critical_points: false },
        None => SigmaZ { value: BigRational::one(), no_critical_points: true },
    }
}

/// Checks `d | N_i` for `i in I`, that the stratum exists and is nonempty,
/// and, for a constant residual unit, that it is a rational `d`-th power.
pub fn witness_check(res: &ResolutionData, w: &Witness) -> Result<bool> {
    let divs = res.divisors_of(&w.ids)?;
    if w.d < 2 || divs.is_empty() || divs.iter().any(|d| d.n % w.d != 0) {
        return Ok(false);
    }
    let Some(stratum) = res.stratum(&w.ids) else {
        return Ok(false);
    };
    if !stratum.nonempty {
        return Ok(false);
    }
    if let Some(u) = &stratum.constant_unit {
        return Ok(rational::rational_root(u, w.d as u32).is_some());
    }
    Ok(true)
}
