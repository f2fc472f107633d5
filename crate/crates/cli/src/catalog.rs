//! Worked examples and their data files.

use std::path::Path;

use igusa_core::numeric::rational;
use igusa_core::poly::{IntPolynomial, ZConstraint};
use igusa_core::resolution::{sigma_z, CriticalValueEntry, ResolutionData};
use igusa_core::{Error, Result};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

const CATALOG: &str = include_str!("../data/catalog.json");

const RESOLUTIONS: &[(&str, &str)] = &[
    ("x1.json", include_str!("../data/resolutions/x1.json")),
    ("x2.json", include_str!("../data/resolutions/x2.json")),
    ("x3.json", include_str!("../data/resolutions/x3.json")),
    ("x4.json", include_str!("../data/resolutions/x4.json")),
    ("xy.json", include_str!("../data/resolutions/xy.json")),
    ("cusp.json", include_str!("../data/resolutions/cusp.json")),
];

/// A resolution given inline or as a file name next to the catalog.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ResolutionSource {
    Inline(Box<ResolutionData>),
    File(String),
}

// untagged buffering would lose the integer map keys of the unit tables
impl<'de> Deserialize<'de> for ResolutionSource {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(ResolutionSource::File(s)),
            v => serde_json::from_value(v).map(|r| ResolutionSource::Inline(Box::new(r))).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub f: IntPolynomial,
    /// Equations of `Z`; empty means all of `A^n`.
    #[serde(default)]
    pub z: Vec<IntPolynomial>,
    #[serde(default)]
    pub critical: Vec<CriticalValueEntry>,
    /// The critical values are `z / critical_scale`.
    #[serde(default, with = "rational::serde_opt_str", skip_serializing_if = "Option::is_none")]
    pub critical_scale: Option<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionSource>,
    #[serde(with = "rational::serde_str")]
    pub sigma: BigRational,
    #[serde(with = "rational::serde_str")]
    pub lct: BigRational,
    /// Primes for sums and decay.
    pub primes: Vec<u64>,
    /// Residue fields for zeta functions and pole data.
    #[serde(default)]
    pub zeta_primes: Vec<u64>,
    /// Reduction is good for `p >= min_prime`.
    pub min_prime: u64,
    pub m_range: (u32, u32),
    pub budget: u64,
    /// Recorded bound on `|E| p^{sigma m} / m^{n-1}`.
    #[serde(with = "rational::serde_str")]
    pub decay_constant: BigRational,
    #[serde(default)]
    pub rational_singularities: bool,
}

impl CatalogEntry {
    pub fn n(&self) -> usize {
        self.f.nvars()
    }

    pub fn z_constraint(&self) -> ZConstraint {
        ZConstraint::new(self.z.clone())
    }

    pub fn resolution(&self) -> Option<&ResolutionData> {
        match &self.resolution {
            Some(ResolutionSource::Inline(r)) => Some(r),
            _ => None,
        }
    }

    /// Replaces file references using `lookup` and validates the result.
    fn resolve(&mut self, lookup: &dyn Fn(&str) -> Result<String>) -> Result<()> {
        if let Some(ResolutionSource::File(name)) = &self.resolution {
            let data = ResolutionData::from_json(&lookup(name)?)?;
            self.resolution = Some(ResolutionSource::Inline(Box::new(data)));
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(format!("catalog entry {}: {m}", self.name)));
        if let Some(r) = self.resolution() {
            r.validate()?;
            if r.n != self.n() {
                return bad(format!("resolution has dimension {}, f has {}", r.n, self.n()));
            }
        }
        for c in &self.critical {
            c.validate()?;
        }
        if !self.critical.is_empty() && sigma_z(&self.critical).value != self.sigma {
            return bad("sigma differs from the minimum local lct".into());
        }
        if self.m_range.0 < 2 || self.m_range.0 > self.m_range.1 {
            return bad(format!("bad level range {:?}", self.m_range));
        }
        Ok(())
    }
}

fn builtin_file(name: &str) -> Result<String> {
    RESOLUTIONS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| Error::InvalidArgument(format!("no shipped resolution file {name}")))
}

pub fn builtin() -> Result<Vec<CatalogEntry>> {
    let mut entries: Vec<CatalogEntry> = serde_json::from_str(CATALOG).map_err(|e| Error::Parse(e.to_string()))?;
    for e in &mut entries {
        e.resolve(&builtin_file)?;
    }
    Ok(entries)
}

pub fn find(name: &str) -> Result<CatalogEntry> {
    builtin()?
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("no catalog entry named {name:?}")))
}

/// A single entry or a list of entries; relative resolution files are looked
/// up next to the catalog file, then among the shipped ones.
pub fn load_file(path: &Path) -> Result<Vec<CatalogEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut entries: Vec<CatalogEntry> = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|e| vec![e])
    }
    .map_err(|e| Error::Parse(e.to_string()))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let lookup = |name: &str| -> Result<String> {
        let local = dir.join(name);
        if local.exists() {
            std::fs::read_to_string(&local).map_err(|e| Error::Parse(format!("{}: {e}", local.display())))
        } else {
            builtin_file(name)
        }
    };
    for e in &mut entries {
        e.resolve(&lookup)?;
    }
    Ok(entries)
}

/// An entry name, or a path to a catalog file.
pub fn lookup(spec: &str) -> Result<Vec<CatalogEntry>> {
    let path = Path::new(spec);
    if path.extension().is_some_and(|x| x == "json") || path.exists() {
        load_file(path)
    } else {
        find(spec).map(|e| vec![e])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use igusa_core::resolution::lct_values;

    #[test]
    fn shipped_catalog_is_consistent() {
        let entries = builtin().unwrap();
        assert!(entries.len() >= 8);
        for e in &entries {
            if let Some(r) = e.resolution() {
                assert_eq!(lct_values(r).unwrap().0, e.lct, "{}", e.name);
            }
        }
        assert_eq!(find("cusp").unwrap().resolution().unwrap().divisors.len(), 4);
        assert!(find("nope").is_err());
    }
}
