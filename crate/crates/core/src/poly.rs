//! Sparse multivariate polynomials over Z.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPolynomial {
    pub fn zero(vars: Vec<String>) -> Self {
        assert!(!vars.is_empty(), "a polynomial needs at least one variable");
        IntPolynomial { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vec<String>, c: BigInt) -> Self {
        let n = vars.len();
        let mut p = Self::zero(vars);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn var(vars: Vec<String>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn from_terms(vars: Vec<String>, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Result<Self> {
        let n = vars.len();
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::Parse(format!("exponent vector {e:?} does not match {n} variables")));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Parse an expression such as `x^2*(x-1)^3` or `x^2 + y^3`.
    /// Variables are named in order of `vars`, or sorted by name if `None`.
    pub fn parse(expr: &str, vars: Option<&[&str]>) -> Result<Self> {
        let tokens = tokenize(expr)?;
        let names: Vec<String> = match vars {
            Some(v) => v.iter().map(|s| s.to_string()).collect(),
            None => {
                let mut names: Vec<String> = tokens
                    .iter()
                    .filter_map(|t| match t {
                        Tok::Ident(s) => Some(s.clone()),
                        _ => None,
                    })
                    .collect();
                names.sort();
                names.dedup();
                if names.is_empty() {
                    names.push("x".into());
                }
                names
            }
        };
        let mut parser = Parser { toks: &tokens, pos: 0, vars: &names };
        let p = parser.expr()?;
        if parser.pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input in {expr:?}")));
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = Self::zero(self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.vars.clone(), BigInt::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * BigInt::from(e[i]));
            }
        }
        out
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.nvars());
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// `f(x) mod m` for residues `x`, in `0..m`.
    pub fn eval_mod(&self, x: &[u64], m: u64) -> u64 {
        let mp = self.reduce_mod(m);
        mp.eval(x)
    }

    pub fn reduce_mod(&self, m: u64) -> ModPoly {
        assert!(m >= 1);
        let mb = BigInt::from(m);
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let r = c.mod_floor(&mb).to_u64().unwrap();
                (r != 0).then(|| (e.clone(), r))
            })
            .collect();
        ModPoly { modulus: m, nvars: self.nvars(), terms }
    }

    /// `f(shift + scale * z)` as a polynomial in `z`.
    pub fn affine_substitute(&self, shift: &[BigInt], scale: &BigInt) -> Self {
        let n = self.nvars();
        assert_eq!(shift.len(), n);
        let lin: Vec<IntPolynomial> = (0..n)
            .map(|i| {
                Self::constant(self.vars.clone(), shift[i].clone())
                    .add(&Self::var(self.vars.clone(), i).scale(scale))
            })
            .collect();
        let mut pow_cache: Vec<Vec<IntPolynomial>> = lin.iter().map(|l| vec![Self::constant(self.vars.clone(), BigInt::one()), l.clone()]).collect();
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut t = Self::constant(self.vars.clone(), c.clone());
            for i in 0..n {
                let k = e[i] as usize;
                while pow_cache[i].len() <= k {
                    let next = pow_cache[i].last().unwrap().mul(&lin[i]);
                    pow_cache[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&pow_cache[i][k]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Minimum `p`-adic valuation of the coefficients; `None` for the zero polynomial.
    pub fn content_valuation(&self, p: u64) -> Option<u32> {
        self.terms.values().filter_map(|c| crate::numeric::rational::valuation(c, p)).min()
    }

    /// Exact division of every coefficient by `d`.
    pub fn div_exact(&self, d: &BigInt) -> Self {
        IntPolynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (q, r) = c.div_rem(d);
                    assert!(r.is_zero(), "inexact division");
                    (e.clone(), q)
                })
                .collect(),
        }
    }
}

/// A polynomial with coefficients reduced modulo a machine-word modulus.
#[derive(Clone, Debug)]
pub struct ModPoly {
    pub modulus: u64,
    pub nvars: usize,
    pub terms: Vec<(Vec<u32>, u64)>,
}

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m <= 1 << 32 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

impl ModPoly {
    pub fn eval(&self, x: &[u64]) -> u64 {
        let m = self.modulus;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = mulmod(t, powmod(*xi, k as u64, m), m);
                }
            }
            acc = (acc + t) % m;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficients of the last variable after fixing the others:
    /// `f(prefix, y) = sum_j a_j y^j`.
    pub fn univariate_in_last(&self, prefix: &[u64], out: &mut Vec<u64>) {
        let m = self.modulus;
        let last = self.nvars - 1;
        out.clear();
        for (e, c) in &self.terms {
            let j = e[last] as usize;
            if out.len() <= j {
                out.resize(j + 1, 0);
            }
            let mut t = *c;
            for (xi, &k) in prefix.iter().zip(e) {
                if k > 0 {
                    t = mulmod(t, powmod(*xi, k as u64, m), m);
                }
            }
            out[j] = (out[j] + t) % m;
        }
    }
}

/// `Z`, the common zero locus of `g_1..g_r` over F_p. An empty list is all of A^n.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZConstraint {
    pub polys: Vec<IntPolynomial>,
}

impl ZConstraint {
    pub fn all() -> Self {
        ZConstraint { polys: Vec::new() }
    }

    pub fn new(polys: Vec<IntPolynomial>) -> Self {
        ZConstraint { polys }
    }

    pub fn is_all(&self) -> bool {
        self.polys.iter().all(|g| g.is_zero())
    }

    pub fn contains(&self, x_mod_p: &[u64], p: u64) -> bool {
        self.polys.iter().all(|g| g.eval_mod(x_mod_p, p) == 0)
    }

    /// Compiled membership test modulo `p`.
    pub fn compile(&self, p: u64) -> Vec<ModPoly> {
        self.polys.iter().map(|g| g.reduce_mod(p)).collect()
    }
}

// ---- text form ----

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().unwrap()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn vars(&self) -> Vec<String> {
        self.vars.to_vec()
    }

    fn expr(&mut self) -> Result<IntPolynomial> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<IntPolynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k = k.to_u32().filter(|&k| k <= 64).ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(k))
                }
                _ => Err(Error::Parse("expected an integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<IntPolynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(c)) => {
                self.pos += 1;
                Ok(IntPolynomial::constant(self.vars(), c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                Ok(IntPolynomial::var(self.vars(), i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

// ---- JSON form: {vars: [names], terms: [{c: "int", e: [ints]}]} ----

#[derive(Serialize, Deserialize)]
struct TermRepr {
    c: String,
    e: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| TermRepr { c: c.to_string(), e: e.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        if r.vars.is_empty() {
            return Err(serde::de::Error::custom("polynomial needs at least one variable"));
        }
        let mut terms = Vec::new();
        for t in r.terms {
            let c: BigInt = t.c.trim().parse().map_err(serde::de::Error::custom)?;
            terms.push((t.e, c));
        }
        IntPolynomial::from_terms(r.vars, terms).map_err(serde::de::Error::custom)
    }
}
