//! Sparse multivariate polynomials over prime fields (plus an integer
//! coefficient variant used for exact identity checks).

mod field;
mod groebner;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{is_prime, PrimeField};
pub use groebner::{buchberger, buchberger_with_limit, GroebnerBasis, DEFAULT_PAIR_LIMIT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("operands live in different polynomial rings")]
    RingMismatch,
    #[error("field characteristic is {found}, expected {expected}")]
    CharacteristicMismatch { expected: u64, found: u64 },
    #[error("Buchberger pair limit of {limit} exceeded")]
    PairLimitExceeded { limit: usize },
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
}

/// Dense exponent vector; variable 0 is the largest variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = e;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Nonzero (variable, exponent) pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, e)| e > 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|e| e * k).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn cmp_by(&self, other: &Monomial, order: MonomialOrder) -> Ordering {
        match order {
            MonomialOrder::Lex => {
                for (a, b) in self.exps.iter().zip(&other.exps) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::DegRevLex => {
                match self.degree().cmp(&other.degree()) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Variable names, coefficient field and term order shared by a family of
/// polynomials.
#[derive(Debug, PartialEq, Eq)]
pub struct Ring {
    names: Vec<String>,
    field: PrimeField,
    order: MonomialOrder,
    index: HashMap<String, usize>,
}

impl Ring {
    pub fn new(names: Vec<String>, field: PrimeField, order: MonomialOrder) -> Arc<Ring> {
        let index = names
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        Arc::new(Ring {
            names,
            field,
            order,
            index,
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Same variables and field, different term order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Ring> {
        Ring::new(self.names.clone(), self.field, order)
    }

    pub fn with_field(&self, field: PrimeField) -> Arc<Ring> {
        Ring::new(self.names.clone(), field, self.order)
    }
}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A polynomial over `ring.field()`. Terms are kept sorted ascending in the
/// ring's term order, so the leading term is the last one.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, u64)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: u64) -> Poly {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Poly {
        Self::term(ring, Monomial::var(ring.nvars(), i, 1), 1)
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: u64) -> Poly {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<Ring>, terms: Vec<(Monomial, u64)>) -> Poly {
        let f = ring.field();
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial has wrong arity");
            let e = acc.entry(m).or_insert(0);
            *e = f.add(*e, c % f.modulus());
        }
        let mut terms: Vec<(Monomial, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        let order = ring.order();
        terms.sort_by(|a, b| a.0.cmp_by(&b.0, order));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Binomial `m1 - m2`.
    pub fn binomial(ring: &Arc<Ring>, m1: Monomial, m2: Monomial) -> Poly {
        let minus_one = ring.field().neg(1);
        Self::from_terms(ring, vec![(m1, 1), (m2, minus_one)])
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending term order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().rev().map(|(m, c)| (m, *c))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u64)> {
        self.terms.last().map(|(m, c)| (m, *c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.last().map(|(m, _)| m)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.add_scaled(other, 1, None))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let minus_one = self.ring.field().neg(1);
        Ok(self.add_scaled(other, minus_one, None))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let mut acc = Poly::zero(&self.ring);
        for (m, c) in &other.terms {
            acc = acc.add_scaled(self, *c, Some(m));
        }
        Ok(acc)
    }

    pub fn scalar_mul(&self, c: u64) -> Poly {
        let f = self.ring.field();
        let c = c % f.modulus();
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), f.mul(*a, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), *c)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        self.scalar_mul(self.ring.field().neg(1))
    }

    pub fn pow(&self, k: u64) -> Poly {
        let mut acc = Poly::constant(&self.ring, 1);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Rescales so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self
                    .ring
                    .field()
                    .inv(c)
                    .expect("nonzero leading coefficient");
                self.scalar_mul(inv)
            }
        }
    }

    /// `f^(p^k)`, computed termwise through the Frobenius endomorphism.
    pub fn frobenius_power(&self, p: u64, k: u32) -> Result<Poly, PolyError> {
        let found = self.ring.field().modulus();
        if found != p {
            return Err(PolyError::CharacteristicMismatch { expected: p, found });
        }
        let e = p.checked_pow(k).expect("Frobenius exponent overflow");
        let f = self.ring.field();
        let e32 = u32::try_from(e).expect("Frobenius exponent overflow");
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.pow(e32), f.pow(*c, e)))
            .collect();
        Ok(Poly::from_terms(&self.ring, terms))
    }

    pub fn evaluate(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.ring.nvars(), "point has wrong dimension");
        let f = self.ring.field();
        self.terms.iter().fold(0, |acc, (m, c)| {
            let v = m
                .support()
                .fold(*c, |v, (i, e)| f.mul(v, f.pow(point[i], e as u64)));
            f.add(acc, v)
        })
    }

    /// `self + c * mono * other`, merging sorted term lists.
    pub(crate) fn add_scaled(&self, other: &Poly, c: u64, mono: Option<&Monomial>) -> Poly {
        let terms = merge_scaled(&self.ring, &self.terms, &other.terms, c, mono);
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Coefficients lifted to the symmetric range around zero.
    pub fn to_int_poly(&self) -> IntPoly {
        let r = self.ring.field().modulus() as i64;
        let terms = self.terms.iter().map(|(m, c)| {
            let c = *c as i64;
            let lifted = if c > r / 2 { c - r } else { c };
            (m.clone(), BigInt::from(lifted))
        });
        IntPoly::from_terms(terms)
    }

    /// Parses text such as `x12^2 - x11*x22` or `3*x*y + 1` against the ring's
    /// variable names.
    pub fn parse(ring: &Arc<Ring>, text: &str) -> Result<Poly, PolyError> {
        let int = IntPoly::parse(text, |name| ring.var_index(name), ring.nvars())?;
        Ok(int.to_poly(ring))
    }
}

fn merge_scaled(
    ring: &Ring,
    a: &[(Monomial, u64)],
    b: &[(Monomial, u64)],
    c: u64,
    mono: Option<&Monomial>,
) -> Vec<(Monomial, u64)> {
    let f = ring.field();
    let order = ring.order();
    let c = c % f.modulus();
    if c == 0 {
        return a.to_vec();
    }
    let shifted = |t: &Monomial| match mono {
        Some(m) => t.mul(m),
        None => t.clone(),
    };
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bj: Option<Monomial> = b.first().map(|t| shifted(&t.0));
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), bj.as_ref()) {
            (Some(x), Some(y)) => x.0.cmp_by(y, order),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match ord {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let m = bj.take().unwrap();
                out.push((m, f.mul(b[j].1, c)));
                j += 1;
                bj = b.get(j).map(|t| shifted(&t.0));
            }
            Ordering::Equal => {
                let m = bj.take().unwrap();
                let v = f.add(a[i].1, f.mul(b[j].1, c));
                if v != 0 {
                    out.push((m, v));
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(|t| shifted(&t.0));
            }
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_int_poly().format_with(self.ring.names()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.ring.field().modulus(), self)
    }
}

/// Integer-coefficient polynomial; used where an identity must hold over Z
/// rather than modulo a prime.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = IntPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::from_terms([(m, BigInt::one())])
    }

    /// `m1 - m2`.
    pub fn binomial(m1: Monomial, m2: Monomial) -> Self {
        Self::from_terms([(m1, BigInt::one()), (m2, -BigInt::one())])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> IntPoly {
        IntPoly::from_terms(self.terms.iter().map(|(m, a)| (m.mul(mono), a.clone())))
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> IntPoly {
        IntPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[var];
            if e == 0 {
                return None;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            Some((Monomial::from_exponents(exps), c * BigInt::from(e)))
        }))
    }

    pub fn to_poly(&self, ring: &Arc<Ring>) -> Poly {
        let f = ring.field();
        let r = BigInt::from(f.modulus());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut v = c % &r;
                if v.is_negative() {
                    v += &r;
                }
                (m.clone(), v.to_u64().expect("residue fits in u64"))
            })
            .collect();
        Poly::from_terms(ring, terms)
    }

    /// Evaluates over `F_r`.
    pub fn evaluate_mod(&self, point: &[u64], field: PrimeField) -> u64 {
        let r = BigInt::from(field.modulus());
        self.terms.iter().fold(0, |acc, (m, c)| {
            let mut cm = c % &r;
            if cm.is_negative() {
                cm += &r;
            }
            let v = m.support().fold(cm.to_u64().unwrap(), |v, (i, e)| {
                field.mul(v, field.pow(point[i], e as u64))
            });
            field.add(acc, v)
        })
    }

    /// Canonical text: terms in descending lex order, `x^e` factors joined by `*`.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp_by(a.0, MonomialOrder::Lex));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m
                .support()
                .map(|(i, e)| {
                    if e == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], e)
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    pub fn parse(
        text: &str,
        lookup: impl Fn(&str) -> Option<usize>,
        nvars: usize,
    ) -> Result<IntPoly, PolyError> {
        let err = |msg: String| PolyError::Parse(msg);
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0usize;
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        let read_int = |pos: &mut usize| -> Option<u64> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == start {
                None
            } else {
                chars[start..*pos].iter().collect::<String>().parse().ok()
            }
        };

        let mut out = IntPoly::zero();
        let mut first = true;
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() {
                if first {
                    return Err(err("empty polynomial".into()));
                }
                break;
            }
            let mut sign = BigInt::one();
            if chars[pos] == '+' || chars[pos] == '-' {
                if chars[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
                skip_ws(&mut pos);
            } else if !first {
                return Err(err(format!("expected '+' or '-' at offset {pos}")));
            }
            first = false;

            let mut coeff = sign;
            let mut mono = vec![0u32; nvars];
            loop {
                skip_ws(&mut pos);
                if pos >= chars.len() {
                    return Err(err("dangling operator".into()));
                }
                if chars[pos].is_ascii_digit() {
                    let v = read_int(&mut pos).ok_or_else(|| err("bad integer".into()))?;
                    coeff *= BigInt::from(v);
                } else if chars[pos].is_alphabetic() {
                    let start = pos;
                    let mut depth = 0i32;
                    while pos < chars.len() {
                        let ch = chars[pos];
                        if ch == '{' {
                            depth += 1;
                        } else if ch == '}' {
                            depth -= 1;
                        } else if !(ch.is_alphanumeric() || ch == '_' || (ch == ',' && depth > 0)) {
                            break;
                        }
                        pos += 1;
                    }
                    let name: String = chars[start..pos].iter().collect();
                    let idx =
                        lookup(&name).ok_or_else(|| err(format!("unknown variable {name}")))?;
                    skip_ws(&mut pos);
                    let mut e = 1u32;
                    if pos < chars.len() && chars[pos] == '^' {
                        pos += 1;
                        skip_ws(&mut pos);
                        e = read_int(&mut pos)
                            .ok_or_else(|| err(format!("missing exponent after {name}^")))?
                            as u32;
                    }
                    mono[idx] += e;
                } else {
                    return Err(err(format!("unexpected '{}' at offset {pos}", chars[pos])));
                }
                skip_ws(&mut pos);
                if pos < chars.len() && chars[pos] == '*' {
                    pos += 1;
                    continue;
                }
                break;
            }
            out.add_term(Monomial::from_exponents(mono), coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy_ring(r: u64) -> Arc<Ring> {
        Ring::new(
            vec!["x".into(), "y".into()],
            PrimeField::new(r).unwrap(),
            MonomialOrder::DegRevLex,
        )
    }

    #[test]
    fn difference_of_squares() {
        let ring = xy_ring(5);
        let x = Poly::var(&ring, 0);
        let y = Poly::var(&ring, 1);
        let prod = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        assert_eq!(prod, Poly::parse(&ring, "x^2 - y^2").unwrap());
    }

    #[test]
    fn adding_zero() {
        let ring = xy_ring(5);
        let p = Poly::parse(&ring, "3*x*y + y + 2").unwrap();
        assert_eq!(p.add(&Poly::zero(&ring)).unwrap(), p);
    }

    #[test]
    fn binomial_times_variable() {
        let names: Vec<String> = ["x11", "x12", "x22", "x33"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let ring = Ring::new(names, PrimeField::new(3).unwrap(), MonomialOrder::DegRevLex);
        let g = Poly::parse(&ring, "x12^2 - x11*x22").unwrap();
        let h = g.mul(&Poly::parse(&ring, "x33").unwrap()).unwrap();
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn mixed_moduli_rejected() {
        let a = Poly::var(&xy_ring(5), 0);
        let b = Poly::var(&xy_ring(7), 0);
        assert_eq!(a.add(&b), Err(PolyError::RingMismatch));
        assert_eq!(a.mul(&b), Err(PolyError::RingMismatch));
    }

    #[test]
    fn frobenius_over_f2() {
        let ring = xy_ring(2);
        let f = Poly::parse(&ring, "x - y").unwrap();
        assert_eq!(
            f.frobenius_power(2, 1).unwrap(),
            Poly::parse(&ring, "x^2 + y^2").unwrap()
        );
        assert_eq!(f.frobenius_power(2, 0).unwrap(), f);
        assert_eq!(
            f.frobenius_power(3, 1),
            Err(PolyError::CharacteristicMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn degrevlex_vs_lex() {
        // x*y^2 vs x^2 (deg 3 > deg 2 in degrevlex, x^2 > x*y^2 in lex)
        let a = Monomial::from_exponents(vec![1, 2]);
        let b = Monomial::from_exponents(vec![2, 0]);
        assert_eq!(a.cmp_by(&b, MonomialOrder::DegRevLex), Ordering::Greater);
        assert_eq!(a.cmp_by(&b, MonomialOrder::Lex), Ordering::Less);
        // same degree: x*z < y^2 in degrevlex (z is smallest)
        let xz = Monomial::from_exponents(vec![1, 0, 1]);
        let yy = Monomial::from_exponents(vec![0, 2, 0]);
        assert_eq!(xz.cmp_by(&yy, MonomialOrder::DegRevLex), Ordering::Less);
        assert_eq!(xz.cmp_by(&yy, MonomialOrder::Lex), Ordering::Greater);
    }

    #[test]
    fn parse_and_print_round_trip() {
        let names: Vec<String> = ["x{10,10}", "x{1,10}"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let ring = Ring::new(names, PrimeField::new(7).unwrap(), MonomialOrder::DegRevLex);
        let p = Poly::parse(&ring, "x{10,10}^2 - 3*x{1,10}").unwrap();
        assert_eq!(Poly::parse(&ring, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn parse_errors() {
        let ring = xy_ring(5);
        assert!(Poly::parse(&ring, "").is_err());
        assert!(Poly::parse(&ring, "x +").is_err());
        assert!(Poly::parse(&ring, "z").is_err());
        assert!(Poly::parse(&ring, "x y").is_err());
    }

    #[test]
    fn int_poly_derivative() {
        // d/dx (x^3 y - 2 y) = 3 x^2 y
        let p = IntPoly::from_terms([
            (Monomial::from_exponents(vec![3, 1]), BigInt::from(1)),
            (Monomial::from_exponents(vec![0, 1]), BigInt::from(-2)),
        ]);
        let d = p.derivative(0);
        assert_eq!(
            d,
            IntPoly::from_terms([(Monomial::from_exponents(vec![2, 1]), BigInt::from(3))])
        );
    }
}
