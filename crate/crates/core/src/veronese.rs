//! The exponent set of degree-q monomials in n parameters, its index tuples,
//! variable naming, the content map and the monomial parametrization.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{is_prime, Monomial, MonomialOrder, PrimeField, Ring};

/// Hard cap on q = p^h.
pub const DEFAULT_Q_CAP: u64 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VeroneseError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("q = {q} exceeds the configured cap {cap}")]
    QTooLarge { q: u64, cap: u64 },
    #[error("malformed index tuple {0:?}")]
    MalformedTuple(Vec<u16>),
    #[error("malformed exponent vector {0:?}")]
    MalformedExponent(Vec<u32>),
    #[error("monomial has {found} variables, ring has {expected}")]
    UnknownVariable { expected: usize, found: usize },
}

/// `n` parameters, characteristic `p`, exponent `h`; `q = p^h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ParamsJson", into = "ParamsJson")]
pub struct VeroneseParams {
    n: usize,
    p: u64,
    h: u32,
    q: u64,
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    n: usize,
    p: u64,
    h: u32,
}

impl TryFrom<ParamsJson> for VeroneseParams {
    type Error = VeroneseError;
    fn try_from(j: ParamsJson) -> Result<Self, Self::Error> {
        VeroneseParams::new(j.n, j.p, j.h)
    }
}

impl From<VeroneseParams> for ParamsJson {
    fn from(v: VeroneseParams) -> Self {
        ParamsJson {
            n: v.n,
            p: v.p,
            h: v.h,
        }
    }
}

impl VeroneseParams {
    pub fn new(n: usize, p: u64, h: u32) -> Result<Self, VeroneseError> {
        Self::with_cap(n, p, h, DEFAULT_Q_CAP)
    }

    pub fn with_cap(n: usize, p: u64, h: u32, q_cap: u64) -> Result<Self, VeroneseError> {
        if n == 0 {
            return Err(VeroneseError::InvalidParams("n must be at least 1".into()));
        }
        if n > u16::MAX as usize {
            return Err(VeroneseError::InvalidParams(format!(
                "n = {n} is too large"
            )));
        }
        if !is_prime(p) {
            return Err(VeroneseError::InvalidParams(format!(
                "p = {p} is not prime"
            )));
        }
        if h == 0 {
            return Err(VeroneseError::InvalidParams("h must be positive".into()));
        }
        let q = p.checked_pow(h).ok_or(VeroneseError::QTooLarge {
            q: u64::MAX,
            cap: q_cap,
        })?;
        if q > q_cap {
            return Err(VeroneseError::QTooLarge { q, cap: q_cap });
        }
        Ok(VeroneseParams { n, p, h, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Non-fatal caveats about the parameter choice.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.n < 3 {
            w.push(format!(
                "n = {} < 3: the complete-intersection dichotomy is only claimed for n >= 3",
                self.n
            ));
        }
        w
    }
}

/// Weakly increasing q-tuple over `1..=n`; names one variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexTuple(pub Vec<u16>);

/// Element of N^n with coordinate sum q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<u32>);

/// Multiplicity vector in N^n of a monomial's image under the parametrization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Content(pub Vec<u64>);

impl Content {
    pub fn zero(n: usize) -> Self {
        Content(vec![0; n])
    }

    pub fn add(&self, other: &Content) -> Content {
        Content(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl IndexTuple {
    pub fn indices(&self) -> &[u16] {
        &self.0
    }

    /// `x12`, or `x{1,10}` once some index needs two digits.
    pub fn variable_name(&self, n: usize) -> String {
        if n <= 9 {
            let digits: String = self.0.iter().map(|i| i.to_string()).collect();
            format!("x{digits}")
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            format!("x{{{}}}", parts.join(","))
        }
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Maps an exponent vector to its index tuple: `a_j` copies of `j`, in order.
pub fn tuple_of(a: &ExponentVector, params: &VeroneseParams) -> Result<IndexTuple, VeroneseError> {
    if a.0.len() != params.n() || a.0.iter().map(|&x| x as u64).sum::<u64>() != params.q() {
        return Err(VeroneseError::MalformedExponent(a.0.clone()));
    }
    let mut t = Vec::with_capacity(params.q() as usize);
    for (j, &aj) in a.0.iter().enumerate() {
        t.extend(std::iter::repeat_n((j + 1) as u16, aj as usize));
    }
    Ok(IndexTuple(t))
}

/// Inverse of [`tuple_of`]: multiplicity of each index.
pub fn exponent_of(
    t: &IndexTuple,
    params: &VeroneseParams,
) -> Result<ExponentVector, VeroneseError> {
    let n = params.n();
    let ok = t.0.len() as u64 == params.q()
        && t.0.windows(2).all(|w| w[0] <= w[1])
        && t.0.iter().all(|&i| i >= 1 && i as usize <= n);
    if !ok {
        return Err(VeroneseError::MalformedTuple(t.0.clone()));
    }
    let mut a = vec![0u32; n];
    for &i in &t.0 {
        a[i as usize - 1] += 1;
    }
    Ok(ExponentVector(a))
}

/// All weakly increasing `len`-tuples over `1..=n`, ascending lexicographic.
pub fn weakly_increasing_tuples(n: usize, len: usize) -> Vec<Vec<u16>> {
    fn rec(n: u16, len: usize, start: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(n, len, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as u16, len, 1, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// The variable set of the ambient ring, in ascending lexicographic order of
/// index tuples, with the exponent vector of each variable.
#[derive(Clone, Debug)]
pub struct Veronese {
    params: VeroneseParams,
    tuples: Vec<IndexTuple>,
    exponents: Vec<ExponentVector>,
    position: HashMap<IndexTuple, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TEntry {
    pub tuple: IndexTuple,
    pub exponent: ExponentVector,
}

impl Veronese {
    pub fn new(params: VeroneseParams) -> Self {
        let tuples: Vec<IndexTuple> = weakly_increasing_tuples(params.n(), params.q() as usize)
            .into_iter()
            .map(IndexTuple)
            .collect();
        let exponents = tuples
            .iter()
            .map(|t| exponent_of(t, &params).expect("enumerated tuples are valid"))
            .collect();
        let position = tuples
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        Veronese {
            params,
            tuples,
            exponents,
            position,
        }
    }

    pub fn params(&self) -> &VeroneseParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn q(&self) -> u64 {
        self.params.q()
    }

    /// |T|, the number of ambient variables.
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Codimension N = |T| - n.
    pub fn codimension(&self) -> usize {
        self.len() - self.n()
    }

    pub fn tuples(&self) -> &[IndexTuple] {
        &self.tuples
    }

    pub fn exponents(&self) -> &[ExponentVector] {
        &self.exponents
    }

    pub fn listing(&self) -> Vec<TEntry> {
        self.tuples
            .iter()
            .zip(&self.exponents)
            .map(|(t, a)| TEntry {
                tuple: t.clone(),
                exponent: a.clone(),
            })
            .collect()
    }

    pub fn index_of(&self, t: &IndexTuple) -> Option<usize> {
        self.position.get(t).copied()
    }

    /// Variable index of the sorted tuple built from `indices`.
    pub fn index_of_multiset(&self, indices: &[u16]) -> Option<usize> {
        let mut v = indices.to_vec();
        v.sort_unstable();
        self.index_of(&IndexTuple(v))
    }

    /// Variable index of the pure tuple `(j, …, j)` (1-based `j`).
    pub fn pure_index(&self, j: usize) -> usize {
        self.index_of(&IndexTuple(vec![j as u16; self.q() as usize]))
            .expect("pure tuple exists")
    }

    pub fn is_pure(&self, var: usize) -> bool {
        let t = &self.tuples[var].0;
        t.first() == t.last()
    }

    pub fn variable_names(&self) -> Vec<String> {
        self.tuples
            .iter()
            .map(|t| t.variable_name(self.n()))
            .collect()
    }

    pub fn ring(&self, field: PrimeField) -> Arc<Ring> {
        Ring::new(self.variable_names(), field, MonomialOrder::DegRevLex)
    }

    pub fn content_of_var(&self, var: usize) -> Content {
        Content(self.exponents[var].0.iter().map(|&a| a as u64).collect())
    }

    pub fn content_of(&self, m: &Monomial) -> Result<Content, VeroneseError> {
        if m.nvars() != self.len() {
            return Err(VeroneseError::UnknownVariable {
                expected: self.len(),
                found: m.nvars(),
            });
        }
        let mut c = vec![0u64; self.n()];
        for (var, e) in m.support() {
            for (cj, aj) in c.iter_mut().zip(&self.exponents[var].0) {
                *cj += *aj as u64 * e as u64;
            }
        }
        Ok(Content(c))
    }

    /// Monomial from (tuple, exponent) factors.
    pub fn monomial(&self, factors: &[(&IndexTuple, u32)]) -> Result<Monomial, VeroneseError> {
        let mut exps = vec![0u32; self.len()];
        for (t, e) in factors {
            let i = self
                .index_of(t)
                .ok_or_else(|| VeroneseError::MalformedTuple(t.0.clone()))?;
            exps[i] += e;
        }
        Ok(Monomial::from_exponents(exps))
    }

    /// Monomial from a product of variables given by index multisets.
    pub fn monomial_of_blocks(&self, blocks: &[Vec<u16>]) -> Result<Monomial, VeroneseError> {
        let mut exps = vec![0u32; self.len()];
        for b in blocks {
            let i = self
                .index_of_multiset(b)
                .ok_or_else(|| VeroneseError::MalformedTuple(b.clone()))?;
            exps[i] += 1;
        }
        Ok(Monomial::from_exponents(exps))
    }

    /// Coordinates `prod_j u_j^{a_j(t)}` over `F_r`, one per tuple.
    pub fn parametrize(&self, u: &[u64], field: PrimeField) -> Vec<u64> {
        assert_eq!(u.len(), self.n(), "parameter point has wrong dimension");
        self.exponents
            .iter()
            .map(|a| {
                a.0.iter()
                    .zip(u)
                    .fold(1 % field.modulus(), |acc, (&aj, &uj)| {
                        field.mul(acc, field.pow(uj, aj as u64))
                    })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, p: u64, h: u32) -> VeroneseParams {
        VeroneseParams::new(n, p, h).unwrap()
    }

    fn tup(v: &[u16]) -> IndexTuple {
        IndexTuple(v.to_vec())
    }

    #[test]
    fn n3_q2_tuples() {
        let v = Veronese::new(params(3, 2, 1));
        let expect: Vec<IndexTuple> = [[1, 1], [1, 2], [1, 3], [2, 2], [2, 3], [3, 3]]
            .iter()
            .map(|t| tup(t))
            .collect();
        assert_eq!(v.tuples(), &expect[..]);
        assert_eq!(
            v.variable_names(),
            ["x11", "x12", "x13", "x22", "x23", "x33"]
        );
    }

    #[test]
    fn single_parameter() {
        let v = Veronese::new(params(1, 5, 1));
        assert_eq!(v.tuples(), &[tup(&[1, 1, 1, 1, 1])]);
        assert!(!params(1, 5, 1).warnings().is_empty());
        assert!(params(3, 5, 1).warnings().is_empty());
    }

    #[test]
    fn n4_q2_count() {
        assert_eq!(Veronese::new(params(4, 2, 1)).len(), 10);
    }

    #[test]
    fn bijection_examples() {
        let p32 = params(3, 2, 1);
        assert_eq!(
            tuple_of(&ExponentVector(vec![1, 1, 0]), &p32).unwrap(),
            tup(&[1, 2])
        );
        assert_eq!(
            exponent_of(&tup(&[1, 2]), &p32).unwrap(),
            ExponentVector(vec![1, 1, 0])
        );
        let p33 = params(3, 3, 1);
        assert_eq!(
            tuple_of(&ExponentVector(vec![0, 2, 1]), &p33).unwrap(),
            tup(&[2, 2, 3])
        );
        assert_eq!(
            tuple_of(&ExponentVector(vec![3, 0, 0]), &p33).unwrap(),
            tup(&[1, 1, 1])
        );
    }

    #[test]
    fn malformed_inputs() {
        let p32 = params(3, 2, 1);
        assert!(tuple_of(&ExponentVector(vec![1, 0, 0]), &p32).is_err());
        assert!(tuple_of(&ExponentVector(vec![1, 1]), &p32).is_err());
        assert!(exponent_of(&tup(&[2, 1]), &p32).is_err());
        assert!(exponent_of(&tup(&[1, 4]), &p32).is_err());
        assert!(exponent_of(&tup(&[1, 1, 1]), &p32).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(VeroneseParams::new(0, 2, 1).is_err());
        assert!(VeroneseParams::new(3, 4, 1).is_err());
        assert!(VeroneseParams::new(3, 2, 0).is_err());
        assert_eq!(
            VeroneseParams::new(3, 2, 5),
            Err(VeroneseError::QTooLarge { q: 32, cap: 16 })
        );
        assert!(VeroneseParams::with_cap(3, 2, 5, 32).is_ok());
    }

    #[test]
    fn params_json() {
        let p: VeroneseParams = serde_json::from_str(r#"{"n":3,"p":2,"h":1}"#).unwrap();
        assert_eq!(p.q(), 2);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"n":3,"p":2,"h":1}"#);
        assert!(serde_json::from_str::<VeroneseParams>(r#"{"n":3,"p":6,"h":1}"#).is_err());
    }

    #[test]
    fn content_examples() {
        let v = Veronese::new(params(3, 2, 1));
        let x12 = v.monomial(&[(&tup(&[1, 2]), 1)]).unwrap();
        assert_eq!(v.content_of(&x12).unwrap(), Content(vec![1, 1, 0]));
        let a = v
            .monomial(&[(&tup(&[1, 1]), 1), (&tup(&[2, 2]), 1)])
            .unwrap();
        let b = v.monomial(&[(&tup(&[1, 2]), 2)]).unwrap();
        assert_eq!(v.content_of(&a).unwrap(), Content(vec![2, 2, 0]));
        assert_eq!(v.content_of(&a).unwrap(), v.content_of(&b).unwrap());
        assert_eq!(v.content_of(&Monomial::one(6)).unwrap(), Content::zero(3));
        assert!(v.content_of(&Monomial::one(5)).is_err());
    }

    #[test]
    fn parametrize_examples() {
        let v = Veronese::new(params(3, 2, 1));
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(v.parametrize(&[1, 1, 1], f5), vec![1; 6]);
        assert_eq!(v.parametrize(&[1, 2, 3], f5), vec![1, 2, 3, 4, 1, 4]);
        assert_eq!(v.parametrize(&[0, 0, 0], f5), vec![0; 6]);
    }

    #[test]
    fn long_index_names() {
        let t = tup(&[1, 10]);
        assert_eq!(t.variable_name(10), "x{1,10}");
        assert_eq!(tup(&[1, 2]).variable_name(3), "x12");
    }

    #[test]
    fn binomial_coefficients() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(14, 9), Some(2002));
        assert_eq!(binomial(3, 5), Some(0));
    }
}
