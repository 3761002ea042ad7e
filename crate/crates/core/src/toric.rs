//! Binomials of the Veronese toric ideal: the content criterion, the
//! quadratic generating set, and a rewriter that expresses any binomial of
//! block-permutation type as an explicit combination of quadratic ones.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{IntPoly, Monomial, MonomialOrder, Poly, Ring};
use crate::veronese::{IndexTuple, Veronese, VeroneseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("zero binomial: both sides are the same monomial")]
    ZeroBinomial,
    #[error("invalid binomial spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Veronese(#[from] VeroneseError),
}

/// `plus - minus`, oriented so that `plus` is the lex-larger monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial {
    pub plus: Monomial,
    pub minus: Monomial,
}

impl Binomial {
    /// Normalizes orientation; returns the sign relating `m1 - m2` to the result.
    pub fn oriented(m1: Monomial, m2: Monomial) -> (Binomial, i8) {
        match m1.cmp_by(&m2, MonomialOrder::Lex) {
            Ordering::Less => (
                Binomial {
                    plus: m2,
                    minus: m1,
                },
                -1,
            ),
            _ => (
                Binomial {
                    plus: m1,
                    minus: m2,
                },
                1,
            ),
        }
    }

    /// Keeps the given orientation as-is.
    pub fn new(plus: Monomial, minus: Monomial) -> Binomial {
        Binomial { plus, minus }
    }

    pub fn is_zero(&self) -> bool {
        self.plus == self.minus
    }

    pub fn degree(&self) -> u32 {
        self.plus.degree().max(self.minus.degree())
    }

    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::binomial(self.plus.clone(), self.minus.clone())
    }

    pub fn to_poly(&self, ring: &Arc<Ring>) -> Poly {
        Poly::binomial(ring, self.plus.clone(), self.minus.clone())
    }

    /// Same binomial up to sign.
    pub fn same_up_to_sign(&self, other: &Binomial) -> bool {
        (self.plus == other.plus && self.minus == other.minus)
            || (self.plus == other.minus && self.minus == other.plus)
    }

    /// `plus - minus` in canonical text, e.g. `x12^2 - x11*x22`.
    pub fn format(&self, names: &[String]) -> String {
        format!(
            "{} - {}",
            IntPoly::monomial(self.plus.clone()).format_with(names),
            IntPoly::monomial(self.minus.clone()).format_with(names)
        )
    }

    /// Value of `plus - minus` at a point of `F_r^|T|`.
    pub fn evaluate(&self, x: &[u64], field: crate::poly::PrimeField) -> u64 {
        let eval = |m: &Monomial| {
            m.support().fold(1 % field.modulus(), |acc, (i, e)| {
                field.mul(acc, field.pow(x[i], e as u64))
            })
        };
        field.sub(eval(&self.plus), eval(&self.minus))
    }
}

/// True iff `m1 - m2` lies in the toric ideal, i.e. the contents agree.
pub fn binomial_in_ideal(v: &Veronese, m1: &Monomial, m2: &Monomial) -> Result<bool, ToricError> {
    Ok(v.content_of(m1)? == v.content_of(m2)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorStyle {
    /// Within each content class `{m1..mk}` emit `m1 - mj`.
    #[default]
    Star,
    /// All pairwise differences within each content class.
    Full,
}

/// The degree-2 binomials of the toric ideal, grouped by content class.
pub fn quadratic_generators(v: &Veronese, style: GeneratorStyle) -> Vec<Binomial> {
    let nv = v.len();
    let mut classes: BTreeMap<Vec<u64>, Vec<Monomial>> = BTreeMap::new();
    for i in 0..nv {
        for j in i..nv {
            let c = v.content_of_var(i).add(&v.content_of_var(j));
            let mut exps = vec![0u32; nv];
            exps[i] += 1;
            exps[j] += 1;
            classes
                .entry(c.0)
                .or_default()
                .push(Monomial::from_exponents(exps));
        }
    }
    let mut out = Vec::new();
    for members in classes.values() {
        match style {
            GeneratorStyle::Star => {
                for m in &members[1..] {
                    out.push(Binomial::oriented(members[0].clone(), m.clone()).0);
                }
            }
            GeneratorStyle::Full => {
                for a in 0..members.len() {
                    for b in a + 1..members.len() {
                        out.push(Binomial::oriented(members[a].clone(), members[b].clone()).0);
                    }
                }
            }
        }
    }
    out
}

/// `x_{i_1..i_q} ⋯ x_{i_{(s-1)q+1}..i_{sq}} - x_{i_σ(1)..i_σ(q)} ⋯`.
///
/// `sigma` is a 1-based image array over the `s·q` index slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeStarBinomial {
    pub blocks: Vec<IndexTuple>,
    pub sigma: Vec<usize>,
}

impl TypeStarBinomial {
    pub fn s(&self) -> usize {
        self.blocks.len()
    }

    fn slots(&self) -> Vec<u16> {
        self.blocks
            .iter()
            .flat_map(|b| b.0.iter().copied())
            .collect()
    }

    pub fn validate(&self, v: &Veronese) -> Result<(), ToricError> {
        let q = v.q() as usize;
        if self.blocks.is_empty() {
            return Err(ToricError::InvalidSpec("no blocks".into()));
        }
        for b in &self.blocks {
            if v.index_of(b).is_none() {
                return Err(VeroneseError::MalformedTuple(b.0.clone()).into());
            }
        }
        let len = self.s() * q;
        if self.sigma.len() != len {
            return Err(ToricError::InvalidSpec(format!(
                "sigma has {} entries, expected {len}",
                self.sigma.len()
            )));
        }
        let mut seen = vec![false; len];
        for &x in &self.sigma {
            if x == 0 || x > len || seen[x - 1] {
                return Err(ToricError::InvalidSpec("sigma is not a permutation".into()));
            }
            seen[x - 1] = true;
        }
        Ok(())
    }

    /// Right-hand blocks, each re-sorted to weakly increasing form.
    pub fn right_blocks(&self, q: usize) -> Vec<Vec<u16>> {
        let slots = self.slots();
        self.sigma
            .chunks(q)
            .map(|chunk| {
                let mut b: Vec<u16> = chunk.iter().map(|&k| slots[k - 1]).collect();
                b.sort_unstable();
                b
            })
            .collect()
    }

    pub fn left_monomial(&self, v: &Veronese) -> Result<Monomial, ToricError> {
        let blocks: Vec<Vec<u16>> = self.blocks.iter().map(|b| b.0.clone()).collect();
        Ok(v.monomial_of_blocks(&blocks)?)
    }

    pub fn right_monomial(&self, v: &Veronese) -> Result<Monomial, ToricError> {
        Ok(v.monomial_of_blocks(&self.right_blocks(v.q() as usize))?)
    }

    /// The binomial `left - right` over Z.
    pub fn to_int_poly(&self, v: &Veronese) -> Result<IntPoly, ToricError> {
        Ok(IntPoly::binomial(
            self.left_monomial(v)?,
            self.right_monomial(v)?,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub quadratic: Binomial,
    pub cofactor: Monomial,
    pub sign: i8,
}

/// Steps whose signed sum `Σ sign·cofactor·quadratic` equals the target.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RewriteCertificate {
    pub steps: Vec<RewriteStep>,
}

impl RewriteCertificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Exact integer expansion of the certificate.
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::zero();
        for s in &self.steps {
            let term = s
                .quadratic
                .to_int_poly()
                .mul_monomial(&s.cofactor)
                .scale(&BigInt::from(s.sign));
            acc = acc.add(&term);
        }
        acc
    }

    pub fn verifies(&self, target: &IntPoly) -> bool {
        self.expand() == *target
    }

    pub fn to_json(&self, names: &[String]) -> Vec<RewriteStepJson> {
        let one = |m: &Monomial| IntPoly::monomial(m.clone()).format_with(names);
        self.steps
            .iter()
            .map(|s| RewriteStepJson {
                quadratic: s.quadratic.format(names),
                cofactor: one(&s.cofactor),
                sign: s.sign,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStepJson {
    pub quadratic: String,
    pub cofactor: String,
    pub sign: i8,
}

fn count(block: &[u16], i: u16) -> usize {
    block.iter().filter(|&&x| x == i).count()
}

/// Smallest element of multiset `a` not covered by multiset `b`.
fn first_excess(a: &[u16], b: &[u16]) -> Option<u16> {
    let mut seen: Vec<u16> = a.to_vec();
    seen.dedup();
    seen.into_iter().find(|&i| count(a, i) > count(b, i))
}

/// Expresses a type-(*) binomial through quadratic relations.
///
/// Variables common to both sides are set aside as spectators. The rest is
/// rearranged block by block: the first block differing from its target
/// receives the smallest index it lacks from a later block holding that index
/// in excess, in exchange for the smallest index it holds in excess. Every
/// exchange is one quadratic relation times the remaining variables, and
/// strictly decreases the total number of misplaced indices.
pub fn rewrite(v: &Veronese, f: &TypeStarBinomial) -> Result<RewriteCertificate, ToricError> {
    f.validate(v)?;
    let q = v.q() as usize;
    let mut left: Vec<Vec<u16>> = f.blocks.iter().map(|b| b.0.clone()).collect();
    let mut right = f.right_blocks(q);

    // set aside common variables
    let mut spectators: Vec<Vec<u16>> = Vec::new();
    let mut k = 0;
    while k < left.len() {
        if let Some(pos) = right.iter().position(|r| *r == left[k]) {
            spectators.push(left.remove(k));
            right.remove(pos);
        } else {
            k += 1;
        }
    }
    if left.is_empty() {
        return Err(ToricError::ZeroBinomial);
    }
    right.sort();

    let spectator = v.monomial_of_blocks(&spectators)?;
    let mut steps = Vec::new();
    while let Some(k) = (0..left.len()).find(|&k| left[k] != right[k]) {
        let need = first_excess(&right[k], &left[k]).expect("blocks differ but have equal size");
        let give = first_excess(&left[k], &right[k]).expect("blocks differ but have equal size");
        let l = (k + 1..left.len())
            .find(|&l| count(&left[l], need) > count(&right[l], need))
            .expect("contents agree, so a later block holds the needed index");

        let before = [left[k].clone(), left[l].clone()];
        let take = left[l].iter().position(|&x| x == need).unwrap();
        left[l].remove(take);
        left[l].push(give);
        left[l].sort_unstable();
        let drop = left[k].iter().position(|&x| x == give).unwrap();
        left[k].remove(drop);
        left[k].push(need);
        left[k].sort_unstable();

        let m_before = v.monomial_of_blocks(&before)?;
        let m_after = v.monomial_of_blocks(&[left[k].clone(), left[l].clone()])?;
        if m_before == m_after {
            continue;
        }
        let others: Vec<Vec<u16>> = left
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k && j != l)
            .map(|(_, b)| b.clone())
            .collect();
        let cofactor = v.monomial_of_blocks(&others)?.mul(&spectator);
        let (quadratic, sign) = Binomial::oriented(m_before, m_after);
        steps.push(RewriteStep {
            quadratic,
            cofactor,
            sign,
        });
    }
    Ok(RewriteCertificate { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{buchberger, PrimeField};
    use crate::veronese::VeroneseParams;

    fn ver(n: usize, p: u64, h: u32) -> Veronese {
        Veronese::new(VeroneseParams::new(n, p, h).unwrap())
    }

    fn tup(v: &[u16]) -> IndexTuple {
        IndexTuple(v.to_vec())
    }

    fn mono(v: &Veronese, ts: &[&[u16]]) -> Monomial {
        let blocks: Vec<Vec<u16>> = ts.iter().map(|t| t.to_vec()).collect();
        v.monomial_of_blocks(&blocks).unwrap()
    }

    fn texts(v: &Veronese, bs: &[Binomial]) -> Vec<String> {
        let names = v.variable_names();
        let mut t: Vec<String> = bs.iter().map(|b| b.format(&names)).collect();
        t.sort();
        t
    }

    #[test]
    fn membership_examples() {
        let v = ver(3, 2, 1);
        let yes =
            |a: &[&[u16]], b: &[&[u16]]| binomial_in_ideal(&v, &mono(&v, a), &mono(&v, b)).unwrap();
        assert!(yes(&[&[1, 2], &[1, 2]], &[&[1, 1], &[2, 2]]));
        assert!(yes(&[&[1, 2], &[3, 3]], &[&[1, 3], &[2, 3]]));
        assert!(!yes(&[&[1, 1]], &[&[2, 2]]));
    }

    #[test]
    fn example_six_generators() {
        let v = ver(3, 2, 1);
        let expect = [
            "x11*x22 - x12^2",
            "x11*x33 - x13^2",
            "x22*x33 - x23^2",
            "x12*x33 - x13*x23",
            "x12*x23 - x13*x22",
            "x11*x23 - x12*x13",
        ];
        let mut expect: Vec<String> = expect.iter().map(|s| s.to_string()).collect();
        expect.sort();
        assert_eq!(
            texts(&v, &quadratic_generators(&v, GeneratorStyle::Star)),
            expect
        );
        assert_eq!(
            texts(&v, &quadratic_generators(&v, GeneratorStyle::Full)),
            expect
        );
    }

    #[test]
    fn one_parameter_has_no_generators() {
        for h in 1..=3 {
            assert!(quadratic_generators(&ver(1, 2, h), GeneratorStyle::Full).is_empty());
        }
    }

    #[test]
    fn two_parameters_quadrics_brute_force() {
        let v = ver(2, 2, 1);
        // oracle: all pairs of degree-2 monomials with equal content
        let mut monos = Vec::new();
        for i in 0..v.len() {
            for j in i..v.len() {
                let mut e = vec![0u32; v.len()];
                e[i] += 1;
                e[j] += 1;
                monos.push(Monomial::from_exponents(e));
            }
        }
        let mut oracle = Vec::new();
        for a in 0..monos.len() {
            for b in a + 1..monos.len() {
                if v.content_of(&monos[a]).unwrap() == v.content_of(&monos[b]).unwrap() {
                    oracle.push(Binomial::oriented(monos[a].clone(), monos[b].clone()).0);
                }
            }
        }
        assert_eq!(oracle.len(), 1);
        assert_eq!(quadratic_generators(&v, GeneratorStyle::Star), oracle);
        assert_eq!(texts(&v, &oracle), ["x11*x22 - x12^2"]);
    }

    #[test]
    fn generators_lie_in_ideal() {
        for (n, p, h) in [(3, 2, 1), (4, 3, 1), (3, 2, 2)] {
            let v = ver(n, p, h);
            for b in quadratic_generators(&v, GeneratorStyle::Full) {
                assert!(binomial_in_ideal(&v, &b.plus, &b.minus).unwrap());
                assert!(!b.is_zero());
            }
        }
    }

    #[test]
    fn single_transposition_is_one_step() {
        let v = ver(3, 2, 1);
        let f = TypeStarBinomial {
            blocks: vec![tup(&[1, 2]), tup(&[1, 3])],
            sigma: vec![1, 3, 2, 4],
        };
        let cert = rewrite(&v, &f).unwrap();
        assert_eq!(cert.len(), 1);
        assert!(cert.verifies(&f.to_int_poly(&v).unwrap()));
    }

    #[test]
    fn identity_sigma_is_zero() {
        let v = ver(3, 2, 1);
        let f = TypeStarBinomial {
            blocks: vec![tup(&[1, 2]), tup(&[1, 3])],
            sigma: vec![1, 2, 3, 4],
        };
        assert_eq!(rewrite(&v, &f), Err(ToricError::ZeroBinomial));
    }

    #[test]
    fn blockwise_fixed_sigma_is_zero() {
        let v = ver(3, 2, 1);
        let f = TypeStarBinomial {
            blocks: vec![tup(&[1, 2]), tup(&[1, 3])],
            sigma: vec![2, 1, 4, 3],
        };
        assert_eq!(rewrite(&v, &f), Err(ToricError::ZeroBinomial));
    }

    #[test]
    fn spectator_example() {
        // x12*x13*x23 - x11*x23^2
        let v = ver(3, 2, 1);
        let f = TypeStarBinomial {
            blocks: vec![tup(&[1, 2]), tup(&[1, 3]), tup(&[2, 3])],
            sigma: vec![1, 3, 2, 4, 5, 6],
        };
        let cert = rewrite(&v, &f).unwrap();
        let names = v.variable_names();
        assert_eq!(
            cert.to_json(&names),
            vec![RewriteStepJson {
                quadratic: "x11*x23 - x12*x13".into(),
                cofactor: "x23".into(),
                sign: -1,
            }]
        );
        assert!(cert.verifies(&f.to_int_poly(&v).unwrap()));
    }

    #[test]
    fn invalid_specs() {
        let v = ver(3, 2, 1);
        let bad_sigma = TypeStarBinomial {
            blocks: vec![tup(&[1, 2]), tup(&[1, 3])],
            sigma: vec![1, 1, 2, 3],
        };
        assert!(matches!(
            rewrite(&v, &bad_sigma),
            Err(ToricError::InvalidSpec(_))
        ));
        let bad_block = TypeStarBinomial {
            blocks: vec![tup(&[2, 1])],
            sigma: vec![1, 2],
        };
        assert!(matches!(
            rewrite(&v, &bad_block),
            Err(ToricError::Veronese(_))
        ));
    }

    #[test]
    fn rewritten_binomial_reduces_over_f5() {
        let v = ver(3, 3, 1);
        let ring = v.ring(PrimeField::new(5).unwrap());
        let gens: Vec<Poly> = quadratic_generators(&v, GeneratorStyle::Star)
            .iter()
            .map(|b| b.to_poly(&ring))
            .collect();
        let gb = buchberger(&gens, MonomialOrder::DegRevLex).unwrap();
        let f = TypeStarBinomial {
            blocks: vec![tup(&[1, 1, 2]), tup(&[2, 3, 3]), tup(&[1, 2, 3])],
            sigma: vec![1, 5, 7, 2, 3, 4, 6, 8, 9],
        };
        let int = f.to_int_poly(&v).unwrap();
        let cert = rewrite(&v, &f).unwrap();
        assert!(cert.verifies(&int));
        assert!(gb.reduce(&int.to_poly(&ring)).unwrap().is_zero());
    }
}
