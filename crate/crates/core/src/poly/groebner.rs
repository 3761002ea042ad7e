use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use super::{merge_scaled, same_ring, Monomial, MonomialOrder, Poly, PolyError, Ring};

/// Default cap on processed S-pairs.
pub const DEFAULT_PAIR_LIMIT: usize = 2_000_000;

/// A reduced (monic, tail-reduced) Gröbner basis.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    generators: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Normal form of `f`; zero exactly when `f` lies in the ideal.
    pub fn reduce(&self, f: &Poly) -> Result<Poly, PolyError> {
        if !same_ring(&self.ring, f.ring()) {
            return Err(PolyError::RingMismatch);
        }
        Ok(normal_form(f, &self.generators))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool, PolyError> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .filter_map(|g| g.leading_monomial().cloned())
            .collect()
    }
}

/// Full multivariate division remainder of `f` by `basis`.
pub(crate) fn normal_form(f: &Poly, basis: &[Poly]) -> Poly {
    let ring = f.ring().clone();
    let field = ring.field();
    let mut work = f.terms.clone();
    let mut rem: Vec<(Monomial, u64)> = Vec::new();
    while let Some((lm, lc)) = work.last().cloned() {
        let divisor = basis
            .iter()
            .filter_map(|g| g.leading_term().map(|t| (g, t)))
            .find(|(_, (glm, _))| glm.divides(&lm));
        match divisor {
            Some((g, (glm, glc))) => {
                let q = glm.quotient_of(&lm);
                let c = field.mul(lc, field.inv(glc).expect("nonzero leading coefficient"));
                work = merge_scaled(&ring, &work, &g.terms, field.neg(c), Some(&q));
            }
            None => rem.push(work.pop().unwrap()),
        }
    }
    rem.reverse();
    Poly { ring, terms: rem }
}

fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (fm, fc) = f.leading_term().unwrap();
    let (gm, gc) = g.leading_term().unwrap();
    let field = f.ring().field();
    let l = fm.lcm(gm);
    let a = fm.quotient_of(&l);
    let b = gm.quotient_of(&l);
    let fa = f.mul_monomial(&a).scalar_mul(field.inv(fc).unwrap());
    fa.add_scaled(g, field.neg(field.inv(gc).unwrap()), Some(&b))
}

/// Buchberger completion in the given term order with the default pair cap.
pub fn buchberger(gens: &[Poly], order: MonomialOrder) -> Result<GroebnerBasis, PolyError> {
    buchberger_with_limit(gens, order, DEFAULT_PAIR_LIMIT)
}

/// Buchberger completion (coprime-leading-term criterion only), followed by
/// interreduction to the reduced basis. Fails once more than `pair_limit`
/// S-pairs have been processed.
pub fn buchberger_with_limit(
    gens: &[Poly],
    order: MonomialOrder,
    pair_limit: usize,
) -> Result<GroebnerBasis, PolyError> {
    let first = gens.first().ok_or(PolyError::EmptyGenerators)?;
    let base = first.ring().clone();
    if gens.iter().any(|g| !same_ring(&base, g.ring())) {
        return Err(PolyError::RingMismatch);
    }
    let ring = if base.order() == order {
        base
    } else {
        base.with_order(order)
    };

    let mut basis: Vec<Poly> = gens
        .iter()
        .map(|g| Poly::from_terms(&ring, g.terms.clone()))
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    if basis.is_empty() {
        return Ok(GroebnerBasis {
            ring,
            generators: Vec::new(),
        });
    }

    let mut pairs: BinaryHeap<Reverse<(u32, usize, usize)>> = BinaryHeap::new();
    let push_pairs = |pairs: &mut BinaryHeap<_>, basis: &[Poly], j: usize| {
        let lj = basis[j].leading_monomial().unwrap();
        for (i, bi) in basis.iter().enumerate().take(j) {
            let li = bi.leading_monomial().unwrap();
            pairs.push(Reverse((li.lcm(lj).degree(), i, j)));
        }
    };
    for j in 1..basis.len() {
        push_pairs(&mut pairs, &basis, j);
    }

    let mut processed = 0usize;
    while let Some(Reverse((_, i, j))) = pairs.pop() {
        processed += 1;
        if processed > pair_limit {
            return Err(PolyError::PairLimitExceeded { limit: pair_limit });
        }
        let li = basis[i].leading_monomial().unwrap();
        let lj = basis[j].leading_monomial().unwrap();
        if li.coprime(lj) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
            push_pairs(&mut pairs, &basis, basis.len() - 1);
        }
    }

    Ok(GroebnerBasis {
        generators: interreduce(basis),
        ring,
    })
}

fn interreduce(mut basis: Vec<Poly>) -> Vec<Poly> {
    let order = basis[0].ring().order();
    basis.sort_by(|a, b| {
        a.leading_monomial()
            .unwrap()
            .cmp_by(b.leading_monomial().unwrap(), order)
    });
    let mut minimal: Vec<Poly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let hl = h.leading_monomial().unwrap();
            l != k && hl.divides(lm) && (hl != lm || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let reduced: Vec<Poly> = (0..minimal.len())
        .map(|k| {
            let others: Vec<Poly> = minimal
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, h)| h.clone())
                .collect();
            normal_form(&minimal[k], &others).monic()
        })
        .collect();
    reduced
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PrimeField;

    fn ring(names: &[&str], r: u64) -> Arc<Ring> {
        Ring::new(
            names.iter().map(|s| s.to_string()).collect(),
            PrimeField::new(r).unwrap(),
            MonomialOrder::DegRevLex,
        )
    }

    #[test]
    fn single_monomial() {
        let r = ring(&["x", "y"], 5);
        let g = Poly::parse(&r, "x^2*y").unwrap();
        let gb = buchberger(std::slice::from_ref(&g), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(gb.generators(), &[g]);
    }

    #[test]
    fn principal_binomial() {
        let r = ring(&["x", "y"], 5);
        let g = Poly::parse(&r, "x - y").unwrap();
        let gb = buchberger(std::slice::from_ref(&g), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(gb.generators(), &[g]);
    }

    #[test]
    fn reduce_members_and_one() {
        let r = ring(&["x", "y"], 5);
        let g = Poly::parse(&r, "x^2 - y").unwrap();
        let gb = buchberger(std::slice::from_ref(&g), MonomialOrder::DegRevLex).unwrap();
        assert!(gb.reduce(&g).unwrap().is_zero());
        let one = Poly::constant(&r, 1);
        assert_eq!(gb.reduce(&one).unwrap(), one);
    }

    #[test]
    fn twisted_cubic_lex() {
        // (y - x^2, z - x^3) has lex basis containing y^3 - z^2 type elements
        let r = ring(&["z", "y", "x"], 7);
        let gens = vec![
            Poly::parse(&r, "y - x^2").unwrap(),
            Poly::parse(&r, "z - x^3").unwrap(),
        ];
        let gb = buchberger(&gens, MonomialOrder::Lex).unwrap();
        let lr = gb.ring().clone();
        for g in &gens {
            let g = Poly::from_terms(&lr, g.terms.clone());
            assert!(gb.contains(&g).unwrap());
        }
        let yz = Poly::parse(&lr, "z - x*y").unwrap();
        assert!(gb.contains(&yz).unwrap());
        assert!(!gb.contains(&Poly::parse(&lr, "z - y").unwrap()).unwrap());
    }

    #[test]
    fn pair_limit_is_reported() {
        let r = ring(&["x", "y", "z"], 7);
        let gens = vec![
            Poly::parse(&r, "x^2 - y*z").unwrap(),
            Poly::parse(&r, "y^2 - x*z").unwrap(),
            Poly::parse(&r, "z^2 - x*y").unwrap(),
        ];
        assert_eq!(
            buchberger_with_limit(&gens, MonomialOrder::DegRevLex, 1).unwrap_err(),
            PolyError::PairLimitExceeded { limit: 1 }
        );
    }

    #[test]
    fn empty_generator_list() {
        assert_eq!(
            buchberger(&[], MonomialOrder::Lex).unwrap_err(),
            PolyError::EmptyGenerators
        );
    }

    #[test]
    fn every_s_pair_reduces_to_zero() {
        let r = ring(&["x", "y", "z"], 5);
        let gens = vec![
            Poly::parse(&r, "x^2 - y*z").unwrap(),
            Poly::parse(&r, "x*y - z^2").unwrap(),
            Poly::parse(&r, "y^3 - x").unwrap(),
        ];
        let gb = buchberger(&gens, MonomialOrder::DegRevLex).unwrap();
        let g = gb.generators();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                assert!(gb.reduce(&s_polynomial(&g[i], &g[j])).unwrap().is_zero());
            }
        }
        for f in &gens {
            assert!(gb.contains(f).unwrap());
        }
    }
}
