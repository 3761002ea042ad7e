//! p-gluing of affine semigroups generated by finite subsets of N^n, and
//! witness trees showing a semigroup is completely p-glued.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{lattice_intersection, minimal_multiplier, minimal_multiplier_big, IntMatrix};
use crate::veronese::Veronese;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GluingError {
    #[error("invalid generators: {0}")]
    InvalidGenerators(String),
    #[error("no completely p-glued peeling found")]
    NotFound,
    #[error("peeling {element:?}: minimal multiplier {multiplier} is not a power of {p}")]
    StepFalsified {
        element: Vec<u64>,
        multiplier: String,
        p: u64,
    },
    #[error("peeling {element:?}: no s <= {cap} with p^s*alpha in the remaining semigroup")]
    ExponentCap { element: Vec<u64>, cap: u32 },
}

/// Nonzero, pairwise distinct generators of a subsemigroup of N^n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupGens {
    dim: usize,
    generators: Vec<Vec<u64>>,
}

impl SemigroupGens {
    pub fn new(dim: usize, generators: Vec<Vec<u64>>) -> Result<Self, GluingError> {
        let mut seen = HashSet::new();
        for g in &generators {
            if g.len() != dim {
                return Err(GluingError::InvalidGenerators(format!(
                    "{g:?} does not have length {dim}"
                )));
            }
            if g.iter().all(|&x| x == 0) {
                return Err(GluingError::InvalidGenerators("zero generator".into()));
            }
            if !seen.insert(g.clone()) {
                return Err(GluingError::InvalidGenerators(format!(
                    "duplicate generator {g:?}"
                )));
            }
        }
        Ok(SemigroupGens { dim, generators })
    }

    /// The exponent set T of a Veronese system, in variable order.
    pub fn of_veronese(v: &Veronese) -> Self {
        let gens = v
            .exponents()
            .iter()
            .map(|a| a.0.iter().map(|&x| x as u64).collect())
            .collect();
        SemigroupGens::new(v.n(), gens).expect("Veronese exponents are distinct and nonzero")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.generators)
    }

    pub fn rank(&self) -> usize {
        if self.generators.is_empty() {
            0
        } else {
            self.matrix().rank()
        }
    }

    /// Linearly independent generators span a free abelian semigroup.
    pub fn is_free(&self) -> bool {
        self.rank() == self.len()
    }

    /// Common coordinate sum of all generators, if there is one.
    pub fn grading(&self) -> Option<u64> {
        let mut sums = self.generators.iter().map(|g| g.iter().sum::<u64>());
        let first = sums.next()?;
        sums.all(|s| s == first).then_some(first)
    }

    fn without(&self, k: usize) -> SemigroupGens {
        let mut g = self.generators.clone();
        g.remove(k);
        SemigroupGens {
            dim: self.dim,
            generators: g,
        }
    }

    fn same_set(&self, other: &[Vec<u64>]) -> bool {
        let a: HashSet<&Vec<u64>> = self.generators.iter().collect();
        let b: HashSet<&Vec<u64>> = other.iter().collect();
        a == b && self.generators.len() == other.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Membership {
    /// Multiplicity of each generator.
    Member {
        coefficients: Vec<u64>,
    },
    NotMember,
    Undecided {
        bound: u64,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Depth-first search for a nonnegative combination of generators equal to `b`.
///
/// Generators are nonzero and nonnegative, so every step lowers the
/// coordinate sum and the search always terminates. In the graded case the
/// depth is exactly `Σb / grade`. A `bound` caps the multiplicity sum; a
/// search cut off by it reports `Undecided`.
pub fn semigroup_member(gens: &SemigroupGens, b: &[u64], bound: Option<u64>) -> Membership {
    assert_eq!(b.len(), gens.dim(), "target has wrong dimension");
    let total: u64 = b.iter().sum();
    if total == 0 {
        return Membership::Member {
            coefficients: vec![0; gens.len()],
        };
    }
    let mut depth_limit = match gens.grading() {
        Some(grade) => {
            if !total.is_multiple_of(grade) {
                return Membership::NotMember;
            }
            Some(total / grade)
        }
        None => None,
    };
    let mut bounded = false;
    if let Some(user) = bound {
        if depth_limit.is_none_or(|d| user < d) {
            if depth_limit.is_some() {
                // graded and the bound is below the exact depth
                return Membership::Undecided { bound: user };
            }
            depth_limit = Some(user);
            bounded = true;
        }
    }

    struct Search<'a> {
        gens: &'a [Vec<u64>],
        exact_depth: bool,
        limit: Option<u64>,
        coeffs: Vec<u64>,
        failed: HashSet<(usize, Vec<u64>)>,
        cut: bool,
    }

    impl Search<'_> {
        fn go(&mut self, start: usize, rest: &mut Vec<u64>, used: u64) -> bool {
            if rest.iter().all(|&x| x == 0) {
                return !self.exact_depth || Some(used) == self.limit;
            }
            if let Some(l) = self.limit {
                if used >= l {
                    if !self.exact_depth {
                        self.cut = true;
                    }
                    return false;
                }
            }
            let key = (start, rest.clone());
            if self.failed.contains(&key) {
                return false;
            }
            for k in start..self.gens.len() {
                let g = &self.gens[k];
                if g.iter().zip(rest.iter()).all(|(a, b)| a <= b) {
                    for (r, a) in rest.iter_mut().zip(g) {
                        *r -= a;
                    }
                    self.coeffs[k] += 1;
                    if self.go(k, rest, used + 1) {
                        return true;
                    }
                    self.coeffs[k] -= 1;
                    for (r, a) in rest.iter_mut().zip(g) {
                        *r += a;
                    }
                }
            }
            if !self.cut {
                self.failed.insert(key);
            }
            false
        }
    }

    let mut search = Search {
        gens: gens.generators(),
        exact_depth: gens.grading().is_some(),
        limit: depth_limit,
        coeffs: vec![0; gens.len()],
        failed: HashSet::new(),
        cut: false,
    };
    let mut rest = b.to_vec();
    if search.go(0, &mut rest, 0) {
        Membership::Member {
            coefficients: search.coeffs,
        }
    } else if bounded && search.cut {
        Membership::Undecided {
            bound: depth_limit.unwrap(),
        }
    } else {
        Membership::NotMember
    }
}

fn combine(gens: &[Vec<u64>], coeffs: &[u64], dim: usize) -> Vec<u64> {
    let mut out = vec![0u64; dim];
    for (g, &c) in gens.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(g) {
            *o += c * x;
        }
    }
    out
}

/// Data showing `T = T1 ⊔ T2` is a p-gluing: `Z T1 ∩ Z T2 = Z α` and
/// `p^s α` lies in both `N T1` and `N T2` (via `rep1`, `rep2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingWitness {
    pub t1: Vec<Vec<u64>>,
    pub t2: Vec<Vec<u64>>,
    pub alpha: Vec<u64>,
    pub s: u32,
    pub rep1: Vec<u64>,
    pub rep2: Vec<u64>,
}

impl GluingWitness {
    /// Rechecks the witness without reusing the kernel computation of
    /// [`check_p_gluing`]: the intersection rank comes from the rank
    /// formula, its generator from minimal multipliers of the primitive
    /// direction of α.
    pub fn validate(&self, p: u64) -> Result<(), String> {
        let dim = self.alpha.len();
        if self.t1.is_empty() || self.t2.is_empty() {
            return Err("empty side".into());
        }
        let s1: HashSet<&Vec<u64>> = self.t1.iter().collect();
        if self.t2.iter().any(|g| s1.contains(g)) {
            return Err("sides are not disjoint".into());
        }
        if self.alpha.iter().all(|&x| x == 0) {
            return Err("alpha is zero".into());
        }
        let m1 = IntMatrix::from_columns(dim, &self.t1);
        let m2 = IntMatrix::from_columns(dim, &self.t2);
        let both: Vec<Vec<u64>> = self.t1.iter().chain(&self.t2).cloned().collect();
        let rank_int = m1.rank() + m2.rank() - IntMatrix::from_columns(dim, &both).rank();
        if rank_int != 1 {
            return Err(format!("intersection has rank {rank_int}"));
        }
        let g = self.alpha.iter().fold(0u64, |g, &x| g.gcd(&x));
        let w: Vec<BigInt> = self.alpha.iter().map(|&x| BigInt::from(x / g)).collect();
        let d1 = minimal_multiplier_big(&m1, &w).ok_or("alpha outside span of T1")?;
        let d2 = minimal_multiplier_big(&m2, &w).ok_or("alpha outside span of T2")?;
        if d1.lcm(&d2) != BigInt::from(g) {
            return Err(format!(
                "intersection generator is {}·w, alpha is {}·w",
                d1.lcm(&d2),
                g
            ));
        }
        let ps = p.checked_pow(self.s).ok_or("p^s overflows")?;
        let target: Vec<u64> = self.alpha.iter().map(|&x| x * ps).collect();
        if self.rep1.len() != self.t1.len() || combine(&self.t1, &self.rep1, dim) != target {
            return Err("rep1 does not evaluate to p^s·alpha".into());
        }
        if self.rep2.len() != self.t2.len() || combine(&self.t2, &self.rep2, dim) != target {
            return Err("rep2 does not evaluate to p^s·alpha".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotGlued {
    IntersectionRank { rank: usize },
    NotSignDefinite { generator: Vec<String> },
    NoExponent { cap: u32 },
}

/// Decides whether `t1 ⊔ t2` is a p-gluing, searching `s = 0..=s_cap`.
pub fn check_p_gluing(
    t1: &SemigroupGens,
    t2: &SemigroupGens,
    p: u64,
    s_cap: u32,
) -> Result<GluingWitness, NotGlued> {
    assert_eq!(
        t1.dim(),
        t2.dim(),
        "semigroups live in different dimensions"
    );
    let dim = t1.dim();
    let inter = lattice_intersection(&t1.matrix(), &t2.matrix());
    if inter.cols() != 1 {
        return Err(NotGlued::IntersectionRank { rank: inter.cols() });
    }
    let col = inter.column(0);
    let sign = if col.iter().all(|x| *x >= BigInt::zero()) {
        BigInt::one()
    } else if col.iter().all(|x| *x <= BigInt::zero()) {
        -BigInt::one()
    } else {
        return Err(NotGlued::NotSignDefinite {
            generator: col.iter().map(|x| x.to_string()).collect(),
        });
    };
    let alpha: Vec<u64> = col
        .iter()
        .map(|x| (x * &sign).to_u64().expect("coordinate fits in u64"))
        .collect();
    search_exponent(t1, t2, &alpha, p, s_cap)
        .ok_or(NotGlued::NoExponent { cap: s_cap })
        .map(|(s, rep1, rep2)| GluingWitness {
            t1: t1.generators().to_vec(),
            t2: t2.generators().to_vec(),
            alpha: alpha.clone(),
            s,
            rep1,
            rep2,
        })
        .inspect(|w| debug_assert_eq!(w.alpha.len(), dim))
}

fn search_exponent(
    t1: &SemigroupGens,
    t2: &SemigroupGens,
    alpha: &[u64],
    p: u64,
    s_cap: u32,
) -> Option<(u32, Vec<u64>, Vec<u64>)> {
    for s in 0..=s_cap {
        let ps = p.checked_pow(s)?;
        let b: Vec<u64> = alpha
            .iter()
            .map(|&x| x.checked_mul(ps))
            .collect::<Option<_>>()?;
        let (Membership::Member { coefficients: r1 }, Membership::Member { coefficients: r2 }) = (
            semigroup_member(t1, &b, None),
            semigroup_member(t2, &b, None),
        ) else {
            continue;
        };
        return Some((s, r1, r2));
    }
    None
}

/// Either a free leaf or a p-gluing node with its two sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GluingTree {
    Free {
        generators: Vec<Vec<u64>>,
    },
    Node {
        witness: GluingWitness,
        left: Box<GluingTree>,
        right: Box<GluingTree>,
    },
}

impl GluingTree {
    pub fn depth(&self) -> usize {
        match self {
            GluingTree::Free { .. } => 0,
            GluingTree::Node { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// All generators under this subtree.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        match self {
            GluingTree::Free { generators } => generators.clone(),
            GluingTree::Node { left, right, .. } => {
                let mut g = left.generators();
                g.extend(right.generators());
                g
            }
        }
    }

    /// Number of gluing nodes.
    pub fn node_count(&self) -> usize {
        match self {
            GluingTree::Free { .. } => 0,
            GluingTree::Node { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }

    /// Elements split off along the left spine, root first.
    pub fn peel_sequence(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut cur = self;
        while let GluingTree::Node { witness, left, .. } = cur {
            out.extend(witness.t2.iter().cloned());
            cur = left;
        }
        out
    }

    /// Full recursive check: leaves are free, every node's witness revalidates
    /// and matches the generator sets of its subtrees.
    pub fn validate(&self, p: u64) -> Result<(), String> {
        match self {
            GluingTree::Free { generators } => {
                let dim = generators.first().map_or(0, Vec::len);
                let g = SemigroupGens::new(dim, generators.clone()).map_err(|e| e.to_string())?;
                if g.is_free() {
                    Ok(())
                } else {
                    Err(format!("leaf {generators:?} is not free"))
                }
            }
            GluingTree::Node {
                witness,
                left,
                right,
            } => {
                witness.validate(p)?;
                let dim = witness.alpha.len();
                let l = SemigroupGens::new(dim, left.generators()).map_err(|e| e.to_string())?;
                let r = SemigroupGens::new(dim, right.generators()).map_err(|e| e.to_string())?;
                if !l.same_set(&witness.t1) || !r.same_set(&witness.t2) {
                    return Err("subtree generators differ from the witness split".into());
                }
                left.validate(p)?;
                right.validate(p)
            }
        }
    }
}

pub fn default_s_cap(h: u32) -> u32 {
    h + 8
}

/// Finds a completely p-glued witness tree for `N gens`.
///
/// When `gens` contains `q·e_1, …, q·e_n` (q = p^h), non-axis elements are
/// peeled one at a time, last first, down to the free axis leaf. Otherwise a
/// backtracking search over single-element peels is used.
pub fn completely_p_glued(
    gens: &SemigroupGens,
    p: u64,
    h: u32,
    s_cap: u32,
) -> Result<GluingTree, GluingError> {
    let q = p.pow(h);
    match axis_positions(gens, q) {
        Some(axes) => {
            let order: Vec<usize> = (0..gens.len())
                .rev()
                .filter(|k| !axes.contains(k))
                .collect();
            peel_in_order(gens, &order, p, s_cap)
        }
        None => {
            let mut failed = HashSet::new();
            search_peels(gens, p, s_cap, &mut failed).ok_or(GluingError::NotFound)
        }
    }
}

/// Positions of `q·e_i` for every axis `i`, if all are present.
fn axis_positions(gens: &SemigroupGens, q: u64) -> Option<Vec<usize>> {
    (0..gens.dim())
        .map(|i| {
            gens.generators().iter().position(|g| {
                g.iter()
                    .enumerate()
                    .all(|(j, &x)| if j == i { x == q } else { x == 0 })
            })
        })
        .collect()
}

/// Axis-peeling with a caller-chosen order (indices into `gens`, none of
/// them an axis element `q·e_i`).
pub fn peel_in_order(
    gens: &SemigroupGens,
    order: &[usize],
    p: u64,
    s_cap: u32,
) -> Result<GluingTree, GluingError> {
    let dim = gens.dim();
    let mut remaining: Vec<Vec<u64>> = gens.generators().to_vec();
    let mut witnesses = Vec::with_capacity(order.len());
    for &k in order {
        let beta = gens.generators()[k].clone();
        let pos = remaining
            .iter()
            .position(|g| *g == beta)
            .expect("peeled once");
        remaining.remove(pos);
        let t1 = SemigroupGens::new(dim, remaining.clone())?;
        let d = minimal_multiplier(&t1.matrix(), &to_i64(&beta)).ok_or_else(|| {
            GluingError::StepFalsified {
                element: beta.clone(),
                multiplier: "none".into(),
                p,
            }
        })?;
        if power_of(&d, p).is_none() {
            return Err(GluingError::StepFalsified {
                element: beta.clone(),
                multiplier: d.to_string(),
                p,
            });
        }
        let d = d.to_u64().expect("multiplier fits in u64");
        let alpha: Vec<u64> = beta.iter().map(|&x| x * d).collect();
        let t2 = SemigroupGens::new(dim, vec![beta.clone()])?;
        let (s, rep1, rep2) =
            search_exponent(&t1, &t2, &alpha, p, s_cap).ok_or(GluingError::ExponentCap {
                element: beta.clone(),
                cap: s_cap,
            })?;
        witnesses.push(GluingWitness {
            t1: t1.generators().to_vec(),
            t2: vec![beta],
            alpha,
            s,
            rep1,
            rep2,
        });
    }
    let mut tree = GluingTree::Free {
        generators: remaining,
    };
    for w in witnesses.into_iter().rev() {
        let right = GluingTree::Free {
            generators: w.t2.clone(),
        };
        tree = GluingTree::Node {
            witness: w,
            left: Box::new(tree),
            right: Box::new(right),
        };
    }
    Ok(tree)
}

fn to_i64(v: &[u64]) -> Vec<i64> {
    v.iter().map(|&x| x as i64).collect()
}

/// `Some(e)` when `d = p^e`.
fn power_of(d: &BigInt, p: u64) -> Option<u32> {
    let p = BigInt::from(p);
    let mut x = d.clone();
    let mut e = 0;
    while x > BigInt::one() {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return None;
        }
        x = q;
        e += 1;
    }
    (x == BigInt::one()).then_some(e)
}

fn search_peels(
    gens: &SemigroupGens,
    p: u64,
    s_cap: u32,
    failed: &mut HashSet<Vec<Vec<u64>>>,
) -> Option<GluingTree> {
    if gens.is_free() {
        return Some(GluingTree::Free {
            generators: gens.generators().to_vec(),
        });
    }
    let mut key = gens.generators().to_vec();
    key.sort();
    if failed.contains(&key) {
        return None;
    }
    for k in 0..gens.len() {
        let t1 = gens.without(k);
        let t2 = SemigroupGens::new(gens.dim(), vec![gens.generators()[k].clone()]).ok()?;
        let Ok(witness) = check_p_gluing(&t1, &t2, p, s_cap) else {
            continue;
        };
        if let Some(left) = search_peels(&t1, p, s_cap, failed) {
            return Some(GluingTree::Node {
                witness,
                left: Box::new(left),
                right: Box::new(GluingTree::Free {
                    generators: t2.generators().to_vec(),
                }),
            });
        }
    }
    failed.insert(key);
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::veronese::VeroneseParams;

    fn gens(dim: usize, g: &[&[u64]]) -> SemigroupGens {
        SemigroupGens::new(dim, g.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    fn veronese_t(n: usize, p: u64, h: u32) -> SemigroupGens {
        SemigroupGens::of_veronese(&Veronese::new(VeroneseParams::new(n, p, h).unwrap()))
    }

    /// Exhaustive oracle: all multisets of `depth` generators.
    fn brute_member(g: &[Vec<u64>], b: &[u64], depth: usize) -> bool {
        fn rec(g: &[Vec<u64>], start: usize, rest: Vec<i64>, depth: usize) -> bool {
            if depth == 0 {
                return rest.iter().all(|&x| x == 0);
            }
            (start..g.len()).any(|k| {
                let r: Vec<i64> = rest.iter().zip(&g[k]).map(|(a, b)| a - *b as i64).collect();
                rec(g, k, r, depth - 1)
            })
        }
        rec(g, 0, b.iter().map(|&x| x as i64).collect(), depth)
    }

    #[test]
    fn membership_examples() {
        let t = veronese_t(3, 2, 1);
        assert!(brute_member(t.generators(), &[2, 1, 1], 2));
        match semigroup_member(&t, &[2, 1, 1], None) {
            Membership::Member { coefficients } => {
                assert_eq!(combine(t.generators(), &coefficients, 3), vec![2, 1, 1]);
            }
            other => panic!("expected member, got {other:?}"),
        }
        assert_eq!(
            semigroup_member(&t, &[1, 0, 0], None),
            Membership::NotMember
        );
        assert_eq!(
            semigroup_member(&t, &[0, 0, 0], None),
            Membership::Member {
                coefficients: vec![0; 6]
            }
        );
    }

    #[test]
    fn membership_agrees_with_exhaustive_search() {
        let t = veronese_t(3, 3, 1);
        for b in [[3u64, 3, 0], [2, 2, 2], [4, 1, 1], [6, 0, 3], [1, 1, 1]] {
            let depth = (b.iter().sum::<u64>() / 3) as usize;
            assert_eq!(
                semigroup_member(&t, &b, None).is_member(),
                brute_member(t.generators(), &b, depth),
                "{b:?}"
            );
        }
    }

    #[test]
    fn ungraded_membership_and_bound() {
        let g = gens(2, &[&[1, 0], &[1, 2]]);
        assert!(semigroup_member(&g, &[3, 4], None).is_member());
        assert_eq!(semigroup_member(&g, &[0, 1], None), Membership::NotMember);
        assert_eq!(
            semigroup_member(&g, &[5, 0], Some(2)),
            Membership::Undecided { bound: 2 }
        );
        assert!(semigroup_member(&g, &[5, 0], Some(5)).is_member());
    }

    #[test]
    fn invalid_generators() {
        assert!(SemigroupGens::new(2, vec![vec![0, 0]]).is_err());
        assert!(SemigroupGens::new(2, vec![vec![1, 0], vec![1, 0]]).is_err());
        assert!(SemigroupGens::new(2, vec![vec![1, 0, 0]]).is_err());
    }

    #[test]
    fn plane_gluing() {
        let t1 = gens(2, &[&[2, 0], &[0, 2]]);
        let t2 = gens(2, &[&[1, 1]]);
        let w = check_p_gluing(&t1, &t2, 2, 4).unwrap();
        assert_eq!(w.alpha, vec![2, 2]);
        assert_eq!(w.s, 0);
        w.validate(2).unwrap();
    }

    #[test]
    fn veronese_single_peel() {
        let t = veronese_t(3, 2, 1);
        let beta = vec![0u64, 1, 1];
        let rest: Vec<Vec<u64>> = t
            .generators()
            .iter()
            .filter(|g| **g != beta)
            .cloned()
            .collect();
        let t1 = SemigroupGens::new(3, rest).unwrap();
        let t2 = SemigroupGens::new(3, vec![beta]).unwrap();
        let w = check_p_gluing(&t1, &t2, 2, 4).unwrap();
        assert_eq!(w.alpha, vec![0, 1, 1]);
        assert_eq!(w.s, 1);
        w.validate(2).unwrap();
    }

    #[test]
    fn axes_do_not_glue() {
        let t1 = gens(2, &[&[1, 0]]);
        let t2 = gens(2, &[&[0, 1]]);
        assert_eq!(
            check_p_gluing(&t1, &t2, 2, 4),
            Err(NotGlued::IntersectionRank { rank: 0 })
        );
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let t1 = gens(2, &[&[2, 0], &[0, 2]]);
        let t2 = gens(2, &[&[1, 1]]);
        let mut w = check_p_gluing(&t1, &t2, 2, 4).unwrap();
        w.alpha = vec![4, 4];
        w.rep1 = vec![2, 2];
        w.rep2 = vec![4];
        assert!(w.validate(2).is_err());
    }

    #[test]
    fn n3_q2_tree() {
        let t = veronese_t(3, 2, 1);
        let tree = completely_p_glued(&t, 2, 1, default_s_cap(1)).unwrap();
        assert_eq!(tree.depth(), 3);
        assert_eq!(
            tree.peel_sequence(),
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
        tree.validate(2).unwrap();
        let json = serde_json::to_string(&tree).unwrap();
        let back: GluingTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tree);
    }

    #[test]
    fn axis_set_alone_is_free() {
        let t0 = gens(3, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        let tree = completely_p_glued(&t0, 2, 1, 9).unwrap();
        assert_eq!(tree.depth(), 0);
        assert!(matches!(tree, GluingTree::Free { .. }));
    }

    #[test]
    fn n3_q3_tree_depth() {
        let t = veronese_t(3, 3, 1);
        let tree = completely_p_glued(&t, 3, 1, default_s_cap(1)).unwrap();
        assert_eq!(tree.depth(), 7);
        tree.validate(3).unwrap();
    }

    #[test]
    fn fallback_search_without_axes() {
        // numerical semigroup <2, 3>: 3·2 = 2·3, intersection 6Z
        let g = gens(1, &[&[2], &[3]]);
        let tree = completely_p_glued(&g, 2, 1, 8);
        // Z·2 ∩ Z·3 = 6Z and 6 lies in both N{2} and N{3}
        let tree = tree.unwrap();
        tree.validate(2).unwrap();
        assert_eq!(tree.depth(), 1);
    }

    #[test]
    fn power_detection() {
        assert_eq!(power_of(&BigInt::from(8), 2), Some(3));
        assert_eq!(power_of(&BigInt::from(1), 3), Some(0));
        assert_eq!(power_of(&BigInt::from(6), 2), None);
    }
}
