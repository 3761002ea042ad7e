//! Pointwise Jacobian rank of the quadratic generators, the triangular
//! submatrix J′ of the smoothness argument, and Galois fibers of the
//! parametrization over prime fields with enough roots of unity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{IntPoly, Monomial, PolyError, PrimeField};
use crate::toric::Binomial;
use crate::veronese::{IndexTuple, Veronese};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("root-of-unity deficiency: {r} is not 1 mod {q}, so F_{r} lacks the roots of unity of order {q}")]
    RootOfUnityDeficiency { q: u64, r: u64 },
    #[error("point has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("the zero parameter point has no Galois orbit")]
    ZeroParameter,
    #[error("fiber scan needs {r}^{n} points, budget is {budget}")]
    BudgetExceeded { r: u64, n: usize, budget: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianReport {
    pub schema_version: u32,
    pub r: u64,
    pub point: Vec<u64>,
    pub rank: usize,
    pub codimension: usize,
    pub triangular_submatrix_ok: bool,
    pub diagonal_value: u64,
    /// Relabeling of parameter indices applied before building J′, as the
    /// 1-based image of 1..n.
    pub permutation: Vec<u16>,
}

/// Rank over F_r by row reduction.
pub fn rank_mod(mut rows: Vec<Vec<u64>>, field: PrimeField) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = field.inv(rows[rank][col]).expect("nonzero pivot");
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| field.mul(x, inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let c = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Matrix of formal partial derivatives of `generators` at `w`, reduced mod r.
pub fn jacobian_at(generators: &[Binomial], w: &[u64], field: PrimeField) -> Vec<Vec<u64>> {
    generators
        .iter()
        .map(|g| {
            let f = g.to_int_poly();
            (0..w.len())
                .map(|var| f.derivative(var).evaluate_mod(w, field))
                .collect()
        })
        .collect()
}

fn swap_permutation(n: usize, j: usize) -> Vec<u16> {
    let mut sigma: Vec<u16> = (1..=n as u16).collect();
    sigma.swap(0, j - 1);
    sigma
}

fn relabel(v: &Veronese, sigma: &[u16], t: &[u16]) -> usize {
    let image: Vec<u16> = t.iter().map(|&i| sigma[i as usize - 1]).collect();
    v.index_of_multiset(&image)
        .expect("relabeled tuple lies in T")
}

/// The tuples of P′: all of T except `(1,…,1,i)`, in ascending lex order.
fn p_prime(v: &Veronese) -> Vec<&IndexTuple> {
    v.tuples()
        .iter()
        .filter(|t| t.0[..t.0.len() - 1].iter().any(|&i| i != 1))
        .collect()
}

/// Rows `F_t = x_{1..1} x_t - x_{1..1 i_q} x_{1 i_1..i_{q-1}}` for t in P′,
/// written in the original variables after relabeling by `sigma`.
pub fn j_prime_generators(v: &Veronese, sigma: &[u16]) -> Vec<(IndexTuple, IntPoly)> {
    let q = v.q() as usize;
    let nv = v.len();
    let ones = vec![1u16; q];
    let x = |t: &[u16]| Monomial::var(nv, relabel(v, sigma, t), 1);
    p_prime(v)
        .into_iter()
        .map(|t| {
            let i = &t.0;
            let mut a = vec![1u16; q - 1];
            a.push(i[q - 1]);
            let mut b = vec![1u16];
            b.extend_from_slice(&i[..q - 1]);
            let f = IntPoly::binomial(x(&ones).mul(&x(i)), x(&a).mul(&x(&b)));
            (t.clone(), f)
        })
        .collect()
}

/// Checks J′ symbolically: lower triangular in the ascending-lex order of
/// P′ with every diagonal entry equal to the variable `x_{1..1}`.
fn j_prime_structural(v: &Veronese, sigma: &[u16]) -> bool {
    let rows = j_prime_generators(v, sigma);
    let cols: Vec<usize> = rows.iter().map(|(t, _)| relabel(v, sigma, &t.0)).collect();
    let diag = IntPoly::monomial(Monomial::var(
        v.len(),
        relabel(v, sigma, &vec![1; v.q() as usize]),
        1,
    ));
    rows.iter().enumerate().all(|(ri, (_, f))| {
        cols.iter().enumerate().all(|(ci, &var)| {
            let d = f.derivative(var);
            match ci.cmp(&ri) {
                std::cmp::Ordering::Greater => d.is_zero(),
                std::cmp::Ordering::Equal => d == diag,
                std::cmp::Ordering::Less => true,
            }
        })
    })
}

pub fn jacobian_rank(
    v: &Veronese,
    generators: &[Binomial],
    w: &[u64],
    r: u64,
) -> Result<JacobianReport, GeometryError> {
    let field = PrimeField::new(r)?;
    if w.len() != v.len() {
        return Err(GeometryError::Dimension {
            expected: v.len(),
            found: w.len(),
        });
    }
    let w: Vec<u64> = w.iter().map(|&x| x % r).collect();
    let rank = rank_mod(jacobian_at(generators, &w, field), field);

    let n = v.n();
    let j = (1..=n).find(|&j| w[v.pure_index(j)] != 0).unwrap_or(1);
    let sigma = swap_permutation(n, j);
    let diagonal_value = w[relabel(v, &sigma, &vec![1; v.q() as usize])];

    let rows = j_prime_generators(v, &sigma);
    let cols: Vec<usize> = rows.iter().map(|(t, _)| relabel(v, &sigma, &t.0)).collect();
    let numeric_ok = rows.iter().enumerate().all(|(ri, (_, f))| {
        cols.iter().enumerate().all(|(ci, &var)| {
            let d = f.derivative(var).evaluate_mod(&w, field);
            if ci > ri {
                d == 0
            } else if ci == ri {
                d == diagonal_value
            } else {
                true
            }
        })
    });

    Ok(JacobianReport {
        schema_version: crate::SCHEMA_VERSION,
        r,
        point: w,
        rank,
        codimension: v.codimension(),
        triangular_submatrix_ok: numeric_ok && j_prime_structural(v, &sigma),
        diagonal_value,
        permutation: sigma,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub schema_version: u32,
    pub r: u64,
    pub q: u64,
    pub u: Vec<u64>,
    pub base_point: Vec<u64>,
    pub roots_of_unity: Vec<u64>,
    pub fiber: Vec<Vec<u64>>,
    pub orbit: Vec<Vec<u64>>,
    pub equal: bool,
}

pub const DEFAULT_FIBER_BUDGET: u64 = 10_000_000;

/// Elements g of F_r^* with g^q = 1.
pub fn roots_of_unity(q: u64, field: PrimeField) -> Vec<u64> {
    (1..field.modulus())
        .filter(|&g| field.pow(g, q) == 1)
        .collect()
}

pub fn fiber_check(v: &Veronese, r: u64, u: &[u64]) -> Result<FiberReport, GeometryError> {
    fiber_check_with_budget(v, r, u, DEFAULT_FIBER_BUDGET)
}

pub fn fiber_check_with_budget(
    v: &Veronese,
    r: u64,
    u: &[u64],
    budget: u64,
) -> Result<FiberReport, GeometryError> {
    let field = PrimeField::new(r)?;
    let q = v.q();
    let n = v.n();
    if r % q != 1 {
        return Err(GeometryError::RootOfUnityDeficiency { q, r });
    }
    if u.len() != n {
        return Err(GeometryError::Dimension {
            expected: n,
            found: u.len(),
        });
    }
    let u: Vec<u64> = u.iter().map(|&x| x % r).collect();
    if u.iter().all(|&x| x == 0) {
        return Err(GeometryError::ZeroParameter);
    }
    let total = (r as u128)
        .checked_pow(n as u32)
        .filter(|&t| t <= budget as u128)
        .ok_or(GeometryError::BudgetExceeded { r, n, budget })? as u64;

    let base_point = v.parametrize(&u, field);
    let mut fiber: Vec<Vec<u64>> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut x = vec![0u64; n];
            for d in x.iter_mut().rev() {
                *d = idx % r;
                idx /= r;
            }
            (v.parametrize(&x, field) == base_point).then_some(x)
        })
        .collect();
    fiber.sort_unstable();

    let mu = roots_of_unity(q, field);
    let mut orbit: Vec<Vec<u64>> = mu
        .iter()
        .map(|&g| u.iter().map(|&x| field.mul(g, x)).collect())
        .collect();
    orbit.sort_unstable();
    orbit.dedup();

    Ok(FiberReport {
        schema_version: crate::SCHEMA_VERSION,
        r,
        q,
        equal: fiber == orbit,
        u,
        base_point,
        roots_of_unity: mu,
        fiber,
        orbit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::{quadratic_generators, GeneratorStyle};
    use crate::veronese::VeroneseParams;

    fn ver(n: usize, p: u64, h: u32) -> Veronese {
        Veronese::new(VeroneseParams::new(n, p, h).unwrap())
    }

    #[test]
    fn origin_has_rank_zero() {
        let v = ver(3, 2, 1);
        let b = quadratic_generators(&v, GeneratorStyle::Full);
        let rep = jacobian_rank(&v, &b, &[0; 6], 5).unwrap();
        assert_eq!(rep.rank, 0);
        assert_eq!(rep.diagonal_value, 0);
        assert!(rep.triangular_submatrix_ok);
    }

    #[test]
    fn smooth_point_rank_three() {
        let v = ver(3, 2, 1);
        let f5 = PrimeField::new(5).unwrap();
        let b = quadratic_generators(&v, GeneratorStyle::Full);
        let w = v.parametrize(&[1, 1, 1], f5);
        let rep = jacobian_rank(&v, &b, &w, 5).unwrap();
        assert_eq!(rep.rank, 3);
        assert!(rep.triangular_submatrix_ok);
        assert_eq!(rep.diagonal_value, 1);
        assert_eq!(rep.permutation, [1, 2, 3]);
    }

    #[test]
    fn reindexes_when_first_coordinate_vanishes() {
        let v = ver(3, 2, 1);
        let f5 = PrimeField::new(5).unwrap();
        let b = quadratic_generators(&v, GeneratorStyle::Full);
        let w = v.parametrize(&[0, 1, 1], f5);
        let rep = jacobian_rank(&v, &b, &w, 5).unwrap();
        assert_eq!(rep.permutation, [2, 1, 3]);
        assert_eq!(rep.diagonal_value, 1);
        assert!(rep.triangular_submatrix_ok);
        assert!(rep.rank >= 3);
        // independent recomputation
        let direct = rank_mod(jacobian_at(&b, &w, f5), f5);
        assert_eq!(direct, rep.rank);
    }

    #[test]
    fn j_prime_has_n_rows() {
        for (n, p, h) in [(3, 2, 1), (3, 3, 1), (4, 2, 2), (2, 5, 1)] {
            let v = ver(n, p, h);
            let sigma: Vec<u16> = (1..=n as u16).collect();
            assert_eq!(j_prime_generators(&v, &sigma).len(), v.codimension());
            assert!(j_prime_structural(&v, &sigma));
        }
    }

    #[test]
    fn rank_mod_basics() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(rank_mod(vec![vec![1, 2], vec![2, 4]], f), 1);
        assert_eq!(rank_mod(vec![vec![1, 2], vec![2, 0]], f), 2);
        assert_eq!(rank_mod(vec![], f), 0);
    }

    #[test]
    fn fiber_examples() {
        let v = ver(3, 2, 1);
        let rep = fiber_check(&v, 5, &[1, 2, 3]).unwrap();
        assert_eq!(rep.fiber, vec![vec![1, 2, 3], vec![4, 3, 2]]);
        assert!(rep.equal);
        let rep = fiber_check(&v, 5, &[0, 1, 2]).unwrap();
        assert_eq!(rep.fiber, vec![vec![0, 1, 2], vec![0, 4, 3]]);
        assert!(rep.equal);

        let v = ver(3, 3, 1);
        let rep = fiber_check(&v, 7, &[1, 1, 1]).unwrap();
        assert_eq!(rep.roots_of_unity, [1, 2, 4]);
        assert_eq!(rep.fiber, vec![vec![1, 1, 1], vec![2, 2, 2], vec![4, 4, 4]]);
        assert!(rep.equal);
    }

    #[test]
    fn deficiency_and_zero() {
        let v = ver(3, 3, 1);
        assert_eq!(
            fiber_check(&v, 5, &[1, 1, 1]).unwrap_err(),
            GeometryError::RootOfUnityDeficiency { q: 3, r: 5 }
        );
        assert_eq!(
            fiber_check(&v, 7, &[0, 0, 0]).unwrap_err(),
            GeometryError::ZeroParameter
        );
    }
}
