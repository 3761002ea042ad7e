//! Group cohomology H^i(G, Z/q) for G cyclic of order q = p^h, where the
//! generator acts by multiplication by a, computed from the 2-periodic
//! resolution with differentials D = a - 1 and Nm = sum_{j<q} a^j.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::is_prime;

pub const DEFAULT_I_MAX: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("q = {0} is not a prime power greater than 1")]
    NotPrimePower(u64),
    #[error("a = {a} is not a unit mod {q}")]
    NotUnit { q: u64, a: u64 },
    #[error("a = {a} does not satisfy a^q = 1 mod {q}")]
    NotOfOrderDividingQ { q: u64, a: u64 },
}

/// `(p, h)` with `q = p^h`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let mut m = q;
    let mut h = 0;
    while m.is_multiple_of(p) {
        m /= p;
        h += 1;
    }
    (m == 1 && is_prime(p)).then_some((p, h))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicAction {
    q: u64,
    a: u64,
    p: u64,
    h: u32,
}

impl CyclicAction {
    pub fn new(q: u64, a: u64) -> Result<Self, CohomologyError> {
        let (p, h) = prime_power(q).ok_or(CohomologyError::NotPrimePower(q))?;
        let a = a % q;
        if a.gcd(&q) != 1 {
            return Err(CohomologyError::NotUnit { q, a });
        }
        if pow_mod(a, q, q) != 1 % q {
            return Err(CohomologyError::NotOfOrderDividingQ { q, a });
        }
        Ok(CyclicAction { q, a, p, h })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// `a - 1 mod q`.
    pub fn difference(&self) -> u64 {
        (self.a + self.q - 1) % self.q
    }

    /// `sum_{j<q} a^j mod q`.
    pub fn norm(&self) -> u64 {
        let mut s = 0u64;
        let mut t = 1 % self.q;
        for _ in 0..self.q {
            s = (s + t) % self.q;
            t = t * self.a % self.q;
        }
        s
    }
}

/// Every unit a mod q with `a^q = 1`.
pub fn admissible_actions(q: u64) -> Result<Vec<CyclicAction>, CohomologyError> {
    prime_power(q).ok_or(CohomologyError::NotPrimePower(q))?;
    Ok((1..=q)
        .filter_map(|a| CyclicAction::new(q, a % q).ok())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub schema_version: u32,
    pub q: u64,
    pub a: u64,
    pub norm: u64,
    pub difference: u64,
    /// Order of H^i keyed by degree i.
    pub orders: BTreeMap<usize, u64>,
    pub all_equal: bool,
    pub nonvanishing: bool,
}

fn kernel_order(m: u64, q: u64) -> u64 {
    m.gcd(&q)
}

fn image_order(m: u64, q: u64) -> u64 {
    q / m.gcd(&q)
}

pub fn cohomology_orders(action: &CyclicAction, i_max: usize) -> CohomologyTable {
    let q = action.q;
    let d = action.difference();
    let nm = action.norm();
    assert_eq!(
        (nm as u128 * d as u128) % q as u128,
        0,
        "complex is not exact: Nm*D != 0"
    );
    // gcd(0, q) = q covers the trivial action.
    let h0 = kernel_order(d, q);
    let odd = kernel_order(nm, q) / image_order(d, q);
    let even = kernel_order(d, q) / image_order(nm, q);
    let orders: BTreeMap<usize, u64> = (0..=i_max)
        .map(|i| {
            let o = match i {
                0 => h0,
                i if i % 2 == 1 => odd,
                _ => even,
            };
            (i, o)
        })
        .collect();
    let first = orders[&0];
    CohomologyTable {
        schema_version: crate::SCHEMA_VERSION,
        q,
        a: action.a,
        norm: nm,
        difference: d,
        all_equal: orders.values().all(|&o| o == first),
        nonvanishing: orders.values().all(|&o| o > 1),
        orders,
    }
}

/// `p^{h-1}`, a nonzero G-invariant class.
pub fn invariant_element(action: &CyclicAction) -> u64 {
    let c = action.p.pow(action.h - 1);
    assert_eq!(
        action.a * c % action.q,
        c % action.q,
        "p^(h-1) is not invariant"
    );
    c
}

/// Orders by listing kernels and images of the multiplication maps on Z/q.
pub fn brute_force_orders(action: &CyclicAction, i_max: usize) -> Vec<u64> {
    let q = action.q;
    let ker = |m: u64| {
        (0..q)
            .filter(|x| (x * m).is_multiple_of(q))
            .collect::<Vec<_>>()
    };
    let img = |m: u64| {
        let mut v: Vec<u64> = (0..q).map(|x| x * m % q).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let (d, nm) = (action.difference(), action.norm());
    let quotient = |k: Vec<u64>, i: Vec<u64>| {
        assert!(i.iter().all(|x| k.contains(x)));
        k.len() as u64 / i.len() as u64
    };
    (0..=i_max)
        .map(|i| match i {
            0 => ker(d).len() as u64,
            i if i % 2 == 1 => quotient(ker(nm), img(d)),
            _ => quotient(ker(d), img(nm)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_action_q4() {
        let t = cohomology_orders(&CyclicAction::new(4, 1).unwrap(), 6);
        assert!(t.orders.values().all(|&o| o == 4));
    }

    #[test]
    fn q4_a3() {
        let act = CyclicAction::new(4, 3).unwrap();
        let t = cohomology_orders(&act, 6);
        assert_eq!(t.norm, 0);
        assert_eq!(t.difference, 2);
        assert!(t.orders.values().all(|&o| o == 2));
        assert_eq!(invariant_element(&act), 2);
    }

    #[test]
    fn q9_a4() {
        let act = CyclicAction::new(9, 4).unwrap();
        let t = cohomology_orders(&act, 6);
        assert_eq!(t.difference, 3);
        assert!(t.all_equal && t.nonvanishing);
        assert_eq!(invariant_element(&act), 3);
    }

    #[test]
    fn formula_matches_enumeration() {
        for q in (2..=64).filter(|&q| prime_power(q).is_some()) {
            for act in admissible_actions(q).unwrap() {
                let t = cohomology_orders(&act, 6);
                let brute = brute_force_orders(&act, 6);
                assert_eq!(
                    t.orders.values().copied().collect::<Vec<_>>(),
                    brute,
                    "q={q} a={}",
                    act.a
                );
                assert!(t.all_equal && t.nonvanishing);
                assert_eq!(act.a() % act.p(), 1 % act.p());
            }
        }
    }

    #[test]
    fn invalid_actions() {
        assert_eq!(
            CyclicAction::new(6, 1).unwrap_err(),
            CohomologyError::NotPrimePower(6)
        );
        assert!(matches!(
            CyclicAction::new(4, 2),
            Err(CohomologyError::NotUnit { .. })
        ));
        assert!(matches!(
            CyclicAction::new(9, 2),
            Err(CohomologyError::NotOfOrderDividingQ { .. })
        ));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
