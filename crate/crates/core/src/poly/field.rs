use serde::{Deserialize, Serialize};

use super::PolyError;

/// Arithmetic modulo a (small) prime. Residues are kept in `0..r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    r: u64,
}

pub fn is_prime(r: u64) -> bool {
    if r < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= r {
        if r.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Moduli are capped at 2^31 so products never overflow a `u64`.
    pub fn new(r: u64) -> Result<Self, PolyError> {
        if !is_prime(r) || r >= 1 << 31 {
            return Err(PolyError::NotPrime(r));
        }
        Ok(PrimeField { r })
    }

    pub fn modulus(&self) -> u64 {
        self.r
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.r as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.r
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.r - b) % self.r
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.r - a) % self.r
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.r
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.r;
        base %= self.r;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.r) {
            None
        } else {
            Some(self.pow(a, self.r - 2))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn fermat() {
        let f = PrimeField::new(5).unwrap();
        for a in 0..5 {
            assert_eq!(f.pow(a, 5), a);
        }
    }
}
