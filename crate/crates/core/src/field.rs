//! Arithmetic in the prime field `F_p`.

use crate::error::{Error, Result};

/// Default characteristic used throughout; large enough that the
/// characteristic-free examples behave generically.
pub const DEFAULT_CHARACTERISTIC: u32 = 32003;

/// Residues are plain `u32` values in `[0, p)`; the field carries the modulus.
pub type Coeff = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_CHARACTERISTIC }
    }
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidField(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Maps an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn from_i64(&self, v: i64) -> Coeff {
        v.rem_euclid(self.p as i64) as Coeff
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for printing.
    #[inline]
    pub fn to_signed(&self, a: Coeff) -> i64 {
        if a as u64 > (self.p as u64) / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    #[inline]
    pub fn add(&self, a: Coeff, b: Coeff) -> Coeff {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as Coeff
        } else {
            s as Coeff
        }
    }

    #[inline]
    pub fn sub(&self, a: Coeff, b: Coeff) -> Coeff {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as Coeff
        }
    }

    #[inline]
    pub fn neg(&self, a: Coeff) -> Coeff {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Coeff, b: Coeff) -> Coeff {
        ((a as u64 * b as u64) % self.p as u64) as Coeff
    }

    /// Inverse by Fermat; `a` must be nonzero.
    pub fn inv(&self, a: Coeff) -> Coeff {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p as u64 - 2)
    }

    pub fn pow(&self, mut a: Coeff, mut e: u64) -> Coeff {
        let mut r: Coeff = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        let f = PrimeField::default();
        for a in [1u32, 2, 3, 17, 32002, 12345] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.inv(1), 1);
    }

    #[test]
    fn rejects_composite() {
        assert!(PrimeField::new(32004).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn signed_repr() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.to_signed(6), -1);
        assert_eq!(f.to_signed(3), 3);
        assert_eq!(f.from_i64(-1), 6);
    }
}
