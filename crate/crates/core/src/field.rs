//! Arithmetic in a prime field F_p.
//!
//! Hot loops work on raw `u64` residues through the [`PrimeField`] methods;
//! [`FieldElement`] is the checked, self-describing value type used at API
//! boundaries and in tests.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default characteristic: large enough that random configurations are
/// generic with overwhelming probability, small enough that products of two
/// residues fit in a `u64`.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Odd primes below 2^31 only.
    pub fn new(p: u64) -> Result<Self> {
        if !(3..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement {
            value: self.from_i64(v),
            p: self.p,
        }
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    /// `acc + a*b`.
    #[inline]
    pub fn mul_add(&self, acc: u64, a: u64, b: u64) -> u64 {
        (acc + a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::ZeroInverse);
        }
        // extended Euclid
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.from_i64(s0))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }

    /// Least element `c >= 0` with `c = a` as residues, printed signed when
    /// that is shorter.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// A residue tagged with its characteristic.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field().inv(self.value)?,
            p: self.p,
        })
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement {
            value: self.field().pow(self.value, e),
            p: self.p,
        }
    }

    fn check(&self, other: &FieldElement) {
        assert_eq!(self.p, other.p, "mixed characteristics");
    }
}

/// Checked inverse; the free-function spelling of [`FieldElement::inverse`].
pub fn field_inverse(a: FieldElement) -> Result<FieldElement> {
    a.inverse()
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check(&rhs);
        FieldElement {
            value: self.field().add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.check(&rhs);
        FieldElement {
            value: self.field().sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check(&rhs);
        FieldElement {
            value: self.field().mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field().neg(self.value),
            p: self.p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(field_inverse(f.elem(3)).unwrap().value(), 5);
        assert_eq!(field_inverse(f.elem(1)).unwrap().value(), 1);
        assert_eq!(field_inverse(f.elem(0)), Err(Error::ZeroInverse));
    }

    #[test]
    fn rejects_bad_primes() {
        for p in [0, 1, 2, 9, 15, 32001, 1 << 31] {
            assert!(PrimeField::new(p).is_err(), "{p}");
        }
        assert!(PrimeField::new(DEFAULT_PRIME).is_ok());
    }

    #[test]
    fn every_nonzero_residue_inverts() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101 {
            let b = f.inv(a).unwrap();
            assert_eq!(f.mul(a, b), 1);
        }
    }

    #[test]
    fn operators_agree_with_raw_methods() {
        let f = PrimeField::new(32003).unwrap();
        let (a, b) = (f.elem(-5), f.elem(31999));
        assert_eq!((a + b).value(), f.add(a.value(), b.value()));
        assert_eq!((a - b).value(), f.sub(a.value(), b.value()));
        assert_eq!((a * b).value(), f.mul(a.value(), b.value()));
        assert_eq!((-a).value(), 5);
        assert_eq!(a.pow(32002).value(), 1);
    }
}
