//! Arithmetic in the prime field F_p for odd primes p < 2^31.
//!
//! Elements carry their modulus so that mixed-prime arithmetic is caught
//! early instead of silently producing garbage.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported, modulus must be odd")]
    EvenModulus,
    #[error("modulus {0} exceeds 2^31")]
    TooLarge(u64),
}

/// A checked odd prime modulus below 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::TooLarge(p));
        }
        if p % 2 == 0 {
            return Err(FieldError::EvenModulus);
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of F_p, stored as its canonical representative in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u32,
    prime: Prime,
}

impl FieldElem {
    pub fn new(value: i64, prime: Prime) -> Self {
        let p = i64::from(prime.get());
        let v = value.rem_euclid(p) as u32;
        FieldElem { value: v, prime }
    }

    pub fn zero(prime: Prime) -> Self {
        FieldElem { value: 0, prime }
    }

    pub fn one(prime: Prime) -> Self {
        FieldElem { value: 1, prime }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = FieldElem::one(self.prime);
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; panics on zero.
    pub fn inv(self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in F_{}", self.prime);
        self.pow(u64::from(self.prime.get()) - 2)
    }

    #[inline]
    fn check(self, other: Self) {
        debug_assert_eq!(self.prime, other.prime, "mixed-prime arithmetic");
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        let p = self.prime.get();
        let mut v = self.value + rhs.value;
        if v >= p {
            v -= p;
        }
        FieldElem { value: v, prime: self.prime }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        let p = self.prime.get();
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + p - rhs.value
        };
        FieldElem { value: v, prime: self.prime }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        let v = (u64::from(self.value) * u64::from(rhs.value)) % u64::from(self.prime.get());
        FieldElem { value: v as u32, prime: self.prime }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn neg(self) -> Self {
        if self.value == 0 {
            self
        } else {
            FieldElem { value: self.prime.get() - self.value, prime: self.prime }
        }
    }
}

impl AddAssign for FieldElem {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElem {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElem {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(Prime::new(101).is_ok());
        assert!(Prime::new(32003).is_ok());
        assert_eq!(Prime::new(2), Err(FieldError::EvenModulus));
        assert_eq!(Prime::new(91), Err(FieldError::NotPrime(91)));
        assert_eq!(Prime::new(1), Err(FieldError::NotPrime(1)));
        assert!(Prime::new(1 << 31).is_err());
    }

    #[test]
    fn arithmetic_mod_101() {
        let p = Prime::new(101).unwrap();
        let a = FieldElem::new(77, p);
        let b = FieldElem::new(50, p);
        assert_eq!((a + b).value(), 26);
        assert_eq!((a - b).value(), 27);
        assert_eq!((a * b).value(), (77 * 50) % 101);
        assert_eq!((-a).value(), 24);
        assert_eq!(FieldElem::new(-1, p).value(), 100);
    }

    #[test]
    fn inverses() {
        let p = Prime::new(32003).unwrap();
        for v in [1i64, 2, 17, 32002, 999] {
            let a = FieldElem::new(v, p);
            assert_eq!((a * a.inv()).value(), 1);
        }
    }
}
