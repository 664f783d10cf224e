//! Prime fields and the small field abstraction shared by polynomials,
//! truncated algebras and power series.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use super::AlgebraError;

/// A finite field given by a runtime context. Elements are plain `Copy`
/// values; every operation goes through the context.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elt: Copy + Eq + Ord + Hash + fmt::Debug;

    fn characteristic(&self) -> u64;
    fn order(&self) -> u64;
    fn zero(&self) -> Self::Elt;
    fn one(&self) -> Self::Elt;
    fn from_i64(&self, v: i64) -> Self::Elt;
    fn add(&self, a: Self::Elt, b: Self::Elt) -> Self::Elt;
    fn neg(&self, a: Self::Elt) -> Self::Elt;
    fn mul(&self, a: Self::Elt, b: Self::Elt) -> Self::Elt;
    fn inv(&self, a: Self::Elt) -> Option<Self::Elt>;
    fn render(&self, a: Self::Elt) -> String;

    fn sub(&self, a: Self::Elt, b: Self::Elt) -> Self::Elt {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elt) -> bool {
        a == self.zero()
    }

    fn pow(&self, a: Self::Elt, mut e: u64) -> Self::Elt {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub const MAX_PRIME: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if !is_prime(p) || p >= Self::MAX_PRIME {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elt(&self, v: i64) -> FpElt {
        FpElt { value: self.from_i64(v), p: self.p }
    }
}

impl Field for PrimeField {
    type Elt = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow(a, self.p - 2))
    }
    fn render(&self, a: u64) -> String {
        a.to_string()
    }
}

/// A scalar of F_p that carries its modulus. Mixing moduli through the
/// operator impls panics; use the `try_*` methods to get an error instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpElt {
    value: u64,
    p: u64,
}

impl FpElt {
    pub fn new(value: i64, p: u64) -> Result<Self, AlgebraError> {
        Ok(PrimeField::new(p)?.elt(value))
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    fn check(&self, other: &Self) -> Result<PrimeField, AlgebraError> {
        if self.p != other.p {
            return Err(AlgebraError::ModulusMismatch { left: self.p, right: other.p });
        }
        Ok(self.field())
    }

    pub fn try_add(self, rhs: Self) -> Result<Self, AlgebraError> {
        let f = self.check(&rhs)?;
        Ok(Self { value: f.add(self.value, rhs.value), p: self.p })
    }

    pub fn try_sub(self, rhs: Self) -> Result<Self, AlgebraError> {
        let f = self.check(&rhs)?;
        Ok(Self { value: f.sub(self.value, rhs.value), p: self.p })
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self, AlgebraError> {
        let f = self.check(&rhs)?;
        Ok(Self { value: f.mul(self.value, rhs.value), p: self.p })
    }

    pub fn inverse(self) -> Option<Self> {
        self.field().inv(self.value).map(|value| Self { value, p: self.p })
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl Add for FpElt {
    type Output = FpElt;
    fn add(self, rhs: Self) -> Self {
        self.try_add(rhs).expect("F_p moduli differ")
    }
}

impl Sub for FpElt {
    type Output = FpElt;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(rhs).expect("F_p moduli differ")
    }
}

impl Mul for FpElt {
    type Output = FpElt;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(rhs).expect("F_p moduli differ")
    }
}

impl Neg for FpElt {
    type Output = FpElt;
    fn neg(self) -> Self {
        Self { value: self.field().neg(self.value), p: self.p }
    }
}

impl fmt::Display for FpElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = FpElt::new(1, 5).unwrap();
        let b = FpElt::new(1, 7).unwrap();
        assert_eq!(a.try_add(b), Err(AlgebraError::ModulusMismatch { left: 5, right: 7 }));
    }

    #[test]
    fn negative_literals_reduce() {
        assert_eq!(FpElt::new(-3, 5).unwrap().value(), 2);
        assert_eq!(FpElt::new(-1, 2).unwrap().value(), 1);
    }

    fn triple() -> impl Strategy<Value = (u64, i64, i64, i64)> {
        prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(101), Just(65521)]
            .prop_flat_map(|p| (Just(p), 0..p as i64, 0..p as i64, 0..p as i64))
    }

    proptest! {
        #[test]
        fn field_axioms((p, a, b, c) in triple()) {
            let a = FpElt::new(a, p).unwrap();
            let b = FpElt::new(b, p).unwrap();
            let c = FpElt::new(c, p).unwrap();
            let zero = FpElt::new(0, p).unwrap();
            let one = FpElt::new(1, p).unwrap();
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!(a + (-a), zero);
            prop_assert_eq!(a * one, a);
            if !a.is_zero() {
                prop_assert_eq!(a * a.inverse().unwrap(), one);
            } else {
                prop_assert!(a.inverse().is_none());
            }
        }
    }
}
