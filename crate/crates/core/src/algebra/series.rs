//! One-variable power series truncated at a fixed precision N (the
//! coefficients c_0..c_{N-1} are exact, everything from x^N on is unknown).

use std::fmt;

use super::field::{Field, PrimeField};
use super::AlgebraError;

pub const DEFAULT_PRECISION: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(usize),
    /// Zero to the working precision.
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct PowerSeries<K: Field = PrimeField> {
    field: K,
    var: String,
    coeffs: Vec<K::Elt>,
}

impl<K: Field> PowerSeries<K> {
    pub fn new(field: &K, var: &str, mut coeffs: Vec<K::Elt>, precision: usize) -> Self {
        coeffs.resize(precision, field.zero());
        Self { field: field.clone(), var: var.to_string(), coeffs }
    }

    pub fn from_ints(field: &K, var: &str, coeffs: &[i64], precision: usize) -> Self {
        let c = coeffs.iter().take(precision).map(|&c| field.from_i64(c)).collect();
        Self::new(field, var, c, precision)
    }

    pub fn zero(field: &K, var: &str, precision: usize) -> Self {
        Self::new(field, var, Vec::new(), precision)
    }

    pub fn one(field: &K, var: &str, precision: usize) -> Self {
        Self::new(field, var, vec![field.one()], precision)
    }

    /// The uniformizer itself.
    pub fn x(field: &K, var: &str, precision: usize) -> Self {
        let mut c = vec![field.zero(); precision.min(2)];
        if precision > 1 {
            c[1] = field.one();
        }
        Self::new(field, var, c, precision)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[K::Elt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K::Elt {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|&c| !self.field.is_zero(c)) {
            Some(i) => Valuation::Finite(i),
            None => Valuation::Infinite,
        }
    }

    fn check(&self, other: &Self) -> Result<usize, AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::ModulusMismatch { left: self.field.order(), right: other.field.order() });
        }
        Ok(self.precision().min(other.precision()))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        let n = self.check(other)?;
        let c = (0..n).map(|i| self.field.add(self.coeffs[i], other.coeffs[i])).collect();
        Ok(Self::new(&self.field, &self.var, c, n))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        let n = self.check(other)?;
        let c = (0..n).map(|i| self.field.sub(self.coeffs[i], other.coeffs[i])).collect();
        Ok(Self::new(&self.field, &self.var, c, n))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        let n = self.check(other)?;
        let f = &self.field;
        let mut c = vec![f.zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if f.is_zero(a) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Ok(Self::new(f, &self.var, c, n))
    }

    pub fn scale(&self, s: K::Elt) -> Self {
        let c = self.coeffs.iter().map(|&a| self.field.mul(a, s)).collect();
        Self::new(&self.field, &self.var, c, self.precision())
    }

    /// Multiplicative inverse to the same precision; needs c_0 != 0.
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        let f = &self.field;
        let n = self.precision();
        let c0_inv = f.inv(self.coeff(0)).ok_or(AlgebraError::NotAUnit)?;
        let mut inv = vec![f.zero(); n];
        if n == 0 {
            return Ok(self.clone());
        }
        inv[0] = c0_inv;
        for k in 1..n {
            let mut acc = f.zero();
            for j in 1..=k {
                acc = f.add(acc, f.mul(self.coeffs[j], inv[k - j]));
            }
            inv[k] = f.neg(f.mul(acc, c0_inv));
        }
        Ok(Self::new(f, &self.var, inv, n))
    }

    /// self(inner(x)); `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, AlgebraError> {
        let n = self.check(inner)?;
        if !self.field.is_zero(inner.coeff(0)) {
            return Err(AlgebraError::InvalidParameter(
                "inner series of a composition must have zero constant term".into(),
            ));
        }
        // Horner in the inner series.
        let mut acc = Self::zero(&self.field, &self.var, n);
        for i in (0..n).rev() {
            acc = acc.try_mul(inner)?;
            acc.coeffs[0] = self.field.add(acc.coeffs[0], self.coeffs[i]);
        }
        Ok(acc)
    }

    pub fn truncated(&self, precision: usize) -> Self {
        let c = self.coeffs.iter().take(precision).copied().collect();
        Self::new(&self.field, &self.var, c, precision)
    }
}

impl<K: Field> fmt::Display for PowerSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(c) {
                continue;
            }
            let r = self.field.render(c);
            parts.push(match i {
                0 => r,
                _ if c == self.field.one() => format!("{}^{}", self.var, i),
                _ => format!("{}*{}^{}", r, self.var, i),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O({}^{})", parts.join(" + "), self.var, self.precision())
    }
}

impl<K: Field> fmt::Debug for PowerSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PowerSeries[{:?}]({})", self.field, self)
    }
}
