//! Truncated algebras F_p[u_1..u_n]/(u_1^{d_1}, ..., u_n^{d_n}).
//!
//! These are the test rings R over which functorial group-scheme identities
//! are checked: a generic R-point of an infinitesimal group is just a
//! nilpotent variable.

use std::fmt;
use std::sync::Arc;

use super::field::{Field, PrimeField};
use super::poly::MultiPoly;
use super::AlgebraError;

#[derive(Debug, PartialEq, Eq)]
pub struct TruncatedAlgebra {
    field: PrimeField,
    vars: Vec<String>,
    bounds: Vec<u32>,
}

impl TruncatedAlgebra {
    /// `profile` pairs each variable name with its nilpotency degree d >= 1.
    pub fn new(p: u64, profile: &[(&str, u32)]) -> Result<Arc<Self>, AlgebraError> {
        let field = PrimeField::new(p)?;
        if let Some((v, _)) = profile.iter().find(|(_, d)| *d == 0) {
            return Err(AlgebraError::InvalidParameter(format!("nilpotency degree of {v} must be >= 1")));
        }
        Ok(Arc::new(Self {
            field,
            vars: profile.iter().map(|(v, _)| v.to_string()).collect(),
            bounds: profile.iter().map(|(_, d)| *d).collect(),
        }))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    /// Index of nilpotency of the maximal ideal: every product of this many
    /// non-units vanishes.
    pub fn nilpotency_index(&self) -> u32 {
        self.bounds.iter().map(|d| d - 1).sum::<u32>() + 1
    }
}

#[derive(Clone, PartialEq)]
pub struct TruncElt {
    algebra: Arc<TruncatedAlgebra>,
    poly: MultiPoly,
}

impl TruncElt {
    /// Reduces a polynomial into the algebra. Its variables must be among the
    /// algebra's variables.
    pub fn reduce(algebra: &Arc<TruncatedAlgebra>, poly: &MultiPoly) -> Result<Self, AlgebraError> {
        if poly.field() != &algebra.field {
            return Err(AlgebraError::ModulusMismatch { left: poly.field().p(), right: algebra.p() });
        }
        let lifted = poly.with_vars(&algebra.vars)?;
        Ok(Self { algebra: algebra.clone(), poly: lifted.truncate(&algebra.bounds) })
    }

    pub fn constant(algebra: &Arc<TruncatedAlgebra>, c: i64) -> Self {
        let f = algebra.field;
        Self { algebra: algebra.clone(), poly: MultiPoly::constant(&f, &algebra.var_refs(), f.from_i64(c)) }
    }

    pub fn zero(algebra: &Arc<TruncatedAlgebra>) -> Self {
        Self::constant(algebra, 0)
    }

    pub fn one(algebra: &Arc<TruncatedAlgebra>) -> Self {
        Self::constant(algebra, 1)
    }

    pub fn var(algebra: &Arc<TruncatedAlgebra>, name: &str) -> Result<Self, AlgebraError> {
        let p = MultiPoly::var(&algebra.field, &algebra.var_refs(), name)?;
        Ok(Self { algebra: algebra.clone(), poly: p.truncate(&algebra.bounds) })
    }

    pub fn algebra(&self) -> &Arc<TruncatedAlgebra> {
        &self.algebra
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn constant_term(&self) -> u64 {
        self.poly.constant_term()
    }

    pub fn is_unit(&self) -> bool {
        self.constant_term() != 0
    }

    pub fn is_nilpotent(&self) -> bool {
        !self.is_unit()
    }

    fn same_algebra(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_algebra(other)?;
        Ok(Self { algebra: self.algebra.clone(), poly: self.poly.try_add(&other.poly)? })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_algebra(other)?;
        Ok(Self { algebra: self.algebra.clone(), poly: self.poly.try_sub(&other.poly)? })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_algebra(other)?;
        let bounds = &self.algebra.bounds;
        let mut out = self.poly.zero_like();
        for (ea, &ca) in self.poly.terms() {
            for (eb, &cb) in other.poly.terms() {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if e.iter().zip(bounds).all(|(x, b)| x < b) {
                    out.add_term(e, self.algebra.field.mul(ca, cb));
                }
            }
        }
        Ok(Self { algebra: self.algebra.clone(), poly: out })
    }

    pub fn neg(&self) -> Self {
        Self { algebra: self.algebra.clone(), poly: self.poly.neg() }
    }

    pub fn scale(&self, c: i64) -> Self {
        let f = self.algebra.field;
        Self { algebra: self.algebra.clone(), poly: self.poly.scale(f.from_i64(c)) }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.algebra);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same algebra");
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base).expect("same algebra");
            }
        }
        acc
    }

    /// Inverse of a unit c(1 + n), n nilpotent: c^{-1} * sum_k (-n)^k, which
    /// terminates at the nilpotency index of the algebra.
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        let f = self.algebra.field;
        let c = self.constant_term();
        let c_inv = f.inv(c).ok_or(AlgebraError::NotAUnit)?;
        let normalized = Self { algebra: self.algebra.clone(), poly: self.poly.scale(c_inv) };
        let minus_n = Self::one(&self.algebra).try_sub(&normalized)?;
        let mut term = Self::one(&self.algebra);
        let mut acc = Self::one(&self.algebra);
        for _ in 1..self.algebra.nilpotency_index() {
            term = term.try_mul(&minus_n)?;
            if term.is_zero() {
                break;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(Self { algebra: self.algebra.clone(), poly: acc.poly.scale(c_inv) })
    }

    /// Substitutes algebra elements for the algebra's variables (a ring map
    /// R -> R' when the images satisfy the same nilpotency relations).
    pub fn evaluate_at(&self, images: &[TruncElt]) -> Result<TruncElt, AlgebraError> {
        assert_eq!(images.len(), self.algebra.vars.len());
        let target = images.first().map(|t| t.algebra.clone()).unwrap_or_else(|| self.algebra.clone());
        let mut acc = TruncElt::zero(&target);
        for (e, &c) in self.poly.terms() {
            let mut t = TruncElt::constant(&target, c as i64);
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t = t.try_mul(&images[i].pow(x as u64))?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for TruncElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for TruncElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let profile: Vec<String> =
            self.algebra.vars.iter().zip(&self.algebra.bounds).map(|(v, d)| format!("{v}^{d}")).collect();
        write!(f, "TruncElt[F_{}/({})]({})", self.algebra.p(), profile.join(","), self.poly)
    }
}
