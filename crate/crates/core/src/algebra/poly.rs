//! Sparse multivariate polynomials over a finite field.
//!
//! Terms live in an exponent-vector map with no zero coefficients stored.
//! Rendering uses graded-lex order (total degree descending, then lex on the
//! variable order) so golden files are reproducible.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::field::{Field, PrimeField};
use super::AlgebraError;

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq)]
pub struct MultiPoly<K: Field = PrimeField> {
    field: K,
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, K::Elt>,
}

impl<K: Field> MultiPoly<K> {
    pub fn zero(field: &K, vars: &[&str]) -> Self {
        Self {
            field: field.clone(),
            vars: vars.iter().map(|s| s.to_string()).collect::<Vec<_>>().into(),
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn zero_like(&self) -> Self {
        Self { field: self.field.clone(), vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &K, vars: &[&str], c: K::Elt) -> Self {
        let mut p = Self::zero(field, vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(field: &K, vars: &[&str]) -> Self {
        Self::constant(field, vars, field.one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(field: &K, vars: &[&str], name: &str) -> Result<Self, AlgebraError> {
        let idx =
            vars.iter().position(|v| *v == name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(field, vars);
        p.add_term(e, field.one());
        Ok(p)
    }

    /// Monomial `c * prod vars^exps`.
    pub fn monomial(field: &K, vars: &[&str], exps: Exponents, c: K::Elt) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(field, vars);
        p.add_term(exps, c);
        p
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &K::Elt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> K::Elt {
        self.terms.get(exps).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> K::Elt {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Adds `c * x^e` in place, keeping the representation zero-free.
    pub fn add_term(&mut self, exps: Exponents, c: K::Elt) {
        if self.field.is_zero(c) {
            return;
        }
        let f = &self.field;
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if f.is_zero(s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Re-expresses `self` over a variable list containing its own variables.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self, AlgebraError> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).ok_or_else(|| AlgebraError::UnknownVariable(v.clone())))
            .collect::<Result<_, _>>()?;
        let mut out = Self { field: self.field.clone(), vars: vars.to_vec().into(), terms: BTreeMap::new() };
        for (e, &c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                ne[map[i]] = x;
            }
            out.terms.insert(ne, c);
        }
        Ok(out)
    }

    /// Brings two operands onto one field and one variable list. Variables of
    /// `other` that `self` lacks are appended in their original order.
    fn aligned(&self, other: &Self) -> Result<(Self, Self), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::ModulusMismatch { left: self.field.order(), right: other.field.order() });
        }
        if self.vars == other.vars {
            return Ok((self.clone(), other.clone()));
        }
        let mut vars: Vec<String> = self.vars.to_vec();
        for v in other.vars.iter() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        Ok((self.with_vars(&vars)?, other.with_vars(&vars)?))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        let (mut a, b) = self.aligned(other)?;
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        Ok(a)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        let (a, b) = self.aligned(other)?;
        let mut out = a.zero_like();
        let f = &a.field;
        for (ea, &ca) in &a.terms {
            for (eb, &cb) in &b.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: K::Elt) -> Self {
        let mut out = self.zero_like();
        for (e, &x) in &self.terms {
            out.add_term(e.clone(), self.field.mul(c, x));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant_with(self, self.field.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base).expect("same ring");
            }
        }
        acc
    }

    fn constant_with(like: &Self, c: K::Elt) -> Self {
        let mut p = like.zero_like();
        p.add_term(vec![0; like.vars.len()], c);
        p
    }

    /// Formal partial derivative; exponent multipliers are reduced in the field.
    pub fn partial_derivative(&self, var: &str) -> Result<Self, AlgebraError> {
        let idx = self.var_index(var)?;
        let f = &self.field;
        let mut out = self.zero_like();
        for (e, &c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mult = f.from_i64(e[idx] as i64);
            let mut ne = e.clone();
            ne[idx] -= 1;
            out.add_term(ne, f.mul(mult, c));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[K::Elt]) -> K::Elt {
        assert_eq!(point.len(), self.vars.len(), "point dimension");
        let f = &self.field;
        let mut acc = f.zero();
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t = f.mul(t, f.pow(point[i], x as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Substitutes a polynomial (over the same variables) for one variable.
    pub fn substitute(&self, var: &str, value: &Self) -> Result<Self, AlgebraError> {
        let idx = self.var_index(var)?;
        let mut out = self.zero_like();
        let mut powers: Vec<Self> = vec![Self::constant_with(self, self.field.one())];
        for (e, &c) in &self.terms {
            while powers.len() <= e[idx] as usize {
                let next = powers.last().unwrap().try_mul(value)?;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[idx] = 0;
            let mono = Self::monomial_like(self, rest, c);
            out = out.try_add(&mono.try_mul(&powers[e[idx] as usize])?)?;
        }
        Ok(out)
    }

    fn monomial_like(like: &Self, e: Exponents, c: K::Elt) -> Self {
        let mut p = like.zero_like();
        p.add_term(e, c);
        p
    }

    /// Applies a coefficient map into another field (e.g. a field embedding).
    pub fn map_coefficients<L: Field>(&self, target: &L, f: impl Fn(K::Elt) -> L::Elt) -> MultiPoly<L> {
        let mut out = MultiPoly { field: target.clone(), vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Drops every term whose exponent in variable `i` reaches `bounds[i]`.
    pub(crate) fn truncate(&self, bounds: &[u32]) -> Self {
        let mut out = self.zero_like();
        for (e, &c) in &self.terms {
            if e.iter().zip(bounds).all(|(x, b)| x < b) {
                out.terms.insert(e.clone(), c);
            }
        }
        out
    }

    /// Terms in graded-lex order: higher total degree first, ties broken by
    /// comparing exponents variable by variable (larger first).
    pub fn sorted_terms(&self) -> Vec<(&Exponents, K::Elt)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, &c)| (e, c)).collect();
        v.sort_by(|(a, _), (b, _)| grlex_desc(a, b));
        v
    }
}

fn grlex_desc(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl<K: Field> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| format!("{}^{}", self.vars[i], x))
                    .collect();
                let coeff = self.field.render(c);
                match (mono.is_empty(), c == self.field.one()) {
                    (true, _) => coeff,
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{}*{}", coeff, mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<K: Field> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{:?}; {}]({})", self.field, self.vars.join(","), self)
    }
}
