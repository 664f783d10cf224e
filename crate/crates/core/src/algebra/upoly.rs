//! Dense univariate helpers (coefficients low degree first) used for
//! squarefreeness checks.

use super::field::Field;

pub fn trim<K: Field>(field: &K, p: &mut Vec<K::Elt>) {
    while p.last().is_some_and(|&c| field.is_zero(c)) {
        p.pop();
    }
}

pub fn derivative<K: Field>(field: &K, p: &[K::Elt]) -> Vec<K::Elt> {
    let mut d: Vec<K::Elt> =
        p.iter().enumerate().skip(1).map(|(i, &c)| field.mul(field.from_i64(i as i64), c)).collect();
    trim(field, &mut d);
    d
}

pub fn rem<K: Field>(field: &K, num: &[K::Elt], den: &[K::Elt]) -> Vec<K::Elt> {
    let mut r = num.to_vec();
    trim(field, &mut r);
    let mut d = den.to_vec();
    trim(field, &mut d);
    let lead_inv = field.inv(*d.last().expect("nonzero divisor")).expect("field");
    while r.len() >= d.len() {
        let shift = r.len() - d.len();
        let c = field.mul(*r.last().unwrap(), lead_inv);
        for (i, &x) in d.iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(c, x));
        }
        trim(field, &mut r);
    }
    r
}

/// Monic gcd; the gcd of two zero polynomials is empty.
pub fn gcd<K: Field>(field: &K, a: &[K::Elt], b: &[K::Elt]) -> Vec<K::Elt> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(field, &mut a);
    trim(field, &mut b);
    while !b.is_empty() {
        let r = rem(field, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = field.inv(lead).unwrap();
        for c in a.iter_mut() {
            *c = field.mul(*c, inv);
        }
    }
    a
}

/// Squarefree over a finite (hence perfect) field iff gcd(f, f') = 1.
pub fn is_squarefree<K: Field>(field: &K, f: &[K::Elt]) -> bool {
    let d = derivative(field, f);
    gcd(field, f, &d).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    #[test]
    fn squarefree_checks() {
        let f = PrimeField::new(5).unwrap();
        // x^2 - 1 = (x-1)(x+1)
        assert!(is_squarefree(&f, &[4, 0, 1]));
        // (x-1)^2 = x^2 - 2x + 1
        assert!(!is_squarefree(&f, &[1, 3, 1]));
        // x^5 - 1 = (x-1)^5 in char 5: derivative vanishes
        assert!(!is_squarefree(&f, &[4, 0, 0, 0, 0, 1]));
        assert_eq!(gcd(&f, &[4, 0, 1], &[1, 4]), vec![4, 1]);
    }
}
