//! Finite commutative group schemes built from a few atoms, their
//! connected-étale split, character groups, and the group law of the
//! supersingular 2-torsion.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{is_prime, AlgebraError, TruncElt};

/// Upper bound on every atom order.
pub const MAX_ATOM_ORDER: u64 = 1 << 16;
/// Upper bound on |G| for anything that enumerates elements or characters.
pub const MAX_ENUMERATED_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("group scheme is not diagonalizable")]
    NotDiagonalizable,
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid group point: {0}")]
    InvalidGroupPoint(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Atom {
    /// The constant group Z/nZ.
    Constant { n: u64 },
    /// mu_n, the n-th roots of unity.
    Mu { n: u64 },
    /// alpha_{p^r}, kernel of the r-th Frobenius on G_a.
    Alpha { r: u32 },
    /// 2-torsion of a supersingular elliptic curve in characteristic 2.
    SsE2,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Constant { n } => write!(f, "Z/{n}"),
            Atom::Mu { n } => write!(f, "mu_{n}"),
            Atom::Alpha { r } => write!(f, "alpha_p^{r}"),
            Atom::SsE2 => write!(f, "E[2]_ss"),
        }
    }
}

/// p-part and prime-to-p part of n.
fn split_p(n: u64, p: u64) -> (u64, u64) {
    let mut pp = 1;
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
        pp *= p;
    }
    (pp, rest)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Inverse of `a` modulo `n` (n >= 1) when gcd(a, n) = 1.
pub fn inverse_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(n as i128) as u64)
}

/// A finite group scheme over an algebraically closed field of
/// characteristic p, as an ordered product of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSchemeDesc {
    p: u64,
    atoms: Vec<Atom>,
}

impl GroupSchemeDesc {
    pub fn new(p: u64, atoms: Vec<Atom>) -> Result<Self, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::InvalidDescriptor(format!("characteristic {p} is not prime")));
        }
        for a in &atoms {
            match *a {
                Atom::SsE2 if p != 2 => {
                    return Err(GroupError::InvalidDescriptor("supersingular E[2] atom requires p = 2".into()))
                }
                Atom::Constant { n } | Atom::Mu { n } if n == 0 || n > MAX_ATOM_ORDER => {
                    return Err(GroupError::InvalidDescriptor(format!(
                        "atom {a} must have order in [1, {MAX_ATOM_ORDER}]"
                    )))
                }
                Atom::Alpha { r } if r == 0 || (p as u128).pow(r) > MAX_ATOM_ORDER as u128 => {
                    return Err(GroupError::InvalidDescriptor(format!(
                        "alpha_{{p^r}} needs r >= 1 and p^r <= {MAX_ATOM_ORDER}"
                    )))
                }
                _ => {}
            }
        }
        Ok(Self { p, atoms })
    }

    pub fn mu(p: u64, n: u64) -> Result<Self, GroupError> {
        Self::new(p, vec![Atom::Mu { n }])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_order(&self, a: &Atom) -> u64 {
        match *a {
            Atom::Constant { n } | Atom::Mu { n } => n,
            Atom::Alpha { r } => self.p.pow(r),
            Atom::SsE2 => 4,
        }
    }

    pub fn order(&self) -> u64 {
        self.atoms.iter().map(|a| self.atom_order(a)).product()
    }

    /// (|G^0|, |pi_0(G)|).
    pub fn connected_etale_split(&self) -> (u64, u64) {
        self.atoms.iter().fold((1, 1), |(c, e), a| match *a {
            Atom::Constant { n } => (c, e * n),
            Atom::Mu { n } => {
                let (pp, rest) = split_p(n, self.p);
                (c * pp, e * rest)
            }
            Atom::Alpha { .. } | Atom::SsE2 => (c * self.atom_order(a), e),
        })
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.connected_etale_split().1 == 1
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.atoms.iter().all(|a| match *a {
            Atom::Mu { .. } => true,
            Atom::Constant { n } => gcd(n, self.p) == 1,
            _ => false,
        })
    }

    /// Constant groups, with mu_n (n prime to p) counted as constant.
    pub fn is_etale(&self) -> bool {
        self.connected_etale_split().0 == 1
    }

    pub fn character_group(&self) -> Result<CharacterGroup, GroupError> {
        if !self.is_diagonalizable() {
            return Err(GroupError::NotDiagonalizable);
        }
        Ok(CharacterGroup { moduli: self.atoms.iter().map(|a| self.atom_order(a)).collect() })
    }

    /// All characters in lexicographic residue order.
    pub fn characters(&self) -> Result<Vec<Character>, GroupError> {
        let group = self.character_group()?;
        if group.order() > MAX_ENUMERATED_ORDER {
            return Err(GroupError::InvalidDescriptor(format!("|G| = {} is too large to enumerate", group.order())));
        }
        Ok(group.elements().collect())
    }
}

impl fmt::Display for GroupSchemeDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A character of a diagonalizable group: one residue per atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character {
    pub residues: Vec<u64>,
}

impl Character {
    pub fn new(residues: Vec<u64>) -> Self {
        Self { residues }
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The finite abelian group prod Z/n_i Z. It describes X*(G) and, with the
/// same moduli, the dual group Hom(X*(G), Q/Z) whose cyclic subgroups are
/// the cyclic subgroup schemes of G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterGroup {
    moduli: Vec<u64>,
}

impl CharacterGroup {
    pub fn new(moduli: Vec<u64>) -> Self {
        Self { moduli }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn zero(&self) -> Character {
        Character::new(vec![0; self.moduli.len()])
    }

    pub fn contains(&self, c: &Character) -> bool {
        c.residues.len() == self.moduli.len() && c.residues.iter().zip(&self.moduli).all(|(r, n)| r < n)
    }

    /// Reduces residues into range; fails on a length mismatch.
    pub fn normalize(&self, c: &Character) -> Result<Character, GroupError> {
        if c.residues.len() != self.moduli.len() {
            return Err(GroupError::InvalidWeight(format!(
                "character {c} has {} residues, group has {} factors",
                c.residues.len(),
                self.moduli.len()
            )));
        }
        Ok(Character::new(c.residues.iter().zip(&self.moduli).map(|(r, n)| r % n).collect()))
    }

    pub fn add(&self, a: &Character, b: &Character) -> Character {
        Character::new(a.residues.iter().zip(&b.residues).zip(&self.moduli).map(|((x, y), n)| (x + y) % n).collect())
    }

    pub fn neg(&self, a: &Character) -> Character {
        Character::new(a.residues.iter().zip(&self.moduli).map(|(x, n)| (n - x) % n).collect())
    }

    pub fn scale(&self, a: &Character, k: u64) -> Character {
        Character::new(
            a.residues.iter().zip(&self.moduli).map(|(x, n)| ((*x as u128 * k as u128) % *n as u128) as u64).collect(),
        )
    }

    /// Order of an element.
    pub fn element_order(&self, a: &Character) -> u64 {
        a.residues.iter().zip(&self.moduli).fold(1, |acc, (x, n)| lcm(acc, n / gcd(*x, *n)))
    }

    /// Elements in lexicographic residue order.
    pub fn elements(&self) -> impl Iterator<Item = Character> + '_ {
        let total = self.order();
        (0..total).map(move |mut code| {
            let mut r = vec![0; self.moduli.len()];
            for (slot, n) in r.iter_mut().zip(&self.moduli).rev() {
                *slot = code % n;
                code /= n;
            }
            Character::new(r)
        })
    }

    /// Pairing <lambda, h> in Q/Z, scaled by `n` (which must be a multiple
    /// of the order of h): returns n * <lambda, h> mod n.
    pub fn pairing_scaled(&self, lambda: &Character, h: &Character, n: u64) -> u64 {
        let mut acc: u128 = 0;
        for ((l, x), m) in lambda.residues.iter().zip(&h.residues).zip(&self.moduli) {
            // x / m has denominator dividing n, so x * n / m is an integer.
            let scaled = (*x as u128 * n as u128) / *m as u128;
            acc = (acc + (*l as u128 % n as u128) * (scaled % n as u128)) % n as u128;
        }
        acc as u64
    }

    /// Canonical generator of the cyclic subgroup generated by `h`: the
    /// lexicographically smallest u*h over units u mod ord(h).
    pub fn canonical_generator(&self, h: &Character) -> Character {
        let n = self.element_order(h);
        (1..=n.max(1)).filter(|&u| gcd(u, n) == 1).map(|u| self.scale(h, u)).min().unwrap_or_else(|| h.clone())
    }

    /// Canonical generators of all cyclic subgroups of order n.
    pub fn cyclic_subgroups_of_order(&self, n: u64) -> Vec<Character> {
        let mut gens: Vec<Character> =
            self.elements().filter(|h| self.element_order(h) == n).map(|h| self.canonical_generator(&h)).collect();
        gens.sort();
        gens.dedup();
        gens
    }
}

/// The cyclic stabilizer H of order n of a non-free orbit, given by a
/// generator h of the matching cyclic subgroup of the dual of X*(G).
/// Restriction of characters to H is lambda -> n * <lambda, h> in Z/n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilizer {
    order: u64,
    generator: Character,
}

impl Stabilizer {
    pub fn new(group: &CharacterGroup, order: u64, generator: Character) -> Result<Self, GroupError> {
        let generator = group.normalize(&generator)?;
        let actual = group.element_order(&generator);
        if actual != order {
            return Err(GroupError::InvalidWeight(format!(
                "stabilizer generator {generator} has order {actual}, expected {order}"
            )));
        }
        Ok(Self { order, generator })
    }

    /// The unique cyclic subgroup of order n, when there is exactly one.
    pub fn unique(group: &CharacterGroup, order: u64) -> Result<Self, GroupError> {
        let subs = group.cyclic_subgroups_of_order(order);
        match subs.len() {
            1 => Ok(Self { order, generator: subs.into_iter().next().unwrap() }),
            0 => Err(GroupError::InvalidWeight(format!("no cyclic subgroup of order {order}"))),
            k => Err(GroupError::InvalidWeight(format!(
                "{k} cyclic subgroups of order {order}; give the stabilizer explicitly"
            ))),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator(&self) -> &Character {
        &self.generator
    }

    pub fn restrict(&self, group: &CharacterGroup, lambda: &Character) -> u64 {
        group.pairing_scaled(lambda, &self.generator, self.order)
    }
}

/// The unique m in [1, n] with lambda = m * nu in Z/n. Both arguments are
/// residues of characters already restricted to the cyclic stabilizer.
/// m = n exactly when lambda restricts trivially.
pub fn m_of(lambda: u64, nu: u64, n: u64) -> Result<u64, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidWeight("stabilizer order must be >= 1".into()));
    }
    let nu_inv = inverse_mod(nu % n, n)
        .ok_or_else(|| GroupError::InvalidWeight(format!("weight {nu} does not generate Z/{n}")))?;
    let m = ((lambda % n) as u128 * nu_inv as u128 % n as u128) as u64;
    Ok(if m == 0 { n } else { m })
}

/// Group law on E[2] of a supersingular curve in characteristic 2, written
/// on the coordinate ring k[t]/(t^4): t (+) s = t + s + t^2 s^2.
pub fn e2_group_law(t: &TruncElt, s: &TruncElt) -> Result<TruncElt, GroupError> {
    for (name, x) in [("t", t), ("s", s)] {
        if x.algebra().p() != 2 {
            return Err(GroupError::InvalidGroupPoint(format!(
                "{name} lives over F_{}; the law needs characteristic 2",
                x.algebra().p()
            )));
        }
        if !x.pow(4).is_zero() {
            return Err(GroupError::InvalidGroupPoint(format!("{name}^4 != 0 for {name} = {x}")));
        }
    }
    let t2s2 = t.pow(2).try_mul(&s.pow(2))?;
    Ok(t.try_add(s)?.try_add(&t2s2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TruncatedAlgebra;
    use proptest::prelude::*;

    #[test]
    fn orders_and_splits() {
        let g = GroupSchemeDesc::new(2, vec![Atom::Mu { n: 4 }, Atom::Constant { n: 3 }]).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.connected_etale_split(), (4, 3));
        assert!(g.is_diagonalizable());

        let ss = GroupSchemeDesc::new(2, vec![Atom::SsE2]).unwrap();
        assert_eq!(ss.order(), 4);
        assert_eq!(ss.connected_etale_split(), (4, 1));
        assert!(ss.is_infinitesimal());
        assert!(!ss.is_diagonalizable());

        let c = GroupSchemeDesc::new(5, vec![Atom::Constant { n: 5 }]).unwrap();
        assert_eq!(c.connected_etale_split(), (1, 5));
        assert!(!c.is_diagonalizable());

        let a = GroupSchemeDesc::new(3, vec![Atom::Alpha { r: 2 }]).unwrap();
        assert_eq!(a.order(), 9);
        assert_eq!(a.connected_etale_split(), (9, 1));
    }

    #[test]
    fn invalid_descriptors() {
        assert!(matches!(GroupSchemeDesc::new(3, vec![Atom::SsE2]), Err(GroupError::InvalidDescriptor(_))));
        assert!(GroupSchemeDesc::new(4, vec![]).is_err());
        assert!(GroupSchemeDesc::new(2, vec![Atom::Mu { n: 0 }]).is_err());
        assert!(GroupSchemeDesc::new(2, vec![Atom::Mu { n: MAX_ATOM_ORDER + 1 }]).is_err());
    }

    #[test]
    fn character_enumeration() {
        let g = GroupSchemeDesc::mu(2, 2).unwrap();
        let cs: Vec<_> = g.characters().unwrap().into_iter().map(|c| c.residues).collect();
        assert_eq!(cs, vec![vec![0], vec![1]]);
        let g = GroupSchemeDesc::new(5, vec![Atom::Mu { n: 2 }, Atom::Mu { n: 3 }]).unwrap();
        assert_eq!(g.characters().unwrap().len(), 6);
        let a = GroupSchemeDesc::new(5, vec![Atom::Alpha { r: 1 }]).unwrap();
        assert_eq!(a.characters(), Err(GroupError::NotDiagonalizable));
    }

    #[test]
    fn m_of_examples() {
        assert_eq!(m_of(1, 1, 2), Ok(1));
        assert_eq!(m_of(0, 1, 3), Ok(3));
        for p in [3u64, 5, 7, 11] {
            // Brute-force oracle: scan m = 1..p for lambda = m * nu mod p.
            let lambda = p - 1;
            let brute = (1..=p).find(|m| *m % p == lambda % p).unwrap();
            assert_eq!(m_of(lambda, 1, p), Ok(brute));
        }
        assert!(matches!(m_of(1, 2, 4), Err(GroupError::InvalidWeight(_))));
    }

    #[test]
    fn m_of_cyclic_shift() {
        for n in 1..=25u64 {
            for nu in (1..=n).filter(|&v| gcd(v, n) == 1) {
                for lambda in 0..n {
                    let m = m_of(lambda, nu, n).unwrap();
                    let shifted = m_of(lambda + nu, nu, n).unwrap();
                    let expected = if m == n { 1 } else { m + 1 };
                    assert_eq!(shifted, expected, "n={n} nu={nu} lambda={lambda}");
                }
            }
        }
    }

    #[test]
    fn stabilizers_in_products() {
        let g = GroupSchemeDesc::new(3, vec![Atom::Mu { n: 4 }, Atom::Mu { n: 5 }]).unwrap();
        let cg = g.character_group().unwrap();
        // Z/4 x Z/5 is cyclic: one subgroup per divisor.
        let h = Stabilizer::unique(&cg, 2).unwrap();
        assert_eq!(h.generator().residues, vec![2, 0]);
        assert_eq!(h.restrict(&cg, &Character::new(vec![1, 3])), 1);
        assert_eq!(h.restrict(&cg, &Character::new(vec![2, 3])), 0);

        let klein = GroupSchemeDesc::new(3, vec![Atom::Mu { n: 2 }, Atom::Mu { n: 2 }]).unwrap();
        let cg = klein.character_group().unwrap();
        assert_eq!(cg.cyclic_subgroups_of_order(2).len(), 3);
        assert!(Stabilizer::unique(&cg, 2).is_err());
        let h = Stabilizer::new(&cg, 2, Character::new(vec![1, 1])).unwrap();
        assert_eq!(h.restrict(&cg, &Character::new(vec![1, 0])), 1);
        assert_eq!(h.restrict(&cg, &Character::new(vec![1, 1])), 0);
        assert!(Stabilizer::new(&cg, 2, Character::new(vec![0, 0])).is_err());
    }

    fn e2_algebra() -> std::sync::Arc<TruncatedAlgebra> {
        TruncatedAlgebra::new(2, &[("t", 4), ("s", 4), ("r", 4)]).unwrap()
    }

    #[test]
    fn e2_identity_and_two_torsion() {
        let a = TruncatedAlgebra::new(2, &[("t", 4)]).unwrap();
        let t = TruncElt::var(&a, "t").unwrap();
        let zero = TruncElt::zero(&a);
        assert_eq!(e2_group_law(&t, &zero).unwrap(), t);
        // t (+) t = 2t + t^4 = 0
        assert!(e2_group_law(&t, &t).unwrap().is_zero());
    }

    #[test]
    fn e2_commutative_and_associative() {
        let a = e2_algebra();
        let t = TruncElt::var(&a, "t").unwrap();
        let s = TruncElt::var(&a, "s").unwrap();
        let r = TruncElt::var(&a, "r").unwrap();
        let ts = e2_group_law(&t, &s).unwrap();
        assert_eq!(ts, e2_group_law(&s, &t).unwrap());
        let left = e2_group_law(&ts, &r).unwrap();
        let right = e2_group_law(&t, &e2_group_law(&s, &r).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn e2_rejects_units_and_odd_characteristic() {
        let a = TruncatedAlgebra::new(2, &[("t", 4)]).unwrap();
        let one = TruncElt::one(&a);
        let t = TruncElt::var(&a, "t").unwrap();
        assert!(matches!(e2_group_law(&one, &t), Err(GroupError::InvalidGroupPoint(_))));
        let b = TruncatedAlgebra::new(2, &[("t", 5)]).unwrap();
        let t5 = TruncElt::var(&b, "t").unwrap();
        assert!(matches!(e2_group_law(&t5, &t5), Err(GroupError::InvalidGroupPoint(_))));
        let c = TruncatedAlgebra::new(3, &[("t", 4)]).unwrap();
        let t3 = TruncElt::var(&c, "t").unwrap();
        assert!(matches!(e2_group_law(&t3, &t3), Err(GroupError::InvalidGroupPoint(_))));
    }

    proptest! {
        #[test]
        fn characters_form_a_group(ns in proptest::collection::vec(1u64..7, 1..4)) {
            let atoms = ns.iter().map(|&n| Atom::Mu { n }).collect();
            let g = GroupSchemeDesc::new(7, atoms).unwrap();
            let cg = g.character_group().unwrap();
            let chars = g.characters().unwrap();
            prop_assert_eq!(chars.len() as u64, g.order());
            let mut sorted = chars.clone();
            sorted.sort();
            prop_assert_eq!(&sorted, &chars);
            for a in chars.iter().step_by(3) {
                prop_assert_eq!(cg.add(a, &cg.zero()), a.clone());
                prop_assert!(cg.add(a, &cg.neg(a)).is_zero());
                for b in chars.iter().step_by(5) {
                    let s = cg.add(a, b);
                    prop_assert!(cg.contains(&s));
                    prop_assert_eq!(s, cg.add(b, a));
                }
            }
        }
    }
}
