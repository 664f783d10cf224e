//! 2x2 matrices over truncated algebras taken up to unit scalars, the two
//! explicit embeddings of E[2] into PGL_2, and a finite-field scan for
//! fixed points on P^1.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{projective_points, AlgebraError, Exponents, Field, Gf, TruncElt, TruncatedAlgebra};
use crate::groupscheme::{e2_group_law, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Pgl2Error {
    #[error("determinant {0} is not a unit")]
    NotInPGL2(String),
    #[error("invalid group point: {0}")]
    InvalidGroupPoint(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// [[a, b], [c, d]] with unit determinant, compared up to a unit scalar.
#[derive(Clone, PartialEq)]
pub struct ProjMat2 {
    entries: [TruncElt; 4],
}

impl ProjMat2 {
    pub fn new(a: TruncElt, b: TruncElt, c: TruncElt, d: TruncElt) -> Result<Self, Pgl2Error> {
        let det = a.try_mul(&d)?.try_sub(&b.try_mul(&c)?)?;
        if !det.is_unit() {
            return Err(Pgl2Error::NotInPGL2(det.to_string()));
        }
        Ok(Self { entries: [a, b, c, d] })
    }

    pub fn identity(algebra: &Arc<TruncatedAlgebra>) -> Self {
        let one = TruncElt::one(algebra);
        let zero = TruncElt::zero(algebra);
        Self { entries: [one.clone(), zero.clone(), zero, one] }
    }

    /// The swap [[0, 1], [1, 0]].
    pub fn swap(algebra: &Arc<TruncatedAlgebra>) -> Self {
        let one = TruncElt::one(algebra);
        let zero = TruncElt::zero(algebra);
        Self { entries: [zero.clone(), one.clone(), one, zero] }
    }

    pub fn from_ints(algebra: &Arc<TruncatedAlgebra>, m: [[i64; 2]; 2]) -> Result<Self, Pgl2Error> {
        let e = |v| TruncElt::constant(algebra, v);
        Self::new(e(m[0][0]), e(m[0][1]), e(m[1][0]), e(m[1][1]))
    }

    pub fn entries(&self) -> &[TruncElt; 4] {
        &self.entries
    }

    pub fn algebra(&self) -> &Arc<TruncatedAlgebra> {
        self.entries[0].algebra()
    }

    pub fn det(&self) -> TruncElt {
        let [a, b, c, d] = &self.entries;
        let ad = a.try_mul(d).expect("entries share an algebra");
        ad.try_sub(&b.try_mul(c).expect("entries share an algebra")).expect("entries share an algebra")
    }

    pub fn proj_mul(&self, other: &Self) -> Result<Self, Pgl2Error> {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        let dot = |x: &TruncElt, y: &TruncElt, z: &TruncElt, w: &TruncElt| -> Result<TruncElt, AlgebraError> {
            x.try_mul(y)?.try_add(&z.try_mul(w)?)
        };
        Ok(Self { entries: [dot(a, e, b, g)?, dot(a, f, b, h)?, dot(c, e, d, g)?, dot(c, f, d, h)?] })
    }

    /// Multiplies every entry by `u`, which must be a unit.
    pub fn scale(&self, u: &TruncElt) -> Result<Self, Pgl2Error> {
        if !u.is_unit() {
            return Err(Pgl2Error::NotInPGL2(format!("scalar {u} is not a unit")));
        }
        let mut out = self.entries.clone();
        for e in out.iter_mut() {
            *e = e.try_mul(u)?;
        }
        Ok(Self { entries: out })
    }

    /// Whether self = u * other for some unit u. The algebras are local, so
    /// `other` has a unit entry, and u is forced by that entry.
    pub fn proj_equal(&self, other: &Self) -> Result<bool, Pgl2Error> {
        let idx = other
            .entries
            .iter()
            .position(TruncElt::is_unit)
            .ok_or_else(|| Pgl2Error::NotInPGL2(other.det().to_string()))?;
        let u = self.entries[idx].try_mul(&other.entries[idx].invert()?)?;
        if !u.is_unit() {
            return Ok(false);
        }
        for (x, y) in self.entries.iter().zip(&other.entries) {
            if *x != y.try_mul(&u)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rescales so that the first unit entry (in a, b, c, d order) is 1.
    pub fn normalized(&self) -> Self {
        let idx = self.entries.iter().position(TruncElt::is_unit).expect("unit determinant");
        let inv = self.entries[idx].invert().expect("unit entry");
        self.scale(&inv).expect("inverse of a unit is a unit")
    }
}

impl fmt::Display for ProjMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl fmt::Debug for ProjMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjMat2{self}")
    }
}

/// An R-point of Z/2 x mu_2: (eps, t) with eps in {0, 1} and t^2 = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct OrdinaryPoint {
    pub eps: u8,
    pub t: TruncElt,
}

impl OrdinaryPoint {
    pub fn new(eps: u8, t: TruncElt) -> Result<Self, Pgl2Error> {
        if eps > 1 {
            return Err(Pgl2Error::InvalidGroupPoint(format!("eps = {eps} is not in Z/2")));
        }
        let one = TruncElt::one(t.algebra());
        if t.pow(2) != one {
            return Err(Pgl2Error::InvalidGroupPoint(format!("t^2 != 1 for t = {t}")));
        }
        Ok(Self { eps, t })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Pgl2Error> {
        Ok(Self { eps: (self.eps + other.eps) % 2, t: self.t.try_mul(&other.t)? })
    }
}

/// Ordinary E[2] = Z/2 x mu_2: t -> diag(t, 1), the generator of Z/2 -> swap.
pub fn embed_ordinary(eps: u8, t: &TruncElt) -> Result<ProjMat2, Pgl2Error> {
    let point = OrdinaryPoint::new(eps, t.clone())?;
    embed_ordinary_point(&point)
}

pub fn embed_ordinary_point(g: &OrdinaryPoint) -> Result<ProjMat2, Pgl2Error> {
    let alg = g.t.algebra();
    let zero = TruncElt::zero(alg);
    let diag = ProjMat2::new(g.t.clone(), zero.clone(), zero, TruncElt::one(alg))?;
    if g.eps == 1 {
        diag.proj_mul(&ProjMat2::swap(alg))
    } else {
        Ok(diag)
    }
}

/// Supersingular E[2] = Spec k[t]/(t^4): t -> [[1, t^2], [t, 1 + t^3]].
pub fn embed_supersingular(t: &TruncElt) -> Result<ProjMat2, Pgl2Error> {
    let alg = t.algebra();
    if alg.p() != 2 {
        return Err(Pgl2Error::InvalidGroupPoint(format!("supersingular E[2] needs p = 2, got p = {}", alg.p())));
    }
    if !t.pow(4).is_zero() {
        return Err(Pgl2Error::InvalidGroupPoint(format!("t^4 != 0 for t = {t}")));
    }
    let one = TruncElt::one(alg);
    ProjMat2::new(one.clone(), t.pow(2), t.clone(), one.try_add(&t.pow(3))?)
}

/// Outcome of the supersingular homomorphism check on the generic pair (t, s).
#[derive(Clone, Debug)]
pub struct SupersingularHomCheck {
    /// embed(t) * embed(s) scaled by 1 + t^2 s.
    pub scaled_product: ProjMat2,
    /// embed(t (+) s).
    pub image_of_sum: ProjMat2,
    pub exact_match: bool,
}

/// Multiplies embed(t) by embed(s), rescales by 1 + t^2 s and compares
/// entrywise with embed(t (+) s).
pub fn supersingular_hom_check(t: &TruncElt, s: &TruncElt) -> Result<SupersingularHomCheck, Pgl2Error> {
    let prod = embed_supersingular(t)?.proj_mul(&embed_supersingular(s)?)?;
    let scalar = TruncElt::one(t.algebra()).try_add(&t.pow(2).try_mul(s)?)?;
    let scaled = prod.scale(&scalar)?;
    let sum = embed_supersingular(&e2_group_law(t, s)?)?;
    let exact = scaled == sum;
    Ok(SupersingularHomCheck { scaled_product: scaled, image_of_sum: sum, exact_match: exact })
}

/// A fixed point on P^1, recorded in its smallest field of definition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FixedPoint {
    pub q: u64,
    pub coords: [u32; 2],
    pub rendered: String,
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over F_{}", self.rendered, self.q)
    }
}

/// Points [a:b] of P^1(F_q), q = p^k <= q_max, fixed by every matrix over the
/// whole truncated algebra: the cross product a*(c a + d b) - b*(a a + b b)
/// must vanish coefficientwise in every monomial of the algebra.
pub fn scan_fixed_points(matrices: &[ProjMat2], p: u64, q_max: u64) -> Result<Vec<FixedPoint>, Pgl2Error> {
    if let Some(m) = matrices.iter().find(|m| m.algebra().p() != p) {
        return Err(AlgebraError::ModulusMismatch { left: m.algebra().p(), right: p }.into());
    }
    let mut found = BTreeSet::new();
    let mut k = 1u32;
    while p.checked_pow(k).is_some_and(|q| q <= q_max) {
        let field = Gf::new(p, k)?;
        // Every monomial of every entry, with its four coefficients.
        let mut tables: Vec<Vec<[u32; 4]>> = Vec::with_capacity(matrices.len());
        for m in matrices {
            let mut monos: BTreeSet<&Exponents> = BTreeSet::new();
            for e in m.entries() {
                monos.extend(e.poly().terms().map(|(x, _)| x));
            }
            let rows = monos
                .into_iter()
                .map(|x| {
                    let mut row = [0u32; 4];
                    for (slot, e) in row.iter_mut().zip(m.entries()) {
                        *slot = field.from_i64(e.poly().coeff(x) as i64);
                    }
                    row
                })
                .collect();
            tables.push(rows);
        }
        for pt in projective_points(&field, 1) {
            let (a, b) = (pt[0], pt[1]);
            if !minimal_degree_is(&field, &pt, k) {
                continue;
            }
            let ab = field.mul(a, b);
            let aa = field.mul(a, a);
            let bb = field.mul(b, b);
            let fixed = tables.iter().all(|rows| {
                rows.iter().all(|[m11, m12, m21, m22]| {
                    // (m11 a + m12 b) b - (m21 a + m22 b) a
                    let lhs = field.add(field.mul(*m11, ab), field.mul(*m12, bb));
                    let rhs = field.add(field.mul(*m21, aa), field.mul(*m22, ab));
                    lhs == rhs
                })
            });
            if fixed {
                let rendered = format!("[{}:{}]", field.render(a), field.render(b));
                found.insert(FixedPoint { q: field.q(), coords: [a, b], rendered });
            }
        }
        k += 1;
    }
    Ok(found.into_iter().collect())
}

/// Whether a normalised point has F_{p^k} as its smallest field of definition.
pub(crate) fn minimal_degree_is(field: &Gf, pt: &[u32], k: u32) -> bool {
    (1..k).filter(|j| k.is_multiple_of(*j)).all(|j| {
        !pt.iter().all(|&x| {
            let mut y = x;
            for _ in 0..j {
                y = field.frobenius(y);
            }
            y == x
        })
    })
}

/// The generic algebra F_2[e, f]/(e^2, f^2) with t = 1 + e and s = 1 + f,
/// the coordinate ring of mu_2 x mu_2 in characteristic 2. For odd p, mu_2
/// is étale and t, s run over {1, -1}; we use the algebra F_p (no variables).
pub fn generic_mu2_pair(p: u64) -> Result<Vec<(TruncElt, TruncElt)>, Pgl2Error> {
    if p == 2 {
        let alg = TruncatedAlgebra::new(2, &[("e", 2), ("f", 2)])?;
        let one = TruncElt::one(&alg);
        let t = one.try_add(&TruncElt::var(&alg, "e")?)?;
        let s = one.try_add(&TruncElt::var(&alg, "f")?)?;
        Ok(vec![(t, s)])
    } else {
        let alg = TruncatedAlgebra::new(p, &[])?;
        let vals = [TruncElt::constant(&alg, 1), TruncElt::constant(&alg, -1)];
        let mut out = Vec::new();
        for t in &vals {
            for s in &vals {
                out.push((t.clone(), s.clone()));
            }
        }
        Ok(out)
    }
}

/// One of the 16 products checked for the ordinary embedding.
#[derive(Clone, Debug)]
pub struct OrdinaryPairCheck {
    pub g: String,
    pub h: String,
    pub holds: bool,
}

/// embed(g) embed(h) = embed(gh) up to scalar, for g in {(eps, 1), (eps, t)}
/// and h in {(eps, 1), (eps, s)} with t, s independent generic points of mu_2.
pub fn ordinary_hom_check(t: &TruncElt, s: &TruncElt) -> Result<Vec<OrdinaryPairCheck>, Pgl2Error> {
    let one = TruncElt::one(t.algebra());
    let mut gs = Vec::new();
    let mut hs = Vec::new();
    for eps in 0..2u8 {
        gs.push((format!("({eps},1)"), OrdinaryPoint::new(eps, one.clone())?));
        gs.push((format!("({eps},t)"), OrdinaryPoint::new(eps, t.clone())?));
        hs.push((format!("({eps},1)"), OrdinaryPoint::new(eps, one.clone())?));
        hs.push((format!("({eps},s)"), OrdinaryPoint::new(eps, s.clone())?));
    }
    let mut out = Vec::new();
    for (gn, g) in &gs {
        for (hn, h) in &hs {
            let lhs = embed_ordinary_point(g)?.proj_mul(&embed_ordinary_point(h)?)?;
            let rhs = embed_ordinary_point(&g.mul(h)?)?;
            out.push(OrdinaryPairCheck { g: gn.clone(), h: hn.clone(), holds: lhs.proj_equal(&rhs)? });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2t() -> Arc<TruncatedAlgebra> {
        TruncatedAlgebra::new(2, &[("t", 4)]).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let alg = TruncatedAlgebra::new(5, &[("t", 3)]).unwrap();
        let t = TruncElt::var(&alg, "t").unwrap();
        let one = TruncElt::one(&alg);
        let m = ProjMat2::new(one.clone(), t.clone(), t.pow(2), one.try_add(&t).unwrap()).unwrap();
        assert_eq!(m.proj_mul(&ProjMat2::identity(&alg)).unwrap(), m);
        assert_eq!(ProjMat2::identity(&alg).proj_mul(&m).unwrap(), m);
    }

    #[test]
    fn scalar_multiples_are_equal() {
        let alg = TruncatedAlgebra::new(5, &[]).unwrap();
        let id = ProjMat2::identity(&alg);
        let two = ProjMat2::from_ints(&alg, [[2, 0], [0, 2]]).unwrap();
        assert!(id.proj_equal(&two).unwrap());
        let other = ProjMat2::from_ints(&alg, [[2, 0], [0, 1]]).unwrap();
        assert!(!id.proj_equal(&other).unwrap());
    }

    #[test]
    fn singular_matrices_rejected() {
        let alg = f2t();
        let t = TruncElt::var(&alg, "t").unwrap();
        let one = TruncElt::one(&alg);
        // det = t^2 - 1 is a unit
        assert!(ProjMat2::new(t.clone(), one.clone(), one.clone(), t.clone()).is_ok());
        assert!(matches!(ProjMat2::new(t.clone(), one.clone(), t.clone(), one.clone()), Err(Pgl2Error::NotInPGL2(_))));
    }

    #[test]
    fn swap_conjugation_identity() {
        // [[0, t], [1, 0]] = [[0, 1], [t, 0]] in PGL_2 when t^2 = 1.
        for (t, _) in generic_mu2_pair(2).unwrap().into_iter().chain(generic_mu2_pair(5).unwrap()) {
            let alg = t.algebra().clone();
            let zero = TruncElt::zero(&alg);
            let one = TruncElt::one(&alg);
            let m = ProjMat2::new(zero.clone(), t.clone(), one.clone(), zero.clone()).unwrap();
            let n = ProjMat2::new(zero.clone(), one, t.clone(), zero).unwrap();
            assert!(m.proj_equal(&n).unwrap());
        }
    }

    #[test]
    fn ordinary_embedding_values() {
        let (t, _) = generic_mu2_pair(2).unwrap().remove(0);
        let alg = t.algebra().clone();
        let one = TruncElt::one(&alg);
        assert_eq!(embed_ordinary(0, &one).unwrap(), ProjMat2::identity(&alg));
        let m = embed_ordinary(1, &t).unwrap();
        let zero = TruncElt::zero(&alg);
        assert_eq!(m, ProjMat2::new(zero.clone(), t.clone(), one, zero).unwrap());
        let e = TruncElt::var(&alg, "e").unwrap();
        assert!(matches!(embed_ordinary(0, &e), Err(Pgl2Error::InvalidGroupPoint(_))));
    }

    #[test]
    fn ordinary_embedding_is_a_homomorphism() {
        for p in [2, 3, 5] {
            for (t, s) in generic_mu2_pair(p).unwrap() {
                let checks = ordinary_hom_check(&t, &s).unwrap();
                assert_eq!(checks.len(), 16);
                assert!(checks.iter().all(|c| c.holds), "p = {p}: {checks:?}");
            }
        }
    }

    #[test]
    fn ordinary_generators_commute() {
        let (t, _) = generic_mu2_pair(2).unwrap().remove(0);
        let alg = t.algebra().clone();
        let diag = embed_ordinary(0, &t).unwrap();
        let swap = ProjMat2::swap(&alg);
        let ab = diag.proj_mul(&swap).unwrap();
        let ba = swap.proj_mul(&diag).unwrap();
        assert!(ab.proj_equal(&ba).unwrap());
    }

    #[test]
    fn supersingular_homomorphism_matches_closed_form() {
        let alg = TruncatedAlgebra::new(2, &[("t", 4), ("s", 4)]).unwrap();
        let t = TruncElt::var(&alg, "t").unwrap();
        let s = TruncElt::var(&alg, "s").unwrap();
        let check = supersingular_hom_check(&t, &s).unwrap();
        assert!(check.exact_match);
        // (1, t^2+s^2; t+s+t^2 s^2, 1+t^3+s t^2+s^2 t+s^3), built by hand.
        let one = TruncElt::one(&alg);
        let add = |a: &TruncElt, b: &TruncElt| a.try_add(b).unwrap();
        let mul = |a: &TruncElt, b: &TruncElt| a.try_mul(b).unwrap();
        let b = add(&t.pow(2), &s.pow(2));
        let c = add(&add(&t, &s), &mul(&t.pow(2), &s.pow(2)));
        let d = add(&add(&add(&one, &t.pow(3)), &mul(&s, &t.pow(2))), &add(&mul(&s.pow(2), &t), &s.pow(3)));
        let expected = ProjMat2::new(one.clone(), b, c, d).unwrap();
        assert_eq!(check.scaled_product, expected);
    }

    #[test]
    fn supersingular_square_is_trivial() {
        let alg = f2t();
        let t = TruncElt::var(&alg, "t").unwrap();
        let m = embed_supersingular(&t).unwrap();
        assert!(m.proj_mul(&m).unwrap().proj_equal(&ProjMat2::identity(&alg)).unwrap());
        assert_eq!(embed_supersingular(&TruncElt::zero(&alg)).unwrap(), ProjMat2::identity(&alg));
    }

    #[test]
    fn supersingular_rejects_bad_points() {
        let alg = f2t();
        assert!(embed_supersingular(&TruncElt::one(&alg)).is_err());
        let odd = TruncatedAlgebra::new(3, &[("t", 4)]).unwrap();
        let t = TruncElt::var(&odd, "t").unwrap();
        assert!(embed_supersingular(&t).is_err());
    }

    #[test]
    fn embeddings_are_injective_on_generic_points() {
        let alg = TruncatedAlgebra::new(2, &[("t", 4), ("s", 4)]).unwrap();
        let t = TruncElt::var(&alg, "t").unwrap();
        let s = TruncElt::var(&alg, "s").unwrap();
        let pts = [TruncElt::zero(&alg), t.clone(), s.clone(), e2_group_law(&t, &s).unwrap()];
        for (i, x) in pts.iter().enumerate() {
            for (j, y) in pts.iter().enumerate() {
                let eq = embed_supersingular(x).unwrap().proj_equal(&embed_supersingular(y).unwrap()).unwrap();
                assert_eq!(eq, i == j, "{x} vs {y}");
            }
        }
        let (t, s) = generic_mu2_pair(2).unwrap().remove(0);
        let one = TruncElt::one(t.algebra());
        let ord = [(0, one.clone()), (1, one), (0, t.clone()), (1, t), (0, s.clone()), (1, s)];
        for (i, (ea, a)) in ord.iter().enumerate() {
            for (j, (eb, b)) in ord.iter().enumerate() {
                let eq = embed_ordinary(*ea, a).unwrap().proj_equal(&embed_ordinary(*eb, b).unwrap()).unwrap();
                assert_eq!(eq, i == j);
            }
        }
    }

    #[test]
    fn diagonal_action_fixes_zero_and_infinity() {
        let (t, _) = generic_mu2_pair(2).unwrap().remove(0);
        let m = embed_ordinary(0, &t).unwrap();
        let pts = scan_fixed_points(&[m], 2, 8).unwrap();
        let coords: Vec<_> = pts.iter().map(|p| p.coords).collect();
        assert_eq!(coords, vec![[0, 1], [1, 0]]);
    }

    #[test]
    fn joint_ordinary_action_has_no_fixed_point() {
        for p in [2u64, 3] {
            let (t, _) = generic_mu2_pair(p).unwrap().into_iter().last().unwrap();
            let alg = t.algebra().clone();
            let ms = [embed_ordinary(0, &t).unwrap(), ProjMat2::swap(&alg)];
            assert!(scan_fixed_points(&ms, p, p.pow(3)).unwrap().is_empty());
        }
    }

    #[test]
    fn supersingular_action_has_no_fixed_point() {
        let alg = f2t();
        let t = TruncElt::var(&alg, "t").unwrap();
        let m = embed_supersingular(&t).unwrap();
        assert!(scan_fixed_points(&[m], 2, 8).unwrap().is_empty());
    }

    #[test]
    fn empty_input_fixes_everything() {
        let pts = scan_fixed_points(&[], 2, 4).unwrap();
        // P^1(F_2) has 3 points, P^1(F_4) has 2 more.
        assert_eq!(pts.len(), 5);
    }

    fn small_matrix() -> impl Strategy<Value = [i64; 12]> {
        proptest::array::uniform12(0i64..3)
    }

    fn build(alg: &Arc<TruncatedAlgebra>, c: [i64; 12]) -> Option<ProjMat2> {
        let t = TruncElt::var(alg, "t").unwrap();
        let e = |i: usize| {
            TruncElt::constant(alg, c[3 * i])
                .try_add(&t.scale(c[3 * i + 1]))
                .unwrap()
                .try_add(&t.pow(2).scale(c[3 * i + 2]))
                .unwrap()
        };
        ProjMat2::new(e(0), e(1), e(2), e(3)).ok()
    }

    proptest! {
        #[test]
        fn proj_equal_is_an_equivalence(a in small_matrix(), u in 1i64..3, v in 0i64..3) {
            let alg = TruncatedAlgebra::new(3, &[("t", 3)]).unwrap();
            if let Some(m) = build(&alg, a) {
                let t = TruncElt::var(&alg, "t").unwrap();
                let unit = TruncElt::constant(&alg, u).try_add(&t.scale(v)).unwrap();
                let n = m.scale(&unit).unwrap();
                let k = n.scale(&unit).unwrap();
                prop_assert!(m.proj_equal(&m).unwrap());
                prop_assert!(m.proj_equal(&n).unwrap());
                prop_assert!(n.proj_equal(&m).unwrap());
                prop_assert!(n.proj_equal(&k).unwrap() && m.proj_equal(&k).unwrap());
            }
        }

        #[test]
        fn proj_mul_is_associative(a in small_matrix(), b in small_matrix(), c in small_matrix()) {
            let alg = TruncatedAlgebra::new(3, &[("t", 3)]).unwrap();
            if let (Some(x), Some(y), Some(z)) = (build(&alg, a), build(&alg, b), build(&alg, c)) {
                let l = x.proj_mul(&y).unwrap().proj_mul(&z).unwrap();
                let r = x.proj_mul(&y.proj_mul(&z).unwrap()).unwrap();
                prop_assert_eq!(l, r);
            }
        }
    }
}
