//! Explicit curve families with a μ_m action by scaling one coordinate:
//! plane curves z^e = f(x, y) over P^1 and the space curves
//! w^{p^n} = z h(x, z) + y^{p^n} over the elliptic curve y^2 z = x(x + z)(x - z).

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{projective_points, AlgebraError, Field, Gf, MultiPoly};
use crate::groupscheme::Atom;
use crate::invariants::{EType, OrbitDatum, SurfaceData, XHint, SCHEMA_VERSION};

/// Largest number of projective points a single field scan will visit.
pub const MAX_SCAN_POINTS: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("scan over F_{q} would visit {points} points (limit {MAX_SCAN_POINTS})")]
    ScanTooLarge { q: u64, points: u64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn invalid(msg: impl Into<String>) -> FamilyError {
    FamilyError::InvalidFamily(msg.into())
}

const PLANE_VARS: [&str; 3] = ["x", "y", "z"];
const SPACE_VARS: [&str; 4] = ["x", "y", "z", "w"];

/// A root of a binary form: the point (r : 1), or (1 : 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Root {
    Finite(u32),
    Infinity,
}

/// X = {z^e = f(x, y)} in P^2 with μ_m (m | e) scaling z. The form f of
/// degree e is stored through its e distinct roots.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurveFamily {
    field: Gf,
    exponent: u64,
    group_order: u64,
    roots: Vec<Root>,
}

impl PlaneCurveFamily {
    pub fn new(field: Gf, exponent: u64, group_order: u64, roots: Vec<Root>) -> Result<Self, FamilyError> {
        if exponent == 0 || group_order < 2 || !exponent.is_multiple_of(group_order) {
            return Err(invalid(format!("group order {group_order} must be >= 2 and divide the exponent {exponent}")));
        }
        if roots.len() as u64 != exponent {
            return Err(invalid(format!("need {exponent} roots, got {}", roots.len())));
        }
        if let Some(Root::Finite(r)) = roots.iter().find(|r| matches!(r, Root::Finite(v) if *v as u64 >= field.q())) {
            return Err(invalid(format!("{r} is not an element of F_{}", field.q())));
        }
        if roots.iter().collect::<BTreeSet<_>>().len() != roots.len() {
            return Err(invalid("f must have pairwise distinct roots"));
        }
        Ok(Self { field, exponent, group_order, roots })
    }

    /// z^{p^r} = f(x, y) with μ_{p^r}.
    pub fn prime_power(field: Gf, r: u32, roots: Vec<Root>) -> Result<Self, FamilyError> {
        let e = field.p().pow(r);
        Self::new(field, e, e, roots)
    }

    /// μ_{p^r} with f = Π_{c} (x - c y) over the first p^r elements of F_{p^r}.
    pub fn standard(p: u64, r: u32) -> Result<Self, FamilyError> {
        let field = Gf::new(p, r)?;
        let roots = field.elements().map(Root::Finite).collect();
        Self::prime_power(field, r, roots)
    }

    /// Recovers the roots of a binary form of degree `exponent` in x, y.
    /// f must split over its coefficient field with distinct roots; this is
    /// how squarefreeness is checked.
    pub fn from_form(f: &MultiPoly<Gf>, exponent: u64, group_order: u64) -> Result<Self, FamilyError> {
        let field = f.field().clone();
        let (ix, iy) = match (f.var_index("x"), f.var_index("y")) {
            (Ok(ix), Ok(iy)) => (ix, iy),
            _ => return Err(invalid("f must be a form in x, y")),
        };
        let mut binary = MultiPoly::zero(&field, &["x", "y"]);
        for (e, &c) in f.terms() {
            if e.iter().enumerate().any(|(i, &d)| d > 0 && i != ix && i != iy) {
                return Err(invalid("f must only involve x and y"));
            }
            binary.add_term(vec![e[ix], e[iy]], c);
        }
        let f = binary;
        if f.is_zero() || !f.is_homogeneous() || f.total_degree() != Some(exponent as u32) {
            return Err(invalid(format!("f must be homogeneous of degree {exponent}")));
        }
        let mut roots: Vec<Root> =
            field.elements().filter(|&c| field.is_zero(f.eval(&[c, field.one()]))).map(Root::Finite).collect();
        if field.is_zero(f.eval(&[field.one(), field.zero()])) {
            roots.push(Root::Infinity);
        }
        if roots.len() as u64 != exponent {
            return Err(invalid(format!(
                "f has {} distinct roots in P^1(F_{}), so it is not squarefree and split",
                roots.len(),
                field.q()
            )));
        }
        Self::new(field, exponent, group_order, roots)
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    fn var(&self, name: &str) -> MultiPoly<Gf> {
        MultiPoly::var(&self.field, &PLANE_VARS, name).expect("plane variable")
    }

    /// f(x, y) = Π (x - c y) · y^{[∞ is a root]}.
    pub fn form(&self) -> MultiPoly<Gf> {
        let f = &self.field;
        let (x, y) = (self.var("x"), self.var("y"));
        let mut acc = MultiPoly::one(f, &PLANE_VARS);
        for r in &self.roots {
            let factor = match *r {
                Root::Finite(c) => x.try_sub(&y.scale(c)).unwrap(),
                Root::Infinity => y.clone(),
            };
            acc = acc.try_mul(&factor).unwrap();
        }
        acc
    }

    /// z^e - f(x, y).
    pub fn equation(&self) -> MultiPoly<Gf> {
        self.var("z").pow(self.exponent as u32).try_sub(&self.form()).unwrap()
    }

    /// The fixed points (x : y : 0), one per root.
    pub fn fixed_points(&self) -> Vec<[u32; 3]> {
        self.roots
            .iter()
            .map(|r| match *r {
                Root::Finite(c) => [c, 1, 0],
                Root::Infinity => [1, 0, 0],
            })
            .collect()
    }
}

/// G = μ_m over P^1, one orbit of stabilizer μ_m per root, weight 1 (z has
/// weight 1).
pub fn plane_family_to_surface(fam: &PlaneCurveFamily, e_type: EType) -> SurfaceData {
    let orbits = fam
        .roots
        .iter()
        .map(|r| OrbitDatum {
            n: fam.group_order,
            weight: Some(vec![1]),
            stabilizer: None,
            label: Some(match *r {
                Root::Finite(c) => format!("({}:1:0)", fam.field.render(c)),
                Root::Infinity => "(1:0:0)".to_string(),
            }),
        })
        .collect();
    SurfaceData {
        schema: SCHEMA_VERSION,
        p: fam.field.p(),
        group: vec![Atom::Mu { n: fam.group_order }],
        g_y: 0,
        e_type,
        orbits,
        x_hint: XHint::Unknown,
        hom_rank: 0,
    }
}

/// X = {w^{p^n} = z h(x, z) + y^{p^n}, y^2 z = x(x + z)(x - z)} in P^3 with
/// h = Π_i (a_i x + z), μ_{p^n} scaling w.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceCurveFamily {
    field: Gf,
    n: u32,
    a: Vec<u32>,
}

impl SpaceCurveFamily {
    /// Requires p >= 5 and p^n - 1 distinct a_i outside {0, 1, -1} summing
    /// to zero.
    pub fn new(field: Gf, n: u32, a: Vec<u32>) -> Result<Self, FamilyError> {
        let fam = Self::unchecked(field, n, a)?;
        let f = &fam.field;
        if f.p() < 5 {
            return Err(invalid(format!("p must be at least 5, got {}", f.p())));
        }
        let bad = [f.zero(), f.one(), f.neg(f.one())];
        if let Some(&x) = fam.a.iter().find(|x| bad.contains(x)) {
            return Err(invalid(format!("a_i = {} is one of 0, 1, -1", f.render(x))));
        }
        if fam.a.iter().collect::<BTreeSet<_>>().len() != fam.a.len() {
            return Err(invalid("the a_i must be distinct"));
        }
        if !f.is_zero(fam.a_sum()) {
            return Err(invalid(format!("the a_i sum to {}, not 0", f.render(fam.a_sum()))));
        }
        Ok(fam)
    }

    /// Only checks the shape (count and range of the a_i); used to exhibit
    /// what goes wrong when the constraints fail.
    pub fn unchecked(field: Gf, n: u32, a: Vec<u32>) -> Result<Self, FamilyError> {
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let want = field.p().pow(n) - 1;
        if a.len() as u64 != want {
            return Err(invalid(format!("need p^n - 1 = {want} coefficients a_i, got {}", a.len())));
        }
        if let Some(x) = a.iter().find(|&&x| x as u64 >= field.q()) {
            return Err(invalid(format!("{x} is not an element of F_{}", field.q())));
        }
        Ok(Self { field, n, a })
    }

    /// The smallest field with room for the a_i: F_{p^{n+1}}. F_p itself
    /// never works, since it has only p - 3 admissible values.
    pub fn default_field(p: u64, n: u32) -> Result<Gf, FamilyError> {
        Ok(Gf::new(p, n + 1)?)
    }

    /// Deterministic family: the first (p^n - 1)/2 pairs {c, -c} of admissible
    /// elements in encoding order.
    pub fn standard(p: u64, n: u32) -> Result<Self, FamilyError> {
        let field = Self::default_field(p, n)?;
        let need = (p.pow(n) - 1) as usize;
        let mut a = Vec::with_capacity(need);
        for c in field.elements() {
            if a.len() == need {
                break;
            }
            let m = field.neg(c);
            if c < m && c != field.one() && c != 0 {
                a.push(c);
                a.push(m);
            }
        }
        Self::new(field, n, a)
    }

    /// A random valid family over `default_field(p, n)`.
    pub fn random<R: Rng>(rng: &mut R, p: u64, n: u32) -> Result<Self, FamilyError> {
        let field = Self::default_field(p, n)?;
        let need = (p.pow(n) - 1) as usize;
        let admissible: Vec<u32> =
            field.elements().filter(|&c| c != 0 && c != field.one() && c != field.neg(field.one())).collect();
        loop {
            let mut a: Vec<u32> = admissible.choose_multiple(rng, need - 1).copied().collect();
            let s = a.iter().fold(0, |acc, &x| field.add(acc, x));
            a.push(field.neg(s));
            if let Ok(fam) = Self::new(field.clone(), n, a) {
                return Ok(fam);
            }
        }
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// |G| = p^n.
    pub fn degree(&self) -> u64 {
        self.field.p().pow(self.n)
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn a_sum(&self) -> u32 {
        self.a.iter().fold(self.field.zero(), |acc, &x| self.field.add(acc, x))
    }

    fn var(&self, name: &str) -> MultiPoly<Gf> {
        MultiPoly::var(&self.field, &SPACE_VARS, name).expect("space variable")
    }

    /// h(x, z) = Π (a_i x + z).
    pub fn h(&self) -> MultiPoly<Gf> {
        let (x, z) = (self.var("x"), self.var("z"));
        self.a.iter().fold(MultiPoly::one(&self.field, &SPACE_VARS), |acc, &c| {
            acc.try_mul(&x.scale(c).try_add(&z).unwrap()).unwrap()
        })
    }

    /// g = y^2 z - x(x + z)(x - z), the base elliptic curve.
    pub fn base_curve(&self) -> MultiPoly<Gf> {
        base_curve(&self.field)
    }

    /// [w^{p^n} - z h - y^{p^n}, g].
    pub fn equations(&self) -> [MultiPoly<Gf>; 2] {
        let e = self.degree() as u32;
        let (y, z, w) = (self.var("y"), self.var("z"), self.var("w"));
        let f1 = w.pow(e).try_sub(&z.try_mul(&self.h()).unwrap()).unwrap().try_sub(&y.pow(e)).unwrap();
        let g = self.base_curve().with_vars(&SPACE_VARS.map(String::from)).unwrap();
        [f1, g]
    }

    /// The four candidate singular points (x0, x, x', x'').
    pub fn special_points(&self) -> SpecialPoints {
        let f = &self.field;
        let h = self.h();
        let (one, zero, m1) = (f.one(), f.zero(), f.neg(f.one()));
        let root = |v: u32| f.pth_power_root(v, self.n);
        // w^{p^n} = z h(x, z) at y = 0.
        let alpha = root(h.eval(&[one, zero, one, zero]));
        let beta = root(f.neg(h.eval(&[one, zero, m1, zero])));
        SpecialPoints {
            x0: [zero, one, zero, one],
            x: [zero, zero, one, one],
            x_prime: [one, zero, one, alpha],
            x_double_prime: [one, zero, m1, beta],
        }
    }

    fn h_values(&self, pt: [u32; 2]) -> [u32; 3] {
        let h = self.h();
        let at = [pt[0], 0, pt[1], 0];
        let hx = h.partial_derivative("x").unwrap();
        let hz = h.partial_derivative("z").unwrap();
        [hx.eval(&at), h.eval(&at), hz.eval(&at)]
    }

    /// h_x(0, 1), which equals Σ a_i.
    pub fn calcoli_witness(&self) -> u32 {
        self.h_values([0, 1])[0]
    }
}

/// y^2 z - x(x + z)(x - z) in x, y, z.
pub fn base_curve(field: &Gf) -> MultiPoly<Gf> {
    let v = |s| MultiPoly::var(field, &PLANE_VARS, s).unwrap();
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let rhs = x.try_mul(&x.try_add(&z).unwrap()).unwrap().try_mul(&x.try_sub(&z).unwrap()).unwrap();
    y.pow(2).try_mul(&z).unwrap().try_sub(&rhs).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpecialPoints {
    pub x0: [u32; 4],
    pub x: [u32; 4],
    pub x_prime: [u32; 4],
    pub x_double_prime: [u32; 4],
}

/// h_x(1,1) + h(1,1) + h_z(1,1) = 0 and h_x(1,-1) + h(1,-1) - h_z(1,-1) = 0,
/// evaluated from the formal derivatives of h.
pub fn verify_calcoli(fam: &SpaceCurveFamily) -> bool {
    let f = &fam.field;
    let m1 = f.neg(f.one());
    let [hx, h, hz] = fam.h_values([f.one(), f.one()]);
    let first = f.add(f.add(hx, h), hz);
    let [hx, h, hz] = fam.h_values([f.one(), m1]);
    let second = f.sub(f.add(hx, h), hz);
    f.is_zero(first) && f.is_zero(second)
}

/// G = μ_{p^n} over the elliptic curve Y, one orbit per linear factor of z h.
pub fn space_family_to_surface(fam: &SpaceCurveFamily, e_type: EType) -> SurfaceData {
    let deg = fam.degree();
    let mut labels = vec!["z".to_string()];
    labels.extend(fam.a.iter().map(|&c| format!("{}x+z", fam.field.render(c))));
    let orbits = labels
        .into_iter()
        .map(|l| OrbitDatum { n: deg, weight: Some(vec![1]), stabilizer: None, label: Some(l) })
        .collect();
    SurfaceData {
        schema: SCHEMA_VERSION,
        p: fam.p(),
        group: vec![Atom::Mu { n: deg }],
        g_y: 1,
        e_type,
        orbits,
        x_hint: XHint::Unknown,
        hom_rank: 0,
    }
}

/// A point found by `singular_scan`, reported over its smallest field of
/// definition among the scanned fields.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CurvePoint {
    pub q: u64,
    pub coords: Vec<u32>,
    pub rendered: String,
}

/// Rank of a matrix over a field, by elimination.
fn rank<K: Field>(field: &K, mut rows: Vec<Vec<K::Elt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !field.is_zero(rows[i][c])) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        for i in 0..rows.len() {
            if i != r && !field.is_zero(rows[i][c]) {
                let factor = field.mul(rows[i][c], inv);
                for j in 0..cols {
                    let t = field.mul(factor, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], t);
                }
            }
        }
        r += 1;
    }
    r
}

/// Whether F_{p^k} is the smallest field among F_{p^j} (k0 | j | k) over
/// which the normalised point is defined.
fn minimal_in_scan(field: &Gf, pt: &[u32], k0: u32, k: u32) -> bool {
    (1..k)
        .filter(|j| k.is_multiple_of(*j) && j % k0 == 0)
        .all(|j| !pt.iter().all(|&x| (0..j).fold(x, |y, _| field.frobenius(y)) == x))
}

/// Points of P^{d}(F_q), q <= q_max, where all equations vanish and the
/// Jacobian has rank below the number of equations. The equations must share
/// a coefficient field F_{p^k0}; only fields containing it are scanned.
pub fn singular_scan(eqs: &[MultiPoly<Gf>], q_max: u64) -> Result<Vec<CurvePoint>, FamilyError> {
    let Some(first) = eqs.first() else {
        return Ok(Vec::new());
    };
    let base = first.field().clone();
    let vars = first.vars().to_vec();
    let eqs: Vec<MultiPoly<Gf>> = eqs.iter().map(|e| e.with_vars(&vars)).collect::<Result<_, _>>()?;
    if eqs.iter().any(|e| e.field() != &base) {
        return Err(invalid("equations must share a coefficient field"));
    }
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let dim = vars.len() - 1;
    let (p, k0) = (base.p(), base.degree());
    let mut found = BTreeSet::new();
    let mut k = k0;
    while p.checked_pow(k).is_some_and(|q| q <= q_max) {
        let field = Gf::new(p, k)?;
        let q = field.q();
        let points = (0..=dim as u32).map(|i| q.pow(i)).sum::<u64>();
        if points > MAX_SCAN_POINTS {
            return Err(FamilyError::ScanTooLarge { q, points });
        }
        let emb = field.embedding_from(&base)?;
        let mapped: Vec<MultiPoly<Gf>> = eqs.iter().map(|e| e.map_coefficients(&field, |c| emb.apply(c))).collect();
        let jac: Vec<Vec<MultiPoly<Gf>>> = mapped
            .iter()
            .map(|e| names.iter().map(|v| e.partial_derivative(v)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        for pt in projective_points(&field, dim) {
            if !mapped.iter().all(|e| field.is_zero(e.eval(&pt))) {
                continue;
            }
            if !minimal_in_scan(&field, &pt, k0, k) {
                continue;
            }
            let rows: Vec<Vec<u32>> = jac.iter().map(|row| row.iter().map(|d| d.eval(&pt)).collect()).collect();
            if rank(&field, rows) < mapped.len() {
                let rendered = format!("({})", pt.iter().map(|&c| field.render(c)).collect::<Vec<_>>().join(":"));
                found.insert(CurvePoint { q, coords: pt, rendered });
            }
        }
        k += k0;
    }
    Ok(found.into_iter().collect())
}
