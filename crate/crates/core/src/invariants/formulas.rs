use std::fmt;

use serde::{Serialize, Serializer};

use super::{InvariantError, Surface, XHint};
use crate::groupscheme::{m_of, Character, MAX_ENUMERATED_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kappa {
    NegInf,
    Zero,
    One,
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kappa::NegInf => "-inf",
            Kappa::Zero => "0",
            Kappa::One => "1",
        })
    }
}

impl Serialize for Kappa {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Irregularity {
    pub chi: i64,
    pub q: u64,
    pub h0_omega: u64,
    pub pic_reduced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub multiplicity: u64,
    pub tame: bool,
    pub pic0: String,
}

fn require_diagonalizable(s: &Surface) -> Result<(), InvariantError> {
    if s.is_diagonalizable() {
        Ok(())
    } else {
        Err(InvariantError::UseWildModule)
    }
}

/// deg ω_X = (2g(Y) − 2)|G| + Σ_orbits (|G| − |G|/n).
pub fn deg_dualizing(s: &Surface) -> Result<i64, InvariantError> {
    require_diagonalizable(s)?;
    Ok(hurwitz_degree(s))
}

pub(crate) fn hurwitz_degree(s: &Surface) -> i64 {
    let g = s.group().order() as i64;
    let base = (2 * s.g_y() as i64 - 2) * g;
    base + s.orbits().iter().map(|o| g - g / o.n as i64).sum::<i64>()
}

/// The degree of ω_X when the data determines it: always for diagonalizable
/// G, for torsors (no orbits), and from the hint otherwise.
pub(crate) fn degree_if_known(s: &Surface) -> Option<i64> {
    if s.is_diagonalizable() || s.orbits().is_empty() {
        return Some(hurwitz_degree(s));
    }
    match s.data().x_hint {
        XHint::RationalSmooth => Some(-2),
        XHint::EllipticTranslations | XHint::EllipticOther => Some(0),
        _ => None,
    }
}

/// p_a = deg/2 + 1.
pub fn arithmetic_genus(deg_omega: i64) -> Result<i64, InvariantError> {
    if deg_omega % 2 != 0 {
        return Err(InvariantError::inconsistent(
            "deg_omega_X",
            format!("degree {deg_omega} of the dualizing sheaf is odd"),
        ));
    }
    let p_a = deg_omega / 2 + 1;
    if p_a < 0 {
        return Err(InvariantError::inconsistent(
            "orbits",
            format!("deg ω_X = {deg_omega} gives p_a(X) = {p_a} < 0; X cannot be connected"),
        ));
    }
    Ok(p_a)
}

pub fn kodaira_from_degree(deg: i64) -> Kappa {
    match deg.signum() {
        -1 => Kappa::NegInf,
        0 => Kappa::Zero,
        _ => Kappa::One,
    }
}

pub fn kodaira(s: &Surface) -> Result<Kappa, InvariantError> {
    if let Some(deg) = degree_if_known(s) {
        return Ok(kodaira_from_degree(deg));
    }
    // Wild or non-diagonalizable: only the sign of the base contribution helps.
    if s.g_y() >= 2 || (s.g_y() == 1 && !s.orbits().is_empty()) || s.data().x_hint == XHint::Higher {
        return Ok(Kappa::One);
    }
    Err(InvariantError::NotSupported(format!(
        "κ for {} over a base of genus {} with {} orbits needs an x_hint",
        s.group(),
        s.g_y(),
        s.orbits().len()
    )))
}

/// (b0, ..., b4) = (1, 2+2g, 2+4g, 2+2g, 1).
pub fn betti(g_y: u32) -> [u64; 5] {
    let g = g_y as u64;
    [1, 2 + 2 * g, 2 + 4 * g, 2 + 2 * g, 1]
}

pub fn euler_number(b: &[u64; 5]) -> i64 {
    b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

pub fn chi_and_irregularity(s: &Surface) -> Result<Irregularity, InvariantError> {
    if !s.is_diagonalizable() {
        return Err(InvariantError::NotSupported("χ and q are only computed for diagonalizable G".into()));
    }
    let g = s.g_y() as u64;
    Ok(Irregularity { chi: 0, q: g + 1, h0_omega: g, pic_reduced: true })
}

/// h^0(ω_X)_λ. Zero character: g(Y). Otherwise
/// g(Y) − 1 + Σ_y (1 − m(y, λ)/n(y)), with m = n on trivial restriction.
pub fn weight_space_dim(s: &Surface, lambda: &Character) -> Result<i64, InvariantError> {
    let cg = s.character_group().ok_or(InvariantError::UseWildModule)?;
    let lambda = cg.normalize(lambda)?;
    if lambda.is_zero() {
        return Ok(s.g_y() as i64);
    }
    let l = s.orbits().iter().fold(1u64, |acc, o| acc / gcd(acc, o.n) * o.n);
    let mut num: u64 = 0;
    for o in s.orbits() {
        let (w, h) = (o.weight.as_ref().expect("validated"), o.stabilizer.as_ref().expect("validated"));
        let m = m_of(h.restrict(cg, &lambda), h.restrict(cg, w), o.n)?;
        num += (o.n - m) * (l / o.n);
    }
    if !num.is_multiple_of(l) {
        return Err(InvariantError::inconsistent(
            "orbits",
            format!(
                "h0(ω_X) in weight {lambda} would be {} - 1 + {num}/{l}, not an integer; \
                 the weights do not come from a G-normal curve",
                s.g_y()
            ),
        ));
    }
    let dim = s.g_y() as i64 - 1 + (num / l) as i64;
    if dim < 0 {
        return Err(InvariantError::inconsistent(
            "orbits",
            format!("h0(ω_X) in weight {lambda} would be {dim} < 0; the stabilizers do not generate G"),
        ));
    }
    Ok(dim)
}

fn gcd(a: u64, b: u64) -> u64 {
    crate::groupscheme::gcd(a, b)
}

/// All weight spaces in lexicographic character order.
pub fn weight_spaces(s: &Surface) -> Result<Vec<(Character, i64)>, InvariantError> {
    let cg = s.character_group().ok_or(InvariantError::UseWildModule)?;
    if cg.order() > MAX_ENUMERATED_ORDER {
        return Err(InvariantError::NotSupported(format!("|G| = {} is too large to enumerate characters", cg.order())));
    }
    cg.elements().map(|c| weight_space_dim(s, &c).map(|d| (c, d))).collect()
}

/// One tame fiber of multiplicity n(x) per orbit; Pic^0 of each is E.
pub fn fiber_multiplicities(s: &Surface) -> Result<Vec<FiberReport>, InvariantError> {
    if !s.is_diagonalizable() {
        return Err(InvariantError::NotSupported("fiber multiplicities are only computed for diagonalizable G".into()));
    }
    Ok(s.orbits().iter().map(|o| FiberReport { multiplicity: o.n, tame: true, pic0: "E".into() }).collect())
}

/// ρ(S) = 2 + rank Hom(Alb(X), E).
pub fn picard_rank(s: &Surface) -> u64 {
    2 + s.data().hom_rank as u64
}

/// Sufficient condition for κ = 1 with an infinitesimal diagonalizable G.
pub fn kappa_one_criteria(g_y: u32, n_fibers: u64, p: u64) -> bool {
    match g_y {
        0 => n_fibers >= 5 || (n_fibers >= 4 && p >= 3) || (n_fibers >= 3 && p >= 5),
        1 => n_fibers >= 1,
        _ => true,
    }
}

/// Lower bound p^{r−1}(p(N − 2) − N) for deg ω_X with G = μ_{p^r} over P^1.
pub fn nfibers_bound(p: u64, r: u32, n_fibers: u64) -> i128 {
    let (p, n) = (p as i128, n_fibers as i128);
    p.pow(r.saturating_sub(1)) * (p * (n - 2) - n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupscheme::Atom;
    use crate::invariants::{OrbitDatum, SurfaceData};

    fn mu_surface(p: u64, n: u64, g_y: u32, weights: &[u64]) -> Surface {
        let orbits = weights.iter().map(|&w| OrbitDatum::weighted(n, vec![w])).collect();
        SurfaceData::simple(p, vec![Atom::Mu { n }], g_y, orbits).validate().unwrap()
    }

    #[test]
    fn hurwitz_examples() {
        for p in [2, 3, 5, 7] {
            assert_eq!(deg_dualizing(&mu_surface(p, p, 0, &[1, p - 1])).unwrap(), -2);
        }
        assert_eq!(deg_dualizing(&mu_surface(3, 3, 0, &[1, 1, 1])).unwrap(), 0);
        assert_eq!(deg_dualizing(&mu_surface(2, 2, 0, &[1, 1, 1, 1])).unwrap(), 0);
        assert_eq!(deg_dualizing(&mu_surface(5, 5, 0, &[1; 5])).unwrap(), 10);
        assert_eq!(deg_dualizing(&mu_surface(5, 5, 1, &[1; 5])).unwrap(), 20);
    }

    #[test]
    fn wild_groups_redirected() {
        let d = SurfaceData::simple(
            5,
            vec![Atom::Constant { n: 5 }],
            1,
            vec![OrbitDatum { n: 5, weight: None, stabilizer: None, label: None }],
        );
        let s = d.validate().unwrap();
        assert_eq!(deg_dualizing(&s), Err(InvariantError::UseWildModule));
        assert_eq!(kodaira(&s), Ok(Kappa::One));
    }

    #[test]
    fn genus_from_degree() {
        assert_eq!(arithmetic_genus(-2), Ok(0));
        assert_eq!(arithmetic_genus(0), Ok(1));
        assert_eq!(arithmetic_genus(4), Ok(3));
        assert!(matches!(arithmetic_genus(3), Err(InvariantError::InconsistentData { .. })));
        assert!(matches!(arithmetic_genus(-4), Err(InvariantError::InconsistentData { .. })));
    }

    #[test]
    fn betti_rows() {
        assert_eq!(betti(0), [1, 2, 2, 2, 1]);
        assert_eq!(betti(1), [1, 4, 6, 4, 1]);
        assert_eq!(betti(3), [1, 8, 14, 8, 1]);
        for g in 0..10 {
            assert_eq!(euler_number(&betti(g)), 0);
        }
    }

    #[test]
    fn irregularity_rows() {
        for (g, q) in [(0u32, 1u64), (1, 2), (5, 6)] {
            let s = SurfaceData::simple(
                7,
                vec![Atom::Mu { n: 3 }],
                g,
                if g == 0 { vec![OrbitDatum::weighted(3, vec![1]), OrbitDatum::weighted(3, vec![2])] } else { vec![] },
            )
            .validate()
            .unwrap();
            let r = chi_and_irregularity(&s).unwrap();
            assert_eq!(r, Irregularity { chi: 0, q, h0_omega: g as u64, pic_reduced: true });
        }
    }

    #[test]
    fn weight_spaces_of_mu_p_on_p1_vanish() {
        let s = mu_surface(7, 7, 0, &[1, 6]);
        for l in 0..7 {
            assert_eq!(weight_space_dim(&s, &Character::new(vec![l])).unwrap(), 0);
        }
    }

    #[test]
    fn weight_spaces_sum_to_genus() {
        let s = mu_surface(5, 5, 0, &[1; 5]);
        let total: i64 = weight_spaces(&s).unwrap().iter().map(|(_, d)| d).sum();
        assert_eq!(total, arithmetic_genus(deg_dualizing(&s).unwrap()).unwrap());
        assert_eq!(total, 6);
    }

    #[test]
    fn fractional_weight_space_detected() {
        let s = mu_surface(5, 5, 1, &[1]);
        assert!(matches!(weight_space_dim(&s, &Character::new(vec![1])), Err(InvariantError::InconsistentData { .. })));
    }

    #[test]
    fn fibers_are_tame() {
        let s = mu_surface(3, 9, 1, &[1, 8]);
        let f = fiber_multiplicities(&s).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|x| x.tame && x.multiplicity == 9 && x.pic0 == "E"));
        assert!(fiber_multiplicities(&mu_surface(3, 9, 1, &[])).unwrap().is_empty());
    }

    #[test]
    fn criteria_match_bound_sign() {
        for p in [2u64, 3, 5, 7, 11] {
            for n in 0..10 {
                for r in 1..4 {
                    assert_eq!(kappa_one_criteria(0, n, p), nfibers_bound(p, r, n) > 0, "p={p} n={n}");
                }
            }
        }
        assert!(kappa_one_criteria(0, 3, 5));
        assert!(!kappa_one_criteria(0, 3, 3));
        assert_eq!(nfibers_bound(3, 1, 3), 0);
        assert!(!kappa_one_criteria(1, 0, 5));
        assert!(kappa_one_criteria(2, 0, 2));
    }
}
