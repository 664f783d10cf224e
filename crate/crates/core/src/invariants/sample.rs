use rand::seq::SliceRandom;
use rand::Rng;

use super::{OrbitDatum, SurfaceData, XHint};
use crate::groupscheme::{gcd, inverse_mod, Atom, Character, CharacterGroup};

/// Ranges for randomly generated diagonalizable surface data.
#[derive(Debug, Clone)]
pub struct SampleBounds {
    pub primes: Vec<u64>,
    pub max_order: u64,
    pub max_g_y: u32,
    pub max_orbits: usize,
}

impl Default for SampleBounds {
    fn default() -> Self {
        Self { primes: vec![2, 3, 5], max_order: 25, max_g_y: 3, max_orbits: 6 }
    }
}

fn random_group<R: Rng>(rng: &mut R, p: u64, max_order: u64) -> Vec<Atom> {
    loop {
        let k = rng.gen_range(1..=3);
        let mut atoms = Vec::new();
        let mut order = 1;
        for _ in 0..k {
            let room = max_order / order;
            if room < 2 {
                break;
            }
            let n = rng.gen_range(2..=room);
            order *= n;
            // Constant groups of order prime to p behave like μ_n.
            if gcd(n, p) == 1 && rng.gen_bool(0.3) {
                atoms.push(Atom::Constant { n });
            } else {
                atoms.push(Atom::Mu { n });
            }
        }
        if !atoms.is_empty() {
            return atoms;
        }
    }
}

fn random_element<R: Rng>(rng: &mut R, cg: &CharacterGroup) -> Character {
    Character::new(cg.moduli().iter().map(|&n| rng.gen_range(0..n)).collect())
}

fn generates(cg: &CharacterGroup, gens: &[Character]) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![cg.zero()];
    seen.insert(cg.zero());
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = cg.add(&x, g);
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.len() as u64 == cg.order()
}

/// Random orbit data that passes every consistency check: the orbit
/// monodromies sum to zero and, over P^1, generate the dual group.
pub fn random_diagonalizable_surface<R: Rng>(rng: &mut R, bounds: &SampleBounds) -> SurfaceData {
    loop {
        let p = *bounds.primes.choose(rng).expect("at least one prime");
        let atoms = random_group(rng, p, bounds.max_order);
        let moduli: Vec<u64> = atoms
            .iter()
            .map(|a| match *a {
                Atom::Mu { n } | Atom::Constant { n } => n,
                _ => unreachable!(),
            })
            .collect();
        let cg = CharacterGroup::new(moduli);
        let g_y = rng.gen_range(0..=bounds.max_g_y);
        let n_orbits = rng.gen_range(0..=bounds.max_orbits);
        if n_orbits == 1 {
            continue;
        }
        let mut taus: Vec<Character> = Vec::with_capacity(n_orbits);
        let mut sum = cg.zero();
        for _ in 1..n_orbits {
            let t = random_element(rng, &cg);
            sum = cg.add(&sum, &t);
            taus.push(t);
        }
        if n_orbits > 0 {
            taus.push(cg.neg(&sum));
        }
        if taus.iter().any(Character::is_zero) {
            continue;
        }
        if g_y == 0 && !generates(&cg, &taus) {
            continue;
        }
        let orbits = taus.iter().map(|tau| orbit_with_monodromy(rng, &cg, tau)).collect();
        let d = SurfaceData::simple(p, atoms, g_y, orbits);
        return d;
    }
}

/// An orbit whose stabilizer is generated by tau and whose weight pairs
/// with tau to 1/n, so that its monodromy is exactly tau.
fn orbit_with_monodromy<R: Rng>(rng: &mut R, cg: &CharacterGroup, tau: &Character) -> OrbitDatum {
    let n = cg.element_order(tau);
    let weight = loop {
        let w = random_element(rng, cg);
        if let Some(inv) = inverse_mod(cg.pairing_scaled(&w, tau, n), n) {
            break cg.scale(&w, inv);
        }
    };
    let units: Vec<u64> = (1..=n).filter(|&k| gcd(k, n) == 1).collect();
    let k = *units.choose(rng).expect("n >= 1 has a unit");
    OrbitDatum { n, weight: Some(weight.residues), stabilizer: Some(cg.scale(tau, k).residues), label: None }
}

/// Deterministic variant: the first weight in enumeration order, stabilizer
/// generated by tau itself.
pub fn orbit_for_monodromy(cg: &CharacterGroup, tau: &Character) -> OrbitDatum {
    let n = cg.element_order(tau);
    let weight = cg
        .elements()
        .find_map(|w| inverse_mod(cg.pairing_scaled(&w, tau, n), n).map(|inv| cg.scale(&w, inv)))
        .expect("tau has order n, so some character restricts to a generator");
    OrbitDatum { n, weight: Some(weight.residues), stabilizer: Some(tau.residues.clone()), label: None }
}

/// Nondecreasing residues in 1..m, `len` of them, summing to 0 mod m and,
/// if `unit` is set, containing a unit mod m.
fn zero_sum_tuple(m: u64, len: usize, unit: bool) -> Option<Vec<u64>> {
    fn go(m: u64, len: usize, unit: bool, acc: &mut Vec<u64>) -> bool {
        if acc.len() == len {
            let sum: u64 = acc.iter().sum();
            return sum.is_multiple_of(m) && (!unit || acc.iter().any(|&t| gcd(t, m) == 1));
        }
        let start = acc.last().copied().unwrap_or(1);
        for t in start..m {
            acc.push(t);
            if go(m, len, unit, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::with_capacity(len);
    go(m, len, unit, &mut acc).then_some(acc)
}

/// Surface data with an infinitesimal group, base genus `g_y` and exactly
/// `n_fibers` multiple fibers: μ_p or μ_{p^2} with suitable orbit data, or
/// α_p for a single fiber (which no diagonalizable datum allows). None over
/// P^1 with fewer than two fibers, which no infinitesimal group allows.
pub fn infinitesimal_witness(p: u64, g_y: u32, n_fibers: usize) -> Option<SurfaceData> {
    if g_y == 0 && n_fibers < 2 {
        return None;
    }
    let mut d = if n_fibers == 1 {
        SurfaceData::simple(
            p,
            vec![Atom::Alpha { r: 1 }],
            g_y,
            vec![OrbitDatum { n: p, weight: None, stabilizer: None, label: None }],
        )
    } else {
        let (m, taus) = [p, p * p].into_iter().find_map(|m| zero_sum_tuple(m, n_fibers, g_y == 0).map(|t| (m, t)))?;
        let cg = CharacterGroup::new(vec![m]);
        let orbits = taus.iter().map(|&t| orbit_for_monodromy(&cg, &Character::new(vec![t]))).collect();
        SurfaceData::simple(p, vec![Atom::Mu { n: m }], g_y, orbits)
    };
    if g_y >= 2 {
        d.x_hint = XHint::Higher;
    }
    Some(d)
}
