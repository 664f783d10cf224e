//! Numerical invariants of S = E x^G X computed from combinatorial orbit data.

mod formulas;
mod report;
mod sample;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groupscheme::{
    inverse_mod, Atom, Character, CharacterGroup, GroupError, GroupSchemeDesc, Stabilizer, MAX_ENUMERATED_ORDER,
};

pub use formulas::{
    arithmetic_genus, betti, chi_and_irregularity, deg_dualizing, euler_number, fiber_multiplicities,
    kappa_one_criteria, kodaira, kodaira_from_degree, nfibers_bound, picard_rank, weight_space_dim, weight_spaces,
    FiberReport, Irregularity, Kappa,
};
pub use report::{classify, render_table, InvariantReport, WeightSpace};
pub use sample::{infinitesimal_witness, orbit_for_monodromy, random_diagonalizable_surface, SampleBounds};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("could not parse surface data: {0}")]
    Parse(String),
    #[error("invalid field `{field}`: {reason}")]
    InvalidField { field: String, reason: String },
    #[error("inconsistent data (`{field}`): {reason}")]
    InconsistentData { field: String, reason: String },
    #[error("group is not diagonalizable; use the wild ramification module for its Hurwitz formula")]
    UseWildModule,
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl InvariantError {
    fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::InvalidField { field: field.into(), reason: reason.into() }
    }

    fn inconsistent(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::InconsistentData { field: field.into(), reason: reason.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::InconsistentData { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EType {
    Ordinary,
    Supersingular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XHint {
    #[default]
    Unknown,
    RationalSmooth,
    RationalCuspidal,
    EllipticTranslations,
    EllipticOther,
    Higher,
}

impl XHint {
    pub fn is_rational(self) -> bool {
        matches!(self, XHint::RationalSmooth | XHint::RationalCuspidal)
    }
}

/// One non-free orbit. `stabilizer` picks the cyclic subgroup H(x) as an
/// element of order n in the dual of X*(G); it may be omitted when G has a
/// unique cyclic subgroup of order n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDatum {
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl OrbitDatum {
    pub fn weighted(n: u64, weight: Vec<u64>) -> Self {
        Self { n, weight: Some(weight), stabilizer: None, label: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceData {
    pub schema: u32,
    pub p: u64,
    pub group: Vec<Atom>,
    #[serde(rename = "gY")]
    pub g_y: u32,
    pub e_type: EType,
    #[serde(default)]
    pub orbits: Vec<OrbitDatum>,
    #[serde(default)]
    pub x_hint: XHint,
    #[serde(default)]
    pub hom_rank: u32,
}

impl SurfaceData {
    /// μ_n-style data: one atom, orbits given as (n, weight) pairs.
    pub fn simple(p: u64, group: Vec<Atom>, g_y: u32, orbits: Vec<OrbitDatum>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            p,
            group,
            g_y,
            e_type: EType::Ordinary,
            orbits,
            x_hint: XHint::Unknown,
            hom_rank: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, InvariantError> {
        serde_json::from_str(text).map_err(|e| InvariantError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surface data serializes")
    }

    pub fn validate(&self) -> Result<Surface, InvariantError> {
        Surface::new(self.clone())
    }
}

/// An orbit after validation, with its stabilizer resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub n: u64,
    pub label: Option<String>,
    /// Present exactly when G is diagonalizable.
    pub weight: Option<Character>,
    pub stabilizer: Option<Stabilizer>,
}

impl Orbit {
    /// tau = u^{-1} h where u is the restriction of the weight to H = <h>:
    /// the character pairing with tau gives m(y, lambda)/n(y) mod 1.
    pub fn monodromy(&self, chars: &CharacterGroup) -> Option<Character> {
        let (w, h) = (self.weight.as_ref()?, self.stabilizer.as_ref()?);
        let u = h.restrict(chars, w);
        let inv = inverse_mod(u, self.n)?;
        Some(chars.scale(h.generator(), inv))
    }
}

/// Validated surface data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    data: SurfaceData,
    group: GroupSchemeDesc,
    chars: Option<CharacterGroup>,
    orbits: Vec<Orbit>,
}

impl Surface {
    fn new(data: SurfaceData) -> Result<Self, InvariantError> {
        if data.schema != SCHEMA_VERSION {
            return Err(InvariantError::invalid("schema", format!("expected {SCHEMA_VERSION}, got {}", data.schema)));
        }
        let group = GroupSchemeDesc::new(data.p, data.group.clone())
            .map_err(|e| InvariantError::invalid("group", e.to_string()))?;
        let order = group.order();
        let chars = group.character_group().ok();
        let mut orbits = Vec::with_capacity(data.orbits.len());
        for (i, o) in data.orbits.iter().enumerate() {
            let field = |f: &str| format!("orbits[{i}].{f}");
            if o.n < 2 {
                return Err(InvariantError::invalid(
                    field("n"),
                    "stabilizer order must be >= 2 (free orbits are not listed)",
                ));
            }
            if order % o.n != 0 {
                return Err(InvariantError::invalid(
                    field("n"),
                    format!("stabilizer order {} does not divide |G| = {order}", o.n),
                ));
            }
            let (weight, stabilizer) = match &chars {
                Some(cg) => {
                    let w = o
                        .weight
                        .as_ref()
                        .ok_or_else(|| InvariantError::invalid(field("weight"), "required for diagonalizable G"))?;
                    let w = cg
                        .normalize(&Character::new(w.clone()))
                        .map_err(|e| InvariantError::invalid(field("weight"), e.to_string()))?;
                    let h = match &o.stabilizer {
                        Some(s) => Stabilizer::new(cg, o.n, Character::new(s.clone())),
                        None => Stabilizer::unique(cg, o.n),
                    }
                    .map_err(|e| InvariantError::invalid(field("stabilizer"), e.to_string()))?;
                    let u = h.restrict(cg, &w);
                    if inverse_mod(u, o.n).is_none() {
                        return Err(InvariantError::invalid(
                            field("weight"),
                            format!(
                                "weight restricts to {u} mod {}, which does not generate the \
                                 character group of the stabilizer",
                                o.n
                            ),
                        ));
                    }
                    (Some(w), Some(h))
                }
                None => {
                    if o.weight.is_some() || o.stabilizer.is_some() {
                        return Err(InvariantError::invalid(
                            field("weight"),
                            "weights are only meaningful for diagonalizable G",
                        ));
                    }
                    (None, None)
                }
            };
            orbits.push(Orbit { n: o.n, label: o.label.clone(), weight, stabilizer });
        }
        if order > 1 && group.is_infinitesimal() && data.g_y == 0 && orbits.len() < 2 {
            return Err(InvariantError::inconsistent(
                "orbits",
                format!("an infinitesimal group over P^1 needs at least two multiple fibers, got {}", orbits.len()),
            ));
        }
        if data.x_hint.is_rational() && data.hom_rank != 0 {
            return Err(InvariantError::inconsistent(
                "hom_rank",
                "a rational curve has trivial Albanese, so hom_rank must be 0",
            ));
        }
        Ok(Self { data, group, chars, orbits })
    }

    pub fn data(&self) -> &SurfaceData {
        &self.data
    }

    pub fn group(&self) -> &GroupSchemeDesc {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.data.p
    }

    pub fn g_y(&self) -> u32 {
        self.data.g_y
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn character_group(&self) -> Option<&CharacterGroup> {
        self.chars.as_ref()
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.chars.is_some()
    }

    /// Sum of the orbit monodromies; zero iff every weight space has
    /// integral dimension.
    pub fn monodromy_sum(&self) -> Option<Character> {
        let cg = self.chars.as_ref()?;
        let mut acc = cg.zero();
        for o in &self.orbits {
            acc = cg.add(&acc, &o.monodromy(cg)?);
        }
        Some(acc)
    }

    /// Whether the stabilizers generate the dual of X*(G). Needed for
    /// non-negative weight spaces over P^1. None when too large to decide.
    pub fn stabilizers_generate(&self) -> Option<bool> {
        let cg = self.chars.as_ref()?;
        if cg.order() > MAX_ENUMERATED_ORDER {
            return None;
        }
        let gens: Vec<&Character> =
            self.orbits.iter().filter_map(|o| o.stabilizer.as_ref().map(|s| s.generator())).collect();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![cg.zero()];
        seen.insert(cg.zero());
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = cg.add(&x, g);
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        Some(seen.len() as u64 == cg.order())
    }
}
