//! Local ramification of a constant group acting on a curve: the integers
//! i_x(g) = v(g.t - t), the Artin term a(x), and the Hurwitz formula for
//! constant groups.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{is_prime, AlgebraError, Field, PowerSeries, PrimeField, Valuation, DEFAULT_PRECISION};

/// Doubling stops here.
pub const MAX_PRECISION: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamificationError {
    #[error("invalid local action: {0}")]
    InvalidAction(String),
    #[error("g.t - t vanishes to precision {precision}; retry with a longer series")]
    PrecisionExhausted { precision: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

type Mat = [[i64; 2]; 2];

fn mat_mul(a: &Mat, b: &Mat, p: i64) -> Mat {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]).rem_euclid(p);
        }
    }
    out
}

fn mat_pow(m: &Mat, k: u64, p: i64) -> Mat {
    let mut acc = [[1, 0], [0, 1]];
    for _ in 0..k {
        acc = mat_mul(&acc, m, p);
    }
    acc
}

fn is_scalar(m: &Mat) -> bool {
    m[0][1] == 0 && m[1][0] == 0 && m[0][0] == m[1][1]
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    /// u -> (a u + b)/(c u + d) with b = 0; powers are matrix powers, so the
    /// precision can grow freely.
    Mobius(Mat),
    /// Generator action as a truncated series; powers by composition.
    Generator(PowerSeries),
    /// One truncated series per non-identity element g^1, ..., g^{|H|-1}.
    Explicit(Vec<PowerSeries>),
}

/// The action of the stabilizer H (cyclic, generated by g) on a local
/// uniformizer at a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAction {
    field: PrimeField,
    group_order: u64,
    stab_order: u64,
    source: Source,
    precision: usize,
}

impl LocalAction {
    fn check_orders(p: u64, group_order: u64, stab_order: u64) -> Result<PrimeField, RamificationError> {
        if !is_prime(p) {
            return Err(RamificationError::InvalidAction(format!("{p} is not prime")));
        }
        if stab_order == 0 || group_order == 0 || !group_order.is_multiple_of(stab_order) {
            return Err(RamificationError::InvalidAction(format!(
                "stabilizer order {stab_order} must divide group order {group_order}"
            )));
        }
        Ok(PrimeField::new(p)?)
    }

    pub fn mobius(p: u64, group_order: u64, stab_order: u64, m: Mat) -> Result<Self, RamificationError> {
        let field = Self::check_orders(p, group_order, stab_order)?;
        let pi = p as i64;
        let m = m.map(|row| row.map(|x| x.rem_euclid(pi)));
        if m[0][1] != 0 {
            return Err(RamificationError::InvalidAction("the matrix must fix u = 0 (upper right entry 0)".into()));
        }
        if m[0][0] == 0 || m[1][1] == 0 {
            return Err(RamificationError::InvalidAction("diagonal entries must be units".into()));
        }
        for k in 1..stab_order {
            if is_scalar(&mat_pow(&m, k, pi)) {
                return Err(RamificationError::InvalidAction(format!(
                    "generator has order {k} in PGL_2, not {stab_order}"
                )));
            }
        }
        if !is_scalar(&mat_pow(&m, stab_order, pi)) {
            return Err(RamificationError::InvalidAction(format!("generator order does not divide {stab_order}")));
        }
        Ok(Self { field, group_order, stab_order, source: Source::Mobius(m), precision: DEFAULT_PRECISION })
    }

    /// Z/p acting on P^1 by t -> t + 1, seen at infinity with u = 1/t.
    pub fn translation_at_infinity(p: u64) -> Result<Self, RamificationError> {
        Self::mobius(p, p, p, [[1, 0], [1, 1]])
    }

    /// Z/n acting by t -> ζt with ζ of order n in F_p^*.
    pub fn rotation(p: u64, n: u64) -> Result<Self, RamificationError> {
        let field = Self::check_orders(p, n, n)?;
        let zeta = (1..p)
            .find(|&z| {
                let zf = field.from_i64(z as i64);
                field.pow(zf, n) == 1 && (1..n).all(|k| field.pow(zf, k) != 1)
            })
            .ok_or_else(|| RamificationError::InvalidAction(format!("F_{p} has no element of order {n}")))?;
        Self::mobius(p, n, n, [[zeta as i64, 0], [0, 1]])
    }

    /// `series` is g.t for the generator g when it has one entry, or g^k.t
    /// for k = 1..|H|-1 when it has |H| - 1 entries.
    pub fn from_series(
        p: u64,
        group_order: u64,
        stab_order: u64,
        series: &[Vec<i64>],
    ) -> Result<Self, RamificationError> {
        let field = Self::check_orders(p, group_order, stab_order)?;
        if stab_order == 1 {
            return Ok(Self { field, group_order, stab_order, source: Source::Explicit(Vec::new()), precision: 0 });
        }
        let parsed: Vec<PowerSeries> = series.iter().map(|c| PowerSeries::from_ints(&field, "t", c, c.len())).collect();
        for (i, s) in parsed.iter().enumerate() {
            if s.precision() < 2 {
                return Err(RamificationError::InvalidAction(format!("series {i} has fewer than 2 terms")));
            }
            if s.coeff(0) != 0 {
                return Err(RamificationError::InvalidAction(format!(
                    "series {i} does not fix the point (nonzero constant term)"
                )));
            }
            if s.coeff(1) == 0 {
                return Err(RamificationError::InvalidAction(format!(
                    "series {i} has zero linear term, so it is not an automorphism"
                )));
            }
        }
        let precision = parsed.iter().map(PowerSeries::precision).min().unwrap_or(0);
        let parsed: Vec<PowerSeries> = parsed.iter().map(|s| s.truncated(precision)).collect();
        let source = match parsed.len() {
            1 => {
                let g = parsed.into_iter().next().unwrap();
                let mut power = g.clone();
                for _ in 1..stab_order {
                    power = power.compose(&g)?;
                }
                if power != PowerSeries::x(&field, "t", precision) {
                    return Err(RamificationError::InvalidAction(format!(
                        "g^{stab_order}.t != t to precision {precision}"
                    )));
                }
                Source::Generator(g)
            }
            k if k as u64 == stab_order - 1 => Source::Explicit(parsed),
            k => {
                return Err(RamificationError::InvalidAction(format!(
                    "expected 1 or {} series, got {k}",
                    stab_order - 1
                )))
            }
        };
        Ok(Self { field, group_order, stab_order, source, precision })
    }

    pub fn with_precision(mut self, precision: usize) -> Self {
        if matches!(self.source, Source::Mobius(_)) {
            self.precision = precision.max(2);
        }
        self
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn stab_order(&self) -> u64 {
        self.stab_order
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// g^k.t to the given precision.
    fn power_series(&self, k: u64, precision: usize) -> Result<PowerSeries, RamificationError> {
        let f = &self.field;
        match &self.source {
            Source::Mobius(m) => {
                let mk = mat_pow(m, k, f.p() as i64);
                let num = PowerSeries::from_ints(f, "t", &[0, mk[0][0]], precision);
                let den = PowerSeries::from_ints(f, "t", &[mk[1][1], mk[1][0]], precision);
                Ok(num.try_mul(&den.invert()?)?)
            }
            Source::Generator(g) => {
                let mut acc = PowerSeries::x(f, "t", g.precision());
                for _ in 0..k {
                    acc = acc.compose(g)?;
                }
                Ok(acc)
            }
            Source::Explicit(all) => Ok(all[(k - 1) as usize].clone()),
        }
    }

    /// The action of g^k as a series, for the generator's k-th power.
    pub fn element_series(&self, k: u64) -> Result<PowerSeries, RamificationError> {
        self.power_series(k % self.stab_order, self.precision)
    }

    fn valuation_at(&self, k: u64, precision: usize) -> Result<Valuation, RamificationError> {
        let s = self.power_series(k, precision)?;
        let t = PowerSeries::x(&self.field, "t", s.precision());
        Ok(s.try_sub(&t)?.valuation())
    }
}

/// i_x(g^k) = v(g^k.t - t) for 1 <= k < |H|. Möbius actions double the
/// precision until the valuation is finite and agrees at N and 2N.
pub fn i_x(act: &LocalAction, k: u64) -> Result<u64, RamificationError> {
    let k = k % act.stab_order;
    if k == 0 {
        return Err(RamificationError::InvalidAction("i_x is defined for g != 1".into()));
    }
    match act.source {
        Source::Mobius(_) => {
            let mut n = act.precision.max(2);
            loop {
                if let Valuation::Finite(v) = act.valuation_at(k, n)? {
                    if act.valuation_at(k, 2 * n)? == Valuation::Finite(v) {
                        return Ok(v as u64);
                    }
                }
                if 2 * n > MAX_PRECISION {
                    return Err(RamificationError::PrecisionExhausted { precision: n });
                }
                n *= 2;
            }
        }
        _ => match act.valuation_at(k, act.precision)? {
            Valuation::Finite(v) => Ok(v as u64),
            Valuation::Infinite => Err(RamificationError::PrecisionExhausted { precision: act.precision }),
        },
    }
}

/// a(x) = [G : H] Σ_{g ∈ H \ {1}} i_x(g).
pub fn artin_a(act: &LocalAction) -> Result<u64, RamificationError> {
    let index = act.group_order / act.stab_order;
    let mut sum = 0;
    for k in 1..act.stab_order {
        sum += i_x(act, k)?;
    }
    Ok(index * sum)
}

/// deg ω_X = |G|(2g(Y) − 2) + Σ a, one Artin term per branch point.
pub fn hurwitz_wild(group_order: u64, g_y: u32, terms: &[u64]) -> i64 {
    group_order as i64 * (2 * g_y as i64 - 2) + terms.iter().map(|&a| a as i64).sum::<i64>()
}

/// JSON input of the `ramify` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamifyInput {
    pub p: u64,
    pub order: u64,
    pub stab: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mobius: Option<Mat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    /// Genus of the quotient, for the Hurwitz total.
    #[serde(default, rename = "gY", skip_serializing_if = "Option::is_none")]
    pub g_y: Option<u32>,
    /// Number of branch points with this local action (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

impl RamifyInput {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn action(&self) -> Result<LocalAction, RamificationError> {
        let act = match (&self.series, &self.mobius) {
            (Some(s), None) => LocalAction::from_series(self.p, self.order, self.stab, s)?,
            (None, Some(m)) => LocalAction::mobius(self.p, self.order, self.stab, *m)?,
            (None, None) if self.stab == 1 => LocalAction::from_series(self.p, self.order, 1, &[])?,
            _ => return Err(RamificationError::InvalidAction("give exactly one of `series` and `mobius`".into())),
        };
        Ok(match self.precision {
            Some(n) => act.with_precision(n),
            None => act,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationReport {
    pub p: u64,
    pub order: u64,
    pub stab: u64,
    /// i_x(g^k) for k = 1..|H|-1.
    pub i_values: Vec<u64>,
    pub artin_a: u64,
    pub tame: bool,
    #[serde(rename = "gY", skip_serializing_if = "Option::is_none")]
    pub g_y: Option<u32>,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_omega_x: Option<i64>,
}

pub fn ramify(input: &RamifyInput) -> Result<RamificationReport, RamificationError> {
    let act = input.action()?;
    let i_values = (1..act.stab_order).map(|k| i_x(&act, k)).collect::<Result<Vec<_>, _>>()?;
    let a = artin_a(&act)?;
    let count = input.count.unwrap_or(1);
    let terms = vec![a; count as usize];
    Ok(RamificationReport {
        p: input.p,
        order: input.order,
        stab: input.stab,
        tame: i_values.iter().all(|&i| i == 1),
        i_values,
        artin_a: a,
        g_y: input.g_y,
        count,
        deg_omega_x: input.g_y.map(|g| hurwitz_wild(input.order, g, &terms)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn translation_at_infinity_is_wild() {
        for p in [2, 3, 5, 7] {
            let act = LocalAction::translation_at_infinity(p).unwrap();
            for k in 1..p {
                assert_eq!(i_x(&act, k).unwrap(), 2, "p={p} k={k}");
            }
            assert_eq!(artin_a(&act).unwrap(), 2 * (p - 1));
            assert_eq!(hurwitz_wild(p, 0, &[artin_a(&act).unwrap()]), -2);
        }
    }

    #[test]
    fn generator_series_matches_geometric_expansion() {
        // 1.u = u - u^2 + u^3 - ...
        let act = LocalAction::translation_at_infinity(5).unwrap();
        let s = act.element_series(1).unwrap();
        let expected: Vec<i64> = (0..16)
            .map(|i| {
                if i == 0 {
                    0
                } else if i % 2 == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        assert_eq!(s, PowerSeries::from_ints(&PrimeField::new(5).unwrap(), "t", &expected, 16));
    }

    #[test]
    fn series_input_agrees_with_mobius() {
        let p = 5;
        let coeffs: Vec<i64> = (0..16)
            .map(|i| {
                if i == 0 {
                    0
                } else if i % 2 == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        let act = LocalAction::from_series(p, p, p, &[coeffs]).unwrap();
        for k in 1..p {
            assert_eq!(i_x(&act, k).unwrap(), 2);
        }
        assert_eq!(artin_a(&act).unwrap(), 8);
    }

    #[test]
    fn tame_rotation() {
        for (p, n) in [(5, 4), (7, 3), (7, 6), (11, 5), (3, 2)] {
            let act = LocalAction::rotation(p, n).unwrap();
            assert!((1..n).all(|k| i_x(&act, k).unwrap() == 1));
            assert_eq!(artin_a(&act).unwrap(), n - 1);
            let a = artin_a(&act).unwrap();
            assert_eq!(hurwitz_wild(n, 0, &[a, a]), -2);
        }
        assert!(LocalAction::rotation(5, 3).is_err());
    }

    #[test]
    fn explicit_cubic_term() {
        // t + t^3 is not an involution, so it cannot generate a group of order 2.
        let act = LocalAction::from_series(3, 2, 2, &[vec![0, 1, 0, 1, 0, 0, 0, 0]]).unwrap_err();
        assert!(matches!(act, RamificationError::InvalidAction(_)));
        let act = LocalAction::from_series(5, 3, 3, &[vec![0, 1, 0, 1, 0, 0], vec![0, 1, 0, 2, 0, 0]]).unwrap();
        assert_eq!(i_x(&act, 1).unwrap(), 3);
    }

    #[test]
    fn trivial_stabilizer_has_zero_term() {
        let act = LocalAction::from_series(5, 5, 1, &[]).unwrap();
        assert_eq!(artin_a(&act).unwrap(), 0);
        assert_eq!(hurwitz_wild(5, 1, &[]), 0);
    }

    #[test]
    fn precision_exhaustion() {
        let act = LocalAction::from_series(5, 2, 2, &[vec![0, 1, 0, 0], vec![0, 1, 0, 0]]);
        assert!(act.is_err());
        let act = LocalAction::from_series(5, 3, 3, &[vec![0, 1, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(i_x(&act, 1), Err(RamificationError::PrecisionExhausted { precision: 4 }));
    }

    #[test]
    fn invalid_actions() {
        assert!(LocalAction::mobius(5, 5, 5, [[1, 1], [0, 1]]).is_err());
        assert!(LocalAction::mobius(5, 5, 5, [[1, 0], [1, 1]]).is_ok());
        assert!(LocalAction::mobius(5, 5, 4, [[1, 0], [1, 1]]).is_err());
        assert!(LocalAction::mobius(5, 6, 4, [[2, 0], [0, 1]]).is_err());
        assert!(LocalAction::from_series(5, 5, 5, &[vec![1, 1, 0]]).is_err());
    }

    #[test]
    fn ramify_json() {
        let input = RamifyInput::from_json(r#"{"p":5,"order":5,"stab":5,"mobius":[[1,0],[1,1]],"gY":0}"#).unwrap();
        let r = ramify(&input).unwrap();
        assert_eq!(r.i_values, vec![2, 2, 2, 2]);
        assert_eq!(r.artin_a, 8);
        assert_eq!(r.deg_omega_x, Some(-2));
        assert!(!r.tame);
        assert!(RamifyInput::from_json(r#"{"p":5,"order":5,"stab":5,"extra":1}"#).is_err());
        let both =
            RamifyInput::from_json(r#"{"p":5,"order":5,"stab":5,"mobius":[[1,0],[1,1]],"series":[[0,1]]}"#).unwrap();
        assert!(ramify(&both).is_err());
    }

    /// Order of [[a, 0], [c, d]] in PGL_2(F_p).
    fn pgl_order(m: &Mat, p: i64) -> u64 {
        (1..=(p * p) as u64).find(|&k| is_scalar(&mat_pow(m, k, p))).unwrap()
    }

    proptest! {
        #[test]
        fn symmetry_and_tameness(p in prop::sample::select(vec![3u64, 5, 7, 11]), a in 1i64..11, c in 0i64..11, d in 1i64..11) {
            let pi = p as i64;
            prop_assume!(a % pi != 0 && d % pi != 0);
            let m = [[a % pi, 0], [c % pi, d % pi]];
            let h = pgl_order(&m, pi);
            prop_assume!(h > 1);
            let act = LocalAction::mobius(p, h, h, m).unwrap();
            for k in 1..h {
                prop_assert_eq!(i_x(&act, k).unwrap(), i_x(&act, h - k).unwrap());
            }
            let a_x = artin_a(&act).unwrap();
            prop_assert!(a_x >= h - 1);
            let tame = (1..h).all(|k| i_x(&act, k).unwrap() == 1);
            prop_assert_eq!(a_x == h - 1, tame);
            prop_assert_eq!(tame, !h.is_multiple_of(p));
        }

        #[test]
        fn composition_matches_group_law(j in 1u64..5, k in 1u64..5) {
            let act = LocalAction::translation_at_infinity(5).unwrap();
            let gj = act.element_series(j).unwrap();
            let gk = act.element_series(k).unwrap();
            prop_assert_eq!(gj.compose(&gk).unwrap(), act.element_series(j + k).unwrap());
        }
    }
}
