use std::fmt::Write as _;

use serde::Serialize;

use super::formulas::degree_if_known;
use super::{
    arithmetic_genus, betti, chi_and_irregularity, euler_number, fiber_multiplicities, kappa_one_criteria,
    kodaira_from_degree, picard_rank, weight_spaces, EType, FiberReport, InvariantError, Kappa, Surface, XHint,
    SCHEMA_VERSION,
};
use crate::invariants::formulas::kodaira;

/// Weight spaces are listed for groups up to this order.
const MAX_LISTED_ORDER: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightSpace {
    pub character: Vec<u64>,
    pub dim: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub schema: u32,
    pub p: u64,
    pub group: String,
    #[serde(rename = "gY")]
    pub g_y: u32,
    #[serde(rename = "deg_omega_X")]
    pub deg_omega_x: Option<i64>,
    #[serde(rename = "p_a_X")]
    pub p_a_x: Option<i64>,
    pub kappa: Kappa,
    pub betti: [u64; 5],
    pub euler_number: i64,
    pub q: Option<u64>,
    pub chi: Option<i64>,
    pub h0_omega: Option<u64>,
    pub pic_reduced: Option<bool>,
    pub rho: u64,
    pub fibers: Vec<FiberReport>,
    /// Nonzero weight spaces of H^0(X, ω_X).
    pub weight_spaces: Option<Vec<WeightSpace>>,
    pub kappa_one_criteria: Option<bool>,
    pub class_row: String,
    pub x_row: String,
    pub aut0: String,
    pub flags: Vec<String>,
}

impl InvariantReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Cross-checks the hint and hom_rank against the computed arithmetic genus.
fn check_hint(s: &Surface, p_a: Option<i64>) -> Result<(), InvariantError> {
    let d = s.data();
    let hint = d.x_hint;
    let bad = |reason: String| Err(InvariantError::inconsistent("x_hint", reason));
    if hint.is_rational() && s.g_y() != 0 {
        return bad(format!("a rational X maps onto a base of genus 0, not {}", s.g_y()));
    }
    if hint == XHint::EllipticTranslations && (s.g_y() != 1 || !s.orbits().is_empty()) {
        return bad("translations on an elliptic curve give a torsor over an elliptic base".into());
    }
    if hint == XHint::EllipticOther && s.g_y() != 0 {
        return bad("a non-translation action on an elliptic curve has quotient P^1".into());
    }
    let Some(p_a) = p_a else { return Ok(()) };
    let expected = match hint {
        XHint::Unknown => None,
        XHint::RationalSmooth => (p_a != 0).then_some("p_a(X) = 0"),
        XHint::RationalCuspidal => {
            if p_a < 1 {
                Some("p_a(X) >= 1")
            } else if p_a == 1 && !matches!(d.p, 2 | 3) {
                Some("p = 2 or 3 for a cuspidal rational curve of arithmetic genus 1")
            } else {
                None
            }
        }
        XHint::EllipticTranslations | XHint::EllipticOther => (p_a != 1).then_some("p_a(X) = 1"),
        XHint::Higher => (p_a < 2).then_some("p_a(X) >= 2"),
    };
    if let Some(e) = expected {
        return bad(format!("hint {hint:?} requires {e}, but the orbit data give p_a(X) = {p_a}"));
    }
    let per_genus = if d.e_type == EType::Supersingular { 4 } else { 2 };
    if d.hom_rank as i64 > per_genus * p_a {
        return Err(InvariantError::inconsistent(
            "hom_rank",
            format!(
                "rank Hom(Alb(X), E) <= {per_genus} * p_a(X) = {} for {:?} E, got {}",
                per_genus * p_a,
                d.e_type,
                d.hom_rank
            ),
        ));
    }
    Ok(())
}

struct Row {
    class_row: &'static str,
    x_row: &'static str,
    aut0: &'static str,
}

fn row_for(s: &Surface, kappa: Kappa, flags: &mut Vec<String>) -> Row {
    const ELLIPTIC: &str = "Elliptic curve";
    match kappa {
        Kappa::NegInf => Row { class_row: "(Elliptic) ruled surface", x_row: "P^1", aut0: ELLIPTIC },
        Kappa::One => Row { class_row: "Properly elliptic surface", x_row: "Any other G-normal curve", aut0: ELLIPTIC },
        Kappa::Zero => {
            let quasi = Row { class_row: "Quasi-hyperelliptic", x_row: "Rational with a cusp", aut0: ELLIPTIC };
            let hyper = Row { class_row: "Hyperelliptic", x_row: ELLIPTIC, aut0: ELLIPTIC };
            let abelian = Row { class_row: "Abelian surface", x_row: ELLIPTIC, aut0: "Abelian surface (S itself)" };
            match s.data().x_hint {
                XHint::RationalCuspidal => quasi,
                XHint::EllipticTranslations => abelian,
                XHint::EllipticOther => hyper,
                _ if s.g_y() == 1 && s.orbits().is_empty() => abelian,
                _ if matches!(s.p(), 2 | 3) => {
                    flags.push(
                        "kappa = 0 over P^1 in characteristic 2 or 3: X is an elliptic curve or a \
                         cuspidal rational curve; set x_hint to decide"
                            .into(),
                    );
                    Row {
                        class_row: "Hyperelliptic or Quasi-hyperelliptic",
                        x_row: "Elliptic curve or rational with a cusp",
                        aut0: ELLIPTIC,
                    }
                }
                _ => hyper,
            }
        }
    }
}

/// Full decision procedure: invariants plus the classification row.
pub fn classify(s: &Surface) -> Result<InvariantReport, InvariantError> {
    let mut flags = Vec::new();
    let deg = degree_if_known(s);
    let p_a = deg.map(arithmetic_genus).transpose()?;
    check_hint(s, p_a)?;

    if let Some(sum) = s.monodromy_sum() {
        if !sum.is_zero() {
            return Err(InvariantError::inconsistent(
                "orbits",
                format!(
                    "orbit monodromies sum to {sum}, not 0: some weight spaces of H^0(ω_X) \
                     would have fractional dimension"
                ),
            ));
        }
        if s.g_y() == 0 && s.stabilizers_generate() == Some(false) {
            return Err(InvariantError::inconsistent(
                "orbits",
                "over P^1 the stabilizers must generate G; otherwise X is disconnected",
            ));
        }
    }

    let kappa = match deg {
        Some(d) => kodaira_from_degree(d),
        None => kodaira(s)?,
    };
    if kappa == Kappa::Zero && deg == Some(0) {
        flags.push("deg ω_X = 0: ω_X taken to be trivial (p_a(X) = 1)".into());
    }
    let b = betti(s.g_y());
    let irr = chi_and_irregularity(s).ok();
    let fibers = match fiber_multiplicities(s) {
        Ok(f) => f,
        Err(_) => {
            flags.push("non-diagonalizable G: χ, q, fibers and weight spaces not computed".into());
            Vec::new()
        }
    };

    let mut spaces = None;
    if let Some(cg) = s.character_group() {
        if cg.order() <= MAX_LISTED_ORDER {
            let all = weight_spaces(s)?;
            let total: i64 = all.iter().map(|(_, d)| d).sum();
            if Some(total) != p_a {
                return Err(InvariantError::inconsistent(
                    "orbits",
                    format!("weight spaces sum to {total}, but p_a(X) = {p_a:?}"),
                ));
            }
            let trivial = all.iter().any(|(c, _)| {
                !c.is_zero() && s.orbits().iter().any(|o| o.stabilizer.as_ref().is_some_and(|h| h.restrict(cg, c) == 0))
            });
            if trivial {
                flags.push(
                    "some nonzero characters restrict trivially to a stabilizer; their orbit \
                     term is taken as 0 (m = n)"
                        .into(),
                );
            }
            spaces = Some(
                all.into_iter()
                    .filter(|(_, d)| *d != 0)
                    .map(|(c, d)| WeightSpace { character: c.residues, dim: d })
                    .collect(),
            );
        }
    }

    let criteria = (s.is_diagonalizable() && s.group().is_infinitesimal())
        .then(|| kappa_one_criteria(s.g_y(), s.orbits().len() as u64, s.p()));
    if criteria == Some(true) && kappa != Kappa::One {
        return Err(InvariantError::inconsistent(
            "orbits",
            format!("the fiber-count criterion forces κ = 1, but κ = {kappa}"),
        ));
    }

    let row = row_for(s, kappa, &mut flags);
    Ok(InvariantReport {
        schema: SCHEMA_VERSION,
        p: s.p(),
        group: s.group().to_string(),
        g_y: s.g_y(),
        deg_omega_x: deg,
        p_a_x: p_a,
        kappa,
        betti: b,
        euler_number: euler_number(&b),
        q: irr.map(|i| i.q),
        chi: irr.map(|i| i.chi),
        h0_omega: irr.map(|i| i.h0_omega),
        pic_reduced: irr.map(|i| i.pic_reduced),
        rho: picard_rank(s),
        fibers,
        weight_spaces: spaces,
        kappa_one_criteria: criteria,
        class_row: row.class_row.into(),
        x_row: row.x_row.into(),
        aut0: row.aut0.into(),
        flags,
    })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "unknown".into())
}

/// Aligned text table with the classification columns, then the remaining
/// invariants one per line.
pub fn render_table(r: &InvariantReport) -> String {
    let head = ["kappa", "S", "X", "g(Y)", "b1", "b2"];
    let row = [
        r.kappa.to_string(),
        r.class_row.clone(),
        r.x_row.clone(),
        r.g_y.to_string(),
        r.betti[1].to_string(),
        r.betti[2].to_string(),
    ];
    let widths: Vec<usize> = head.iter().zip(&row).map(|(h, v)| h.chars().count().max(v.chars().count())).collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    let head: Vec<String> = head.iter().map(|s| s.to_string()).collect();
    writeln!(out, "{}", line(&head)).unwrap();
    writeln!(out, "{}", line(&row)).unwrap();
    writeln!(out).unwrap();

    let b = &r.betti;
    let fibers = if r.fibers.is_empty() {
        "none".to_string()
    } else {
        r.fibers
            .iter()
            .map(|f| format!("{}{}", f.multiplicity, if f.tame { "" } else { " (wild)" }))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let fields: Vec<(&str, String)> = vec![
        ("p", r.p.to_string()),
        ("G", r.group.clone()),
        ("deg omega_X", opt(r.deg_omega_x)),
        ("p_a(X)", opt(r.p_a_x)),
        ("betti", format!("({}, {}, {}, {}, {})", b[0], b[1], b[2], b[3], b[4])),
        ("euler number", r.euler_number.to_string()),
        ("chi(O_S)", opt(r.chi)),
        ("q(S)", opt(r.q)),
        ("h0(omega_S)", opt(r.h0_omega)),
        ("Pic reduced", opt(r.pic_reduced)),
        ("rho(S)", r.rho.to_string()),
        ("multiple fibers", fibers),
        ("Aut0(S)", r.aut0.clone()),
    ];
    let key_w = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in fields {
        writeln!(out, "{k:<key_w$}  {v}").unwrap();
    }
    if let Some(c) = r.kappa_one_criteria {
        writeln!(out, "{:<key_w$}  {c}", "kappa=1 criteria").unwrap();
    }
    for f in &r.flags {
        writeln!(out, "flag: {f}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupscheme::Atom;
    use crate::invariants::{OrbitDatum, SurfaceData};

    fn mu_data(p: u64, n: u64, g_y: u32, weights: &[u64]) -> SurfaceData {
        let orbits = weights.iter().map(|&w| OrbitDatum::weighted(n, vec![w])).collect();
        SurfaceData::simple(p, vec![Atom::Mu { n }], g_y, orbits)
    }

    #[test]
    fn classification_rows() {
        let ruled = classify(&mu_data(5, 5, 0, &[1, 4]).validate().unwrap()).unwrap();
        assert_eq!((ruled.kappa, ruled.betti[1], ruled.betti[2]), (Kappa::NegInf, 2, 2));
        assert_eq!(ruled.class_row, "(Elliptic) ruled surface");

        let mut d = mu_data(3, 3, 0, &[1, 1, 1]);
        let amb = classify(&d.validate().unwrap()).unwrap();
        assert_eq!(amb.kappa, Kappa::Zero);
        assert_eq!(amb.class_row, "Hyperelliptic or Quasi-hyperelliptic");
        assert!(amb.flags.iter().any(|f| f.contains("x_hint")));
        d.x_hint = XHint::RationalCuspidal;
        let qh = classify(&d.validate().unwrap()).unwrap();
        assert_eq!(qh.class_row, "Quasi-hyperelliptic");
        d.x_hint = XHint::EllipticOther;
        assert_eq!(classify(&d.validate().unwrap()).unwrap().class_row, "Hyperelliptic");

        let mut ab = mu_data(5, 5, 1, &[]);
        ab.x_hint = XHint::EllipticTranslations;
        let r = classify(&ab.validate().unwrap()).unwrap();
        assert_eq!(r.class_row, "Abelian surface");
        assert_eq!(r.betti, [1, 4, 6, 4, 1]);
        assert_eq!(r.q, Some(2));
        assert_eq!(r.aut0, "Abelian surface (S itself)");

        let pe = classify(&mu_data(5, 5, 0, &[1; 5]).validate().unwrap()).unwrap();
        assert_eq!(pe.deg_omega_x, Some(10));
        assert_eq!(pe.class_row, "Properly elliptic surface");
        assert_eq!(pe.kappa_one_criteria, Some(true));
    }

    #[test]
    fn hints_cross_checked() {
        let mut d = mu_data(5, 5, 0, &[1; 5]);
        d.x_hint = XHint::RationalSmooth;
        assert!(matches!(classify(&d.validate().unwrap()), Err(InvariantError::InconsistentData { .. })));
        let mut d = mu_data(5, 2, 0, &[1, 1, 1, 1]);
        d.x_hint = XHint::RationalCuspidal;
        // p_a = 1 but p = 5: no quasi-hyperelliptic surfaces.
        assert_eq!(classify(&d.validate().unwrap()).unwrap_err().exit_code(), 2);
        let mut d = mu_data(5, 5, 0, &[1; 5]);
        d.hom_rank = 13;
        assert!(classify(&d.validate().unwrap()).is_err());
        d.hom_rank = 12;
        assert_eq!(classify(&d.validate().unwrap()).unwrap().rho, 14);
    }

    #[test]
    fn non_diagonalizable_surfaces() {
        let mut d = SurfaceData::simple(
            2,
            vec![Atom::SsE2],
            0,
            vec![
                OrbitDatum { n: 2, weight: None, stabilizer: None, label: None },
                OrbitDatum { n: 2, weight: None, stabilizer: None, label: None },
            ],
        );
        d.e_type = EType::Supersingular;
        assert!(matches!(classify(&d.validate().unwrap()), Err(InvariantError::NotSupported(_))));
        d.x_hint = XHint::RationalSmooth;
        let r = classify(&d.validate().unwrap()).unwrap();
        assert_eq!(r.kappa, Kappa::NegInf);
        assert_eq!(r.q, None);
        assert!(r.fibers.is_empty());
    }

    #[test]
    fn disconnected_data_rejected() {
        // μ_3 × μ_3 over P^1 with all stabilizers equal to one factor.
        let mut orbits = Vec::new();
        for w in [1, 2] {
            let mut o = OrbitDatum::weighted(3, vec![w, 0]);
            o.stabilizer = Some(vec![1, 0]);
            orbits.push(o);
        }
        let d = SurfaceData::simple(2, vec![Atom::Mu { n: 3 }, Atom::Mu { n: 3 }], 0, orbits);
        let err = classify(&d.validate().unwrap()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn table_layout() {
        let mut d = mu_data(3, 3, 0, &[1, 1, 1]);
        d.x_hint = XHint::RationalCuspidal;
        let t = render_table(&classify(&d.validate().unwrap()).unwrap());
        let mut lines = t.lines();
        assert_eq!(lines.next().unwrap(), "kappa  S                    X                     g(Y)  b1  b2");
        assert_eq!(lines.next().unwrap(), "0      Quasi-hyperelliptic  Rational with a cusp  0     2   2");
    }
}
