//! The `verify` subcommand: named symbolic checks with PASS/FAIL lines.

use std::fmt::Write as _;

use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use isotrivial::algebra::{Field, TruncElt, TruncatedAlgebra};
use isotrivial::families::{singular_scan, verify_calcoli, SpaceCurveFamily};
use isotrivial::groupscheme::e2_group_law;
use isotrivial::pgl2::{
    embed_ordinary, generic_mu2_pair, ordinary_hom_check, scan_fixed_points, supersingular_hom_check, ProjMat2,
};

use crate::{Format, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Check {
    E2Law,
    EmbedOrdinary,
    EmbedSupersingular,
    FixedPoints,
    Calcoli,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::E2Law => "e2_law",
            Check::EmbedOrdinary => "embed_ordinary",
            Check::EmbedSupersingular => "embed_supersingular",
            Check::FixedPoints => "fixed_points",
            Check::Calcoli => "calcoli",
        }
    }

    fn default_p(self) -> u64 {
        match self {
            Check::Calcoli => 5,
            _ => 2,
        }
    }
}

#[derive(Debug, Serialize)]
struct Item {
    name: String,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

#[derive(Debug, Serialize)]
struct Summary {
    check: Check,
    p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    passed: bool,
    items: Vec<Item>,
    notes: Vec<String>,
}

#[derive(Default)]
struct Items {
    items: Vec<Item>,
    notes: Vec<String>,
}

impl Items {
    fn push(&mut self, name: impl Into<String>, passed: bool, witness: impl FnOnce() -> String) {
        let witness = (!passed).then(witness);
        self.items.push(Item { name: name.into(), passed, witness });
    }
}

type Res<T> = Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn e2_law(out: &mut Items) -> Res<()> {
    let alg = TruncatedAlgebra::new(2, &[("t", 4), ("s", 4), ("r", 4)]).map_err(err)?;
    let v = |n| TruncElt::var(&alg, n).map_err(err);
    let (t, s, r) = (v("t")?, v("s")?, v("r")?);
    let zero = TruncElt::zero(&alg);
    let law = |a: &TruncElt, b: &TruncElt| e2_group_law(a, b).map_err(err);
    let id = law(&t, &zero)?;
    out.push("t (+) 0 = t", id == t, || format!("t (+) 0 = {id}"));
    let inv = law(&t, &t)?;
    out.push("t (+) t = 0", inv.is_zero(), || format!("t (+) t = {inv}"));
    let (ts, st) = (law(&t, &s)?, law(&s, &t)?);
    out.push("t (+) s = s (+) t", ts == st, || format!("{ts} != {st}"));
    let left = law(&ts, &r)?;
    let right = law(&t, &law(&s, &r)?)?;
    out.push("(t (+) s) (+) r = t (+) (s (+) r) mod (t^4, s^4, r^4)", left == right, || format!("{left} != {right}"));
    Ok(())
}

fn embed_supersingular(out: &mut Items) -> Res<()> {
    let alg = TruncatedAlgebra::new(2, &[("t", 4), ("s", 4)]).map_err(err)?;
    let t = TruncElt::var(&alg, "t").map_err(err)?;
    let s = TruncElt::var(&alg, "s").map_err(err)?;
    let c = supersingular_hom_check(&t, &s).map_err(err)?;
    out.push("(1 + t^2 s) embed(t) embed(s) = embed(t (+) s)", c.exact_match, || {
        format!("{} != {}", c.scaled_product, c.image_of_sum)
    });
    out.notes.push(format!("common reduced matrix {}", c.scaled_product));
    Ok(())
}

fn embed_ordinary_check(p: u64, out: &mut Items) -> Res<()> {
    for (t, s) in generic_mu2_pair(p).map_err(err)? {
        for c in ordinary_hom_check(&t, &s).map_err(err)? {
            let label = if p == 2 { String::new() } else { format!(" at t = {t}, s = {s}") };
            out.push(format!("embed{} embed{} = embed({}{}){label}", c.g, c.h, c.g, c.h), c.holds, || {
                "products differ up to every unit scalar".to_string()
            });
        }
    }
    Ok(())
}

fn fixed_points(p: u64, q_max: u64, out: &mut Items) -> Res<()> {
    let pairs = generic_mu2_pair(p).map_err(err)?;
    let (t, _) = pairs.iter().find(|(t, _)| *t != TruncElt::one(t.algebra())).ok_or("no non-trivial point of μ_2")?;
    let ms = [embed_ordinary(0, t).map_err(err)?, ProjMat2::swap(t.algebra())];
    let pts = scan_fixed_points(&ms, p, q_max).map_err(err)?;
    out.push(
        format!("no joint fixed point of embed(0,t) and the swap on P^1(F_q), q <= {q_max}"),
        pts.is_empty(),
        || pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "),
    );
    if p.pow(3) > q_max {
        out.notes.push(format!("reduced confidence: scanned only q <= {q_max}"));
    }
    Ok(())
}

fn calcoli(p: u64, q_max: u64, seed: u64, out: &mut Items) -> Res<()> {
    const SAMPLES: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for i in 0..SAMPLES {
        let fam = SpaceCurveFamily::random(&mut rng, p, 1).map_err(err)?;
        if !verify_calcoli(&fam) {
            bad.push(format!("sample {i}: a = {:?}", fam.a()));
        }
    }
    out.push(
        format!("h_x + h + h_z = 0 at (1, 1) and h_x + h - h_z = 0 at (1, -1), {SAMPLES} random families"),
        bad.is_empty(),
        || bad.join("; "),
    );

    let fam = SpaceCurveFamily::standard(p, 1).map_err(err)?;
    let pts = singular_scan(&fam.equations(), q_max).map_err(err)?;
    let sp = fam.special_points();
    let has = |pt: &[u32; 4]| pts.iter().any(|q| q.coords == pt);
    let listed = || pts.iter().map(|p| p.rendered.as_str()).collect::<Vec<_>>().join(", ");
    out.push("(1:0:1:α) is singular", has(&sp.x_prime), || format!("singular points: {}", listed()));
    out.push("(1:0:-1:β) is singular", has(&sp.x_double_prime), || format!("singular points: {}", listed()));
    out.push("(0:0:1:1) is smooth", !has(&sp.x), || format!("singular points: {}", listed()));
    let f = fam.field();
    let a: Vec<String> = fam.a().iter().map(|&x| f.render(x)).collect();
    out.notes.push(format!("a = ({}) in F_{}", a.join(", "), f.q()));
    Ok(())
}

pub(crate) fn run_verify(check: Check, p: Option<u64>, q_max: Option<u64>, seed: u64, format: Format) -> Output {
    let p = p.unwrap_or(check.default_p());
    let q_default = p.checked_pow(3).unwrap_or(u64::MAX);
    let mut items = Items::default();
    let (used_q, used_seed) = match check {
        Check::FixedPoints => (Some(q_max.unwrap_or(q_default)), None),
        Check::Calcoli => (Some(q_max.unwrap_or(q_default)), Some(seed)),
        _ => (None, None),
    };
    let result = match check {
        Check::E2Law | Check::EmbedSupersingular if p != 2 => {
            Err(format!("{} is only defined in characteristic 2", check.name()))
        }
        Check::E2Law => e2_law(&mut items),
        Check::EmbedSupersingular => embed_supersingular(&mut items),
        Check::EmbedOrdinary => embed_ordinary_check(p, &mut items),
        Check::FixedPoints => fixed_points(p, used_q.unwrap(), &mut items),
        Check::Calcoli => calcoli(p, used_q.unwrap(), seed, &mut items),
    };
    if let Err(e) = result {
        return Output::fail(1, e);
    }
    let passed = items.items.iter().all(|i| i.passed);
    let summary = Summary { check, p, q_max: used_q, seed: used_seed, passed, items: items.items, notes: items.notes };
    let stdout = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut s = String::new();
            let mut head = format!("verify {} (p = {p}", check.name());
            if let Some(q) = used_q {
                let _ = write!(head, ", q_max = {q}");
            }
            if let Some(seed) = used_seed {
                let _ = write!(head, ", seed {seed}");
            }
            let _ = writeln!(s, "{head})");
            for i in &summary.items {
                let _ = writeln!(s, "{}  {}", if i.passed { "PASS" } else { "FAIL" }, i.name);
                if let Some(w) = &i.witness {
                    let _ = writeln!(s, "      witness: {w}");
                }
            }
            for n in &summary.notes {
                let _ = writeln!(s, "      note: {n}");
            }
            let _ = writeln!(s, "{}", if passed { "PASS" } else { "FAIL" });
            s
        }
    };
    Output { stdout, stderr: String::new(), code: if passed { 0 } else { 1 } }
}
