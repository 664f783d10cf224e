//! wasm-bindgen exports for the static demo page in `www/`. Every export
//! takes and returns JSON text; failures come back as `{"error": "..."}` so
//! the page never has to catch exceptions.

use isotrivial::algebra::Gf;
use isotrivial::families::{plane_family_to_surface, PlaneCurveFamily, Root};
use isotrivial::invariants::{classify, render_table, EType, SurfaceData};
use isotrivial::ramification::{ramify, RamifyInput};
use wasm_bindgen::prelude::wasm_bindgen;

fn error_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

/// Classifies SurfaceData JSON; returns the report plus its text table.
#[wasm_bindgen]
pub fn classify_surface(input: &str) -> String {
    let result = SurfaceData::from_json(input).and_then(|d| d.validate()).and_then(|s| classify(&s));
    match result {
        Ok(r) => {
            let report: serde_json::Value = serde_json::from_str(&r.to_json()).expect("report is JSON");
            serde_json::json!({ "report": report, "table": render_table(&r) }).to_string()
        }
        Err(e) => error_json(e),
    }
}

/// Local ramification data for an action description such as
/// `{"p":5,"order":5,"stab":5,"mobius":[[1,0],[1,1]]}`.
#[wasm_bindgen]
pub fn ramify_action(input: &str) -> String {
    match RamifyInput::from_json(input).map_err(|e| e.to_string()).and_then(|d| ramify(&d).map_err(|e| e.to_string())) {
        Ok(r) => serde_json::to_string(&r).expect("report serializes"),
        Err(e) => error_json(e),
    }
}

/// SurfaceData for z^{p^r} = f(x, y) over F_{p^r}, f vanishing at the given
/// roots (comma separated field elements, or `inf`).
#[wasm_bindgen]
pub fn plane_example(p: u32, r: u32, roots: &str) -> String {
    let build = || -> Result<SurfaceData, String> {
        let field = Gf::new(p as u64, r).map_err(|e| e.to_string())?;
        let roots = roots
            .split(',')
            .map(|s| match s.trim() {
                "inf" => Ok(Root::Infinity),
                s => s
                    .parse::<u32>()
                    .ok()
                    .filter(|&v| (v as u64) < field.q())
                    .map(Root::Finite)
                    .ok_or_else(|| format!("`{s}` is not an element of F_{}", field.q())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let fam = PlaneCurveFamily::prime_power(field, r, roots).map_err(|e| e.to_string())?;
        Ok(plane_family_to_surface(&fam, EType::Ordinary))
    };
    match build() {
        Ok(d) => d.to_json(),
        Err(e) => error_json(e),
    }
}
