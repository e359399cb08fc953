//! Browser bindings. Each export takes and returns JSON strings; the plain
//! functions below the wrappers carry the logic and are tested natively.

use qtree_core::charpoly::branched_fraction_string;
use qtree_core::invert::{invert_ratio_with, root_degree_from_ratio, InvertOptions};
use qtree_core::parse::parse_poly_any;
use qtree_core::spectra::Spectrum;
use qtree_core::spectra::{synthesize_spectrum, Problem};
use qtree_core::{compute_bundle, RationalFunction, RootedTree};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest tree the page will invert for; keeps the tab responsive.
pub const DEMO_MAX_P: usize = 12;
/// Largest tree the page will draw spectra for.
pub const DEMO_MAX_SPECTRUM_P: usize = 40;

fn tree_value(t: &RootedTree) -> Value {
    serde_json::to_value(t.to_json()).expect("tree JSON")
}

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Characteristic polynomials, reduced ratio and branched fraction.
pub fn forward(tree_json: &str) -> Result<String, String> {
    let t = RootedTree::from_json_str(tree_json).map_err(text)?;
    let b = compute_bundle(&t).map_err(text)?;
    Ok(json!({
        "tree": tree_value(&t),
        "psi": b.psi.to_string(),
        "psi_hat": b.psi_hat.to_string(),
        "ratio_num": b.ratio.num().to_string(),
        "ratio_den": b.ratio.den().to_string(),
        "fraction": branched_fraction_string(&t),
    })
    .to_string())
}

/// Neumann and Dirichlet eigenvalues with `sqrt(lambda) <= 2 pi periods`,
/// unit edge length.
pub fn spectra(tree_json: &str, periods: usize) -> Result<String, String> {
    let t = RootedTree::from_json_str(tree_json).map_err(text)?;
    if t.p() > DEMO_MAX_SPECTRUM_P {
        return Err(format!("demo limit is {DEMO_MAX_SPECTRUM_P} vertices"));
    }
    if !(1..=10).contains(&periods) {
        return Err("periods must be between 1 and 10".into());
    }
    let n = synthesize_spectrum(&t, Problem::Neumann, 1.0, periods).map_err(text)?;
    let d = synthesize_spectrum(&t, Problem::Dirichlet, 1.0, periods).map_err(text)?;
    let pairs = |s: &Spectrum| -> Vec<Value> {
        s.eigenvalues
            .iter()
            .map(|e| json!([e.value, e.multiplicity]))
            .collect()
    };
    Ok(json!({ "periods": periods, "neumann": pairs(&n), "dirichlet": pairs(&d) }).to_string())
}

/// Every rooted shape with at most `p_max` vertices whose ratio is
/// `num / den`.
pub fn invert(num: &str, den: &str, p_max: usize) -> Result<String, String> {
    if p_max > DEMO_MAX_P {
        return Err(format!("demo limit is p_max <= {DEMO_MAX_P}"));
    }
    let r = RationalFunction::new(
        parse_poly_any(num).map_err(text)?,
        parse_poly_any(den).map_err(text)?,
    )
    .map_err(text)?;
    let d0 = root_degree_from_ratio(&r).map_err(text)?;
    let inv = invert_ratio_with(&r, d0, &InvertOptions::new(p_max)).map_err(text)?;
    let candidates: Vec<Value> = inv
        .candidates
        .iter()
        .map(|c| {
            json!({
                "code": c.code,
                "tree": tree_value(&c.tree),
                "fraction": branched_fraction_string(&c.tree),
            })
        })
        .collect();
    Ok(json!({ "d0": d0, "complete": inv.complete, "candidates": candidates }).to_string())
}

#[wasm_bindgen(js_name = forward)]
pub fn forward_js(tree_json: &str) -> Result<String, JsError> {
    forward(tree_json).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = spectra)]
pub fn spectra_js(tree_json: &str, periods: usize) -> Result<String, JsError> {
    spectra(tree_json, periods).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = invert)]
pub fn invert_js(num: &str, den: &str, p_max: usize) -> Result<String, JsError> {
    invert(num, den, p_max).map_err(|e| JsError::new(&e))
}
