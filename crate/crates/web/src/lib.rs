//! wasm-bindgen bindings used by `www/index.html`. Every function returns a
//! JSON string so the page needs no generated TypeScript types.

use minpoly_proj::catalog::{decimals, table1_specs, TABLE1};
use minpoly_proj::exactprob::{pmp_exact, pmpmin_log};
use minpoly_proj::field::prime_power;
use minpoly_proj::ElementaryDivisorSpec;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// The 5 x 4 grid of reference probabilities: `[{name, values: [..]}]`.
#[wasm_bindgen]
pub fn table1() -> String {
    let rows: Vec<_> = table1_specs()
        .iter()
        .zip(TABLE1.iter())
        .map(|((name, spec), (_, reference))| {
            let values: Vec<String> = reference
                .iter()
                .enumerate()
                .map(|(i, r)| pmp_exact(spec, i + 1).to_decimal(decimals(r)))
                .collect();
            json!({ "name": name, "values": values })
        })
        .collect();
    json!(rows).to_string()
}

/// Exact probability for a spec in the JSON format accepted by the CLI:
/// `{fraction, decimal, n, q}`.
#[wasm_bindgen]
pub fn pmp(spec_json: &str, b: u32, digits: u32) -> Result<String, String> {
    if b == 0 {
        return Err("b must be at least 1".into());
    }
    let spec = ElementaryDivisorSpec::from_json(spec_json).map_err(|e| e.to_string())?;
    let p = pmp_exact(&spec, b as usize);
    Ok(json!({
        "fraction": p.to_string(),
        "decimal": p.to_decimal(digits as usize),
        "n": spec.dimension(),
        "q": spec.q(),
    })
    .to_string())
}

/// Worst-case failure probability for `b = 1..=bmax`:
/// `[{b, log10_failure, failure}]`.
#[wasm_bindgen]
pub fn failure_curve(q: u32, n: f64, bmax: u32) -> Result<String, String> {
    let q = u64::from(q);
    if prime_power(q).is_none() {
        return Err(format!("q = {q} is not a prime power"));
    }
    if !(n >= 1.0 && n.fract() == 0.0 && n <= 1e15) {
        return Err(format!("n = {n} must be a positive integer up to 1e15"));
    }
    let points = (1..=bmax as usize)
        .map(|b| {
            let log = pmpmin_log(q, n as u64, b).map_err(|e| e.to_string())?;
            Ok(json!({ "b": b, "log10_failure": log.log10_failure, "failure": log.failure }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(json!(points).to_string())
}
