//! Browser bindings for the `www/` page. Every export returns a JSON string; failures
//! come back as `{"error": "..."}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiprod::{
    alpha, lambda, KStepStructure, LinearAlphaStructure, MinI64, OneStepTable, RangeStructure, SimpleRangeTree,
    TwoStepStructure,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_TRADEOFF_LOG: u32 = 20;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn build(structure: &str, values: Vec<i64>) -> Result<Box<dyn RangeStructure<MinI64>>, String> {
    let s: Box<dyn RangeStructure<MinI64>> = match structure {
        "one" => Box::new(OneStepTable::build(MinI64, values).map_err(|e| e.to_string())?),
        "two" => Box::new(TwoStepStructure::build(MinI64, values).map_err(|e| e.to_string())?),
        "alpha" => Box::new(LinearAlphaStructure::build(MinI64, values).map_err(|e| e.to_string())?),
        "simple" => Box::new(SimpleRangeTree::build(MinI64, values).map_err(|e| e.to_string())?),
        other => {
            let k = other
                .strip_prefix("k:")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| format!("unknown structure `{other}`"))?;
            Box::new(KStepStructure::build(MinI64, values, k).map_err(|e| e.to_string())?)
        }
    };
    Ok(s)
}

fn lambda_row(x: &str) -> Result<Value, String> {
    let x: u64 = x.trim().parse().map_err(|_| format!("`{x}` is not a natural number"))?;
    let lambdas = (0..=8u32).map(|k| lambda(k, x)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    Ok(json!({ "x": x, "lambda": lambdas, "alpha": alpha(x).map_err(|e| e.to_string())? }))
}

/// `lambda(k, x)` for `k = 0..=8` and `alpha(x)`.
#[wasm_bindgen]
pub fn hierarchy(x: &str) -> String {
    respond(lambda_row(x))
}

fn decompose_range(structure: &str, values: &str, i: usize, j: usize) -> Result<Value, String> {
    let values: Vec<i64> = values
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("`{t}` is not an integer")))
        .collect::<Result<_, _>>()?;
    let s = build(structure, values)?;
    let answer = s.query(i, j).map_err(|e| e.to_string())?;
    let pieces = s.decompose(i, j).map_err(|e| e.to_string())?;
    Ok(json!({
        "value": answer.value,
        "elements_used": answer.elements_used,
        "step_budget": s.step_budget(),
        "stored": s.stored_elements(),
        "pieces": pieces,
    }))
}

/// Answers `min(values[i..=j])` and lists the stored intervals that were combined.
#[wasm_bindgen]
pub fn decompose(structure: &str, values: &str, i: usize, j: usize) -> String {
    respond(decompose_range(structure, values, i, j))
}

fn tradeoff_rows(log_n: u32, queries: usize, seed: u64) -> Result<Value, String> {
    if !(1..=MAX_TRADEOFF_LOG).contains(&log_n) {
        return Err(format!("log n must lie in 1..={MAX_TRADEOFF_LOG}"));
    }
    let n = 1usize << log_n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..=1000)).collect();
    let mut rows = Vec::new();
    for name in ["two", "k:3", "k:4", "k:5", "alpha", "simple"] {
        let s = build(name, values.clone())?;
        let mut max = 0;
        let mut total = 0;
        for _ in 0..queries {
            let (a, b) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            let used = s.query(a.min(b), a.max(b)).map_err(|e| e.to_string())?.elements_used;
            max = max.max(used);
            total += used;
        }
        rows.push(json!({
            "structure": name,
            "stored": s.stored_elements(),
            "stored_per_n": s.stored_elements() as f64 / n as f64,
            "step_budget": s.step_budget(),
            "max_elements_used": max,
            "mean_elements_used": if queries == 0 { 0.0 } else { total as f64 / queries as f64 },
        }));
    }
    Ok(json!({ "n": n, "rows": rows }))
}

/// Stored elements against query steps for every array structure at `n = 2^log_n`.
#[wasm_bindgen]
pub fn tradeoff(log_n: u32, queries: usize, seed: u32) -> String {
    respond(tradeoff_rows(log_n, queries, seed as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn hierarchy_values() {
        let v = parse(hierarchy("65536"));
        assert_eq!(v["lambda"][4], 4);
        assert_eq!(v["alpha"], 3);
        assert!(parse(hierarchy("0"))["error"].is_string());
        assert!(parse(hierarchy("x"))["error"].is_string());
    }

    #[test]
    fn decompose_tiles_the_query() {
        let v = parse(decompose("k:3", "5 2 7 1 9 4 4 8 3 6", 2, 9));
        assert_eq!(v["value"], 1);
        let pieces = v["pieces"].as_array().unwrap();
        assert_eq!(pieces.len() as u64, v["elements_used"].as_u64().unwrap());
        assert!(pieces.len() <= 3);
        assert_eq!(pieces[0][0], 2);
        assert_eq!(pieces[pieces.len() - 1][1], 9);
        assert!(parse(decompose("k:3", "1 2", 2, 3))["error"].is_string());
        assert!(parse(decompose("k:1", "1 2", 1, 2))["error"].is_string());
        assert!(parse(decompose("bogus", "1 2", 1, 2))["error"].is_string());
    }

    #[test]
    fn tradeoff_rows_are_ordered() {
        let v = parse(tradeoff(12, 500, 1));
        let rows = v["rows"].as_array().unwrap();
        let stored: Vec<u64> = rows.iter().map(|r| r["stored"].as_u64().unwrap()).collect();
        assert!(stored[0] > stored[2] && stored[2] > stored[4]);
        for r in rows {
            assert!(r["max_elements_used"].as_u64() <= r["step_budget"].as_u64());
        }
        assert!(parse(tradeoff(0, 1, 1))["error"].is_string());
    }
}
