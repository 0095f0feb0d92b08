//! Browser bindings for three strata-core operations. Every function returns
//! a JSON string: the result document, or `{"error": ...}`.

use serde::Serialize;
use strata_core::bubble_tree::enumerate;
use strata_core::cyclotomic::cot_sum;
use strata_core::equivariant_s4::{find_chain, S4Action, S4Triple};
use strata_core::index::{dim_s4_invariant, s4_index};
use strata_core::{Error, Rational};
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest `k` the page will enumerate.
pub const MAX_K: u32 = 5;

#[derive(Serialize)]
struct ErrorOut {
    error: String,
}

fn to_json<T: Serialize>(r: Result<T, Error>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v),
        Err(e) => serde_json::to_string(&ErrorOut { error: e.to_string() }),
    }
    .expect("documents serialize")
}

#[derive(Serialize)]
struct CotSumOut {
    a: i32,
    b: i32,
    m: i32,
    value: Rational,
}

#[wasm_bindgen]
pub fn cot_sum_json(a: i32, b: i32, m: i32) -> String {
    to_json(cot_sum(a.into(), b.into(), m.into()).map(|value| CotSumOut { a, b, m, value }))
}

#[derive(Serialize)]
struct DimS4Out {
    p: u32,
    q: i32,
    k: u32,
    m: u64,
    m_prime: u64,
    index: Rational,
    dimension: i64,
    chain: Vec<[u64; 3]>,
}

#[wasm_bindgen]
pub fn dim_s4_json(p: u32, q: i32, k: u32, m: i32, m_prime: i32) -> String {
    let run = || {
        let action = S4Action::new(p.into(), q.into())?;
        let t = S4Triple::new(&action, k.into(), m.into(), m_prime.into());
        let dimension = dim_s4_invariant(&action, &t)?;
        let chain = find_chain(&action, &t)?
            .unwrap_or_default()
            .into_iter()
            .map(|l| [l.k, l.m, l.m_prime])
            .collect();
        Ok(DimS4Out { p, q, k, m: t.m, m_prime: t.m_prime, index: s4_index(&action, &t)?, dimension, chain })
    };
    to_json(run())
}

#[derive(Serialize)]
struct TreesOut {
    k: u32,
    count: usize,
    trees: Vec<String>,
}

#[wasm_bindgen]
pub fn enumerate_trees_json(k: u32) -> String {
    let run = || {
        if k > MAX_K {
            return Err(Error::ResourceLimit(format!("the demo enumerates k <= {MAX_K}")));
        }
        let trees = enumerate(k.into())?;
        Ok(TreesOut { k, count: trees.len(), trees })
    };
    to_json(run())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn cot_sum_document() {
        assert_eq!(parse(&cot_sum_json(3, 1, 1))["value"], "1/3");
        assert!(parse(&cot_sum_json(4, 2, 1))["error"].is_string());
    }

    #[test]
    fn dim_s4_document() {
        let v = parse(&dim_s4_json(7, 3, 1, 2, 4));
        assert_eq!(v["dimension"], 1);
        assert_eq!(v["chain"], serde_json::json!([[1, 2, 4]]));
        assert!(parse(&dim_s4_json(3, 1, 1, 0, 1))["error"].as_str().unwrap().contains("precondition"));
    }

    #[test]
    fn trees_document() {
        assert_eq!(parse(&enumerate_trees_json(2))["count"], 6);
        assert!(parse(&enumerate_trees_json(MAX_K + 1))["error"].is_string());
    }
}
