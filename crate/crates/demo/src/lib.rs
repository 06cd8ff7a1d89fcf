//! Browser bindings for three operations: build and solve a named
//! construction, search `ν(k)` for small `k`, and run the sparsification
//! pipeline on a pasted collection. Every function returns a JSON string;
//! failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use simcol::constructions::{
    bipartite_lower_bound, fks_extremal, list_counterexample, projective_plane,
    star_split_lower_bound,
};
use simcol::exact_color::{
    hypergraph_index, simultaneous_index, simultaneous_list_feasible, Budget, ListOutcome,
};
use simcol::fraclp::{nu_search, NuSearchConfig};
use simcol::sparsifier::{pipeline, SparsifyParams};
use simcol::{GraphCollection, Rational};
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest `k` offered in the page; larger searches take too long in a tab.
pub const MAX_DEMO_K: u32 = 7;
const DEMO_BUDGET: u64 = 2_000_000;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn collection_value(c: &GraphCollection) -> Value {
    serde_json::from_str(&c.to_json()).expect("collection JSON")
}

/// Builds `name` with parameters `a`, `b` and solves it exactly.
///
/// Names: `bipartite-lb Δ`, `list-counter Δ`, `star-split k Δ`, `fks ℓ Δ`,
/// `projective q`.
#[wasm_bindgen]
pub fn construct_and_solve(name: &str, a: u32, b: u32) -> String {
    let budget = Budget::nodes(DEMO_BUDGET);
    let (a, b) = (a as usize, b as usize);
    let collection_report = |c: GraphCollection, extra: Value| {
        let r = simultaneous_index(&c, budget);
        let mut v = json!({
            "instance": collection_value(&c),
            "edges": c.edge_count(),
            "max_degree": c.max_degree(),
            "index": r.optimum,
            "lower_bound": r.lower_bound,
            "optimal": r.optimal,
            "colouring": r.certificate.assignment,
        });
        v.as_object_mut()
            .unwrap()
            .extend(extra.as_object().unwrap().clone());
        v.to_string()
    };
    match name {
        "bipartite-lb" => match bipartite_lower_bound(a) {
            Ok(c) => collection_report(c, json!({})),
            Err(e) => error(e),
        },
        "star-split" => match star_split_lower_bound(a, b) {
            Ok(c) => collection_report(c, json!({})),
            Err(e) => error(e),
        },
        "list-counter" => match list_counterexample(a) {
            Ok(lc) => {
                let feasible = match simultaneous_list_feasible(&lc.collection, &lc.lists, budget) {
                    Ok(ListOutcome::Feasible(_)) => json!(true),
                    Ok(ListOutcome::Infeasible { .. }) => json!(false),
                    Err(_) => Value::Null,
                };
                collection_report(lc.collection, json!({ "list_feasible": feasible }))
            }
            Err(e) => error(e),
        },
        "fks" | "projective" => {
            let h = if name == "fks" {
                fks_extremal(a, b)
            } else {
                projective_plane(a)
            };
            match h {
                Ok(h) => {
                    let r = hypergraph_index(&h, budget);
                    json!({
                        "instance": h.to_text(),
                        "edges": h.edge_count(),
                        "max_degree": h.max_degree(),
                        "index": r.optimum,
                        "lower_bound": r.lower_bound,
                        "optimal": r.optimal,
                    })
                    .to_string()
                }
                Err(e) => error(e),
            }
        }
        other => error(format!("unknown construction `{other}`")),
    }
}

/// Exact `ν(k)` with its witness family, for `1 ≤ k ≤ 7`.
#[wasm_bindgen]
pub fn nu_for(k: u32) -> String {
    if k == 0 || k > MAX_DEMO_K {
        return error(format!("k must lie in 1..={MAX_DEMO_K}"));
    }
    match nu_search(k as usize, NuSearchConfig::default()) {
        Ok(w) => w.to_json(),
        Err(e) => error(e),
    }
}

/// Runs the sparsification pipeline on a collection in JSON form.
#[wasm_bindgen]
pub fn sparsify_collection(collection: &str, eps: &str, seed: u64) -> String {
    let c = match GraphCollection::from_json(collection) {
        Ok(c) => c,
        Err(e) => return error(e),
    };
    let epsilon: Rational = match eps.parse() {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    let params = SparsifyParams {
        epsilon,
        seed,
        budget: Budget::nodes(DEMO_BUDGET),
        ..SparsifyParams::default()
    };
    match pipeline(&c, None, &params) {
        Ok(out) => {
            let report: Value = serde_json::from_str(&out.report.to_json()).expect("report JSON");
            json!({
                "colouring": out.certificate.assignment,
                "report": report,
            })
            .to_string()
        }
        Err(e) => error(e),
    }
}
