//! Browser bindings. Every exported function takes plain numbers or strings
//! and returns a JSON string; errors become thrown JS strings.
//!
//! The `*_json` functions are ordinary Rust so they can be tested natively.

use holcensus::actions::{brace_from_regular, ybe_solution};
use holcensus::counts::{analyze_degree, CountOptions};
use holcensus::transitive::{enumerate_transitive_classes, SearchBudget};
use holcensus::{groups_of_order, HolomorphContext, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Keeps the page responsive: anything bigger is refused with a budget note.
const PAGE_HOL_BUDGET: usize = 1500;

fn page_budget() -> SearchBudget {
    SearchBudget {
        hol_order: PAGE_HOL_BUDGET,
        ..SearchBudget::default()
    }
}

fn find_group(order: usize, name: &str) -> Result<holcensus::CayleyGroup> {
    groups_of_order(order)?
        .into_iter()
        .find(|g| g.name() == name)
        .ok_or_else(|| holcensus::Error::Lookup(format!("no group {name} of order {order}")))
}

pub fn catalog_json(order: usize) -> Result<Value> {
    let groups = groups_of_order(order)?;
    Ok(Value::Array(
        groups
            .iter()
            .map(|g| {
                let aut = g.automorphism_group().order();
                json!({
                    "name": g.name(),
                    "structure": g.structure(),
                    "aut_order": aut,
                    "hol_order": aut * order,
                    "abelian": g.is_abelian(),
                })
            })
            .collect(),
    ))
}

pub fn census_row_json(degree: usize) -> Result<Value> {
    let opts = CountOptions {
        budget: page_budget(),
        ..CountOptions::default()
    };
    let a = analyze_degree(degree, &opts)?;
    let classes: Vec<Value> = a
        .details
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "order": c.order,
                "stabilizer_order": c.stabilizer_order,
                "hgs": c.hgs,
                "members": c.members.iter().map(|m| json!({
                    "type": m.type_name,
                    "class_size": m.class_size,
                    "hgs": m.hgs,
                    "almost_classical": m.almost_classical,
                    "bijective": m.correspondence.map(|x| x.is_bijective()),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "row": a.row,
        "cells": a.row.cells(),
        "types": a.types,
        "classes": classes,
        "notes": a.notes,
    }))
}

pub fn braces_json(degree: usize) -> Result<Value> {
    let mut out = Vec::new();
    for g in groups_of_order(degree)? {
        let ctx = HolomorphContext::build(&g)?;
        let records = match enumerate_transitive_classes(&ctx, &page_budget()) {
            Ok(r) => r,
            Err(e) if e.is_resource() => {
                out.push(json!({ "type": g.name(), "error": e.to_string() }));
                continue;
            }
            Err(e) => return Err(e),
        };
        for (i, r) in records.iter().enumerate().filter(|(_, r)| r.regular) {
            let brace = brace_from_regular(&ctx, &r.rep)?;
            let sol = ybe_solution(&brace)?;
            let involutive = (0..degree).all(|x| {
                (0..degree).all(|y| {
                    let (u, v) = sol.r[x][y];
                    sol.r[u][v] == (x, y)
                })
            });
            out.push(json!({
                "type": g.name(),
                "record": i,
                "trivial": brace.is_trivial(),
                "class_size": r.class_size,
                "additive": brace.add,
                "circle": brace.circ,
                "ybe": sol.r,
                "involutive": involutive,
            }));
        }
    }
    Ok(Value::Array(out))
}

pub fn holomorph_json(order: usize, name: &str) -> Result<Value> {
    let g = find_group(order, name)?;
    let ctx = HolomorphContext::build_with_budget(&g, 50_000)?;
    let gens = |p: &holcensus::PermGroup| p.generators().iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Ok(json!({
        "name": g.name(),
        "structure": g.structure(),
        "order": order,
        "aut_order": ctx.aut().order(),
        "hol_order": ctx.hol().order(),
        "lambda": gens(ctx.lambda()),
        "rho": gens(ctx.rho()),
        "aut": gens(ctx.aut()),
        "invariants": g.invariants(),
    }))
}

fn to_js(r: Result<Value>) -> std::result::Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Groups of the given order.
#[wasm_bindgen]
pub fn catalog(order: usize) -> std::result::Result<String, JsValue> {
    to_js(catalog_json(order))
}

/// Census row and class list for one degree.
#[wasm_bindgen]
pub fn census_row(degree: usize) -> std::result::Result<String, JsValue> {
    to_js(census_row_json(degree))
}

/// Every skew brace of the given order with its Yang-Baxter map.
#[wasm_bindgen]
pub fn braces(degree: usize) -> std::result::Result<String, JsValue> {
    to_js(braces_json(degree))
}

/// Generators and orders of `λ(N)`, `ρ(N)`, `Aut(N)` and `Hol(N)`.
#[wasm_bindgen]
pub fn holomorph(order: usize, name: &str) -> std::result::Result<String, JsValue> {
    to_js(holomorph_json(order, name))
}
