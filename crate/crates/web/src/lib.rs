//! Browser bindings. Every call takes and returns JSON text so the page can
//! show the same reports the command-line tool prints.

use qtransfer::query::{parse_query, render, run_query, Format};
use qtransfer::{with_budget, Budget};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

// keep the page responsive on adversarial input
const BROWSER_BUDGET: u64 = 200_000;

fn answer(command: &str, payload: Value) -> String {
    let report = match parse_query(command, payload) {
        Ok(q) => with_budget(Budget::scaled(BROWSER_BUDGET), || run_query(&q)),
        Err(r) => r,
    };
    render(&report, Format::Json)
}

fn parse_json(command: &str, field: &str, text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| {
        let report = json!({
            "status": "error",
            "command": command,
            "error": { "kind": "schema", "message": format!("invalid JSON: {e}"), "path": field },
        });
        serde_json::to_string_pretty(&report).expect("static shape")
    })
}

/// Invariants and isotropy of a form given as `{"diagonal": [...]}` or `{"gram": [[...]]}`.
#[wasm_bindgen]
pub fn form_report(form: &str) -> String {
    let form = match parse_json("form-invariants", "form", form) {
        Ok(f) => f,
        Err(e) => return e,
    };
    let invariants = answer("form-invariants", json!({ "form": form.clone() }));
    let isotropy = answer("represents-zero", json!({ "form": form }));
    format!("{{\n\"invariants\": {invariants},\n\"isotropy\": {isotropy}\n}}")
}

/// Realizability of a field action on a K3 or hyper-Kähler lattice.
#[wasm_bindgen]
pub fn realizability(family: &str, n: u32, field: &str, m: u32, mode: &str) -> String {
    let field = match parse_json("hk", "field", field) {
        Ok(f) => f,
        Err(e) => return e,
    };
    let mut payload = json!({ "family": family, "field": field, "m": m, "mode": mode });
    if n > 0 {
        payload["n"] = json!(n);
    }
    answer("hk", payload)
}

/// The feasibility grid of one family over the built-in field catalog.
#[wasm_bindgen]
pub fn grid(family: &str, n: u32, mode: &str) -> String {
    let mut payload = json!({ "mode": mode, "families": [family] });
    if n > 0 {
        payload["n"] = json!(n);
    }
    answer("tabulate", payload)
}
