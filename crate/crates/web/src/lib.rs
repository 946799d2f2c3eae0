//! Browser bindings. Every exported function takes plain strings or numbers
//! and returns a JSON document; failures come back as `{"error": "..."}`.

use revsynth_core::{
    bounds, census, find_counterexample, is_realizable, min_ancilla, synthesize_mapping,
    BoolMapping,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Widest circuit the page will synthesize.
pub const MAX_DEMO_LINES: usize = 10;

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub n: usize,
    pub d: u32,
    pub sizes: Vec<u32>,
    pub min_ancilla: usize,
    pub bijective: bool,
    pub parity: Option<String>,
    pub realizable: Vec<bool>,
}

#[derive(Debug, Serialize)]
pub struct GateView {
    pub target: usize,
    pub controls: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct Synthesis {
    pub n: usize,
    pub q: usize,
    pub lines: usize,
    pub gates: Vec<GateView>,
    pub generalized_gate_count: usize,
    pub gate_count: usize,
    pub depth: usize,
    pub max_controls_emitted: usize,
    pub moving_points: usize,
    pub chains: usize,
    pub parity_fix: String,
    pub verified: bool,
    pub lower_bound: Option<f64>,
    pub upper_bound_t1: Option<f64>,
    pub circuit_text: String,
}

#[derive(Debug, Serialize)]
pub struct BoundPoint {
    pub n: u32,
    pub q: u32,
    pub lower: f64,
    pub upper_t1: f64,
    pub upper_no_memory: f64,
    pub upper_2n: f64,
}

/// Accepts the truth-table file format or a bare list of `2^n` decimal
/// outputs separated by spaces or commas.
pub fn parse_mapping(text: &str) -> Result<BoolMapping, String> {
    let trimmed = text.trim_start();
    if trimmed.starts_with("n ") || trimmed.starts_with('#') {
        return BoolMapping::parse(text).map_err(|e| e.to_string());
    }
    let table = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| format!("not a number: {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let len = table.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(format!("expected 2^n outputs with n >= 1, got {len}"));
    }
    BoolMapping::new(len.trailing_zeros() as usize, table).map_err(|e| e.to_string())
}

pub fn analyze(text: &str) -> Result<Analysis, String> {
    let f = parse_mapping(text)?;
    let c = census(&f);
    Ok(Analysis {
        n: f.n(),
        d: c.d,
        min_ancilla: min_ancilla(&f),
        bijective: f.is_bijective(),
        parity: f.to_permutation().map(|p| p.parity().to_string()),
        realizable: (0..=f.n()).map(|q| is_realizable(&f, q)).collect(),
        sizes: c.sizes,
    })
}

/// `q = None` uses the minimal ancilla count.
pub fn synthesize(text: &str, q: Option<usize>) -> Result<Synthesis, String> {
    let f = parse_mapping(text)?;
    let n = f.n();
    let q = q.unwrap_or_else(|| min_ancilla(&f));
    if n + q > MAX_DEMO_LINES {
        return Err(format!("the demo is limited to {MAX_DEMO_LINES} lines"));
    }
    let (c, report, e) = synthesize_mapping(&f, q).map_err(|e| e.to_string())?;
    let verified = find_counterexample(&f, &c).map_err(|e| e.to_string())?.is_none();
    Ok(Synthesis {
        n,
        q,
        lines: c.lines(),
        gates: c
            .gates()
            .iter()
            .map(|g| GateView {
                target: g.target(),
                controls: g.controls(),
            })
            .collect(),
        generalized_gate_count: report.generalized_gate_count,
        gate_count: c.complexity(),
        depth: c.depth(),
        max_controls_emitted: report.max_controls_emitted,
        moving_points: e.moving_count,
        chains: e.chains.len(),
        parity_fix: e.parity_fix.to_string(),
        verified,
        lower_bound: bounds::lower_bound(n as u32, q as u32).ok(),
        upper_bound_t1: bounds::upper_bound_t1(n as u32).ok(),
        circuit_text: c.serialize(),
    })
}

pub fn bound_series(n_from: u32, n_to: u32, q: u32) -> Result<Vec<BoundPoint>, String> {
    if n_from < 2 || n_from > n_to || n_to > 64 {
        return Err("need 2 <= from <= to <= 64".into());
    }
    let rows = bounds::bound_rows(n_from..=n_to, [q]).map_err(|e| e.to_string())?;
    Ok(rows
        .into_iter()
        .map(|r| BoundPoint {
            n: r.n,
            q: r.q,
            lower: r.lower,
            upper_t1: r.upper_t1,
            upper_no_memory: r.upper_no_memory,
            upper_2n: r.upper_2n,
        })
        .collect())
}

fn to_json<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(message: &str) -> String {
    serde_json::json!({ "error": message }).to_string()
}

#[wasm_bindgen]
pub fn analyze_json(text: &str) -> String {
    to_json(analyze(text))
}

/// Negative `q` means the minimal ancilla count.
#[wasm_bindgen]
pub fn synthesize_json(text: &str, q: i32) -> String {
    to_json(synthesize(text, usize::try_from(q).ok()))
}

#[wasm_bindgen]
pub fn bounds_json(n_from: u32, n_to: u32, q: u32) -> String {
    to_json(bound_series(n_from, n_to, q))
}
