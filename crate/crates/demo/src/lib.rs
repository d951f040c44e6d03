//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string: the result object on success, or
//! `{"error": kind, "message": text}` on failure, so the page never has to
//! catch exceptions. The same functions run natively for testing.

use quadcf::stats::gk_sweep;
use quadcf::{detect_period, expand, make_surd, CfError};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest `R` the histogram accepts; keeps one call well under a second.
pub const MAX_HISTOGRAM_R: u64 = 200_000;
pub const MAX_RIVER_STEPS: usize = 2_000;
pub const MAX_POSITION: usize = 12;
pub const MAX_A: i64 = 30;

fn respond(result: Result<Value, CfError>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.kind(), "message": e.to_string() }).to_string(),
    }
}

fn invalid(msg: String) -> CfError {
    CfError::InvalidArgument(msg)
}

/// Continued fraction of the larger root of `r x² + p x = q`.
#[wasm_bindgen]
pub fn expand_json(r: i64, p: i64, q: i64) -> String {
    respond(expand_value(r, p, q))
}

fn expand_value(r: i64, p: i64, q: i64) -> Result<Value, CfError> {
    let surd = make_surd(r, p, q)?;
    let cf = expand(&surd)?;
    Ok(json!({
        "delta": surd.discriminant(),
        "approx": surd.approx(),
        "preperiod": cf.preperiod(),
        "period": cf.period(),
        "period_sum": cf.period_sum(),
    }))
}

/// The first `steps` river steps of `r v² + p v u − q u²`; `steps = 0` means
/// one full period.
#[wasm_bindgen]
pub fn river_json(r: i64, p: i64, q: i64, steps: usize) -> String {
    respond(river_value(r, p, q, steps))
}

fn river_value(r: i64, p: i64, q: i64, steps: usize) -> Result<Value, CfError> {
    if steps > MAX_RIVER_STEPS {
        return Err(invalid(format!("at most {MAX_RIVER_STEPS} steps")));
    }
    let rep = detect_period(r, p, q)?;
    let steps = if steps == 0 { rep.n1 } else { steps };
    let mut trace = rep.trace.clone();
    while trace.states.len() <= steps {
        trace.push_step()?;
    }
    let rows: Vec<Value> = (0..=steps)
        .map(|n| {
            let s = trace.states[n];
            let (segment, side) = match n {
                0 => (Value::Null, Value::Null),
                _ => (json!(trace.segment_of(n)), json!(trace.sides[n - 1].symbol().to_string())),
            };
            json!({ "step": n, "segment": segment, "a": s.a, "b": s.b, "h": s.h, "side": side })
        })
        .collect();
    Ok(
        json!({ "n0": rep.n0, "n1": rep.n1, "quotients": rep.quotients, "minimal_period": rep.minimal_period, "steps": rows }),
    )
}

/// Frequencies of `a_s = A` for `A = 1..=a_max` over `q = 1..=R`, beside the
/// Gauss–Kuz'min limit.
#[wasm_bindgen]
pub fn histogram_json(r: i64, p: i64, big_r: u64, s: usize, a_max: i64) -> String {
    respond(histogram_value(r, p, big_r, s, a_max))
}

fn histogram_value(r: i64, p: i64, big_r: u64, s: usize, a_max: i64) -> Result<Value, CfError> {
    if big_r > MAX_HISTOGRAM_R {
        return Err(invalid(format!("R is capped at {MAX_HISTOGRAM_R} in the browser")));
    }
    if !(1..=MAX_POSITION).contains(&s) || !(1..=MAX_A).contains(&a_max) {
        return Err(invalid(format!("need 1 ≤ s ≤ {MAX_POSITION} and 1 ≤ A ≤ {MAX_A}")));
    }
    let rep = gk_sweep(r, p, big_r, &[s], a_max)?;
    let total = rep.rows.first().map_or(0, |row| row.total);
    let bars: Vec<Value> = rep
        .rows
        .iter()
        .map(|row| json!({ "A": row.a, "count": row.count, "empirical": row.empirical, "gk_limit": row.gk_limit }))
        .collect();
    Ok(json!({ "total": total, "excluded": rep.excluded_square_delta + rep.excluded_nonpositive_delta, "bars": bars }))
}
