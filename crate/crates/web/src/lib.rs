//! Browser bindings: fermion curves, restricted scalar curves and the
//! two-body packet field, each returned as a JSON string.

use accel_entanglement::curves::{
    fermion_curves, linspace, packet_grid, packet_window, scalar_table, Table,
};
use accel_entanglement::bogoliubov::{FERMION_R_MAX, SCALAR_R_MAX};
use accel_entanglement::entanglement::Scenario;
use accel_entanglement::packets::{Sign, TwoBodyParams};
use serde_json::json;
use wasm_bindgen::prelude::*;

pub const MAX_CURVE_POINTS: usize = 401;
pub const MAX_FIELD_POINTS: usize = 201;

fn check_points(n: usize, max: usize) -> Result<(), String> {
    if n < 2 || n > max {
        return Err(format!("point count must lie in [2, {max}], got {n}"));
    }
    Ok(())
}

fn table_json(t: &Table) -> String {
    t.to_json().to_string()
}

pub fn fermion_json(points: usize) -> Result<String, String> {
    check_points(points, MAX_CURVE_POINTS)?;
    let t = fermion_curves(&linspace(0.0, FERMION_R_MAX, points)).map_err(|e| e.to_string())?;
    Ok(table_json(&t))
}

pub fn restricted_scalar_json(max_pairs: usize, both: bool, points: usize) -> Result<String, String> {
    check_points(points, MAX_CURVE_POINTS)?;
    if max_pairs == 0 || max_pairs > 50 {
        return Err(format!("M must lie in [1, 50], got {max_pairs}"));
    }
    let scenarios: &[Scenario] = if both {
        &[Scenario::OneAccelerated, Scenario::BothAccelerated]
    } else {
        &[Scenario::OneAccelerated]
    };
    let grid = linspace(0.0, SCALAR_R_MAX, points);
    let t = scalar_table(&grid, accel_entanglement::DEFAULT_EPSILON, Some(max_pairs), scenarios)
        .map_err(|e| e.to_string())?;
    Ok(table_json(&t))
}

/// `{"lo", "hi", "n", "t", "values"}` with `values[i * n + j] = |Psi(x_i, y_j)|`.
pub fn packet_field_json(v1: f64, v2: f64, a1: f64, a2: f64, t: f64, points: usize) -> Result<String, String> {
    check_points(points, MAX_FIELD_POINTS)?;
    let params = TwoBodyParams {
        mass: 1.0,
        b: 1.0,
        x0: 0.0,
        v1,
        v2,
        a1,
        a2,
        sign: Sign::Plus,
    };
    let (lo, hi) = packet_window(&params, t);
    let table = packet_grid(params, t, points, Some((lo, hi))).map_err(|e| e.to_string())?;
    let col = table.column_index("abs_psi").expect("abs_psi column");
    let values: Vec<f64> = table.rows.iter().map(|r| r[col]).collect();
    Ok(json!({ "lo": lo, "hi": hi, "n": points, "t": t, "values": values }).to_string())
}

#[wasm_bindgen]
pub fn fermion_curves_json(points: usize) -> Result<String, JsError> {
    fermion_json(points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn restricted_scalar_curves_json(max_pairs: usize, both: bool, points: usize) -> Result<String, JsError> {
    restricted_scalar_json(max_pairs, both, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn packet_field(v1: f64, v2: f64, a1: f64, a2: f64, t: f64, points: usize) -> Result<String, JsError> {
    packet_field_json(v1, v2, a1, a2, t, points).map_err(|e| JsError::new(&e))
}
