//! Browser bindings for the contour demo.
//!
//! Point sets cross the boundary as flat `[x0, y0, x1, y1, ...]` arrays.

use wasm_bindgen::prelude::*;
use zonoid_depth::{
    contour_levels, convex_hull_2d, generate_points, lq_depth, mahalanobis_depth, zonoid_depth,
    ContourConfig, DataCloud, DepthError, DepthOrder, Scenario, ScenarioSpec,
};

fn cloud_from_flat(xy: &[f64]) -> Result<DataCloud, String> {
    if !xy.len().is_multiple_of(2) {
        return Err("coordinate array has odd length".into());
    }
    let rows: Vec<[f64; 2]> = xy.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
    DataCloud::from_rows(&rows).map_err(|e| e.to_string())
}

fn parse_order(q: &str) -> Result<DepthOrder, String> {
    q.parse().map_err(|e: DepthError| e.to_string())
}

pub fn scenario_points(kind: &str, n: usize, seed: u64) -> Result<Vec<f64>, String> {
    let kind: Scenario = kind.parse().map_err(|e: DepthError| e.to_string())?;
    Ok(generate_points(ScenarioSpec { kind, n, seed }).as_slice().to_vec())
}

/// Contours packed as `[level, m, x0, y0, ..., x_{m-1}, y_{m-1}]` per level.
pub fn packed_contours(xy: &[f64], q: &str, levels: &[f64], rays: usize) -> Result<Vec<f64>, String> {
    let cloud = cloud_from_flat(xy)?;
    let config = ContourConfig {
        rays,
        ..ContourConfig::default()
    };
    let polys = contour_levels(&cloud, parse_order(q)?, levels, &config).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for p in polys {
        out.push(p.level);
        out.push(p.vertices.len() as f64);
        out.extend(p.vertices.iter().flatten());
    }
    Ok(out)
}

/// Depth of `(x, y)`; `q` is an order, `"zonoid"` or `"mahalanobis"`.
pub fn depth_of(xy: &[f64], x: f64, y: f64, q: &str) -> Result<f64, String> {
    let cloud = cloud_from_flat(xy)?;
    let p = [x, y];
    let result = match q {
        "zonoid" => zonoid_depth(&cloud, &p),
        "mahalanobis" => mahalanobis_depth(&cloud, &p),
        _ => lq_depth(&cloud, &p, parse_order(q)?),
    };
    result.map(|r| r.depth).map_err(|e| e.to_string())
}

pub fn hull_points(xy: &[f64]) -> Vec<f64> {
    let pts: Vec<[f64; 2]> = xy.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
    convex_hull_2d(&pts).into_iter().flatten().collect()
}

#[wasm_bindgen]
pub fn generate_scenario(kind: &str, n: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    scenario_points(kind, n, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn contours(xy: &[f64], q: &str, levels: &[f64], rays: usize) -> Result<Vec<f64>, JsError> {
    packed_contours(xy, q, levels, rays).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn depth_at(xy: &[f64], x: f64, y: f64, q: &str) -> Result<f64, JsError> {
    depth_of(xy, x, y, q).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn convex_hull(xy: &[f64]) -> Vec<f64> {
    hull_points(xy)
}
