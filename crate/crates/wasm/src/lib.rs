//! Browser bindings for the demo page in `www/`.
//!
//! Each export returns a JSON string with the numbers and an `svg` field.
//! The `*_json` functions hold the logic so they can be tested natively.

use hyplobe::polygon::{fit_circumcircle, random_convex_polygon};
use hyplobe::svg::{inversion_figure_svg, polygon_svg, PolygonPicture};
use hyplobe::{
    area_defect, build_inversion_figure, isoperimetric_deficit, optimal_alpha,
    optimality_certificate, seeded_rng, solve_sas, steiner_optimize, DiskPoint,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn encode<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TriangleView {
    a: f64,
    beta: f64,
    gamma: f64,
    area_defect: f64,
    two_tau: f64,
    tau: f64,
    optimality_gap: f64,
    svg: String,
}

pub fn triangle_json(b: f64, c: f64, alpha: f64) -> Result<String, String> {
    let s = solve_sas(b, c, alpha).map_err(|e| e.to_string())?;
    let fig = build_inversion_figure(b, c, alpha).map_err(|e| e.to_string())?;
    encode(&TriangleView {
        a: s.a,
        beta: s.beta,
        gamma: s.gamma,
        area_defect: area_defect(s.alpha, s.beta, s.gamma).map_err(|e| e.to_string())?,
        two_tau: 2.0 * fig.tau,
        tau: fig.tau,
        optimality_gap: s.optimality_gap(),
        svg: inversion_figure_svg(&fig),
    })
}

#[derive(Serialize)]
struct OptimumView {
    alpha_star: f64,
    beta: f64,
    gamma: f64,
    area: f64,
    right_angle_residual: f64,
    tangency_gap: f64,
    alpha_tau_residual: f64,
    svg: String,
}

pub fn optimize_json(b: f64, c: f64) -> Result<String, String> {
    let opt = optimal_alpha(b, c).map_err(|e| e.to_string())?;
    let fig = build_inversion_figure(b, c, opt.alpha_star).map_err(|e| e.to_string())?;
    let cert = optimality_certificate(&fig);
    encode(&OptimumView {
        alpha_star: opt.alpha_star,
        beta: opt.solution.beta,
        gamma: opt.solution.gamma,
        area: opt.solution.area,
        right_angle_residual: cert.right_angle_residual(),
        tangency_gap: cert.tangency_gap,
        alpha_tau_residual: cert.residual,
        svg: inversion_figure_svg(&fig),
    })
}

#[derive(Serialize)]
struct SteinerView {
    converged: bool,
    sweeps: usize,
    moves: usize,
    perimeter: f64,
    initial_area: f64,
    final_area: f64,
    deficit_before: f64,
    deficit_after: f64,
    spread: f64,
    areas: Vec<f64>,
    svg: String,
}

pub fn steiner_json(n: usize, seed: u64, tol: f64) -> Result<String, String> {
    if !(3..=24).contains(&n) {
        return Err(format!("n must be between 3 and 24, got {n}"));
    }
    let poly = random_convex_polygon(n, &mut seeded_rng(seed)).map_err(|e| e.to_string())?;
    let out = steiner_optimize(&poly, tol, 5_000).map_err(|e| e.to_string())?;
    let vertices: Vec<DiskPoint> = out.half.full_vertices().map_err(|e| e.to_string())?;
    let fit = fit_circumcircle(&vertices).map_err(|e| e.to_string())?;
    let perimeter = poly.perimeter();
    encode(&SteinerView {
        converged: out.converged,
        sweeps: out.sweeps,
        moves: out.accepted_moves,
        perimeter,
        initial_area: out.initial_area,
        final_area: out.half.area(),
        deficit_before: isoperimetric_deficit(perimeter, out.initial_area),
        deficit_after: isoperimetric_deficit(out.half.perimeter(), out.half.area()),
        spread: fit.spread,
        areas: out.trace.records.iter().map(|r| r.area_after).collect(),
        svg: polygon_svg(&PolygonPicture {
            polygon: &vertices,
            ghost: Some(poly.vertices()),
            circle: Some((fit.center, fit.radius)),
            axis: Some((out.half.a(), out.half.b())),
        }),
    })
}

/// Triangle from sides `b`, `c` and included angle `alpha`, with the inversion figure.
#[wasm_bindgen]
pub fn triangle(b: f64, c: f64, alpha: f64) -> Result<String, JsValue> {
    triangle_json(b, c, alpha).map_err(|e| JsValue::from_str(&e))
}

/// Maximal-area triangle for sides `b`, `c`.
#[wasm_bindgen]
pub fn optimize(b: f64, c: f64) -> Result<String, JsValue> {
    optimize_json(b, c).map_err(|e| JsValue::from_str(&e))
}

/// Steiner run on a seeded random convex `n`-gon.
#[wasm_bindgen]
pub fn steiner(n: usize, seed: u32, tol: f64) -> Result<String, JsValue> {
    steiner_json(n, u64::from(seed), tol).map_err(|e| JsValue::from_str(&e))
}
