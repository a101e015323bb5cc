//! Brute-force references.
//!
//! Nothing in here is used by the production paths; tests and the `verify`
//! command use these to judge the solvers. The only shared code is the disk
//! model's primitives and [`solve_sas`] as the function under test.

use std::f64::consts::PI;

use serde::Serialize;

use crate::disk::{geodesic_through, DiskPoint, Geodesic, Vec2};
use crate::error::{GeometryError, Result};
use crate::triangle::{solve_sas, ALPHA_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSearchResult {
    pub alpha_hat: f64,
    pub area_hat: f64,
    pub grid_step: f64,
    pub samples: usize,
}

fn grid(samples: usize) -> (f64, f64) {
    let lo = ALPHA_EPS;
    let step = (PI - 2.0 * ALPHA_EPS) / samples as f64;
    (lo, step)
}

/// Cell-centred grid of `samples` angles on `(ALPHA_EPS, π − ALPHA_EPS)`.
fn grid_areas(b: f64, c: f64, samples: usize) -> Result<(f64, Vec<f64>)> {
    if samples < 1000 {
        return Err(GeometryError::Domain(format!(
            "grid search needs at least 1000 samples, got {samples}"
        )));
    }
    let (lo, step) = grid(samples);
    let areas = (0..samples)
        .map(|k| solve_sas(b, c, lo + (k as f64 + 0.5) * step).map(|s| s.area))
        .collect::<Result<Vec<_>>>()?;
    Ok((step, areas))
}

/// Maximizes the triangle area over an even grid of included angles. Ties go
/// to the smaller angle.
pub fn grid_search_max_area(b: f64, c: f64, samples: usize) -> Result<GridSearchResult> {
    let (step, areas) = grid_areas(b, c, samples)?;
    let mut best = 0;
    for (k, &area) in areas.iter().enumerate() {
        if area > areas[best] {
            best = k;
        }
    }
    let (lo, _) = grid(samples);
    Ok(GridSearchResult {
        alpha_hat: lo + (best as f64 + 0.5) * step,
        area_hat: areas[best],
        grid_step: step,
        samples,
    })
}

/// Number of strict interior local maxima of the area on the grid.
pub fn count_grid_local_maxima(b: f64, c: f64, samples: usize) -> Result<usize> {
    let (_, areas) = grid_areas(b, c, samples)?;
    Ok(areas
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] > w[2])
        .count())
}

/// Hyperbolic length of the geodesic segment from `p` to `q`, obtained by
/// integrating the metric `2 ds / (1 − |z|²)` along the Euclidean arc (or
/// chord, for diameters) with composite Simpson weights on `segments` pieces
/// of equal Euclidean length.
pub fn geodesic_length_by_sampling(p: DiskPoint, q: DiskPoint, segments: usize) -> Result<f64> {
    if segments < 10_000 {
        return Err(GeometryError::Domain(format!(
            "need at least 10000 segments, got {segments}"
        )));
    }
    if p == q {
        return Ok(0.0);
    }
    let (pv, qv) = (p.to_vec2(), q.to_vec2());
    let (path, euclidean_len): (Box<dyn Fn(f64) -> Vec2>, f64) = match geodesic_through(p, q) {
        Ok(Geodesic::Arc(circle)) => {
            let start = (pv - circle.center).arg();
            let sweep = (pv - circle.center).signed_angle_to(qv - circle.center);
            (
                Box::new(move |s| {
                    circle.center + Vec2::from_angle(start + s * sweep) * circle.radius
                }),
                circle.radius * sweep.abs(),
            )
        }
        // a diameter, or points closer than the coincidence threshold
        _ => (Box::new(move |s| pv + (qv - pv) * s), (qv - pv).norm()),
    };
    let density = |s: f64| 2.0 / (1.0 - path(s).norm_sq());
    let n = segments as f64;
    let h = euclidean_len / n;
    let total: f64 = (0..segments)
        .map(|k| {
            let s0 = k as f64 / n;
            let s1 = (k + 1) as f64 / n;
            h * (density(s0) + 4.0 * density(0.5 * (s0 + s1)) + density(s1)) / 6.0
        })
        .sum();
    Ok(total)
}

/// Euclidean triangle with the same two sides and included angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EuclideanTriangle {
    pub a: f64,
    pub beta: f64,
    pub gamma: f64,
    pub area: f64,
}

pub fn euclidean_limit_triangle(b: f64, c: f64, alpha: f64) -> Result<EuclideanTriangle> {
    if !(b > 0.0 && b <= 0.01 && c > 0.0 && c <= 0.01) {
        return Err(GeometryError::Domain(format!(
            "Euclidean reference needs sides in (0, 0.01], got b = {b}, c = {c}"
        )));
    }
    let a = (b * b + c * c - 2.0 * b * c * alpha.cos()).sqrt();
    let beta = (b * alpha.sin()).atan2(c - b * alpha.cos());
    Ok(EuclideanTriangle {
        a,
        beta,
        gamma: PI - alpha - beta,
        area: 0.5 * b * c * alpha.sin(),
    })
}
