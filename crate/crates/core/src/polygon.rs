//! Convex hyperbolic polygons, regular polygons, circles and the
//! isoperimetric deficit `L² − 4πA − A²`.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::disk::{
    angle_at_vertex, hyp_distance, isometry_to_origin, point_from_polar, DiskIsometry, DiskPoint,
    Vec2, D_MAX,
};
use crate::error::{GeometryError, Result};
use crate::triangle::{area_defect, solve_sas, TriangleSolution};

/// Minimum sine of the turn between an edge and any other vertex for strict convexity.
const CONVEXITY_EPS: f64 = 1e-12;

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicPolygon {
    vertices: Vec<DiskPoint>,
    side_lengths: Vec<f64>,
    interior_angles: Vec<f64>,
}

impl HyperbolicPolygon {
    pub fn new(vertices: Vec<DiskPoint>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::Domain(format!(
                "a polygon needs at least 3 vertices, got {n}"
            )));
        }
        check_convex(&vertices)?;
        let side_lengths = (0..n)
            .map(|i| hyp_distance(vertices[i], vertices[(i + 1) % n]))
            .collect();
        let interior_angles = (0..n)
            .map(|i| {
                angle_at_vertex(
                    vertices[i],
                    vertices[(i + 1) % n],
                    vertices[(i + n - 1) % n],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let poly = Self {
            vertices,
            side_lengths,
            interior_angles,
        };
        if poly.defect_sum() <= 0.0 {
            return Err(GeometryError::NonConvex(
                "interior angles do not have a positive defect".into(),
            ));
        }
        Ok(poly)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[DiskPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> DiskPoint {
        self.vertices[i % self.len()]
    }

    /// `side_lengths()[i]` is the length of the side from vertex `i` to `i + 1`.
    pub fn side_lengths(&self) -> &[f64] {
        &self.side_lengths
    }

    pub fn interior_angles(&self) -> &[f64] {
        &self.interior_angles
    }

    fn defect_sum(&self) -> f64 {
        (self.len() as f64 - 2.0) * PI - self.interior_angles.iter().sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.side_lengths.iter().sum()
    }

    /// `(n − 2)π − Σ interior angles`.
    pub fn area(&self) -> f64 {
        self.defect_sum()
    }

    /// Sum of the angle defects of the fan triangles `(V₀, Vₖ, Vₖ₊₁)`,
    /// measured independently of the cached interior angles.
    pub fn fan_area(&self) -> Result<f64> {
        let v = &self.vertices;
        (1..self.len() - 1)
            .map(|k| {
                let (p, q, r) = (v[0], v[k], v[k + 1]);
                area_defect(
                    angle_at_vertex(p, q, r)?,
                    angle_at_vertex(q, r, p)?,
                    angle_at_vertex(r, p, q)?,
                )
            })
            .sum()
    }

    /// The triangle `V_{i−1} V_i V_{i+1}` solved from the two sides at `V_i`
    /// and the interior angle there. `c` is the side towards `V_{i+1}`.
    pub fn local_triangle(&self, i: usize) -> Result<TriangleSolution> {
        let n = self.len();
        let i = i % n;
        let before = self.side_lengths[(i + n - 1) % n];
        let after = self.side_lengths[i];
        solve_sas(before, after, self.interior_angles[i])
    }

    pub fn transformed(&self, m: &DiskIsometry) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&p| m.apply(p)).collect())
    }
}

/// Every vertex must lie strictly to the left of every edge it is not on.
/// Moving the edge's start to the origin turns the edge into a straight ray,
/// so the test is a Euclidean orientation check.
fn check_convex(vertices: &[DiskPoint]) -> Result<()> {
    let n = vertices.len();
    for i in 0..n {
        let m = isometry_to_origin(vertices[i]);
        let edge = m.apply(vertices[(i + 1) % n]).to_vec2();
        if edge.norm() <= 1e-12 {
            return Err(GeometryError::Degenerate(format!(
                "vertices {i} and {} coincide",
                (i + 1) % n
            )));
        }
        for j in (0..n).filter(|&j| j != i && j != (i + 1) % n) {
            let w = m.apply(vertices[j]).to_vec2();
            let turn = edge.cross(w) / (edge.norm() * w.norm());
            if !(turn > CONVEXITY_EPS) {
                return Err(GeometryError::NonConvex(format!(
                    "vertex {j} is not strictly left of edge {i}→{}",
                    (i + 1) % n
                )));
            }
        }
    }
    Ok(())
}

pub fn polygon_perimeter(poly: &HyperbolicPolygon) -> f64 {
    poly.perimeter()
}

pub fn polygon_area(poly: &HyperbolicPolygon) -> f64 {
    poly.area()
}

pub fn local_triangle(poly: &HyperbolicPolygon, i: usize) -> Result<TriangleSolution> {
    poly.local_triangle(i)
}

/// Draws a random strictly convex `n`-gon: sorted uniform angles on a
/// hyperbolic circle of radius in `[0.5, 2]`, each vertex pushed radially by
/// up to ±15%, redrawn until convex.
pub fn random_convex_polygon<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HyperbolicPolygon> {
    if n < 3 {
        return Err(GeometryError::Domain(format!(
            "a polygon needs at least 3 vertices, got {n}"
        )));
    }
    const MAX_ATTEMPTS: usize = 100_000;
    for _ in 0..MAX_ATTEMPTS {
        let radius = rng.random_range(0.5..2.0);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let vertices = angles
            .iter()
            .map(|&theta| point_from_polar(radius * (1.0 + rng.random_range(-0.15..0.15)), theta))
            .collect::<Result<Vec<_>>>()?;
        if let Ok(poly) = HyperbolicPolygon::new(vertices) {
            return Ok(poly);
        }
    }
    Err(GeometryError::Solver(format!(
        "no convex {n}-gon after {MAX_ATTEMPTS} draws"
    )))
}

/// A regular polygon given by vertex count and circumradius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularPolygonSpec {
    n: usize,
    circumradius: f64,
}

impl RegularPolygonSpec {
    pub fn new(n: usize, circumradius: f64) -> Result<Self> {
        if n < 3 {
            return Err(GeometryError::Domain(format!(
                "a regular polygon needs n ≥ 3, got {n}"
            )));
        }
        if !(circumradius > 0.0 && circumradius <= D_MAX / 2.0) {
            return Err(GeometryError::Domain(format!(
                "circumradius {circumradius} outside (0, {}]",
                D_MAX / 2.0
            )));
        }
        Ok(Self { n, circumradius })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// Vertices at angles `2πk/n` around the origin.
    pub fn vertices(&self) -> Result<HyperbolicPolygon> {
        let step = 2.0 * PI / self.n as f64;
        HyperbolicPolygon::new(
            (0..self.n)
                .map(|k| point_from_polar(self.circumradius, k as f64 * step))
                .collect::<Result<_>>()?,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularPolygon {
    pub side: f64,
    pub interior_angle: f64,
    pub perimeter: f64,
    pub area: f64,
}

/// Closed-form regular polygon built from `n` copies of the central
/// isosceles triangle with legs `R` and apex angle `2π/n`.
pub fn regular_polygon(spec: RegularPolygonSpec) -> Result<RegularPolygon> {
    let n = spec.n as f64;
    let central = solve_sas(spec.circumradius, spec.circumradius, 2.0 * PI / n)?;
    Ok(RegularPolygon {
        side: central.a,
        interior_angle: central.beta + central.gamma,
        perimeter: n * central.a,
        area: n * central.area,
    })
}

/// The regular `n`-gon with the given perimeter, found by bisection on the
/// circumradius.
pub fn regular_polygon_with_perimeter(
    n: usize,
    perimeter: f64,
) -> Result<(RegularPolygonSpec, RegularPolygon)> {
    let r_max = D_MAX / 2.0;
    let largest = regular_polygon(RegularPolygonSpec::new(n, r_max)?)?.perimeter;
    if !(perimeter > 0.0 && perimeter <= largest) {
        return Err(GeometryError::Domain(format!(
            "perimeter {perimeter} outside (0, {largest}] for n = {n}"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, r_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if regular_polygon(RegularPolygonSpec::new(n, mid)?)?.perimeter < perimeter {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let spec = RegularPolygonSpec::new(n, hi)?;
    Ok((spec, regular_polygon(spec)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleGeometry {
    pub radius: f64,
    pub circumference: f64,
    pub area: f64,
}

pub fn circle_geometry(r: f64) -> Result<CircleGeometry> {
    if !(r > 0.0 && r <= D_MAX / 2.0) {
        return Err(GeometryError::Domain(format!(
            "circle radius {r} outside (0, {}]",
            D_MAX / 2.0
        )));
    }
    Ok(CircleGeometry {
        radius: r,
        circumference: 2.0 * PI * r.sinh(),
        area: 4.0 * PI * (0.5 * r).sinh().powi(2),
    })
}

/// The circle whose circumference is `length`.
pub fn circle_with_circumference(length: f64) -> Result<CircleGeometry> {
    circle_geometry((length / (2.0 * PI)).asinh())
}

/// `L² − 4πA − A²`: nonnegative for every plane figure, zero for circles.
pub fn isoperimetric_deficit(length: f64, area: f64) -> f64 {
    length * length - 4.0 * PI * area - area * area
}

/// Best-fit hyperbolic circle through a set of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircumcircleFit {
    pub center: DiskPoint,
    pub radius: f64,
    /// `max_j d(center, V_j) − min_j d(center, V_j)`.
    pub spread: f64,
}

fn radius_stats(center: DiskPoint, points: &[DiskPoint]) -> (f64, f64, f64) {
    let d: Vec<f64> = points.iter().map(|&p| hyp_distance(center, p)).collect();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let (min, max) = d
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / d.len() as f64;
    (mean, max - min, var)
}

/// Fits a circle center by a coarse grid on the radius spread followed by a
/// Nelder–Mead refinement of the radius variance. Work happens in a frame
/// where the Euclidean vertex centroid sits at the origin.
pub fn fit_circumcircle(points: &[DiskPoint]) -> Result<CircumcircleFit> {
    if points.len() < 3 {
        return Err(GeometryError::Domain(
            "a circumcircle fit needs at least 3 points".into(),
        ));
    }
    let centroid =
        points.iter().fold(Vec2::ZERO, |acc, p| acc + p.to_vec2()) * (1.0 / points.len() as f64);
    let frame = isometry_to_origin(DiskPoint::from_vec2(centroid)?);
    let local: Vec<DiskPoint> = points.iter().map(|&p| frame.apply(p)).collect();

    let at = |v: Vec2| DiskPoint::new(v.x, v.y).ok();
    const HALF: usize = 20;
    const EXTENT: f64 = 0.6;
    let cell = EXTENT / HALF as f64;
    let mut start = Vec2::ZERO;
    let mut best = f64::INFINITY;
    for i in 0..=2 * HALF {
        for j in 0..=2 * HALF {
            let v = Vec2::new(
                (i as f64 - HALF as f64) * cell,
                (j as f64 - HALF as f64) * cell,
            );
            if let Some(c) = at(v) {
                let (_, spread, _) = radius_stats(c, &local);
                if spread < best {
                    best = spread;
                    start = v;
                }
            }
        }
    }

    let variance = |v: Vec2| at(v).map_or(f64::INFINITY, |c| radius_stats(c, &local).2);
    let refined = nelder_mead_2d(variance, start, cell, 1e-15, 5_000);
    let center_local = at(refined).unwrap_or(DiskPoint::ORIGIN);
    let (radius, spread, _) = radius_stats(center_local, &local);
    Ok(CircumcircleFit {
        center: frame.inverse().apply(center_local),
        radius,
        spread,
    })
}

/// Minimizes `f` over the plane; stops when the simplex diameter drops below `tol`.
pub(crate) fn nelder_mead_2d<F: Fn(Vec2) -> f64>(
    f: F,
    start: Vec2,
    step: f64,
    tol: f64,
    max_iter: usize,
) -> Vec2 {
    let mut simplex = [
        (start, f(start)),
        (
            start + Vec2::new(step, 0.0),
            f(start + Vec2::new(step, 0.0)),
        ),
        (
            start + Vec2::new(0.0, step),
            f(start + Vec2::new(0.0, step)),
        ),
    ];
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = (simplex[1].0 - simplex[0].0)
            .norm()
            .max((simplex[2].0 - simplex[0].0).norm());
        if diameter < tol {
            break;
        }
        let centroid = (simplex[0].0 + simplex[1].0) * 0.5;
        let worst = simplex[2];
        let reflect = centroid + (centroid - worst.0);
        let fr = f(reflect);
        if fr < simplex[0].1 {
            let expand = centroid + (centroid - worst.0) * 2.0;
            let fe = f(expand);
            simplex[2] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (reflect, fr);
        } else {
            let contract = if fr < worst.1 {
                centroid + (reflect - centroid) * 0.5
            } else {
                centroid + (worst.0 - centroid) * 0.5
            };
            let fc = f(contract);
            if fc < worst.1.min(fr) {
                simplex[2] = (contract, fc);
            } else {
                let best = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    let p = best + (vertex.0 - best) * 0.5;
                    *vertex = (p, f(p));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0].0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn pt(x: f64, y: f64) -> DiskPoint {
        DiskPoint::new(x, y).unwrap()
    }

    #[test]
    fn rejects_bad_polygons() {
        assert!(HyperbolicPolygon::new(vec![pt(0.1, 0.0), pt(0.0, 0.1)]).is_err());
        // clockwise
        let cw = vec![pt(0.0, 0.0), pt(0.0, 0.3), pt(0.3, 0.0)];
        assert!(matches!(
            HyperbolicPolygon::new(cw),
            Err(GeometryError::NonConvex(_))
        ));
        // reflex vertex
        let dart = vec![pt(-0.4, -0.4), pt(0.0, -0.1), pt(0.4, -0.4), pt(0.0, 0.4)];
        assert!(HyperbolicPolygon::new(dart).is_err());
        // repeated vertex
        let dup = vec![pt(0.0, 0.0), pt(0.3, 0.0), pt(0.3, 0.0), pt(0.0, 0.3)];
        assert!(HyperbolicPolygon::new(dup).is_err());
    }

    #[test]
    fn triangle_area_reduces_to_defect() {
        let poly = HyperbolicPolygon::new(vec![pt(0.0, 0.0), pt(0.5, 0.0), pt(0.0, 0.5)]).unwrap();
        let a = poly.interior_angles();
        assert_abs_diff_eq!(
            poly.area(),
            area_defect(a[0], a[1], a[2]).unwrap(),
            epsilon = 1e-15
        );
        // vertex 0 at the origin has a right angle
        assert_abs_diff_eq!(a[0], PI / 2.0, epsilon = 1e-15);
        let t = poly.local_triangle(0).unwrap();
        assert_abs_diff_eq!(t.area, poly.area(), epsilon = 1e-12);
        assert!(poly.perimeter() > 0.0 && poly.perimeter().is_finite());
    }

    #[test]
    fn regular_square_cross_checks() {
        let spec = RegularPolygonSpec::new(4, 1.0).unwrap();
        let closed = regular_polygon(spec).unwrap();
        let poly = spec.vertices().unwrap();
        assert_abs_diff_eq!(
            closed.area,
            2.0 * PI - 4.0 * closed.interior_angle,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(poly.area(), closed.area, epsilon = 1e-9);
        assert_abs_diff_eq!(poly.fan_area().unwrap(), closed.area, epsilon = 1e-9);
        assert_abs_diff_eq!(poly.perimeter(), closed.perimeter, epsilon = 1e-9);
        for &angle in poly.interior_angles() {
            assert_abs_diff_eq!(angle, closed.interior_angle, epsilon = 1e-9);
        }
    }

    #[test]
    fn regular_triangle_perimeter_is_three_sides() {
        let spec = RegularPolygonSpec::new(3, 0.8).unwrap();
        let poly = spec.vertices().unwrap();
        let closed = regular_polygon(spec).unwrap();
        assert_abs_diff_eq!(poly.perimeter(), 3.0 * closed.side, epsilon = 1e-12);
        let t0 = poly.local_triangle(0).unwrap();
        for i in 1..3 {
            let t = poly.local_triangle(i).unwrap();
            assert_abs_diff_eq!(t.a, t0.a, epsilon = 1e-10);
            assert_abs_diff_eq!(t.area, t0.area, epsilon = 1e-10);
        }
    }

    #[test]
    fn euclidean_limit_of_regular_polygons() {
        let r = 1e-3;
        for n in [3usize, 5, 8, 12] {
            let reg = regular_polygon(RegularPolygonSpec::new(n, r).unwrap()).unwrap();
            let euclid = 0.5 * n as f64 * r * r * (2.0 * PI / n as f64).sin();
            assert_relative_eq!(reg.area, euclid, max_relative = 1e-6);
            let euclid_angle = (n as f64 - 2.0) * PI / n as f64;
            assert_abs_diff_eq!(reg.interior_angle, euclid_angle, epsilon = 1e-6);
            let poly = RegularPolygonSpec::new(n, r).unwrap().vertices().unwrap();
            assert_relative_eq!(poly.area(), reg.area, max_relative = 1e-6);
        }
    }

    #[test]
    fn regular_polygons_match_explicit_embedding() {
        for n in [3usize, 4, 7, 16] {
            for r in [0.3, 1.0, 2.5] {
                let spec = RegularPolygonSpec::new(n, r).unwrap();
                let closed = regular_polygon(spec).unwrap();
                let poly = spec.vertices().unwrap();
                assert_abs_diff_eq!(poly.area(), closed.area, epsilon = 1e-9);
                assert_abs_diff_eq!(poly.perimeter(), closed.perimeter, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn regular_sweep_approaches_circle() {
        let length = 2.0 * PI;
        let circle = circle_with_circumference(length).unwrap();
        assert_abs_diff_eq!(
            isoperimetric_deficit(circle.circumference, circle.area),
            0.0,
            epsilon = 1e-9
        );
        let mut last = f64::INFINITY;
        for n in 3..=96 {
            let (_, reg) = regular_polygon_with_perimeter(n, length).unwrap();
            assert_relative_eq!(reg.perimeter, length, max_relative = 1e-12);
            let deficit = isoperimetric_deficit(reg.perimeter, reg.area);
            assert!(deficit < last, "n = {n}: {deficit} !< {last}");
            assert!(deficit > 0.0);
            last = deficit;
        }
        let (_, reg96) = regular_polygon_with_perimeter(96, length).unwrap();
        assert!((reg96.area / circle.area - 1.0).abs() < 2e-3);
        assert!(regular_polygon_with_perimeter(5, 1e9).is_err());
    }

    #[test]
    fn circle_examples() {
        let c = circle_geometry(1e-3).unwrap();
        assert_abs_diff_eq!(c.circumference / (2.0 * PI * 1e-3), 1.0, epsilon = 1e-6);
        for r in [1e-3, 0.5, 1.0, 3.0, 10.0] {
            let c = circle_geometry(r).unwrap();
            let scale = c.circumference.powi(2).max(1.0);
            assert!(isoperimetric_deficit(c.circumference, c.area).abs() < 1e-9 * scale);
            assert!(c.area < c.circumference);
        }
        assert!(circle_geometry(0.0).is_err());
        assert!(circle_geometry(11.0).is_err());
    }

    #[test]
    fn circumcircle_of_regular_polygon() {
        let poly = RegularPolygonSpec::new(7, 1.3).unwrap().vertices().unwrap();
        let m = DiskIsometry::new(pt(0.3, -0.2), 0.4);
        let moved = poly.transformed(&m).unwrap();
        let fit = fit_circumcircle(moved.vertices()).unwrap();
        assert!(fit.spread < 1e-9, "{fit:?}");
        assert_abs_diff_eq!(fit.radius, 1.3, epsilon = 1e-9);
        assert!(hyp_distance(fit.center, m.apply(DiskPoint::ORIGIN)) < 1e-8);
    }

    #[test]
    fn random_polygon_is_reproducible() {
        let a = random_convex_polygon(8, &mut seeded_rng(42)).unwrap();
        let b = random_convex_polygon(8, &mut seeded_rng(42)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        let c = random_convex_polygon(8, &mut seeded_rng(43)).unwrap();
        assert_ne!(a, c);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_polygons_are_sound(seed in any::<u64>(), n in 3usize..10) {
            let poly = random_convex_polygon(n, &mut seeded_rng(seed)).unwrap();
            let area = poly.area();
            prop_assert!(area > 0.0);
            prop_assert!((poly.fan_area().unwrap() - area).abs() < 1e-9);
            prop_assert!(isoperimetric_deficit(poly.perimeter(), area) > 0.0);
            for i in 0..n {
                let t = poly.local_triangle(i).unwrap();
                let chord = hyp_distance(poly.vertex(i + n - 1), poly.vertex(i + 1));
                prop_assert!((t.a - chord).abs() < 1e-9);
                prop_assert!(t.area <= area + 1e-12);
            }
        }

        #[test]
        fn isometries_preserve_polygon_measures(
            seed in any::<u64>(),
            (r, t, rot) in (0.0..0.8f64, 0.0..(2.0 * PI), -PI..PI),
        ) {
            let poly = random_convex_polygon(6, &mut seeded_rng(seed)).unwrap();
            let m = DiskIsometry::new(DiskPoint::new(r * t.cos(), r * t.sin()).unwrap(), rot);
            let moved = poly.transformed(&m).unwrap();
            prop_assert!((moved.perimeter() - poly.perimeter()).abs() < 1e-10);
            prop_assert!((moved.area() - poly.area()).abs() < 1e-10);
        }
    }
}
