//! Steiner's argument run as an algorithm.
//!
//! A polygon is first cut by a perimeter-halving geodesic `AB`; the larger
//! half is kept and mirrored across `AB`. The half is then improved one
//! vertex at a time: at a chain vertex `W` the two pieces of boundary `A…W`
//! and `W…B` are held rigid and hinged at `W`, and the angle `AWB` is set to
//! the maximal-area angle for the sides `|WA|`, `|WB|`. Boundary length never
//! changes and area never drops. A fixed point has every `W` on the circle
//! with diameter `AB`, so the doubled polygon is cyclic.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::disk::{
    hyp_distance, isometry_to_origin, point_along, reflect_in_geodesic, DiskIsometry, DiskPoint,
};
use crate::error::{GeometryError, Result};
use crate::polygon::HyperbolicPolygon;
use crate::triangle::{optimal_alpha, solve_sas, TriangleSolution};

/// Hyperbolic distance under which the perimeter midpoint is merged with a vertex.
const SNAP_EPS: f64 = 1e-12;
/// Half areas closer than this are treated as equal when picking a half.
const AREA_TIE_EPS: f64 = 1e-12;
/// Allowed mismatch of the hinge sides and angle after a move.
const CLOSURE_LIMIT: f64 = 1e-8;
/// Doubled angles within this of `π` are dropped when listing vertices.
const STRAIGHT_EPS: f64 = 1e-9;

/// One half of a mirror-symmetric polygon: the chain `W₀ = A, W₁, …, Wₘ = B`
/// together with the closing geodesic `BA` forms a strictly convex,
/// counterclockwise polygon. The full figure is this half plus its mirror
/// image across `AB`; it is a simple polygon but may be reflex at `A` or `B`
/// until the iteration has settled.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerHalf {
    figure: HyperbolicPolygon,
}

impl SteinerHalf {
    /// Wraps a chain `A…B` as a half figure.
    pub fn new(chain: Vec<DiskPoint>) -> Result<Self> {
        Ok(Self {
            figure: HyperbolicPolygon::new(chain)?,
        })
    }

    pub fn chain(&self) -> &[DiskPoint] {
        self.figure.vertices()
    }

    pub fn a(&self) -> DiskPoint {
        self.figure.vertex(0)
    }

    pub fn b(&self) -> DiskPoint {
        self.figure.vertex(self.last())
    }

    fn last(&self) -> usize {
        self.figure.len() - 1
    }

    /// The convex half figure, closing side `BA` included.
    pub fn figure(&self) -> &HyperbolicPolygon {
        &self.figure
    }

    /// Perimeter of the full figure: twice the chain length.
    pub fn perimeter(&self) -> f64 {
        2.0 * self.figure.side_lengths()[..self.last()]
            .iter()
            .sum::<f64>()
    }

    /// Area of the full figure.
    pub fn area(&self) -> f64 {
        2.0 * self.figure.area()
    }

    /// Indices `1..m` of the vertices that can be hinged.
    pub fn hinge_vertices(&self) -> std::ops::Range<usize> {
        1..self.last()
    }

    /// The triangle `A Wᵢ B` solved from `|WᵢA|`, `|WᵢB|` and the angle at `Wᵢ`.
    /// Its `b` is `|WᵢA|` and its `c` is `|WᵢB|`.
    pub fn hinge_triangle(&self, i: usize) -> Result<TriangleSolution> {
        let (w, a, b) = self.hinge_frame(i)?;
        solve_sas(hyp_distance(w, a), hyp_distance(w, b), hinge_angle(w, a, b))
    }

    fn hinge_frame(&self, i: usize) -> Result<(DiskPoint, DiskPoint, DiskPoint)> {
        if !self.hinge_vertices().contains(&i) {
            return Err(GeometryError::Domain(format!(
                "vertex {i} is not an inner chain vertex (1..{})",
                self.last()
            )));
        }
        Ok((self.figure.vertex(i), self.a(), self.b()))
    }

    /// `|α − (β + γ)|` of the hinge triangle at `Wᵢ`.
    pub fn residual(&self, i: usize) -> Result<f64> {
        Ok(self.hinge_triangle(i)?.optimality_gap().abs())
    }

    pub fn max_residual(&self) -> Result<f64> {
        self.hinge_vertices()
            .map(|i| self.residual(i))
            .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
    }

    /// Vertices of the full polygon, counterclockwise from `A`. `A` or `B`
    /// is omitted when the doubled angle there is straight.
    pub fn full_vertices(&self) -> Result<Vec<DiskPoint>> {
        let chain = self.chain();
        let m = self.last();
        let angles = self.figure.interior_angles();
        let straight = |k: usize| (angles[k] - FRAC_PI_2).abs() < STRAIGHT_EPS;
        let mut out = Vec::with_capacity(2 * m);
        for (k, &w) in chain.iter().enumerate() {
            if !((k == 0 || k == m) && straight(k)) {
                out.push(w);
            }
        }
        for &w in chain[1..m].iter().rev() {
            out.push(reflect_in_geodesic(self.a(), self.b(), w)?);
        }
        Ok(out)
    }

    /// The full figure as a convex polygon; fails while it is reflex at `A` or `B`.
    pub fn full_polygon(&self) -> Result<HyperbolicPolygon> {
        HyperbolicPolygon::new(self.full_vertices()?)
    }
}

/// Angle at `w` measured counterclockwise from the ray towards `b` to the ray
/// towards `a`. For a counterclockwise chain this is the interior angle.
fn hinge_angle(w: DiskPoint, a: DiskPoint, b: DiskPoint) -> f64 {
    let m = isometry_to_origin(w);
    m.apply(b).to_vec2().signed_angle_to(m.apply(a).to_vec2())
}

/// Which side of the cut was kept by [`symmetrize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymmetrizeChoice {
    /// Polygon vertex the cut starts from.
    pub start: usize,
    /// `true` when the kept half runs forward from `start`.
    pub forward: bool,
    /// `true` when the far end of the cut fell on a vertex.
    pub snapped: bool,
}

/// Cuts `poly` along every perimeter-halving geodesic that starts at a
/// vertex, keeps the half of largest area and mirrors it. The result has the
/// same perimeter and at least the same area. Ties go to the lowest start
/// vertex and then to the forward half.
pub fn symmetrize(poly: &HyperbolicPolygon) -> Result<(SteinerHalf, SymmetrizeChoice)> {
    let n = poly.len();
    let half = 0.5 * poly.perimeter();
    let sides = poly.side_lengths();
    let mut best: Option<(f64, SteinerHalf, SymmetrizeChoice)> = None;
    for s in 0..n {
        let mut walked = 0.0;
        let mut k = 0;
        while walked + sides[(s + k) % n] < half && k + 1 < n {
            walked += sides[(s + k) % n];
            k += 1;
        }
        // The cut point lies on the side from V[s+k] to V[s+k+1].
        let from = (s + k) % n;
        let to = (s + k + 1) % n;
        let rest = half - walked;
        let (cut, snapped, forward_end, backward_start) = if rest <= SNAP_EPS {
            (poly.vertex(from), true, k, k)
        } else if sides[from] - rest <= SNAP_EPS {
            (poly.vertex(to), true, k + 1, k + 1)
        } else {
            let p = point_along(poly.vertex(from), poly.vertex(to), rest)?;
            (p, false, k, k + 1)
        };
        let mut forward: Vec<DiskPoint> = (0..=forward_end).map(|j| poly.vertex(s + j)).collect();
        if !snapped {
            forward.push(cut);
        }
        let mut backward = Vec::with_capacity(n);
        if !snapped {
            backward.push(cut);
        }
        backward.extend((backward_start..=n).map(|j| poly.vertex(s + j)));

        for (chain, is_forward) in [(forward, true), (backward, false)] {
            let candidate = SteinerHalf::new(chain)?;
            let area = candidate.figure.area();
            if best
                .as_ref()
                .is_none_or(|(a, _, _)| area > a + AREA_TIE_EPS)
            {
                let choice = SymmetrizeChoice {
                    start: s,
                    forward: is_forward,
                    snapped,
                };
                best = Some((area, candidate, choice));
            }
        }
    }
    let (_, half, choice) = best.expect("a polygon has at least one vertex");
    Ok((half, choice))
}

/// Result of a single hinge move.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerMove {
    pub half: SteinerHalf,
    /// Change in the area of the full figure.
    pub delta_area: f64,
    /// `false` when the move would have broken convexity and was skipped.
    pub accepted: bool,
}

/// Sets the angle at chain vertex `i` to the maximal-area angle for its two
/// hinge sides by rotating the piece `Wᵢ…B` rigidly about `Wᵢ`.
pub fn steiner_move(half: &SteinerHalf, i: usize) -> Result<SteinerMove> {
    let (w, a, b) = half.hinge_frame(i)?;
    let (p, q) = (hyp_distance(w, a), hyp_distance(w, b));
    let phi = hinge_angle(w, a, b);
    let before = solve_sas(p, q, phi)?;
    let target = optimal_alpha(p, q)?;

    let to_w = isometry_to_origin(w);
    let back = to_w.inverse();
    let turn = DiskIsometry::rotation(-(target.alpha_star - phi));
    let mut chain = half.chain().to_vec();
    for v in chain.iter_mut().skip(i + 1) {
        *v = back.apply(turn.apply(to_w.apply(*v)));
    }

    let new_b = *chain.last().expect("chain is non-empty");
    let closure = (hyp_distance(w, new_b) - q)
        .abs()
        .max((hinge_angle(w, a, new_b) - target.alpha_star).abs());
    if closure > CLOSURE_LIMIT {
        return Err(GeometryError::Closure {
            error: closure,
            limit: CLOSURE_LIMIT,
        });
    }

    match SteinerHalf::new(chain) {
        Ok(moved) => Ok(SteinerMove {
            half: moved,
            delta_area: 2.0 * (target.solution.area - before.area),
            accepted: true,
        }),
        Err(GeometryError::NonConvex(_) | GeometryError::Degenerate(_)) => Ok(SteinerMove {
            half: half.clone(),
            delta_area: 0.0,
            accepted: false,
        }),
        Err(e) => Err(e),
    }
}

/// One row of a [`SteinerTrace`]. Row 0 is the symmetrization step and has
/// no vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteinerRecord {
    pub iteration: usize,
    pub sweep: usize,
    /// Chain index of the hinged vertex.
    pub vertex: Option<usize>,
    pub area_before: f64,
    pub area_after: f64,
    /// Largest hinge residual after this step.
    pub residual: f64,
    pub perimeter: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SteinerTrace {
    pub records: Vec<SteinerRecord>,
}

impl SteinerTrace {
    /// Largest `|perimeter − reference|` over the trace.
    pub fn perimeter_drift(&self, reference: f64) -> f64 {
        self.records
            .iter()
            .map(|r| (r.perimeter - reference).abs())
            .fold(0.0, f64::max)
    }

    /// Every step keeps `area_after ≥ area_before − tol` and rows chain up.
    pub fn area_non_decreasing(&self, tol: f64) -> bool {
        self.records
            .iter()
            .all(|r| r.area_after >= r.area_before - tol)
            && self
                .records
                .windows(2)
                .all(|w| w[1].area_after >= w[0].area_after - tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteinerOutcome {
    pub initial_area: f64,
    pub initial_perimeter: f64,
    pub choice: SymmetrizeChoice,
    pub half: SteinerHalf,
    pub trace: SteinerTrace,
    pub converged: bool,
    /// Sweeps that ran; 0 when the symmetrized polygon was already optimal.
    pub sweeps: usize,
    pub accepted_moves: usize,
    pub rejected_moves: usize,
    pub max_residual: f64,
}

/// Symmetrizes `poly` and then sweeps the chain vertices in order, hinging
/// every vertex whose residual is at least `tol`, until all residuals are
/// below `tol`, a sweep accepts nothing, or `max_sweeps` sweeps have run.
pub fn steiner_optimize(
    poly: &HyperbolicPolygon,
    tol: f64,
    max_sweeps: usize,
) -> Result<SteinerOutcome> {
    if !(tol > 0.0) {
        return Err(GeometryError::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let initial_area = poly.area();
    let initial_perimeter = poly.perimeter();
    let (mut half, choice) = symmetrize(poly)?;
    let mut residual = half.max_residual()?;
    let mut trace = SteinerTrace {
        records: vec![SteinerRecord {
            iteration: 0,
            sweep: 0,
            vertex: None,
            area_before: initial_area,
            area_after: half.area(),
            residual,
            perimeter: half.perimeter(),
        }],
    };
    let (mut sweeps, mut accepted, mut rejected) = (0, 0, 0);
    let mut converged = residual < tol;
    while !converged && sweeps < max_sweeps {
        sweeps += 1;
        let mut accepted_this_sweep = 0;
        for i in half.hinge_vertices() {
            if half.residual(i)? < tol {
                continue;
            }
            let area_before = half.area();
            let step = steiner_move(&half, i)?;
            if !step.accepted {
                rejected += 1;
                continue;
            }
            half = step.half;
            accepted += 1;
            accepted_this_sweep += 1;
            residual = half.max_residual()?;
            trace.records.push(SteinerRecord {
                iteration: trace.records.len(),
                sweep: sweeps,
                vertex: Some(i),
                area_before,
                area_after: half.area(),
                residual,
                perimeter: half.perimeter(),
            });
        }
        residual = half.max_residual()?;
        converged = residual < tol;
        if accepted_this_sweep == 0 {
            break;
        }
    }
    Ok(SteinerOutcome {
        initial_area,
        initial_perimeter,
        choice,
        half,
        trace,
        converged,
        sweeps,
        accepted_moves: accepted,
        rejected_moves: rejected,
        max_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{
        circle_with_circumference, fit_circumcircle, isoperimetric_deficit, random_convex_polygon,
        RegularPolygonSpec,
    };
    use crate::seeded_rng;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn even_regular_polygons_are_fixed_points() {
        for n in [4usize, 6, 10] {
            let poly = RegularPolygonSpec::new(n, 1.2).unwrap().vertices().unwrap();
            let out = steiner_optimize(&poly, 1e-8, 100).unwrap();
            assert!(out.converged);
            assert_eq!(out.sweeps, 0);
            assert_eq!(out.accepted_moves, 0);
            assert_eq!(out.trace.records.len(), 1);
            assert_abs_diff_eq!(out.half.area(), poly.area(), epsilon = 1e-10);
            let full = out.half.full_polygon().unwrap();
            assert_eq!(full.len(), n);
        }
    }

    #[test]
    fn odd_regular_polygon_gains_a_vertex() {
        let poly = RegularPolygonSpec::new(5, 1.0).unwrap().vertices().unwrap();
        let (half, choice) = symmetrize(&poly).unwrap();
        assert!(!choice.snapped);
        assert_abs_diff_eq!(half.area(), poly.area(), epsilon = 1e-10);
        assert!(half.max_residual().unwrap() > 1e-3);
        let out = steiner_optimize(&poly, 1e-9, 2000).unwrap();
        assert!(out.converged);
        assert!(out.half.area() > poly.area());
        assert_eq!(out.half.full_polygon().unwrap().len(), 6);
    }

    #[test]
    fn symmetrize_keeps_perimeter_and_area() {
        for seed in 0..20 {
            let poly = random_convex_polygon(7, &mut seeded_rng(seed)).unwrap();
            let (half, _) = symmetrize(&poly).unwrap();
            assert_abs_diff_eq!(half.perimeter(), poly.perimeter(), epsilon = 1e-10);
            assert!(half.area() >= poly.area() - 1e-12);
            let v = half.full_vertices().unwrap();
            let walked: f64 = (0..v.len())
                .map(|k| hyp_distance(v[k], v[(k + 1) % v.len()]))
                .sum();
            assert_abs_diff_eq!(walked, poly.perimeter(), epsilon = 1e-9);
            // the mirrored figure is convex unless an axis angle exceeds π/2
            let angles = half.figure().interior_angles();
            if angles[0] < FRAC_PI_2 && angles[angles.len() - 1] <= FRAC_PI_2 {
                let full = half.full_polygon().unwrap();
                assert_abs_diff_eq!(full.area(), half.area(), epsilon = 1e-9);
            } else {
                assert!(half.full_polygon().is_err());
            }
        }
    }

    #[test]
    fn move_matches_hinge_triangle_gain() {
        let poly = random_convex_polygon(5, &mut seeded_rng(7)).unwrap();
        let (half, _) = symmetrize(&poly).unwrap();
        for i in half.hinge_vertices() {
            let t = half.hinge_triangle(i).unwrap();
            let step = steiner_move(&half, i).unwrap();
            if !step.accepted {
                continue;
            }
            let after = step.half.hinge_triangle(i).unwrap();
            assert_abs_diff_eq!(after.b, t.b, epsilon = 1e-10);
            assert_abs_diff_eq!(after.c, t.c, epsilon = 1e-10);
            assert!(after.optimality_gap().abs() < 1e-10);
            // angle-sum area of the new half vs. the triangle bookkeeping
            assert_abs_diff_eq!(
                step.half.area() - half.area(),
                step.delta_area,
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(step.delta_area, 2.0 * (after.area - t.area), epsilon = 1e-9);
            assert_abs_diff_eq!(step.half.perimeter(), half.perimeter(), epsilon = 1e-10);
        }
    }

    #[test]
    fn optimal_vertex_is_a_no_op() {
        let poly = random_convex_polygon(6, &mut seeded_rng(3)).unwrap();
        let (half, _) = symmetrize(&poly).unwrap();
        let step = steiner_move(&half, 1).unwrap();
        assert!(step.accepted);
        assert!(step.half.residual(1).unwrap() < 1e-12);
        let again = steiner_move(&step.half, 1).unwrap();
        assert!(again.delta_area.abs() <= 1e-10);
    }

    #[test]
    fn octagon_becomes_cyclic() {
        let poly = random_convex_polygon(8, &mut seeded_rng(42)).unwrap();
        let out = steiner_optimize(&poly, 1e-8, 10_000).unwrap();
        assert!(out.converged, "{:?}", out.max_residual);
        assert!(out.trace.perimeter_drift(poly.perimeter()) < 1e-9);
        assert!(out.trace.area_non_decreasing(1e-12));
        let full = out.half.full_polygon().unwrap();
        let fit = fit_circumcircle(full.vertices()).unwrap();
        assert!(fit.spread < 1e-6, "{fit:?}");
        let before = isoperimetric_deficit(poly.perimeter(), poly.area());
        let after = isoperimetric_deficit(full.perimeter(), full.area());
        assert!(after < before && after >= -1e-9);
        let circle = circle_with_circumference(full.perimeter()).unwrap();
        assert!(full.area() <= circle.area);
    }

    #[test]
    fn rejects_bad_arguments() {
        let poly = random_convex_polygon(5, &mut seeded_rng(1)).unwrap();
        assert!(steiner_optimize(&poly, 0.0, 10).is_err());
        let (half, _) = symmetrize(&poly).unwrap();
        assert!(steiner_move(&half, 0).is_err());
        assert!(steiner_move(&half, half.chain().len() - 1).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn moves_keep_perimeter_and_grow_area(seed in any::<u64>()) {
            let poly = random_convex_polygon(5, &mut seeded_rng(seed)).unwrap();
            let (half, _) = symmetrize(&poly).unwrap();
            for i in half.hinge_vertices() {
                let r = half.residual(i).unwrap();
                let step = steiner_move(&half, i).unwrap();
                prop_assert!((step.half.perimeter() - half.perimeter()).abs() < 1e-9);
                prop_assert!(step.delta_area >= -1e-12);
                if step.accepted && r > 1e-3 {
                    prop_assert!(step.delta_area > 0.0);
                }
            }
        }

        #[test]
        fn optimize_trace_invariants(seed in any::<u64>(), n in 4usize..9) {
            let poly = random_convex_polygon(n, &mut seeded_rng(seed)).unwrap();
            let out = steiner_optimize(&poly, 1e-7, 2_000).unwrap();
            prop_assert!(out.trace.perimeter_drift(poly.perimeter()) < 1e-9);
            prop_assert!(out.trace.area_non_decreasing(1e-12));
            let deficit = isoperimetric_deficit(out.half.perimeter(), out.half.area());
            prop_assert!(deficit >= -1e-9);
            prop_assert!(deficit <= isoperimetric_deficit(poly.perimeter(), poly.area()) + 1e-9);
        }
    }
}
