//! Hyperbolic triangles with two given sides.
//!
//! With the vertex `A` at the center of the disk, the sides `AB` and `AC`
//! are Euclidean segments and the third side lies on a circle `ω`
//! orthogonal to the unit circle. The line `AB` meets `ω` again at `B'`,
//! the inverse of `B` in the unit circle, and the Euclidean angle
//! `τ = ∠AB'C` is half the area of the triangle. The area is largest when
//! `B'C` is tangent to the circle `ψ` of possible positions of `C`, which
//! is the condition `α = β + γ`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::disk::{
    geodesic_through, point_from_polar, DiskPoint, EuclideanCircle, Geodesic, Vec2, D_MAX,
};
use crate::error::{GeometryError, Result};

/// Distance kept from the endpoints of `(0, π)` for the included angle.
pub const ALPHA_EPS: f64 = 1e-6;

/// Points of the bracketing scan in [`optimal_alpha`].
const SCAN_POINTS: usize = 256;
const BISECTION_HALF_WIDTH: f64 = 1e-14;
const BISECTION_MAX_ITER: usize = 200;

/// Sides and angles of a hyperbolic triangle; side `a` is opposite `alpha`
/// and so on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleSolution {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub area: f64,
}

impl TriangleSolution {
    /// `α − (β + γ)`; zero for the maximal-area triangle with sides `b`, `c`.
    pub fn optimality_gap(&self) -> f64 {
        self.alpha - (self.beta + self.gamma)
    }
}

fn check_side(name: &str, s: f64) -> Result<()> {
    if s > 0.0 && s <= D_MAX {
        Ok(())
    } else {
        Err(GeometryError::Domain(format!(
            "side {name} = {s} outside (0, {D_MAX}]"
        )))
    }
}

fn check_sas(b: f64, c: f64, alpha: f64) -> Result<()> {
    check_side("b", b)?;
    check_side("c", c)?;
    if alpha > ALPHA_EPS && alpha < PI - ALPHA_EPS {
        Ok(())
    } else {
        Err(GeometryError::Domain(format!(
            "angle {alpha} outside ({ALPHA_EPS}, π − {ALPHA_EPS})"
        )))
    }
}

/// Solves the triangle with sides `b = |AC|`, `c = |AB|` and included angle
/// `alpha` at `A`.
pub fn solve_sas(b: f64, c: f64, alpha: f64) -> Result<TriangleSolution> {
    check_sas(b, c, alpha)?;
    let (sin_a, cos_a) = alpha.sin_cos();
    let half_sin_sq = (0.5 * alpha).sin().powi(2);
    let (sinh_b, cosh_b) = (b.sinh(), b.cosh());
    let (sinh_c, cosh_c) = (c.sinh(), c.cosh());

    // Law of cosines written as sinh²(a/2) = sinh²((b−c)/2) + sinh b sinh c sin²(α/2),
    // free of the cancellation in cosh a − 1 for short sides.
    let s = (0.5 * (b - c)).sinh();
    let a = 2.0 * (s * s + sinh_b * sinh_c * half_sin_sq).sqrt().asinh();

    // Cotangent (four-part) rule: sin α cot β = sinh c coth b − cosh c cos α.
    let beta = (sin_a * sinh_b).atan2((c - b).sinh() + 2.0 * cosh_c * sinh_b * half_sin_sq);
    let gamma = (sin_a * sinh_c).atan2((b - c).sinh() + 2.0 * cosh_b * sinh_c * half_sin_sq);

    // tan(S/2) = t_b t_c sin α / (1 − t_b t_c cos α) with t = tanh(side/2);
    // agrees with π − (α + β + γ) without its cancellation for small triangles.
    let k = (0.5 * b).tanh() * (0.5 * c).tanh();
    let area = 2.0 * (k * sin_a).atan2(1.0 - k * cos_a);

    Ok(TriangleSolution {
        a,
        b,
        c,
        alpha,
        beta,
        gamma,
        area,
    })
}

/// Area of a hyperbolic triangle from its angles: `π − (α + β + γ)`.
pub fn area_defect(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
        if !(v > 0.0 && v < PI) {
            return Err(GeometryError::Domain(format!(
                "{name} = {v} outside (0, π)"
            )));
        }
    }
    let defect = PI - (alpha + beta + gamma);
    if defect > 0.0 {
        Ok(defect)
    } else {
        Err(GeometryError::Domain(format!(
            "angle sum {} is not below π",
            alpha + beta + gamma
        )))
    }
}

/// Places `A` at the origin, `B` on the positive x-axis at distance `c` and
/// `C` at distance `b` in direction `alpha`.
pub fn embed_triangle(b: f64, c: f64, alpha: f64) -> Result<(DiskPoint, DiskPoint, DiskPoint)> {
    check_sas(b, c, alpha)?;
    Ok((
        DiskPoint::ORIGIN,
        point_from_polar(c, 0.0)?,
        point_from_polar(b, alpha)?,
    ))
}

/// The circle carrying the geodesic `BC`.
pub fn omega_circle(b: DiskPoint, c: DiskPoint) -> Result<EuclideanCircle> {
    match geodesic_through(b, c)? {
        Geodesic::Arc(circle) => Ok(circle),
        Geodesic::Diameter { .. } => Err(GeometryError::Degenerate(format!(
            "{b}, {c} and the origin are collinear"
        ))),
    }
}

/// Second intersection of the line through the origin and `B` with `omega`.
pub fn b_prime_point(b: DiskPoint, omega: &EuclideanCircle) -> Result<Vec2> {
    let bv = b.to_vec2();
    let rho = bv.norm();
    if rho < 1e-15 {
        return Err(GeometryError::Degenerate(
            "B at the origin does not determine a line".into(),
        ));
    }
    let u = bv * (1.0 / rho);
    // |t·u − center|² = r²  ⇔  t² − 2h·t + k = 0
    let h = u.dot(omega.center);
    let k = omega.center.norm_sq() - omega.radius * omega.radius;
    let disc = h * h - k;
    if disc < -1e-9 * h * h.max(1.0) {
        return Err(GeometryError::Degenerate(format!(
            "line through {b} misses ω (discriminant {disc:e})"
        )));
    }
    let q = h + h.signum() * disc.max(0.0).sqrt();
    let (t1, t2) = (q, k / q);
    let t = if (t1 - rho).abs() >= (t2 - rho).abs() {
        t1
    } else {
        t2
    };
    Ok(u * t)
}

/// The full inversion construction for a triangle with vertex `A` at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversionFigure {
    pub a: DiskPoint,
    pub b: DiskPoint,
    pub c: DiskPoint,
    pub omega: EuclideanCircle,
    pub psi: EuclideanCircle,
    pub b_prime: Vec2,
    pub tau: f64,
}

impl InversionFigure {
    /// Angle of the triangle at `A`, read off as a Euclidean angle at the origin.
    pub fn alpha(&self) -> f64 {
        self.b.to_vec2().angle_to(self.c.to_vec2())
    }
}

/// Euclidean angle `∠AB'C`.
pub fn tau_angle(fig: &InversionFigure) -> Result<f64> {
    let to_a = fig.a.to_vec2() - fig.b_prime;
    let to_c = fig.c.to_vec2() - fig.b_prime;
    if to_a.norm() < 1e-15 || to_c.norm() < 1e-15 {
        return Err(GeometryError::Degenerate(
            "B' coincides with a vertex".into(),
        ));
    }
    Ok(to_a.angle_to(to_c))
}

pub fn build_inversion_figure(b: f64, c: f64, alpha: f64) -> Result<InversionFigure> {
    let (pa, pb, pc) = embed_triangle(b, c, alpha)?;
    let omega = omega_circle(pb, pc)?;
    let b_prime = b_prime_point(pb, &omega)?;
    let psi = EuclideanCircle::new(Vec2::ZERO, (0.5 * b).tanh())?;
    let mut fig = InversionFigure {
        a: pa,
        b: pb,
        c: pc,
        omega,
        psi,
        b_prime,
        tau: 0.0,
    };
    fig.tau = tau_angle(&fig)?;
    Ok(fig)
}

/// Maximal-area angle for the given pair of sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalAngle {
    pub alpha_star: f64,
    pub solution: TriangleSolution,
}

fn gap(b: f64, c: f64, alpha: f64) -> Result<f64> {
    Ok(solve_sas(b, c, alpha)?.optimality_gap())
}

/// Finds the angle at `A` where `α = β + γ` for sides `b = |AC|`, `c = |AB|`.
///
/// A 256-point scan brackets every sign change of `α − β − γ`; each bracket
/// is bisected to a half-width of 1e-14 and the root with the largest area
/// wins.
pub fn optimal_alpha(b: f64, c: f64) -> Result<OptimalAngle> {
    check_side("b", b)?;
    check_side("c", c)?;
    let lo = ALPHA_EPS * 2.0;
    let hi = PI - ALPHA_EPS * 2.0;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..SCAN_POINTS)
        .map(|k| {
            let x = if k + 1 == SCAN_POINTS {
                hi
            } else {
                lo + k as f64 * step
            };
            gap(b, c, x).map(|g| (x, g))
        })
        .collect::<Result<_>>()?;

    let mut best: Option<OptimalAngle> = None;
    for pair in grid.windows(2) {
        let ((x0, g0), (x1, g1)) = (pair[0], pair[1]);
        let root = if g0 == 0.0 {
            x0
        } else if g0.signum() != g1.signum() {
            bisect(b, c, x0, g0, x1)?
        } else {
            continue;
        };
        let solution = solve_sas(b, c, root)?;
        if best.is_none_or(|cur| solution.area > cur.solution.area) {
            best = Some(OptimalAngle {
                alpha_star: root,
                solution,
            });
        }
    }
    best.ok_or_else(|| {
        GeometryError::Solver(format!("no sign change of α − β − γ for b = {b}, c = {c}"))
    })
}

fn bisect(b: f64, c: f64, mut lo: f64, g_lo: f64, mut hi: f64) -> Result<f64> {
    let sign_lo = g_lo.signum();
    for _ in 0..BISECTION_MAX_ITER {
        if 0.5 * (hi - lo) <= BISECTION_HALF_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g = gap(b, c, mid)?;
        if g == 0.0 {
            return Ok(mid);
        }
        if g.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Three numerical witnesses that a figure is at the area maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalityCertificate {
    /// Euclidean angle `∠ACB'`; a right angle at the optimum.
    pub acb_angle: f64,
    /// `|dist(A, line B'C) − radius(ψ)|`; zero when `B'C` touches `ψ`.
    pub tangency_gap: f64,
    /// `|α + τ − π/2|`.
    pub residual: f64,
}

impl OptimalityCertificate {
    pub fn right_angle_residual(&self) -> f64 {
        (self.acb_angle - FRAC_PI_2).abs()
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.right_angle_residual() < tol && self.tangency_gap < tol && self.residual < tol
    }
}

pub fn optimality_certificate(fig: &InversionFigure) -> OptimalityCertificate {
    let (a, c) = (fig.a.to_vec2(), fig.c.to_vec2());
    let acb_angle = (a - c).angle_to(fig.b_prime - c);
    let dir = c - fig.b_prime;
    let line_dist = dir.cross(a - fig.b_prime).abs() / dir.norm();
    OptimalityCertificate {
        acb_angle,
        tangency_gap: (line_dist - fig.psi.radius).abs(),
        residual: (fig.alpha() + fig.tau - FRAC_PI_2).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{angle_at_vertex, hyp_distance};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn hyperbolic_pythagoras() {
        let s = solve_sas(1.0, 1.0, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(s.a.cosh(), 1f64.cosh().powi(2), epsilon = 1e-14);
        // acosh(cosh²1) to 30 digits
        assert_abs_diff_eq!(s.a, 1.513_374_006_596_503_96, epsilon = 1e-14);
        assert_abs_diff_eq!(s.beta, s.gamma, epsilon = 1e-15);
        let defect = area_defect(s.alpha, s.beta, s.gamma).unwrap();
        assert_abs_diff_eq!(s.area, defect, epsilon = 1e-14);
    }

    #[test]
    fn angles_match_cosine_rule() {
        for &(b, c, alpha) in &[(1.0, 2.0, 0.7), (0.3, 2.5, 2.9), (3.0, 0.2, 0.1)] {
            let s = solve_sas(b, c, alpha).unwrap();
            let cos_beta = (c.cosh() * s.a.cosh() - b.cosh()) / (c.sinh() * s.a.sinh());
            let cos_gamma = (b.cosh() * s.a.cosh() - c.cosh()) / (b.sinh() * s.a.sinh());
            assert_abs_diff_eq!(s.beta, cos_beta.acos(), epsilon = 1e-9);
            assert_abs_diff_eq!(s.gamma, cos_gamma.acos(), epsilon = 1e-9);
            let cosh_a = b.cosh() * c.cosh() - b.sinh() * c.sinh() * alpha.cos();
            assert_relative_eq!(s.a.cosh(), cosh_a, max_relative = 1e-13);
        }
    }

    #[test]
    fn small_triangles_approach_euclidean_law_of_cosines() {
        // The relative gap to the Euclidean law of cosines is
        // ε²(1 + cos α)/12 + O(ε⁴) for b = c = ε; at α = 1 this is 1.2836e-7
        // (checked against a 50-digit evaluation of the exact formula).
        let (eps, alpha) = (1e-3, 1.0f64);
        let s = solve_sas(eps, eps, alpha).unwrap();
        let euclid = (2.0 * eps * eps * (1.0 - alpha.cos())).sqrt();
        let rel = s.a / euclid - 1.0;
        assert_abs_diff_eq!(rel, 1.283_585_186_3e-7, epsilon = 1e-14);
        assert!(rel.abs() < 1e-6);
    }

    #[test]
    fn sas_domain_errors() {
        assert!(solve_sas(1.0, 1.0, 0.0).is_err());
        assert!(solve_sas(1.0, 1.0, PI).is_err());
        assert!(solve_sas(1.0, 1.0, 4.0).is_err());
        assert!(solve_sas(0.0, 1.0, 1.0).is_err());
        assert!(solve_sas(1.0, -1.0, 1.0).is_err());
        assert!(solve_sas(1.0, D_MAX + 1.0, 1.0).is_err());
    }

    #[test]
    fn defect_examples() {
        let third = PI / 3.0;
        assert_abs_diff_eq!(
            area_defect(third, third, third - 0.3).unwrap(),
            0.3,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(area_defect(1e-9, 1e-9, 1e-9).unwrap(), PI, epsilon = 1e-8);
        assert!(area_defect(third, third, third).is_err());
        assert!(area_defect(0.0, 0.1, 0.1).is_err());
    }

    #[test]
    fn embedding_examples() {
        let (a, b, c) = embed_triangle(1.0, 1.0, FRAC_PI_2).unwrap();
        let t = 0.5f64.tanh();
        assert_eq!(a, DiskPoint::ORIGIN);
        assert_abs_diff_eq!(b.x(), t, epsilon = 1e-16);
        assert_abs_diff_eq!(b.y(), 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(c.x(), 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(c.y(), t, epsilon = 1e-16);
    }

    #[test]
    fn omega_and_b_prime_examples() {
        let b = DiskPoint::new(0.5, 0.0).unwrap();
        let c = DiskPoint::new(0.0, 0.5).unwrap();
        let omega = omega_circle(b, c).unwrap();
        assert_abs_diff_eq!(omega.center.x, 1.25, epsilon = 1e-14);
        assert_abs_diff_eq!(omega.center.y, 1.25, epsilon = 1e-14);
        assert_abs_diff_eq!(omega.radius, 2.125f64.sqrt(), epsilon = 1e-14);
        // (x − 1.25)² + 1.5625 = 2.125 has roots 0.5 and 2.
        let bp = b_prime_point(b, &omega).unwrap();
        assert_abs_diff_eq!(bp.x, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(bp.y, 0.0, epsilon = 1e-14);

        let far = DiskPoint::new(0.6, 0.0).unwrap();
        assert!(matches!(
            omega_circle(b, far),
            Err(GeometryError::Degenerate(_))
        ));
        assert!(b_prime_point(DiskPoint::ORIGIN, &omega).is_err());
    }

    #[test]
    fn figure_for_right_isosceles_triangle() {
        // With t = tanh(1/2): center of ω = (coth 1, coth 1), B' = (1/t, 0),
        // tan τ = t², all evaluated to 50 digits with mpmath.
        let fig = build_inversion_figure(1.0, 1.0, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(fig.b.x(), 0.462_117_157_260_009_76, epsilon = 1e-15);
        assert_abs_diff_eq!(fig.omega.center.x, 1.313_035_285_499_331_3, epsilon = 1e-13);
        assert_abs_diff_eq!(fig.omega.center.y, 1.313_035_285_499_331_3, epsilon = 1e-13);
        assert_abs_diff_eq!(
            fig.omega.radius,
            (2.0 * 1.313_035_285_499_331_3f64.powi(2) - 1.0).sqrt(),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(fig.b_prime.x, 2.163_953_413_738_652_8, epsilon = 1e-13);
        assert_abs_diff_eq!(fig.b_prime.y, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(fig.tau, 0.210_391_980_819_036_46, epsilon = 1e-14);
        assert_abs_diff_eq!(fig.psi.radius, 0.462_117_157_260_009_76, epsilon = 1e-15);
        assert_abs_diff_eq!(fig.psi.offset(fig.c.to_vec2()), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn tau_for_prescribed_area() {
        // For b = c = 1 the area is 0.4 when sin(α + 0.2) = sin(0.2) / tanh²(1/2),
        // taking the root above π/2.
        let u = 0.5f64.tanh().powi(2);
        let alpha = PI - (0.2f64.sin() / u).asin() - 0.2;
        let s = solve_sas(1.0, 1.0, alpha).unwrap();
        assert_abs_diff_eq!(s.alpha + 2.0 * s.beta, PI - 0.4, epsilon = 1e-12);
        let fig = build_inversion_figure(1.0, 1.0, alpha).unwrap();
        assert_abs_diff_eq!(fig.tau, 0.2, epsilon = 1e-9);
    }

    #[test]
    fn optimum_examples() {
        let opt = optimal_alpha(1e-3, 1e-3).unwrap();
        assert_abs_diff_eq!(opt.alpha_star, FRAC_PI_2, epsilon = 1e-3);

        let opt = optimal_alpha(1.0, 1.0).unwrap();
        let s = opt.solution;
        assert!(s.optimality_gap().abs() < 1e-12);
        assert_abs_diff_eq!(opt.alpha_star, 2.0 * s.beta, epsilon = 1e-12);
        assert_abs_diff_eq!(s.area, PI - 2.0 * opt.alpha_star, epsilon = 1e-12);

        let cert =
            optimality_certificate(&build_inversion_figure(1.0, 1.0, opt.alpha_star).unwrap());
        assert!(cert.holds(1e-9), "{cert:?}");
        let off = optimality_certificate(
            &build_inversion_figure(1.0, 1.0, opt.alpha_star / 2.0).unwrap(),
        );
        assert!(off.right_angle_residual() > 1e-3);
        assert!(optimal_alpha(0.0, 1.0).is_err());
    }

    #[test]
    fn optimum_is_symmetric_in_the_sides() {
        for &(b, c) in &[(0.3, 2.0), (1.5, 0.1), (2.9, 2.2)] {
            let x = optimal_alpha(b, c).unwrap().alpha_star;
            let y = optimal_alpha(c, b).unwrap().alpha_star;
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    fn sas() -> impl Strategy<Value = (f64, f64, f64)> {
        (0.1..3.0f64, 0.1..3.0f64, 0.05..(PI - 0.05))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn area_is_twice_tau((b, c, alpha) in sas()) {
            let s = solve_sas(b, c, alpha).unwrap();
            let fig = build_inversion_figure(b, c, alpha).unwrap();
            let defect = area_defect(s.alpha, s.beta, s.gamma).unwrap();
            prop_assert!((defect - 2.0 * fig.tau).abs() < 1e-9);
            prop_assert!((s.area - defect).abs() < 1e-14);
            prop_assert!(fig.tau > 0.0 && fig.tau < FRAC_PI_2);
        }

        #[test]
        fn figure_invariants((b, c, alpha) in sas()) {
            let fig = build_inversion_figure(b, c, alpha).unwrap();
            let bp = fig.b_prime;
            prop_assert!((fig.b.norm() * bp.norm() - 1.0).abs() < 1e-10);
            // the quadratic root agrees with the inversion B/|B|²
            let inv = fig.b.to_vec2() * (1.0 / fig.b.to_vec2().norm_sq());
            prop_assert!((bp - inv).norm() < 1e-10 * inv.norm());
            prop_assert!(fig.b.to_vec2().cross(bp).abs() < 1e-12 * bp.norm());
            prop_assert!(fig.omega.offset(bp).abs() < 1e-10 * fig.omega.radius.max(1.0));
            prop_assert!(fig.omega.orthogonality_residual().abs() < 1e-10);
            prop_assert!(fig.omega.offset(fig.b.to_vec2()).abs() < 1e-12);
            prop_assert!(fig.omega.offset(fig.c.to_vec2()).abs() < 1e-12);
            prop_assert!(fig.psi.offset(fig.c.to_vec2()).abs() < 1e-12);
        }

        #[test]
        fn embedding_reproduces_solution((b, c, alpha) in sas()) {
            let s = solve_sas(b, c, alpha).unwrap();
            let (pa, pb, pc) = embed_triangle(b, c, alpha).unwrap();
            prop_assert!((hyp_distance(pa, pb) - c).abs() < 1e-12);
            prop_assert!((hyp_distance(pa, pc) - b).abs() < 1e-12);
            prop_assert!((hyp_distance(pb, pc) - s.a).abs() < 1e-10);
            prop_assert!((angle_at_vertex(pa, pb, pc).unwrap() - alpha).abs() < 1e-12);
            prop_assert!((angle_at_vertex(pb, pa, pc).unwrap() - s.beta).abs() < 1e-9);
            prop_assert!((angle_at_vertex(pc, pa, pb).unwrap() - s.gamma).abs() < 1e-9);
        }
    }
}
