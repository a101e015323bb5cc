//! Primitives of the Poincaré disk model.
//!
//! Points are stored as plain Euclidean coordinates inside the open unit
//! disk. The hyperbolic metric is `ds = 2|dz| / (1 − |z|²)`, geodesics are
//! diameters or circular arcs meeting the unit circle at right angles, and
//! angles agree with Euclidean angles.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GeometryError, Result};

/// Largest hyperbolic length accepted by constructors that place points by
/// distance from the center.
pub const D_MAX: f64 = 20.0;

/// Euclidean separation below which two points count as coincident.
const COINCIDENT_EPS: f64 = 1e-12;

/// Relative tolerance for classifying a pair of points as collinear with the origin.
const COLLINEAR_EPS: f64 = 1e-12;

/// A Euclidean vector or point in the plane of the model.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Vec2 {
        self * (1.0 / self.norm())
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn arg(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Unsigned angle between two vectors, in `[0, π]`.
    pub fn angle_to(self, other: Vec2) -> f64 {
        self.cross(other).abs().atan2(self.dot(other))
    }

    /// Signed counterclockwise angle from `self` to `other`, in `(−π, π]`.
    pub fn signed_angle_to(self, other: Vec2) -> f64 {
        self.cross(other).atan2(self.dot(other))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

/// A point strictly inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskPoint {
    x: f64,
    y: f64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(GeometryError::Domain(format!(
                "non-finite coordinates ({x}, {y})"
            )));
        }
        if x * x + y * y >= 1.0 {
            return Err(GeometryError::Domain(format!(
                "({x}, {y}) is not inside the unit disk"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn from_vec2(v: Vec2) -> Result<Self> {
        Self::new(v.x, v.y)
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn y(self) -> f64 {
        self.y
    }

    pub fn to_vec2(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Euclidean norm of the coordinates.
    pub fn norm(self) -> f64 {
        self.to_vec2().norm()
    }

    /// Maps a value produced by an isometry back into the open disk. Rounding
    /// can push images of points within an ulp of the boundary onto it.
    fn from_complex_clamped(z: Complex64) -> Self {
        let r2 = z.norm_sqr();
        if r2 < 1.0 {
            Self { x: z.re, y: z.im }
        } else {
            let s = (1.0 - f64::EPSILON) / r2.sqrt();
            Self {
                x: z.re * s,
                y: z.im * s,
            }
        }
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

impl fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A Euclidean circle; its center may lie outside the disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EuclideanCircle {
    pub center: Vec2,
    pub radius: f64,
}

impl EuclideanCircle {
    pub fn new(center: Vec2, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && center.is_finite()) {
            return Err(GeometryError::Domain(format!(
                "invalid circle: center {center:?}, radius {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    /// `|center|² − 1 − radius²`; zero when the circle meets the unit circle
    /// at right angles.
    pub fn orthogonality_residual(&self) -> f64 {
        self.center.norm_sq() - 1.0 - self.radius * self.radius
    }

    /// Signed distance of `p` from the circle (positive outside).
    pub fn offset(&self, p: Vec2) -> f64 {
        (p - self.center).norm() - self.radius
    }
}

/// A hyperbolic line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Geodesic {
    /// A diameter of the unit disk with the given unit direction.
    Diameter { direction: Vec2 },
    /// The part inside the disk of a circle orthogonal to the unit circle.
    Arc(EuclideanCircle),
}

/// The point at hyperbolic distance `d` from the origin in direction `theta`.
pub fn point_from_polar(d: f64, theta: f64) -> Result<DiskPoint> {
    if !(0.0..=D_MAX).contains(&d) {
        return Err(GeometryError::Domain(format!(
            "hyperbolic radius {d} outside [0, {D_MAX}]"
        )));
    }
    if !theta.is_finite() {
        return Err(GeometryError::Domain(format!("non-finite angle {theta}")));
    }
    let r = (0.5 * d).tanh();
    DiskPoint::new(r * theta.cos(), r * theta.sin())
}

/// Hyperbolic distance `2·artanh(|p − q| / |1 − p̄q|)`.
pub fn hyp_distance(p: DiskPoint, q: DiskPoint) -> f64 {
    let (pv, qv) = (p.to_vec2(), q.to_vec2());
    let diff = (pv - qv).norm();
    if diff == 0.0 {
        return 0.0;
    }
    let denom = (Complex64::new(1.0, 0.0) - p.to_complex().conj() * q.to_complex()).norm();
    let t = diff / denom;
    // 1 − t² = (1 − |p|²)(1 − |q|²) / |1 − p̄q|², which avoids forming 1 − t
    // directly when t is close to 1.
    let one_minus_t_sq = (1.0 - pv.norm_sq()) * (1.0 - qv.norm_sq()) / (denom * denom);
    let one_minus_t = one_minus_t_sq / (1.0 + t);
    (2.0 * t / one_minus_t).ln_1p()
}

/// The geodesic through two distinct points.
pub fn geodesic_through(p: DiskPoint, q: DiskPoint) -> Result<Geodesic> {
    let (pv, qv) = (p.to_vec2(), q.to_vec2());
    let chord = qv - pv;
    if chord.norm() <= COINCIDENT_EPS {
        return Err(GeometryError::Degenerate(format!(
            "coincident points {p} and {q}"
        )));
    }
    let cross = pv.cross(qv);
    if cross.abs() <= COLLINEAR_EPS * pv.norm().max(qv.norm()) {
        return Ok(Geodesic::Diameter {
            direction: chord.normalized(),
        });
    }
    // The circle through p, q and the inverse p/|p|² of p. Its center c
    // satisfies 2 c·p = 1 + |p|² and 2 c·q = 1 + |q|².
    let rp = 1.0 + pv.norm_sq();
    let rq = 1.0 + qv.norm_sq();
    let det = 2.0 * cross;
    let center = Vec2::new((rp * qv.y - rq * pv.y) / det, (rq * pv.x - rp * qv.x) / det);
    let radius = 0.5 * ((center - pv).norm() + (center - qv).norm());
    Ok(Geodesic::Arc(EuclideanCircle::new(center, radius)?))
}

/// Unit tangent at `from` of the geodesic segment running to `to`.
fn tangent_toward(from: DiskPoint, to: DiskPoint) -> Result<Vec2> {
    let chord = to.to_vec2() - from.to_vec2();
    match geodesic_through(from, to)? {
        Geodesic::Diameter { .. } => Ok(chord.normalized()),
        Geodesic::Arc(circle) => {
            // The segment inside the disk is the minor arc, so its tangent
            // makes an acute angle with the chord.
            let t = (from.to_vec2() - circle.center).perp().normalized();
            Ok(if t.dot(chord) < 0.0 { -t } else { t })
        }
    }
}

/// Hyperbolic angle at `v` between the geodesics `vp` and `vq`, in `[0, π]`.
pub fn angle_at_vertex(v: DiskPoint, p: DiskPoint, q: DiskPoint) -> Result<f64> {
    let tp = tangent_toward(v, p)?;
    let tq = tangent_toward(v, q)?;
    Ok(tp.angle_to(tq))
}

/// An orientation-preserving isometry `z ↦ e^{iθ}(z − a)/(1 − āz)`: the
/// disk automorphism sending `a` to the origin, followed by a rotation by `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskIsometry {
    target: DiskPoint,
    rotation: f64,
}

impl DiskIsometry {
    pub fn new(target: DiskPoint, rotation: f64) -> Self {
        Self { target, rotation }
    }

    pub fn identity() -> Self {
        Self::new(DiskPoint::ORIGIN, 0.0)
    }

    /// A rotation about the origin.
    pub fn rotation(theta: f64) -> Self {
        Self::new(DiskPoint::ORIGIN, theta)
    }

    /// The point sent to the origin.
    pub fn target(&self) -> DiskPoint {
        self.target
    }

    pub fn rotation_angle(&self) -> f64 {
        self.rotation
    }

    pub fn apply(&self, p: DiskPoint) -> DiskPoint {
        let a = self.target.to_complex();
        let z = p.to_complex();
        let w = (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z);
        DiskPoint::from_complex_clamped(w * Complex64::from_polar(1.0, self.rotation))
    }

    pub fn inverse(&self) -> Self {
        let a = self.target.to_complex();
        let t = -a * Complex64::from_polar(1.0, self.rotation);
        Self::new(DiskPoint::from_complex_clamped(t), -self.rotation)
    }
}

/// The isometry that translates `p` to the origin without extra rotation.
pub fn isometry_to_origin(p: DiskPoint) -> DiskIsometry {
    DiskIsometry::new(p, 0.0)
}

pub fn apply_isometry(m: &DiskIsometry, p: DiskPoint) -> DiskPoint {
    m.apply(p)
}

/// The point at hyperbolic distance `dist` from `from` along the geodesic
/// towards `toward`.
pub fn point_along(from: DiskPoint, toward: DiskPoint, dist: f64) -> Result<DiskPoint> {
    let m = isometry_to_origin(from);
    let dir = m.apply(toward).to_vec2();
    if dir.norm() <= COINCIDENT_EPS {
        return Err(GeometryError::Degenerate(format!(
            "coincident points {from} and {toward}"
        )));
    }
    Ok(m.inverse().apply(point_from_polar(dist, dir.arg())?))
}

/// Reflection of `p` in the geodesic through `a` and `b`.
pub fn reflect_in_geodesic(a: DiskPoint, b: DiskPoint, p: DiskPoint) -> Result<DiskPoint> {
    let to_a = isometry_to_origin(a);
    let dir = to_a.apply(b).to_vec2();
    if dir.norm() <= COINCIDENT_EPS {
        return Err(GeometryError::Degenerate(format!(
            "coincident points {a} and {b}"
        )));
    }
    // Rotate the axis onto the real line, conjugate, and undo.
    let frame = DiskIsometry::new(a, -dir.arg());
    let w = frame.apply(p);
    let mirrored = DiskPoint::from_complex_clamped(w.to_complex().conj());
    Ok(frame.inverse().apply(mirrored))
}
