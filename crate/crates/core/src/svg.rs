//! Standalone SVG drawings.
//!
//! The unit disk maps to a 1000×1000 square: `X = 500 + 500x`,
//! `Y = 500 − 500y`, so the picture keeps the mathematical orientation.
//! Everything is inline; no fonts, stylesheets or links are referenced.

use std::fmt::Write as _;

use crate::disk::{geodesic_through, hyp_distance, DiskPoint, Geodesic, Vec2};
use crate::triangle::InversionFigure;

const SCALE: f64 = 500.0;

fn sx(v: Vec2) -> (f64, f64) {
    (SCALE + SCALE * v.x, SCALE - SCALE * v.y)
}

/// Accumulates elements and tracks the region they cover in model units.
struct Canvas {
    body: String,
    lo: Vec2,
    hi: Vec2,
}

impl Canvas {
    fn new() -> Self {
        Self {
            body: String::new(),
            lo: Vec2::new(-1.0, -1.0),
            hi: Vec2::new(1.0, 1.0),
        }
    }

    fn include(&mut self, v: Vec2) {
        self.lo = Vec2::new(self.lo.x.min(v.x), self.lo.y.min(v.y));
        self.hi = Vec2::new(self.hi.x.max(v.x), self.hi.y.max(v.y));
    }

    fn circle(&mut self, center: Vec2, radius: f64, style: &str) {
        let (x, y) = sx(center);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" {style}/>"#,
            SCALE * radius
        );
    }

    fn line(&mut self, p: Vec2, q: Vec2, style: &str) {
        let ((x1, y1), (x2, y2)) = (sx(p), sx(q));
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" {style}/>"#
        );
    }

    fn dot(&mut self, p: Vec2, label: &str) {
        self.include(p);
        let (x, y) = sx(p);
        let _ = writeln!(
            self.body,
            r##"<circle cx="{x:.3}" cy="{y:.3}" r="5" fill="#222"/>"##
        );
        if !label.is_empty() {
            let _ = writeln!(
                self.body,
                r#"<text x="{:.3}" y="{:.3}" font-size="28">{label}</text>"#,
                x + 10.0,
                y - 10.0
            );
        }
    }

    fn text(&mut self, p: Vec2, s: &str) {
        let (x, y) = sx(p);
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.3}" y="{y:.3}" font-size="26">{s}</text>"#
        );
    }

    fn path(&mut self, d: &str, style: &str) {
        let _ = writeln!(self.body, r#"<path d="{d}" {style}/>"#);
    }

    fn finish(self) -> String {
        let pad = 0.08;
        let (x0, y0) = sx(Vec2::new(self.lo.x - pad, self.hi.y + pad));
        let (x1, y1) = sx(Vec2::new(self.hi.x + pad, self.lo.y - pad));
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}" "#,
                r#"font-family="serif">"#,
                "\n",
                r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#fff"/>"##,
                "\n",
                r##"<circle cx="500" cy="500" r="500" fill="none" stroke="#000" stroke-width="2"/>"##,
                "\n{}</svg>\n"
            ),
            x0,
            y0,
            x1 - x0,
            y1 - y0,
            x0,
            y0,
            x1 - x0,
            y1 - y0,
            self.body
        )
    }
}

/// Path data for the geodesic segment from `p` to `q`, without the leading move.
fn geodesic_segment(p: DiskPoint, q: DiskPoint) -> String {
    let (x, y) = sx(q.to_vec2());
    match geodesic_through(p, q) {
        Ok(Geodesic::Arc(circle)) => {
            let sweep = (p.to_vec2() - circle.center).signed_angle_to(q.to_vec2() - circle.center);
            // Positive mathematical turns are clockwise on screen.
            let flag = u8::from(sweep > 0.0);
            let r = SCALE * circle.radius;
            format!("A {r:.3} {r:.3} 0 0 {flag} {x:.3} {y:.3}")
        }
        _ => format!("L {x:.3} {y:.3}"),
    }
}

fn move_to(p: DiskPoint) -> String {
    let (x, y) = sx(p.to_vec2());
    format!("M {x:.3} {y:.3}")
}

fn closed_polygon_path(vertices: &[DiskPoint]) -> String {
    let mut d = move_to(vertices[0]);
    for k in 0..vertices.len() {
        d.push(' ');
        d.push_str(&geodesic_segment(
            vertices[k],
            vertices[(k + 1) % vertices.len()],
        ));
    }
    d.push_str(" Z");
    d
}

/// The Euclidean circle drawn by a hyperbolic circle.
fn hyperbolic_circle(center: DiskPoint, radius: f64) -> (Vec2, f64) {
    let d = hyp_distance(DiskPoint::ORIGIN, center);
    let dir = if center.norm() > 0.0 {
        center.to_vec2().normalized()
    } else {
        Vec2::new(1.0, 0.0)
    };
    let near = (0.5 * (d - radius)).tanh();
    let far = (0.5 * (d + radius)).tanh();
    (dir * (0.5 * (near + far)), 0.5 * (far - near))
}

/// The inversion construction: the triangle, the circle `ω` through `B` and
/// `C`, the circle `ψ` of radius `|AC|` about `A`, the point `B'` and the
/// angle `τ` at `B'`.
pub fn inversion_figure_svg(fig: &InversionFigure) -> String {
    let mut c = Canvas::new();
    let (a, b, cc) = (fig.a.to_vec2(), fig.b.to_vec2(), fig.c.to_vec2());
    let bp = fig.b_prime;
    c.include(bp);

    c.circle(
        fig.omega.center,
        fig.omega.radius,
        r##"fill="none" stroke="#1f6fb2" stroke-dasharray="12 8""##,
    );
    c.circle(
        fig.psi.center,
        fig.psi.radius,
        r##"fill="none" stroke="#2a9d3a" stroke-dasharray="4 6""##,
    );
    c.line(a, bp, r##"stroke="#888" stroke-dasharray="6 6""##);
    c.line(bp, cc, r##"stroke="#c0392b""##);

    let tri = closed_polygon_path(&[fig.a, fig.b, fig.c]);
    c.path(
        &tri,
        r##"fill="#f4d03f" fill-opacity="0.35" stroke="#000" stroke-width="3""##,
    );

    // arc marking τ at B'
    let r = 0.12;
    let ua = (a - bp).normalized();
    let uc = (cc - bp).normalized();
    let (x0, y0) = sx(bp + ua * r);
    let (x1, y1) = sx(bp + uc * r);
    let flag = u8::from(ua.signed_angle_to(uc) > 0.0);
    c.path(
        &format!(
            "M {x0:.3} {y0:.3} A {0:.3} {0:.3} 0 0 {flag} {x1:.3} {y1:.3}",
            SCALE * r
        ),
        r##"fill="none" stroke="#c0392b" stroke-width="2""##,
    );
    let mid = (ua + uc).normalized();
    c.text(bp + mid * (r + 0.05), &format!("τ = {:.4}", fig.tau));

    c.dot(a, "A");
    c.dot(b, "B");
    c.dot(cc, "C");
    c.dot(bp, "B′");
    let toward_origin = (-fig.omega.center).normalized();
    c.text(
        fig.omega.center + toward_origin * (fig.omega.radius - 0.06),
        "ω",
    );
    c.text(Vec2::new(0.0, -fig.psi.radius - 0.06), "ψ");
    c.finish()
}

/// Options for [`polygon_svg`].
#[derive(Debug, Clone, Default)]
pub struct PolygonPicture<'a> {
    pub polygon: &'a [DiskPoint],
    /// Drawn dashed underneath, e.g. the starting polygon.
    pub ghost: Option<&'a [DiskPoint]>,
    /// A hyperbolic circle given by center and radius.
    pub circle: Option<(DiskPoint, f64)>,
    /// A geodesic segment drawn as an axis, e.g. a mirror line.
    pub axis: Option<(DiskPoint, DiskPoint)>,
}

/// A polygon with geodesic sides, optionally with a ghost polygon, a circle
/// and an axis.
pub fn polygon_svg(pic: &PolygonPicture<'_>) -> String {
    let mut c = Canvas::new();
    if let Some(ghost) = pic.ghost.filter(|g| g.len() >= 2) {
        c.path(
            &closed_polygon_path(ghost),
            r##"fill="none" stroke="#999" stroke-width="2" stroke-dasharray="8 6""##,
        );
    }
    if let Some((center, radius)) = pic.circle {
        let (ec, er) = hyperbolic_circle(center, radius);
        c.circle(ec, er, r##"fill="none" stroke="#2a9d3a" stroke-width="2""##);
        c.dot(center.to_vec2(), "");
    }
    if pic.polygon.len() >= 2 {
        c.path(
            &closed_polygon_path(pic.polygon),
            r##"fill="#5dade2" fill-opacity="0.3" stroke="#1b4f72" stroke-width="3""##,
        );
    }
    if let Some((p, q)) = pic.axis {
        c.path(
            &format!("{} {}", move_to(p), geodesic_segment(p, q)),
            r##"fill="none" stroke="#c0392b" stroke-width="2" stroke-dasharray="4 4""##,
        );
    }
    for (k, v) in pic.polygon.iter().enumerate() {
        c.dot(v.to_vec2(), &k.to_string());
    }
    c.finish()
}
