//! Numerical geometry of the hyperbolic plane in the Poincaré disk model.
//!
//! The crate is organised bottom-up:
//!
//! * [`disk`]: points, distances, geodesics, angles and disk isometries.
//! * [`triangle`]: side-angle-side trigonometry, the inversion construction
//!   with the circle through `BC` and the point `B'`, the identity
//!   `area = 2τ`, and the solver for the maximal-area angle (`α = β + γ`).
//! * [`polygon`]: convex hyperbolic polygons, regular polygons, circles and
//!   the isoperimetric deficit `L² − 4πA − A²`.
//! * [`steiner`]: Steiner's symmetrize-then-hinge iteration that uses the
//!   maximal-area triangle as its local move.
//! * [`oracle`]: brute-force references used by tests and the `verify` command.
//! * [`svg`]: self-contained SVG renderings of the constructions.
//!
//! Curvature is fixed at −1 everywhere.

pub mod disk;
pub mod error;
pub mod oracle;
pub mod polygon;
pub mod steiner;
pub mod svg;
pub mod triangle;

pub use disk::{
    angle_at_vertex, geodesic_through, hyp_distance, point_from_polar, DiskIsometry, DiskPoint,
    EuclideanCircle, Geodesic, Vec2, D_MAX,
};
pub use error::{GeometryError, Result};
pub use polygon::{
    circle_geometry, isoperimetric_deficit, regular_polygon, HyperbolicPolygon, RegularPolygonSpec,
};
pub use steiner::{steiner_move, steiner_optimize, SteinerHalf, SteinerTrace};
pub use triangle::{
    area_defect, build_inversion_figure, optimal_alpha, optimality_certificate, solve_sas,
    InversionFigure, TriangleSolution, ALPHA_EPS,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind every seeded experiment: ChaCha8 keyed by
/// `ChaCha8Rng::seed_from_u64(seed)`.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
