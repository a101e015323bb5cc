use std::f64::consts::PI;
use std::fmt::Write as _;

use hyplobe::oracle::grid_search_max_area;
use hyplobe::polygon::{
    circle_with_circumference, fit_circumcircle, random_convex_polygon,
    regular_polygon_with_perimeter, CircumcircleFit,
};
use hyplobe::steiner::{SteinerOutcome, SymmetrizeChoice};
use hyplobe::svg::{inversion_figure_svg, polygon_svg, PolygonPicture};
use hyplobe::triangle::OptimalityCertificate;
use hyplobe::{
    area_defect, build_inversion_figure, isoperimetric_deficit, optimal_alpha,
    optimality_certificate, seeded_rng, solve_sas, steiner_optimize, DiskPoint, HyperbolicPolygon,
    InversionFigure,
};
use serde::Serialize;

use crate::{Failure, Format};

/// Pretty JSON with a trailing newline. Non-finite numbers would turn into
/// `null`, so any `null` is reported instead of written.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let v = serde_json::to_value(value).map_err(|e| Failure::Io(e.to_string()))?;
    if has_null(&v) {
        return Err(Failure::Input(
            "computation produced a non-finite number".into(),
        ));
    }
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Failure::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn has_null(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Null => true,
        serde_json::Value::Array(a) => a.iter().any(has_null),
        serde_json::Value::Object(o) => o.values().any(has_null),
        _ => false,
    }
}

fn unsupported(command: &str, format: Format) -> Failure {
    Failure::Input(format!("{command} does not support --format {format:?}").to_lowercase())
}

#[derive(Serialize)]
struct TriangleReport {
    command: &'static str,
    b: f64,
    c: f64,
    alpha: f64,
    a: f64,
    beta: f64,
    gamma: f64,
    area_defect: f64,
    two_tau: f64,
    area_equivalence_gap: f64,
    optimality_gap: f64,
    figure: InversionFigure,
}

pub fn triangle(b: f64, c: f64, alpha: f64, format: Format) -> Result<String, Failure> {
    let s = solve_sas(b, c, alpha)?;
    let fig = build_inversion_figure(b, c, alpha)?;
    match format {
        Format::Svg => Ok(inversion_figure_svg(&fig)),
        Format::Json => {
            let defect = area_defect(s.alpha, s.beta, s.gamma)?;
            to_json(&TriangleReport {
                command: "triangle",
                b,
                c,
                alpha,
                a: s.a,
                beta: s.beta,
                gamma: s.gamma,
                area_defect: defect,
                two_tau: 2.0 * fig.tau,
                area_equivalence_gap: (defect - 2.0 * fig.tau).abs(),
                optimality_gap: s.optimality_gap(),
                figure: fig,
            })
        }
        Format::Csv => Err(unsupported("triangle", format)),
    }
}

#[derive(Serialize)]
struct Certificates {
    right_angle_residual: f64,
    tangency_gap: f64,
    alpha_tau_residual: f64,
    angle_sum_residual: f64,
}

#[derive(Serialize)]
struct GridCheck {
    samples: usize,
    grid_step: f64,
    alpha_hat: f64,
    area_hat: f64,
    alpha_gap: f64,
    area_gap: f64,
}

#[derive(Serialize)]
struct OptimizeReport {
    command: &'static str,
    b: f64,
    c: f64,
    alpha_star: f64,
    beta: f64,
    gamma: f64,
    area: f64,
    certificates: Certificates,
    grid_check: GridCheck,
}

pub fn optimize(b: f64, c: f64, samples: usize, format: Format) -> Result<String, Failure> {
    let opt = optimal_alpha(b, c)?;
    let fig = build_inversion_figure(b, c, opt.alpha_star)?;
    match format {
        Format::Svg => Ok(inversion_figure_svg(&fig)),
        Format::Json => {
            let cert: OptimalityCertificate = optimality_certificate(&fig);
            let grid = grid_search_max_area(b, c, samples)?;
            let s = opt.solution;
            to_json(&OptimizeReport {
                command: "optimize",
                b,
                c,
                alpha_star: opt.alpha_star,
                beta: s.beta,
                gamma: s.gamma,
                area: s.area,
                certificates: Certificates {
                    right_angle_residual: cert.right_angle_residual(),
                    tangency_gap: cert.tangency_gap,
                    alpha_tau_residual: cert.residual,
                    angle_sum_residual: s.optimality_gap().abs(),
                },
                grid_check: GridCheck {
                    samples,
                    grid_step: grid.grid_step,
                    alpha_hat: grid.alpha_hat,
                    area_hat: grid.area_hat,
                    alpha_gap: (grid.alpha_hat - opt.alpha_star).abs(),
                    area_gap: s.area - grid.area_hat,
                },
            })
        }
        Format::Csv => Err(unsupported("optimize", format)),
    }
}

/// A finished Steiner experiment.
pub struct SteinerRun {
    pub n: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_sweeps: usize,
    pub initial: HyperbolicPolygon,
    pub outcome: SteinerOutcome,
    pub final_vertices: Vec<DiskPoint>,
    pub fit: CircumcircleFit,
}

pub fn steiner(n: usize, seed: u64, tol: f64, max_sweeps: usize) -> Result<SteinerRun, Failure> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Input(format!("--tol must be positive, got {tol}")));
    }
    let initial = random_convex_polygon(n, &mut seeded_rng(seed))?;
    let outcome = steiner_optimize(&initial, tol, max_sweeps)?;
    let final_vertices = outcome.half.full_vertices()?;
    let fit = fit_circumcircle(&final_vertices)?;
    Ok(SteinerRun {
        n,
        seed,
        tol,
        max_sweeps,
        initial,
        outcome,
        final_vertices,
        fit,
    })
}

#[derive(Serialize)]
struct SteinerSummary<'a> {
    command: &'static str,
    n: usize,
    seed: u64,
    generator: &'static str,
    tol: f64,
    max_sweeps: usize,
    converged: bool,
    sweeps: usize,
    accepted_moves: usize,
    rejected_moves: usize,
    max_residual: f64,
    symmetrization: SymmetrizeChoice,
    perimeter: f64,
    perimeter_drift: f64,
    initial_area: f64,
    final_area: f64,
    circle_area: f64,
    deficit_before: f64,
    deficit_after: f64,
    concyclicity_spread: f64,
    circumradius: f64,
    circumcenter: DiskPoint,
    initial_vertices: &'a [DiskPoint],
    final_vertices: &'a [DiskPoint],
}

impl SteinerRun {
    /// Columns `iter,vertex,area,perimeter,residual`; the symmetrization row
    /// has an empty vertex. Numbers use the shortest round-trip form.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("iter,vertex,area,perimeter,residual\n");
        for r in &self.outcome.trace.records {
            let vertex = r.vertex.map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{:?},{:?},{:?}",
                r.iteration, vertex, r.area_after, r.perimeter, r.residual
            );
        }
        s
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        let o = &self.outcome;
        match format {
            Format::Csv => Ok(self.trace_csv()),
            Format::Svg => Ok(polygon_svg(&PolygonPicture {
                polygon: &self.final_vertices,
                ghost: Some(self.initial.vertices()),
                circle: Some((self.fit.center, self.fit.radius)),
                axis: Some((o.half.a(), o.half.b())),
            })),
            Format::Json => {
                let perimeter = self.initial.perimeter();
                let circle = circle_with_circumference(perimeter)?;
                to_json(&SteinerSummary {
                    command: "steiner",
                    n: self.n,
                    seed: self.seed,
                    generator: "ChaCha8Rng::seed_from_u64",
                    tol: self.tol,
                    max_sweeps: self.max_sweeps,
                    converged: o.converged,
                    sweeps: o.sweeps,
                    accepted_moves: o.accepted_moves,
                    rejected_moves: o.rejected_moves,
                    max_residual: o.max_residual,
                    symmetrization: o.choice,
                    perimeter,
                    perimeter_drift: o.trace.perimeter_drift(perimeter),
                    initial_area: o.initial_area,
                    final_area: o.half.area(),
                    circle_area: circle.area,
                    deficit_before: isoperimetric_deficit(perimeter, o.initial_area),
                    deficit_after: isoperimetric_deficit(o.half.perimeter(), o.half.area()),
                    concyclicity_spread: self.fit.spread,
                    circumradius: self.fit.radius,
                    circumcenter: self.fit.center,
                    initial_vertices: self.initial.vertices(),
                    final_vertices: &self.final_vertices,
                })
            }
        }
    }
}

#[derive(Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub circumradius: f64,
    pub area: f64,
    pub deficit: f64,
}

#[derive(Serialize)]
pub struct CircleRow {
    pub radius: f64,
    pub area: f64,
    pub deficit: f64,
}

#[derive(Serialize)]
pub struct Sweep {
    pub command: &'static str,
    pub perimeter: f64,
    pub rows: Vec<SweepRow>,
    pub circle: CircleRow,
}

pub fn isoperimetric_sweep(n_min: usize, n_max: usize, perimeter: f64) -> Result<Sweep, Failure> {
    if n_min < 3 || n_min > n_max {
        return Err(Failure::Input(format!(
            "need 3 ≤ n-min ≤ n-max, got {n_min} and {n_max}"
        )));
    }
    let rows = (n_min..=n_max)
        .map(|n| {
            let (spec, reg) = regular_polygon_with_perimeter(n, perimeter)?;
            Ok(SweepRow {
                n,
                circumradius: spec.circumradius(),
                area: reg.area,
                deficit: isoperimetric_deficit(reg.perimeter, reg.area),
            })
        })
        .collect::<Result<Vec<_>, hyplobe::GeometryError>>()?;
    let circle = circle_with_circumference(perimeter)?;
    Ok(Sweep {
        command: "isoperimetric",
        perimeter,
        rows,
        circle: CircleRow {
            radius: circle.radius,
            area: circle.area,
            deficit: isoperimetric_deficit(circle.circumference, circle.area),
        },
    })
}

pub fn isoperimetric(
    n_min: usize,
    n_max: usize,
    perimeter: f64,
    format: Format,
) -> Result<String, Failure> {
    let sweep = isoperimetric_sweep(n_min, n_max, perimeter)?;
    match format {
        Format::Json => to_json(&sweep),
        Format::Csv => {
            let mut s = String::from("n,area,deficit\n");
            for r in &sweep.rows {
                let _ = writeln!(s, "{},{:?},{:?}", r.n, r.area, r.deficit);
            }
            let _ = writeln!(
                s,
                "circle,{:?},{:?}",
                sweep.circle.area, sweep.circle.deficit
            );
            Ok(s)
        }
        Format::Svg => Err(unsupported("isoperimetric", format)),
    }
}

/// Euclidean regular `n`-gon area for perimeter `l`.
pub fn euclidean_regular_area(n: usize, l: f64) -> f64 {
    let n = n as f64;
    l * l / (4.0 * n * (PI / n).tan())
}
