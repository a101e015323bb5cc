//! The checks behind `hyplobe verify`. Each property draws from its own
//! generator, `seeded_rng(seed + k)` for the property's position `k`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use clap::ValueEnum;
use hyplobe::disk::{angle_at_vertex, hyp_distance};
use hyplobe::oracle::{
    euclidean_limit_triangle, geodesic_length_by_sampling, grid_search_max_area,
};
use hyplobe::triangle::embed_triangle;
use hyplobe::{
    area_defect, build_inversion_figure, isoperimetric_deficit, optimal_alpha,
    optimality_certificate, seeded_rng, solve_sas, DiskIsometry, DiskPoint, Result,
};
use rand::Rng;

use crate::commands::{euclidean_regular_area, isoperimetric_sweep, steiner};
use crate::Failure;

/// Deliberate bugs for checking that `verify` notices them.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Use `−τ` in place of `τ`.
    TauSign,
}

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct Report {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn text(&self) -> String {
        let mut s = format!(
            "verify: samples={} seed={} generator=ChaCha8Rng::seed_from_u64\n",
            self.samples, self.seed
        );
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{tag} {}: {}", c.name, c.detail);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(s, "{} passed, {failed} failed", self.checks.len() - failed);
        s
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.name)
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn random_disk_point<R: Rng>(rng: &mut R, max_norm: f64) -> DiskPoint {
    let r = max_norm * rng.random::<f64>().sqrt();
    let t = rng.random_range(0.0..2.0 * PI);
    DiskPoint::new(r * t.cos(), r * t.sin()).expect("inside the disk")
}

fn random_sas<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    (
        rng.random_range(0.1..=3.0),
        rng.random_range(0.1..=3.0),
        rng.random_range(0.05..=PI - 0.05),
    )
}

pub fn run(
    samples: usize,
    seed: u64,
    fault: Option<Fault>,
) -> std::result::Result<Report, Failure> {
    if samples < 10 {
        return Err(Failure::Input(format!(
            "--samples must be at least 10, got {samples}"
        )));
    }
    let rng = |k: u64| seeded_rng(seed.wrapping_add(k));
    let pairs = (samples / 5).clamp(10, 200);
    let checks = vec![
        area_equivalence(samples, &mut rng(0), fault)?,
        maximal_area_angle(pairs, &mut rng(1))?,
        certificates(pairs, &mut rng(2))?,
        euclidean_limit()?,
        inversion_identity(samples, &mut rng(4))?,
        steiner_run()?,
        isoperimetric()?,
        isometry_invariance(samples / 2, &mut rng(7))?,
        metric_oracle((samples / 10).max(1), &mut rng(8))?,
        determinism()?,
    ];
    Ok(Report {
        samples,
        seed,
        checks,
    })
}

fn area_equivalence<R: Rng>(count: usize, rng: &mut R, fault: Option<Fault>) -> Result<Check> {
    let sign = if fault == Some(Fault::TauSign) {
        -1.0
    } else {
        1.0
    };
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (b, c, alpha) = random_sas(rng);
        let s = solve_sas(b, c, alpha)?;
        let fig = build_inversion_figure(b, c, alpha)?;
        let defect = area_defect(s.alpha, s.beta, s.gamma)?;
        worst = worst.max((defect - 2.0 * sign * fig.tau).abs());
    }
    Ok(check(
        "area-equivalence",
        worst < 1e-9,
        format!("{count} triangles, max |defect - 2 tau| = {worst:e} (limit 1e-9)"),
    ))
}

fn maximal_area_angle<R: Rng>(pairs: usize, rng: &mut R) -> Result<Check> {
    const GRID: usize = 100_000;
    let (mut grid_ratio, mut angle_res, mut area_res) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..pairs {
        let (b, c, _) = random_sas(rng);
        let opt = optimal_alpha(b, c)?;
        let grid = grid_search_max_area(b, c, GRID)?;
        let s = opt.solution;
        grid_ratio = grid_ratio.max((opt.alpha_star - grid.alpha_hat).abs() / grid.grid_step);
        angle_res = angle_res.max((opt.alpha_star - s.beta - s.gamma).abs());
        area_res = area_res.max((s.area - (PI - 2.0 * opt.alpha_star)).abs());
    }
    Ok(check(
        "maximal-area-angle",
        grid_ratio <= 2.0 && angle_res < 1e-12 && area_res < 1e-12,
        format!(
            "{pairs} pairs, grid {GRID}: max |alpha* - grid argmax| = {grid_ratio:.3} steps (limit 2), \
             max |alpha - beta - gamma| = {angle_res:e}, max |area - (pi - 2 alpha)| = {area_res:e} (limits 1e-12)"
        ),
    ))
}

fn certificates<R: Rng>(pairs: usize, rng: &mut R) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut weakest_control = f64::INFINITY;
    for _ in 0..pairs {
        let (b, c, _) = random_sas(rng);
        let opt = optimal_alpha(b, c)?;
        let cert = optimality_certificate(&build_inversion_figure(b, c, opt.alpha_star)?);
        worst = worst
            .max(cert.right_angle_residual())
            .max(cert.tangency_gap)
            .max(cert.residual);
        let off = optimality_certificate(&build_inversion_figure(b, c, 0.5 * opt.alpha_star)?);
        weakest_control = weakest_control.min(off.right_angle_residual());
    }
    Ok(check(
        "certificates",
        worst < 1e-9 && weakest_control > 1e-3,
        format!(
            "{pairs} pairs, max residual at optimum = {worst:e} (limit 1e-9), \
             min right-angle residual at alpha*/2 = {weakest_control:e} (must exceed 1e-3)"
        ),
    ))
}

fn euclidean_limit() -> Result<Check> {
    let opt = optimal_alpha(1e-3, 1e-3)?;
    let angle_err = (opt.alpha_star - FRAC_PI_2).abs();
    let mut rel = 0.0f64;
    for k in 1..=20 {
        let alpha = k as f64 * PI / 21.0;
        let h = solve_sas(1e-3, 1e-3, alpha)?;
        let e = euclidean_limit_triangle(1e-3, 1e-3, alpha)?;
        rel = rel.max((h.a / e.a - 1.0).abs());
    }
    Ok(check(
        "euclidean-limit",
        angle_err <= 1e-3 && rel < 1e-6,
        format!(
            "|alpha*(1e-3, 1e-3) - pi/2| = {angle_err:e} (limit 1e-3), \
             max relative side gap to law of cosines = {rel:e} (limit 1e-6)"
        ),
    ))
}

fn inversion_identity<R: Rng>(count: usize, rng: &mut R) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (b, c, alpha) = random_sas(rng);
        let fig = build_inversion_figure(b, c, alpha)?;
        worst = worst.max((fig.b.norm() * fig.b_prime.norm() - 1.0).abs());
    }
    Ok(check(
        "inversion-identity",
        worst < 1e-10,
        format!("{count} figures, max ||B|·|B'| - 1| = {worst:e} (limit 1e-10)"),
    ))
}

fn steiner_run() -> Result<Check> {
    let run = match steiner(8, 42, 1e-8, 10_000) {
        Ok(run) => run,
        Err(Failure::Input(m) | Failure::Io(m) | Failure::Verify(m) | Failure::NotConverged(m)) => {
            return Ok(check("steiner", false, m))
        }
    };
    let o = &run.outcome;
    let l = run.initial.perimeter();
    let drift = o.trace.perimeter_drift(l);
    let monotone = o.trace.area_non_decreasing(1e-12);
    let before = isoperimetric_deficit(l, o.initial_area);
    let after = isoperimetric_deficit(o.half.perimeter(), o.half.area());
    Ok(check(
        "steiner",
        o.converged && drift < 1e-9 && monotone && run.fit.spread < 1e-6 && after < before && after >= -1e-9,
        format!(
            "octagon seed 42: converged={} after {} sweeps, perimeter drift {drift:e}, area monotone={monotone}, \
             spread {:e}, deficit {before:.6} -> {after:.6}",
            o.converged, o.sweeps, run.fit.spread
        ),
    ))
}

fn isoperimetric() -> Result<Check> {
    let sweep = match isoperimetric_sweep(3, 96, 2.0 * PI) {
        Ok(s) => s,
        Err(_) => return Ok(check("isoperimetric", false, "sweep failed".into())),
    };
    let decreasing = sweep.rows.windows(2).all(|w| w[1].deficit < w[0].deficit);
    let circle = sweep.circle.deficit.abs();
    let last = sweep.rows.last().expect("96 rows");
    let ratio = (last.area / sweep.circle.area - 1.0).abs();
    let small = match isoperimetric_sweep(3, 12, 0.01) {
        Ok(s) => s,
        Err(_) => {
            return Ok(check(
                "isoperimetric",
                false,
                "sweep at L = 0.01 failed".into(),
            ))
        }
    };
    let euclid = small
        .rows
        .iter()
        .map(|r| (r.area / euclidean_regular_area(r.n, 0.01) - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(check(
        "isoperimetric",
        decreasing && circle < 1e-9 && ratio < 2e-3 && euclid < 1e-5,
        format!(
            "n = 3..96 at L = 2pi: deficit decreasing={decreasing}, circle deficit {circle:e}, \
             n=96 area off by {ratio:e} (limit 2e-3); L = 0.01 Euclidean gap {euclid:e} (limit 1e-5)"
        ),
    ))
}

fn isometry_invariance<R: Rng>(count: usize, rng: &mut R) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (b, c, alpha) = random_sas(rng);
        let (pa, pb, pc) = embed_triangle(b, c, alpha)?;
        let m = DiskIsometry::new(random_disk_point(rng, 0.9), rng.random_range(-PI..PI));
        let measure = |p: DiskPoint, q: DiskPoint, r: DiskPoint| -> Result<[f64; 7]> {
            let (x, y, z) = (
                angle_at_vertex(p, q, r)?,
                angle_at_vertex(q, r, p)?,
                angle_at_vertex(r, p, q)?,
            );
            Ok([
                hyp_distance(p, q),
                hyp_distance(q, r),
                hyp_distance(r, p),
                x,
                y,
                z,
                area_defect(x, y, z)?,
            ])
        };
        let before = measure(pa, pb, pc)?;
        let after = measure(m.apply(pa), m.apply(pb), m.apply(pc))?;
        for (u, v) in before.iter().zip(&after) {
            worst = worst.max((u - v).abs());
        }
    }
    Ok(check(
        "isometry-invariance",
        worst < 1e-10,
        format!("{count} triangle/isometry pairs, max change = {worst:e} (limit 1e-10)"),
    ))
}

fn metric_oracle<R: Rng>(count: usize, rng: &mut R) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..count {
        let p = random_disk_point(rng, 0.9);
        let q = random_disk_point(rng, 0.9);
        let sampled = geodesic_length_by_sampling(p, q, 10_000)?;
        worst = worst.max((sampled - hyp_distance(p, q)).abs());
    }
    Ok(check(
        "metric-oracle",
        worst < 1e-6,
        format!("{count} pairs, 10000 segments, max gap = {worst:e} (limit 1e-6)"),
    ))
}

fn determinism() -> Result<Check> {
    let csv = || steiner(8, 42, 1e-8, 10_000).map(|r| r.trace_csv());
    let same = match (csv(), csv()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    Ok(check(
        "determinism",
        same,
        format!("two steiner --seed 42 traces byte-identical={same}"),
    ))
}
