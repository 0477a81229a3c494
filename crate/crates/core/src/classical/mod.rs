//! Classical billiard scattering off a hard body.
//!
//! Rays enter along the incident direction `+z` on an `N × N` grid of cells
//! covering the body's bounding box in the `xy`-plane, reflect specularly
//! until they leave, and are binned by exit direction. `σ_cl` is the hit
//! area; `R_cl = ∫ (1 − e·k⁺) dx` over the hit area.

mod intersect;

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

pub use intersect::{Hit, MeshScatterer, Scatterer, EDGE_EPSILON};

use crate::geometry::AnalyticBody;
use crate::report::fmt17;
use crate::sphere_oracle::sphere_cross_sections;
use crate::{Error, Result, Vec3};

pub const MIN_GRID: usize = 64;
pub const DEFAULT_GRID: usize = 1024;
pub const BOUNCE_CAP: usize = 64;
pub const DEFAULT_BINS: (usize, usize) = (64, 64);
/// Bins with fewer rays are left out of flatness checks.
pub const MIN_BIN_RAYS: u64 = 50;
const MAX_RETRACES: usize = 8;

/// Tracing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    pub grid: usize,
    pub bounce_cap: usize,
    /// Histogram bins in `cos θ` and `φ`.
    pub bins: (usize, usize),
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            grid: DEFAULT_GRID,
            bounce_cap: BOUNCE_CAP,
            bins: DEFAULT_BINS,
        }
    }
}

impl TraceConfig {
    pub fn with_grid(grid: usize) -> Self {
        TraceConfig { grid, ..Self::default() }
    }
}

/// Ray counts and direction sums per exit-direction bin. Bins are uniform
/// in `cos θ ∈ [−1, 1]` and `φ ∈ [0, 2π)`, hence of equal solid angle.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionHistogram {
    pub n_cos: usize,
    pub n_phi: usize,
    pub counts: Vec<u64>,
}

impl DirectionHistogram {
    fn new(n_cos: usize, n_phi: usize) -> Self {
        DirectionHistogram {
            n_cos,
            n_phi,
            counts: vec![0; n_cos * n_phi],
        }
    }

    fn bin(&self, dir: &Vec3) -> usize {
        let c = (((dir.z.clamp(-1.0, 1.0) + 1.0) / 2.0 * self.n_cos as f64) as usize).min(self.n_cos - 1);
        let phi = dir.y.atan2(dir.x).rem_euclid(2.0 * PI);
        let p = ((phi / (2.0 * PI) * self.n_phi as f64) as usize).min(self.n_phi - 1);
        c * self.n_phi + p
    }

    pub fn bin_solid_angle(&self) -> f64 {
        4.0 * PI / (self.n_cos * self.n_phi) as f64
    }

    /// `(cos θ, φ)` at the centre of bin `i`.
    pub fn center(&self, i: usize) -> (f64, f64) {
        let (c, p) = (i / self.n_phi, i % self.n_phi);
        (
            -1.0 + (c as f64 + 0.5) * 2.0 / self.n_cos as f64,
            (p as f64 + 0.5) * 2.0 * PI / self.n_phi as f64,
        )
    }

    fn merge(&mut self, other: &DirectionHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayTraceResult {
    pub sigma_cl: f64,
    /// `∫ (1 − cos Θ) dx` over the hit area.
    pub r_cl: f64,
    /// `∫ cos Θ dx`, the same as `∫ cos θ |f_cl|² dq`.
    pub r_cl_cos: f64,
    pub rays_total: u64,
    pub rays_hit: u64,
    pub max_bounces_seen: usize,
    /// Rays retraced after hitting an edge.
    pub retraced: u64,
    /// Largest `| |k⁺| − 1 |` after any bounce.
    pub energy_drift: f64,
    pub cell_area: f64,
    pub histogram: DirectionHistogram,
}

#[derive(Debug, Default)]
struct RowTotals {
    hits: u64,
    r_cl: f64,
    r_cos: f64,
    max_bounces: usize,
    retraced: u64,
    drift: f64,
}

enum RayOutcome {
    Miss,
    Exit { dir: Vec3, bounces: usize, drift: f64 },
}

fn follow(body: &dyn Scatterer, start: Vec3, cap: usize, t_min: f64) -> Option<Result<RayOutcome>> {
    let (mut origin, mut dir) = (start, Vec3::z());
    let mut bounces = 0;
    let mut drift = 0.0_f64;
    loop {
        match body.intersect(&origin, &dir, if bounces == 0 { 0.0 } else { t_min }) {
            None if bounces == 0 => return Some(Ok(RayOutcome::Miss)),
            None => return Some(Ok(RayOutcome::Exit { dir, bounces, drift })),
            Some(Hit::Edge) => return None,
            Some(Hit::Surface { t, normal }) => {
                if bounces == cap {
                    return Some(Err(Error::NonTermination {
                        x: start.x,
                        y: start.y,
                        cap,
                    }));
                }
                origin += dir * t;
                dir -= normal * (2.0 * dir.dot(&normal));
                drift = drift.max((dir.norm() - 1.0).abs());
                bounces += 1;
            }
        }
    }
}

/// Traces the full grid. Rows run in parallel; their totals are combined in
/// row order, so the result does not depend on the thread count.
pub fn trace(body: &dyn Scatterer, config: &TraceConfig) -> Result<RayTraceResult> {
    let n = config.grid;
    if n < MIN_GRID {
        return Err(Error::invalid("grid", format!("must be at least {MIN_GRID}, got {n}")));
    }
    if config.bins.0 == 0 || config.bins.1 == 0 {
        return Err(Error::invalid("bins", "histogram needs at least one bin per axis"));
    }
    let (lo, hi) = body.bounds();
    let diam = body.diameter();
    let (dx, dy) = ((hi.x - lo.x) / n as f64, (hi.y - lo.y) / n as f64);
    let z0 = lo.z - 0.5 * diam;
    let t_min = 1e-9 * diam;
    let nudge = 1e-9 * diam;

    let rows: Vec<(RowTotals, DirectionHistogram)> = (0..n)
        .into_par_iter()
        .map(|j| -> Result<_> {
            let mut totals = RowTotals::default();
            let mut hist = DirectionHistogram::new(config.bins.0, config.bins.1);
            let y = lo.y + (j as f64 + 0.5) * dy;
            for i in 0..n {
                let x = lo.x + (i as f64 + 0.5) * dx;
                let mut outcome = None;
                for attempt in 0..=MAX_RETRACES {
                    let angle = 2.399_963_229_728_653 * attempt as f64;
                    let shift = Vec3::new(angle.cos(), angle.sin(), 0.0) * (nudge * attempt as f64);
                    if let Some(o) = follow(body, Vec3::new(x, y, z0) + shift, config.bounce_cap, t_min) {
                        totals.retraced += u64::from(attempt > 0);
                        outcome = Some(o?);
                        break;
                    }
                }
                let outcome = outcome.ok_or_else(|| {
                    Error::Domain(format!("ray at ({x}, {y}) keeps meeting triangle edges after perturbation"))
                })?;
                if let RayOutcome::Exit { dir, bounces, drift } = outcome {
                    totals.hits += 1;
                    totals.r_cl += 1.0 - dir.z;
                    totals.r_cos += dir.z;
                    totals.max_bounces = totals.max_bounces.max(bounces);
                    totals.drift = totals.drift.max(drift);
                    let b = hist.bin(&dir);
                    hist.counts[b] += 1;
                }
            }
            Ok((totals, hist))
        })
        .collect::<Result<_>>()?;

    let cell_area = dx * dy;
    let mut histogram = DirectionHistogram::new(config.bins.0, config.bins.1);
    let (mut hits, mut r_cl, mut r_cos, mut max_b, mut retraced, mut drift) = (0u64, 0.0, 0.0, 0usize, 0u64, 0.0_f64);
    for (t, h) in &rows {
        hits += t.hits;
        r_cl += t.r_cl;
        r_cos += t.r_cos;
        max_b = max_b.max(t.max_bounces);
        retraced += t.retraced;
        drift = drift.max(t.drift);
        histogram.merge(h);
    }
    Ok(RayTraceResult {
        sigma_cl: hits as f64 * cell_area,
        r_cl: r_cl * cell_area,
        r_cl_cos: r_cos * cell_area,
        rays_total: (n * n) as u64,
        rays_hit: hits,
        max_bounces_seen: max_b,
        retraced,
        energy_drift: drift,
        cell_area,
        histogram,
    })
}

/// One bin of the `|f_cl|²` estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FclBin {
    pub cos_theta_center: f64,
    pub phi_center: f64,
    pub fcl_sq: f64,
    pub ray_count: u64,
}

/// `|f_cl|²` per bin as (initial area mapped into the bin) / (bin solid angle).
pub fn fcl_histogram(result: &RayTraceResult) -> Vec<FclBin> {
    let h = &result.histogram;
    let omega = h.bin_solid_angle();
    h.counts
        .iter()
        .enumerate()
        .map(|(i, &count)| {
            let (c, p) = h.center(i);
            FclBin {
                cos_theta_center: c,
                phi_center: p,
                fcl_sq: count as f64 * result.cell_area / omega,
                ray_count: count,
            }
        })
        .collect()
}

/// Bin sums `Σ w(cos θ) |f_cl|² ΔΩ`.
pub fn weighted_bin_sum(bins: &[FclBin], solid_angle: f64, weight: impl Fn(f64) -> f64) -> f64 {
    bins.iter().map(|b| weight(b.cos_theta_center) * b.fcl_sq * solid_angle).sum()
}

/// Summary of a bin set: totals and the spread of well-populated bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramSummary {
    /// `Σ |f_cl|² ΔΩ`, equal to `σ_cl`.
    pub total: f64,
    /// `Σ (1 − cos θ) |f_cl|² ΔΩ`, close to `R_cl`.
    pub transport: f64,
    /// `Σ cos θ |f_cl|² ΔΩ`.
    pub cos_weighted: f64,
    pub populated_bins: usize,
    pub min_populated: f64,
    pub max_populated: f64,
}

pub fn summarize(result: &RayTraceResult, bins: &[FclBin]) -> HistogramSummary {
    let omega = result.histogram.bin_solid_angle();
    let populated: Vec<f64> = bins.iter().filter(|b| b.ray_count >= MIN_BIN_RAYS).map(|b| b.fcl_sq).collect();
    HistogramSummary {
        total: weighted_bin_sum(bins, omega, |_| 1.0),
        transport: weighted_bin_sum(bins, omega, |c| 1.0 - c),
        cos_weighted: weighted_bin_sum(bins, omega, |c| c),
        populated_bins: populated.len(),
        min_populated: populated.iter().copied().fold(f64::INFINITY, f64::min),
        max_populated: populated.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

impl RayTraceResult {
    /// CSV: a commented summary line followed by the bin table.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# sigma_cl={} R_cl={} R_cl_cos={} rays_total={} rays_hit={} max_bounces={}",
            fmt17(self.sigma_cl),
            fmt17(self.r_cl),
            fmt17(self.r_cl_cos),
            self.rays_total,
            self.rays_hit,
            self.max_bounces_seen
        );
        out.push_str("cos_theta_center,phi_center,fcl_sq,ray_count\n");
        for b in fcl_histogram(self) {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt17(b.cos_theta_center),
                fmt17(b.phi_center),
                fmt17(b.fcl_sq),
                b.ray_count
            );
        }
        out
    }
}

/// One `ka` of the high-frequency comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem2Row {
    pub ka: f64,
    pub sigma: f64,
    #[serde(rename = "sigma_T")]
    pub sigma_t: f64,
    pub sigma_over_2sigma_cl: f64,
    #[serde(rename = "sigmaT_over_R_cl")]
    pub sigma_t_over_r_cl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub radius: f64,
    pub sigma_cl: f64,
    #[serde(rename = "R_cl")]
    pub r_cl: f64,
    pub rows: Vec<Theorem2Row>,
    /// `σ_T < σ` at every grid point.
    pub forward_dominates: bool,
    /// Mean `|σ/2σ_cl − 1|` over the first and last deciles.
    pub sigma_trend: (f64, f64),
    pub sigma_t_trend: (f64, f64),
    pub sigma_converging: bool,
    pub sigma_t_converging: bool,
}

/// Compares the exact sphere cross sections with the classical values from
/// tracing the analytic sphere of the same radius.
pub fn theorem2_check(radius: f64, ka_grid: &[f64], grid: usize) -> Result<Theorem2Report> {
    if ka_grid.is_empty() {
        return Err(Error::invalid("ka", "grid is empty"));
    }
    if ka_grid.iter().any(|&ka| !(10.0..=300.0).contains(&ka)) {
        return Err(Error::invalid("ka", "values must lie in [10, 300]"));
    }
    if ka_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("ka", "values must be strictly ascending"));
    }
    let sphere = AnalyticBody::Sphere { radius };
    sphere.validate()?;
    let classical = trace(&sphere, &TraceConfig::with_grid(grid))?;
    let rows = ka_grid
        .par_iter()
        .map(|&ka| {
            let cs = sphere_cross_sections(radius, ka / radius)?;
            Ok(Theorem2Row {
                ka,
                sigma: cs.sigma,
                sigma_t: cs.sigma_t,
                sigma_over_2sigma_cl: cs.sigma / (2.0 * classical.sigma_cl),
                sigma_t_over_r_cl: cs.sigma_t / classical.r_cl,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let decile = (rows.len() / 10).max(1);
    let mean_dev = |sel: &[Theorem2Row], f: fn(&Theorem2Row) -> f64| {
        sel.iter().map(|r| (f(r) - 1.0).abs()).sum::<f64>() / sel.len() as f64
    };
    let (head, tail) = (&rows[..decile], &rows[rows.len() - decile..]);
    let sigma_trend = (mean_dev(head, |r| r.sigma_over_2sigma_cl), mean_dev(tail, |r| r.sigma_over_2sigma_cl));
    let sigma_t_trend = (mean_dev(head, |r| r.sigma_t_over_r_cl), mean_dev(tail, |r| r.sigma_t_over_r_cl));
    Ok(Theorem2Report {
        radius,
        sigma_cl: classical.sigma_cl,
        r_cl: classical.r_cl,
        forward_dominates: rows.iter().all(|r| r.sigma_t < r.sigma),
        sigma_converging: sigma_trend.1 < sigma_trend.0,
        sigma_t_converging: sigma_t_trend.1 < sigma_t_trend.0,
        sigma_trend,
        sigma_t_trend,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{box_mesh, make_body, shadow_area};

    #[test]
    fn sphere_cross_section_and_resistance() {
        let r = trace(&AnalyticBody::Sphere { radius: 1.0 }, &TraceConfig::default()).unwrap();
        assert!((r.sigma_cl / PI - 1.0).abs() < 0.005, "{}", r.sigma_cl);
        assert!((r.r_cl / PI - 1.0).abs() < 0.005, "{}", r.r_cl);
        assert_eq!(r.max_bounces_seen, 1);
        assert!(r.energy_drift < 1e-12);
        // ∫ cos Θ dx vanishes for the sphere.
        assert!(r.r_cl_cos.abs() < 0.005 * PI);
        let bins = fcl_histogram(&r);
        let s = summarize(&r, &bins);
        assert!((s.total - r.sigma_cl).abs() < 1e-9 * r.sigma_cl);
        assert!((s.transport / r.r_cl - 1.0).abs() < 0.02);
    }

    #[test]
    fn flat_cap_cylinder_doubles() {
        let r = trace(&AnalyticBody::Cylinder { radius: 1.0, height: 1.5 }, &TraceConfig::default()).unwrap();
        assert!((r.r_cl / (2.0 * r.sigma_cl) - 1.0).abs() < 1e-12);
        assert!((r.sigma_cl / PI - 1.0).abs() < 0.005);
    }

    #[test]
    fn mesh_cylinder_doubles_too() {
        let mesh = make_body(&AnalyticBody::Cylinder { radius: 1.0, height: 1.0 }, 3).unwrap();
        let r = trace(&MeshScatterer::new(&mesh), &TraceConfig::with_grid(256)).unwrap();
        assert!((r.r_cl / (2.0 * r.sigma_cl) - 1.0).abs() < 0.005);
        assert_eq!(r.max_bounces_seen, 1);
    }

    #[test]
    fn mesh_shadow_consistency() {
        for mesh in [
            make_body(&AnalyticBody::Sphere { radius: 1.0 }, 4).unwrap(),
            make_body(&AnalyticBody::Ellipsoid { a: 2.0, b: 1.0, c: 1.0 }, 4).unwrap(),
            box_mesh(Vec3::repeat(-0.5), Vec3::repeat(0.5), 2).unwrap(),
        ] {
            let r = trace(&MeshScatterer::new(&mesh), &TraceConfig::with_grid(256)).unwrap();
            let shadow = shadow_area(&mesh, 1024);
            assert!((r.sigma_cl / shadow - 1.0).abs() < 0.01, "{} vs {shadow}", r.sigma_cl);
            assert!(r.r_cl >= 0.0 && r.r_cl <= 2.0 * r.sigma_cl * (1.0 + 1e-12));
        }
    }

    #[test]
    fn small_grid_is_rejected() {
        let err = trace(&AnalyticBody::Sphere { radius: 1.0 }, &TraceConfig::with_grid(32)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn theorem2_grid_is_validated() {
        assert!(theorem2_check(1.0, &[5.0, 20.0], 64).is_err());
        assert!(theorem2_check(1.0, &[20.0, 10.0], 64).is_err());
    }
}
