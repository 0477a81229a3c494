//! Exact partial-wave solution for scattering by a hard (Dirichlet) sphere.
//!
//! Serves as ground truth at every wavenumber: phase shifts
//! `tan δ_l = j_l(ka)/y_l(ka)`, the amplitude, the total and transport
//! cross sections, and their low- and high-`ka` limits.

mod bessel;

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

pub use bessel::{spherical_bessel, spherical_bessel_all};

use crate::quadrature::gauss_legendre;
use crate::report::fmt17;
use crate::{Error, Result};

/// Largest magnitude accepted for the last stored phase shift.
pub const TRUNCATION_TOLERANCE: f64 = 1e-14;

/// Number of Gauss–Legendre nodes in `cos θ` for the quadrature cross-check.
pub const CHECK_QUADRATURE_NODES: usize = 2048;

/// Size-parameter heuristic `⌈ka + 4(ka)^{1/3} + 8⌉`.
pub fn heuristic_order(ka: f64) -> usize {
    (ka + 4.0 * ka.cbrt() + 8.0).ceil() as usize
}

/// Dirichlet phase shifts `δ_0..=δ_L` at size parameter `ka`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftTable {
    pub radius: f64,
    pub k: f64,
    pub delta: Vec<f64>,
}

impl PhaseShiftTable {
    pub fn ka(&self) -> f64 {
        self.k * self.radius
    }

    /// Truncation order `L`.
    pub fn order(&self) -> usize {
        self.delta.len() - 1
    }

    /// `e^{iδ_l} sin δ_l`.
    fn partial_amplitudes(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.delta.iter().map(|&d| Complex64::from_polar(d.sin(), d))
    }
}

/// Phase shifts for radius `a` and wavenumber `k`.
///
/// Without an explicit order the heuristic order is used and then raised
/// until `|δ_L| < 1e-14`. `δ_l = atan(j_l/y_l)` lies on the branch through
/// zero, so `δ_l → 0` as `l → ∞`.
pub fn phase_shifts(radius: f64, k: f64, order: Option<usize>) -> Result<PhaseShiftTable> {
    if !(radius > 0.0) || !(k > 0.0) {
        return Err(Error::Domain(format!("need a > 0 and k > 0, got a = {radius}, k = {k}")));
    }
    let x = k * radius;
    let mut lmax = order.unwrap_or_else(|| heuristic_order(x));
    loop {
        let (j, y) = spherical_bessel_all(lmax, x)?;
        let delta: Vec<f64> = j.iter().zip(&y).map(|(j, y)| (j / y).atan()).collect();
        let last = delta[lmax].abs();
        if order.is_some() || last < TRUNCATION_TOLERANCE {
            return Ok(PhaseShiftTable { radius, k, delta });
        }
        lmax += 4;
    }
}

/// Legendre polynomials `P_0..=P_lmax` at `x`.
fn legendre_all(lmax: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; lmax + 1];
    p[0] = 1.0;
    if lmax >= 1 {
        p[1] = x;
    }
    for l in 1..lmax {
        p[l + 1] = ((2 * l + 1) as f64 * x * p[l] - l as f64 * p[l - 1]) / (l + 1) as f64;
    }
    p
}

fn amplitude_at_cos(table: &PhaseShiftTable, cos_theta: f64) -> Complex64 {
    let p = legendre_all(table.order(), cos_theta);
    table
        .partial_amplitudes()
        .zip(&p)
        .enumerate()
        .map(|(l, (a, p))| a * ((2 * l + 1) as f64 * p))
        .sum::<Complex64>()
        / table.k
}

/// Scattering amplitude `f(θ) = (1/k) Σ (2l+1) e^{iδ_l} sin δ_l P_l(cos θ)`.
pub fn amplitude(table: &PhaseShiftTable, theta: f64) -> Complex64 {
    amplitude_at_cos(table, theta.cos())
}

/// Cross sections from the partial-wave series, with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSections {
    pub k: f64,
    pub radius: f64,
    pub sigma: f64,
    pub sigma_t: f64,
    /// `σ − σ_T = ∫ cos θ |f|² dq`, summed directly without cancellation.
    pub forward_excess: f64,
    /// `|(4π/k) Im f(0) − σ| / σ`.
    pub optical_residual: f64,
    /// Largest relative gap between series and angular quadrature for σ, σ_T.
    pub quadrature_mismatch: f64,
}

impl CrossSections {
    pub fn ka(&self) -> f64 {
        self.k * self.radius
    }

    pub fn geometric(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

/// Series values of `σ` and `σ_T`, cross-checked by angular quadrature and
/// the optical theorem.
pub fn cross_sections(table: &PhaseShiftTable) -> CrossSections {
    let k2 = table.k * table.k;
    let d = &table.delta;
    let sigma = 4.0 * PI / k2
        * d.iter()
            .enumerate()
            .map(|(l, d)| (2 * l + 1) as f64 * d.sin().powi(2))
            .sum::<f64>();
    let sigma_t = 4.0 * PI / k2
        * d.windows(2)
            .enumerate()
            .map(|(l, w)| (l + 1) as f64 * (w[1] - w[0]).sin().powi(2))
            .sum::<f64>();
    let forward_excess = 8.0 * PI / k2
        * d.windows(2)
            .enumerate()
            .map(|(l, w)| (l + 1) as f64 * w[0].sin() * w[1].sin() * (w[0] - w[1]).cos())
            .sum::<f64>();

    let forward = amplitude_at_cos(table, 1.0);
    let optical_residual = ((4.0 * PI / table.k) * forward.im - sigma).abs() / sigma;

    let (x, w) = gauss_legendre(CHECK_QUADRATURE_NODES);
    let (mut sigma_q, mut sigma_t_q) = (0.0, 0.0);
    for (x, w) in x.iter().zip(&w) {
        let f2 = amplitude_at_cos(table, *x).norm_sqr();
        sigma_q += w * f2;
        sigma_t_q += w * (1.0 - x) * f2;
    }
    sigma_q *= 2.0 * PI;
    sigma_t_q *= 2.0 * PI;
    let quadrature_mismatch = ((sigma_q - sigma) / sigma).abs().max(((sigma_t_q - sigma_t) / sigma_t).abs());

    CrossSections {
        k: table.k,
        radius: table.radius,
        sigma,
        sigma_t,
        forward_excess,
        optical_residual,
        quadrature_mismatch,
    }
}

/// Cross sections at a single wavenumber with default truncation.
pub fn sphere_cross_sections(radius: f64, k: f64) -> Result<CrossSections> {
    Ok(cross_sections(&phase_shifts(radius, k, None)?))
}

/// Zero-frequency limits extracted from the exact solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowKLimit {
    /// `lim √(σ/4π)`.
    pub capacity: f64,
    /// `lim (σ − σ_T)/k²`.
    pub d2: f64,
    /// Worst residual of the two-parameter fit `d₀ + d₁k²` to `(σ−σ_T)/k²`,
    /// relative to the extrapolated value.
    pub d2_even_fit_residual: f64,
}

/// Size parameters used by [`low_k_extrapolate`].
pub const EXTRAPOLATION_KA: [f64; 3] = [0.02, 0.01, 0.005];

/// Extrapolates `√(σ/4π)` and `(σ−σ_T)/k²` to `k = 0` by quadratic
/// interpolation in `k²` through three small-`ka` samples.
pub fn low_k_extrapolate(radius: f64) -> Result<LowKLimit> {
    let mut s = [0.0; 3];
    let mut cap = [0.0; 3];
    let mut d2 = [0.0; 3];
    for (i, &ka) in EXTRAPOLATION_KA.iter().enumerate() {
        let k = ka / radius;
        let cs = sphere_cross_sections(radius, k)?;
        s[i] = k * k;
        cap[i] = (cs.sigma / (4.0 * PI)).sqrt();
        d2[i] = cs.forward_excess / (k * k);
    }
    let at_zero = |v: &[f64; 3]| -> f64 {
        (0..3)
            .map(|i| {
                let weight: f64 = (0..3).filter(|&m| m != i).map(|m| s[m] / (s[m] - s[i])).product();
                v[i] * weight
            })
            .sum()
    };
    let d2_zero = at_zero(&d2);

    let mean_s = s.iter().sum::<f64>() / 3.0;
    let mean_d = d2.iter().sum::<f64>() / 3.0;
    let slope = s.iter().zip(&d2).map(|(s, d)| (s - mean_s) * (d - mean_d)).sum::<f64>()
        / s.iter().map(|s| (s - mean_s).powi(2)).sum::<f64>();
    let intercept = mean_d - slope * mean_s;
    let residual = s
        .iter()
        .zip(&d2)
        .map(|(s, d)| (d - intercept - slope * s).abs())
        .fold(0.0, f64::max)
        / d2_zero.abs();

    Ok(LowKLimit {
        capacity: at_zero(&cap),
        d2: d2_zero,
        d2_even_fit_residual: residual,
    })
}

/// The radius whose geometric cross section is one: `π^{-1/2}`.
pub fn unit_shadow_radius() -> f64 {
    PI.powf(-0.5)
}

/// One row of a sweep: exact cross sections next to the classical values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub cross: CrossSections,
    pub sigma_cl: f64,
    pub r_cl: f64,
}

impl SweepRow {
    pub fn two_sigma_cl(&self) -> f64 {
        2.0 * self.sigma_cl
    }
}

/// Exact cross sections over a positive ascending `k` grid. The classical
/// reference for the sphere is `σ_cl = R_cl = πa²`.
pub fn sweep(radius: f64, ks: &[f64]) -> Result<Vec<SweepRow>> {
    if ks.is_empty() || ks.iter().any(|&k| !(k > 0.0)) || ks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("k-grid", "must be non-empty, positive and strictly ascending"));
    }
    let geometric = PI * radius * radius;
    ks.par_iter()
        .map(|&k| {
            Ok(SweepRow {
                cross: sphere_cross_sections(radius, k)?,
                sigma_cl: geometric,
                r_cl: geometric,
            })
        })
        .collect()
}

/// The sweep behind the classic figure: radius `π^{-1/2}`, so that
/// `σ_cl = R_cl = 1` and `σ → 4` as `k → 0`.
pub fn fig1_sweep(ks: &[f64]) -> Result<Vec<SweepRow>> {
    sweep(unit_shadow_radius(), ks)
}

/// CSV columns `ka,sigma,sigma_T,sigma_over_geom,sigmaT_over_geom,optical_residual`,
/// optionally followed by `sigma_cl,R_cl,two_sigma_cl`.
pub fn sweep_csv(rows: &[SweepRow], with_classical: bool) -> String {
    let mut out = String::from("ka,sigma,sigma_T,sigma_over_geom,sigmaT_over_geom,optical_residual");
    if with_classical {
        out.push_str(",sigma_cl,R_cl,two_sigma_cl");
    }
    out.push('\n');
    for row in rows {
        let c = &row.cross;
        let _ = write!(
            out,
            "{},{},{},{},{},{}",
            fmt17(c.ka()),
            fmt17(c.sigma),
            fmt17(c.sigma_t),
            fmt17(c.sigma / c.geometric()),
            fmt17(c.sigma_t / c.geometric()),
            fmt17(c.optical_residual)
        );
        if with_classical {
            let _ = write!(out, ",{},{},{}", fmt17(row.sigma_cl), fmt17(row.r_cl), fmt17(row.two_sigma_cl()));
        }
        out.push('\n');
    }
    out
}
