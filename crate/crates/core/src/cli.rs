//! Command-line front end.
//!
//! Each subcommand writes one CSV or JSON document to `--out` (or stdout).
//! Outputs carry no timestamps, so the same configuration and thread count
//! reproduce them byte for byte.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::classical::{fcl_histogram, summarize, theorem2_check, trace, MeshScatterer, Scatterer, Theorem2Report, TraceConfig};
use crate::geometry::{load_mesh, make_body, AnalyticBody, TriMesh};
use crate::lowfreq::{cross_sections_lowfreq, LowFreqAnalysis, LowFreqCrossSections, LowFreqReport, SphereQuadrature};
use crate::potential::{capacity_from, mu0, SingleLayerOperator};
use crate::report::csv_header;
use crate::sphere_oracle::{fig1_sweep, low_k_extrapolate, sweep, sweep_csv};
use crate::{with_threads, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "hardscatter", version, about = "Scattering by hard bodies: low-frequency BEM, exact sphere, classical rays")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity of a body (JSON).
    Capacity(Options),
    /// Low-frequency functionals, D2 and inequality checks (JSON).
    Lowfreq(Options),
    /// Exact hard-sphere cross sections over a k grid (CSV).
    Mie(Options),
    /// Classical ray tracing: summary and |f_cl|^2 histogram (CSV).
    Raytrace(Options),
    /// Exact sweep at radius pi^-1/2 with classical reference lines (CSV).
    Fig1(Options),
    /// Sphere: BEM D2 against the exact limit, and high-k against rays (JSON).
    Compare(Options),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// sphere:R | ellipsoid:A,B,C | cylinder:R,H
    #[arg(long, conflicts_with = "mesh")]
    pub body: Option<String>,
    /// Closed triangle mesh in OFF format.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Mesh refinement level for analytic bodies (0-6).
    #[arg(long, default_value_t = 4)]
    pub level: usize,
    #[arg(long)]
    pub k_min: Option<f64>,
    #[arg(long)]
    pub k_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Logarithmic instead of linear k spacing.
    #[arg(long)]
    pub log: bool,
    #[arg(long, default_value_t = SphereQuadrature::DEFAULT_THETA)]
    pub quad_theta: usize,
    #[arg(long, default_value_t = SphereQuadrature::DEFAULT_PHI)]
    pub quad_phi: usize,
    /// Rays per side of the tracing grid.
    #[arg(long, default_value_t = crate::classical::DEFAULT_GRID)]
    pub grid: usize,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// lowfreq: also write f1, f2 on the quadrature nodes as CSV.
    #[arg(long)]
    pub amplitude_out: Option<PathBuf>,
}

/// Where the body comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum BodySource {
    Analytic(AnalyticBody),
    Mesh(PathBuf),
}

impl std::fmt::Display for BodySource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BodySource::Analytic(b) => write!(f, "{b}"),
            BodySource::Mesh(p) => write!(f, "mesh:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGrid {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
    pub log: bool,
}

impl KGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.samples == 1 {
            return vec![self.min];
        }
        let last = (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| {
                let s = i as f64 / last;
                if i + 1 == self.samples {
                    self.max
                } else if self.log {
                    self.min * (self.max / self.min).powf(s)
                } else {
                    self.min + (self.max - self.min) * s
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Capacity,
    Lowfreq,
    Mie,
    Raytrace,
    Fig1,
    Compare,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Mode,
    pub body: Option<BodySource>,
    pub level: usize,
    pub quadrature: (usize, usize),
    pub k_grid: Option<KGrid>,
    pub grid: usize,
    pub threads: usize,
    pub out: Option<PathBuf>,
    pub amplitude_out: Option<PathBuf>,
}

pub const MAX_LEVEL: usize = 6;

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (command, o) = match cli.command {
            Command::Capacity(o) => (Mode::Capacity, o),
            Command::Lowfreq(o) => (Mode::Lowfreq, o),
            Command::Mie(o) => (Mode::Mie, o),
            Command::Raytrace(o) => (Mode::Raytrace, o),
            Command::Fig1(o) => (Mode::Fig1, o),
            Command::Compare(o) => (Mode::Compare, o),
        };
        let body = match (&o.body, &o.mesh) {
            (Some(_), Some(_)) => return Err(Error::invalid("body", "give either --body or --mesh, not both")),
            (Some(spec), None) => Some(BodySource::Analytic(spec.parse()?)),
            (None, Some(path)) => Some(BodySource::Mesh(path.clone())),
            (None, None) => None,
        };
        match command {
            Mode::Fig1 => {
                if body.is_some() {
                    return Err(Error::invalid("body", "fig1 uses the fixed radius pi^-1/2"));
                }
            }
            Mode::Mie | Mode::Compare => match body {
                Some(BodySource::Analytic(AnalyticBody::Sphere { .. })) => {}
                _ => return Err(Error::invalid("body", "this subcommand needs --body sphere:R")),
            },
            _ => {
                if body.is_none() {
                    return Err(Error::invalid("body", "give --body or --mesh"));
                }
            }
        }
        if o.level > MAX_LEVEL {
            return Err(Error::invalid("level", format!("must be in 0..={MAX_LEVEL}, got {}", o.level)));
        }
        if o.quad_theta < 2 {
            return Err(Error::invalid("quad-theta", "must be at least 2"));
        }
        if o.quad_phi < 4 {
            return Err(Error::invalid("quad-phi", "must be at least 4"));
        }
        if o.grid < crate::classical::MIN_GRID {
            return Err(Error::invalid("grid", format!("must be at least {}", crate::classical::MIN_GRID)));
        }
        let k_grid = k_grid(command, &o)?;
        Ok(RunConfig {
            command,
            body,
            level: o.level,
            quadrature: (o.quad_theta, o.quad_phi),
            k_grid,
            grid: o.grid,
            threads: o.threads,
            out: o.out,
            amplitude_out: o.amplitude_out,
        })
    }

    fn echo(&self) -> String {
        let mut s = format!("command={:?}", self.command).to_lowercase();
        if let Some(b) = &self.body {
            s += &format!(" body={b}");
        }
        s += &format!(
            " level={} quad={}x{} grid={} threads={}",
            self.level, self.quadrature.0, self.quadrature.1, self.grid, self.threads
        );
        if let Some(k) = &self.k_grid {
            s += &format!(" k_min={} k_max={} samples={} log={}", k.min, k.max, k.samples, k.log);
        }
        s
    }
}

/// The k grid: defaults for the sweeps, optional elsewhere. A lone
/// `--k-min` asks for one wavenumber; `--k-max` alone is an error.
fn k_grid(mode: Mode, o: &Options) -> Result<Option<KGrid>> {
    let defaults = match mode {
        Mode::Mie => KGrid { min: 0.1, max: 50.0, samples: 100, log: true },
        Mode::Fig1 => KGrid { min: 0.05, max: 60.0, samples: 200, log: true },
        _ => {
            let Some(min) = o.k_min else {
                if o.k_max.is_some() || o.samples.is_some() {
                    return Err(Error::invalid("k-min", "required when --k-max or --samples is given"));
                }
                return Ok(None);
            };
            let max = o.k_max.unwrap_or(min);
            let samples = o.samples.unwrap_or(if max > min { 10 } else { 1 });
            return validate_grid(KGrid { min, max, samples, log: o.log }).map(Some);
        }
    };
    if o.k_min.is_none() && o.k_max.is_none() && o.samples.is_none() {
        return Ok(Some(defaults));
    }
    validate_grid(KGrid {
        min: o.k_min.unwrap_or(defaults.min),
        max: o.k_max.unwrap_or(defaults.max),
        samples: o.samples.unwrap_or(defaults.samples),
        log: o.log,
    })
    .map(Some)
}

fn validate_grid(g: KGrid) -> Result<KGrid> {
    if !(g.min > 0.0 && g.min.is_finite()) {
        return Err(Error::invalid("k-min", format!("must be positive, got {}", g.min)));
    }
    if !(g.max.is_finite() && g.max >= g.min) {
        return Err(Error::invalid("k-max", format!("must be at least k-min, got {}", g.max)));
    }
    if g.samples == 0 {
        return Err(Error::invalid("samples", "must be at least 1"));
    }
    if g.samples > 1 && g.max <= g.min {
        return Err(Error::invalid("k-max", "must exceed k-min when sampling more than one point"));
    }
    Ok(g)
}

#[derive(Serialize)]
struct Meta {
    version: &'static str,
    command: String,
    incident_direction: &'static str,
    config: String,
}

impl Meta {
    fn new(config: &RunConfig) -> Self {
        Meta {
            version: env!("CARGO_PKG_VERSION"),
            command: format!("{:?}", config.command).to_lowercase(),
            incident_direction: "+z",
            config: config.echo(),
        }
    }
}

fn load_body_mesh(config: &RunConfig) -> Result<(TriMesh, bool)> {
    match config.body.as_ref().expect("validated") {
        BodySource::Analytic(b) => Ok((make_body(b, config.level)?, b.is_smooth())),
        BodySource::Mesh(p) => Ok((load_mesh(p)?, false)),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CapacityOutput {
    meta: Meta,
    body: String,
    triangles: usize,
    smooth: bool,
    capacity: f64,
    volume: f64,
    diameter: f64,
    condition_estimate: f64,
    operator_asymmetry: f64,
}

#[derive(Serialize)]
struct LowFreqOutput {
    meta: Meta,
    body: String,
    triangles: usize,
    smooth: bool,
    #[serde(flatten)]
    report: LowFreqReport,
    f0: f64,
    #[serde(rename = "K_from_mu1_anti")]
    k_from_mu1_anti: f64,
    mu2_anti_integral: f64,
    cs_pass: bool,
    d2_corrected_bound: f64,
    d2_literal_bound: f64,
    cross_sections: Vec<LowFreqCrossSections>,
}

#[derive(Serialize)]
struct LowKComparison {
    capacity_bem: f64,
    capacity_oracle: f64,
    d2_bem: f64,
    d2_oracle: f64,
    d2_formula_corrected: f64,
    relative_gap: f64,
    pass: bool,
}

#[derive(Serialize)]
struct CompareOutput {
    meta: Meta,
    body: String,
    triangles: usize,
    low_k: LowKComparison,
    high_k: Theorem2Report,
}

/// Runs a validated configuration and returns the document to write.
pub fn execute(config: &RunConfig) -> Result<String> {
    with_threads(config.threads, || execute_inner(config))
}

fn execute_inner(config: &RunConfig) -> Result<String> {
    let meta = Meta::new(config);
    match config.command {
        Mode::Capacity => {
            let (mesh, smooth) = load_body_mesh(config)?;
            let op = SingleLayerOperator::assemble(&mesh);
            let factored = op.factor()?;
            let capacity = capacity_from(&mesh, &mu0(&factored)?);
            Ok(to_json(&CapacityOutput {
                meta,
                body: config.body.as_ref().map(ToString::to_string).unwrap_or_default(),
                triangles: mesh.len(),
                smooth,
                capacity,
                volume: mesh.volume(),
                diameter: mesh.diameter(),
                condition_estimate: factored.condition_estimate(),
                operator_asymmetry: op.asymmetry(),
            }))
        }
        Mode::Lowfreq => {
            let (mesh, smooth) = load_body_mesh(config)?;
            let quad = SphereQuadrature::new(config.quadrature.0, config.quadrature.1)?;
            let analysis = LowFreqAnalysis::run(&mesh, &quad)?;
            let cross_sections = match &config.k_grid {
                Some(g) => g
                    .values()
                    .into_iter()
                    .map(|k| cross_sections_lowfreq(&analysis.amplitude, k))
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            if let Some(path) = &config.amplitude_out {
                let doc = csv_header("lowfreq", &config.echo()) + &analysis.amplitude.to_csv();
                std::fs::write(path, doc)?;
            }
            let t1 = analysis.theorem1();
            let f = &analysis.functionals;
            Ok(to_json(&LowFreqOutput {
                meta,
                body: config.body.as_ref().map(ToString::to_string).unwrap_or_default(),
                triangles: mesh.len(),
                smooth,
                report: analysis.report(),
                f0: analysis.amplitude.f0,
                k_from_mu1_anti: f.k_from_mu1_anti,
                mu2_anti_integral: f.mu2_anti_integral,
                cs_pass: t1.cs_pass,
                d2_corrected_bound: t1.corrected_bound,
                d2_literal_bound: t1.literal_bound,
                cross_sections,
            }))
        }
        Mode::Mie => {
            let Some(BodySource::Analytic(AnalyticBody::Sphere { radius })) = config.body else {
                unreachable!("validated")
            };
            let ks = config.k_grid.expect("defaulted").values();
            Ok(csv_header("mie", &config.echo()) + &sweep_csv(&sweep(radius, &ks)?, false))
        }
        Mode::Fig1 => {
            let ks = config.k_grid.expect("defaulted").values();
            Ok(csv_header("fig1", &config.echo()) + &sweep_csv(&fig1_sweep(&ks)?, true))
        }
        Mode::Raytrace => {
            let tc = TraceConfig::with_grid(config.grid);
            let result = match config.body.as_ref().expect("validated") {
                BodySource::Analytic(b) => trace(b, &tc)?,
                BodySource::Mesh(p) => {
                    let mesh = load_mesh(p)?;
                    let scatterer = MeshScatterer::new(&mesh);
                    trace(&scatterer as &dyn Scatterer, &tc)?
                }
            };
            let summary = summarize(&result, &fcl_histogram(&result));
            let mut doc = csv_header("raytrace", &config.echo());
            doc += &format!(
                "# histogram sums: total={:.16e} one_minus_cos={:.16e} cos={:.16e}\n",
                summary.total, summary.transport, summary.cos_weighted
            );
            Ok(doc + &result.to_csv())
        }
        Mode::Compare => {
            let Some(BodySource::Analytic(body @ AnalyticBody::Sphere { radius })) = config.body else {
                unreachable!("validated")
            };
            let mesh = make_body(&body, config.level)?;
            let quad = SphereQuadrature::new(config.quadrature.0, config.quadrature.1)?;
            let analysis = LowFreqAnalysis::run(&mesh, &quad)?;
            let oracle = low_k_extrapolate(radius)?;
            let d2_bem = analysis.functionals.d2;
            let gap = (d2_bem / oracle.d2 - 1.0).abs();
            let ka_grid = config
                .k_grid
                .map(|g| g.values().into_iter().map(|k| k * radius).collect())
                .unwrap_or_else(|| KGrid { min: 10.0, max: 300.0, samples: 30, log: true }.values());
            Ok(to_json(&CompareOutput {
                meta,
                body: body.to_string(),
                triangles: mesh.len(),
                low_k: LowKComparison {
                    capacity_bem: analysis.functionals.capacity,
                    capacity_oracle: oracle.capacity,
                    d2_bem,
                    d2_oracle: oracle.d2,
                    d2_formula_corrected: analysis.d2_formula().corrected,
                    relative_gap: gap,
                    pass: gap < 0.05,
                },
                high_k: theorem2_check(radius, &ka_grid, config.grid)?,
            }))
        }
    }
}

/// Runs `config` and writes its document. Returns the
/// process exit code and prints errors to stderr.
pub fn run(config: &RunConfig) -> i32 {
    let result = execute(config).and_then(|doc| match &config.out {
        Some(path) => std::fs::write(path, doc).map_err(Error::from),
        None => {
            print!("{doc}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary: parses `args` and runs.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match RunConfig::from_cli(cli) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
