//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so every line is printed; exits non-zero on any FAIL.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use hardscatter::classical::{fcl_histogram, summarize, trace, MeshScatterer, TraceConfig, MIN_BIN_RAYS};
use hardscatter::cli::{execute, Cli, RunConfig};
use hardscatter::geometry::{box_mesh, make_body, AnalyticBody, TriMesh};
use hardscatter::lowfreq::{cross_sections_lowfreq, LowFreqAnalysis, SphereQuadrature};
use hardscatter::potential::{capacity, SingleLayerOperator};
use hardscatter::sphere_oracle::{low_k_extrapolate, phase_shifts, cross_sections, fig1_sweep, sphere_cross_sections, unit_shadow_radius};
use hardscatter::{with_threads, Vec3};

use clap::Parser;

struct Check {
    failures: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { failures: Vec::new() }
    }

    fn that(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        println!("    {} {what}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            self.failures.push(what);
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn quad() -> SphereQuadrature {
    SphereQuadrature::new(SphereQuadrature::DEFAULT_THETA, SphereQuadrature::DEFAULT_PHI).unwrap()
}

fn sphere(level: usize) -> TriMesh {
    make_body(&AnalyticBody::Sphere { radius: 1.0 }, level).unwrap()
}

fn prolate(level: usize) -> TriMesh {
    make_body(&AnalyticBody::Ellipsoid { a: 2.0, b: 1.0, c: 1.0 }, level).unwrap()
}

fn capacity_criterion(c: &mut Check) {
    let start = Instant::now();
    let cs = capacity(&sphere(5)).unwrap();
    c.that(rel(cs, 1.0) < 3e-3, format!("unit sphere level 5: C = {cs:.6} (want 1 within 0.3%)"));
    let oracle = 3f64.sqrt() / 2f64.acosh();
    let ce = capacity(&prolate(5)).unwrap();
    c.that(
        rel(ce, oracle) < 1e-2,
        format!("prolate (2,1,1) level 5: C = {ce:.6} vs {oracle:.6} (1%)"),
    );
    let elapsed = start.elapsed();
    c.that(elapsed < Duration::from_secs(60), format!("runtime {elapsed:.2?} (< 60 s)"));
}

fn density_criterion(c: &mut Check) {
    let mesh = sphere(4);
    let op = SingleLayerOperator::assemble(&mesh);
    let factored = op.factor().unwrap();
    let d = hardscatter::potential::LayerDensities::compute(&factored).unwrap();
    let mu0_ref = -1.0 / (4.0 * PI);
    let dev0 = d.mu0.values().iter().map(|v| rel(*v, mu0_ref)).fold(0.0, f64::max);
    c.that(dev0 < 0.02, format!("max |mu0 + 1/4pi| relative = {dev0:.4} (< 2%)"));
    let amp = 3.0 / (4.0 * PI);
    let dev1 = d
        .mu1_anti
        .values()
        .iter()
        .zip(mesh.centroids())
        .map(|(v, p)| (v + amp * p.z / p.norm()).abs() / amp)
        .fold(0.0, f64::max);
    c.that(dev1 < 0.03, format!("max |mu1a + (3/4pi) z| / (3/4pi) = {dev1:.4} (< 3%)"));
}

fn test_meshes() -> Vec<(&'static str, TriMesh)> {
    let egg = sphere(4)
        .map_vertices(|p| Vec3::new(p.x, p.y, p.z) * (1.0 + 0.25 * p.z))
        .unwrap();
    vec![
        ("sphere L4", sphere(4)),
        ("prolate (2,1,1) L4", prolate(4)),
        ("shifted sphere L4", sphere(4).translated(Vec3::new(0.2, -0.1, 0.35)).unwrap()),
        ("egg L4", egg),
        ("cylinder (1,1) L3", make_body(&AnalyticBody::Cylinder { radius: 1.0, height: 1.0 }, 3).unwrap()),
        ("cube n=6", box_mesh(Vec3::repeat(-0.5), Vec3::repeat(0.5), 6).unwrap()),
    ]
}

fn identities_criterion(c: &mut Check) {
    for (name, mesh) in test_meshes() {
        let a = LowFreqAnalysis::run(&mesh, &quad()).unwrap();
        let f = a.functionals;
        let k_gap = (f.k_moment - f.k_from_mu1_anti).abs();
        let k_tol = 1e-6 * f.capacity * mesh.diameter();
        c.that(
            k_gap <= k_tol,
            format!("{name}: K = {:.6e}, int mu1a = {:.6e}, gap {k_gap:.1e} (<= {k_tol:.1e})", f.k_moment, f.k_from_mu1_anti),
        );
        let ck = -f.capacity * f.k_moment;
        let tol = (0.02 * ck.abs()).max(1e-6);
        c.that(
            (f.mu2_anti_integral - ck).abs() <= tol,
            format!("{name}: int mu2a = {:.6e} vs -CK = {ck:.6e}", f.mu2_anti_integral),
        );
        let t1 = a.theorem1();
        c.that(
            f.k_moment.powi(2) <= f.capacity * f.energy_m / (4.0 * PI) * (1.0 + 1e-3),
            format!("{name}: Cauchy-Schwarz margin CM/4pi - K^2 = {:.6e}", t1.cs_margin),
        );
    }
}

fn d2_criterion(c: &mut Check) {
    let target = 8.0 * PI / 3.0;
    let s = LowFreqAnalysis::run(&sphere(4), &quad()).unwrap();
    let bem = s.functionals.d2;
    c.that(rel(bem, target) < 0.05, format!("sphere L4 d2_direct = {bem:.5} vs 8pi/3 = {target:.5} (5%)"));
    let oracle = low_k_extrapolate(1.0).unwrap().d2;
    c.that(rel(oracle, target) < 1e-3, format!("partial-wave limit D2 = {oracle:.6} (0.1%)"));
    c.that(rel(bem, oracle) < 0.05, format!("two routes agree: {:.4}% apart (5%)", 100.0 * rel(bem, oracle)));

    let t1 = s.theorem1();
    println!(
        "    info literal (4pi/3)CV bound on the sphere: D2 = {bem:.4} vs {:.4} -> {} (expected FAIL, not asserted)",
        t1.literal_bound,
        if t1.literal_pass { "PASS" } else { "FAIL" }
    );
    c.that(t1.corrected_pass, format!("sphere: D2 = {bem:.4} >= (2/3)CV = {:.4}", t1.corrected_bound));
    let e = LowFreqAnalysis::run(&prolate(4), &quad()).unwrap();
    let te = e.theorem1();
    println!(
        "    info literal bound on the prolate body: D2 = {:.4} vs {:.4} -> {}",
        e.functionals.d2,
        te.literal_bound,
        if te.literal_pass { "PASS" } else { "FAIL" }
    );
    c.that(te.corrected_pass, format!("prolate: D2 = {:.4} >= (2/3)CV = {:.4}", e.functionals.d2, te.corrected_bound));
}

fn theorem1_criterion(c: &mut Check) {
    for (name, mesh) in [("sphere L4", sphere(4)), ("prolate L4", prolate(4))] {
        let a = LowFreqAnalysis::run(&mesh, &quad()).unwrap();
        let diam = mesh.diameter();
        let worst = (1..=50)
            .map(|i| {
                let k = 0.5 * i as f64 / 50.0 / diam;
                let cs = cross_sections_lowfreq(&a.amplitude, k).unwrap();
                cs.sigma - cs.sigma_t
            })
            .fold(f64::INFINITY, f64::min);
        c.that(worst > 0.0, format!("{name}: min (sigma - sigma_T) over k*diam in (0, 0.5] = {worst:.3e}"));
    }
    let kas: Vec<f64> = (0..200).map(|i| 1e-3 * (3e5f64).powf(i as f64 / 199.0)).collect();
    let worst = kas
        .iter()
        .map(|&ka| sphere_cross_sections(1.0, ka).unwrap().forward_excess)
        .fold(f64::INFINITY, f64::min);
    c.that(worst > 0.0, format!("exact sphere, 200 ka in [1e-3, 300]: min (sigma - sigma_T) = {worst:.3e}"));
}

fn optical_criterion(c: &mut Check) {
    for ka in [0.5, 5.0, 50.0, 200.0] {
        let cs = cross_sections(&phase_shifts(1.0, ka, None).unwrap());
        c.that(
            cs.optical_residual < 1e-10 && cs.quadrature_mismatch < 1e-8,
            format!(
                "ka = {ka}: optical residual {:.1e} (< 1e-10), series vs quadrature {:.1e} (< 1e-8)",
                cs.optical_residual, cs.quadrature_mismatch
            ),
        );
    }
}

fn fig1_criterion(c: &mut Check) {
    let start = Instant::now();
    let a = unit_shadow_radius();
    let kas: Vec<f64> = (0..200).map(|i| 0.05 * (4000f64).powf(i as f64 / 199.0)).collect();
    let ks: Vec<f64> = kas.iter().map(|ka| ka / a).collect();
    let rows = fig1_sweep(&ks).unwrap();
    let (first, last) = (&rows[0].cross, &rows[rows.len() - 1].cross);
    c.that(
        rel(first.sigma, 4.0) < 0.01 && rel(first.sigma_t, 4.0) < 0.01,
        format!("ka = {:.3}: sigma = {:.4}, sigma_T = {:.4} (4 within 1%)", first.ka(), first.sigma, first.sigma_t),
    );
    c.that(rel(last.sigma / 2.0, 1.0) < 0.03, format!("ka = {:.0}: sigma/2 = {:.4} (1 within 3%)", last.ka(), last.sigma / 2.0));
    c.that(rel(last.sigma_t, 1.0) < 0.05, format!("ka = {:.0}: sigma_T = {:.4} (1 within 5%)", last.ka(), last.sigma_t));
    c.that(
        rows.iter().all(|r| r.cross.sigma_t < r.cross.sigma),
        "sigma_T < sigma at all 200 points",
    );
    let elapsed = start.elapsed();
    c.that(elapsed < Duration::from_secs(120), format!("runtime {elapsed:.2?} (< 120 s)"));
}

fn classical_criterion(c: &mut Check) {
    let unit = AnalyticBody::Sphere { radius: 1.0 };
    let r = trace(&unit, &TraceConfig::with_grid(1024)).unwrap();
    c.that(rel(r.sigma_cl, PI) < 5e-3, format!("sphere grid 1024: sigma_cl = {:.5} (pi within 0.5%)", r.sigma_cl));
    c.that(rel(r.r_cl, PI) < 5e-3, format!("sphere grid 1024: R_cl = {:.5} (pi within 0.5%)", r.r_cl));

    let fine = trace(&unit, &TraceConfig::with_grid(8192)).unwrap();
    let bins = fcl_histogram(&fine);
    let s = summarize(&fine, &bins);
    let dev = bins
        .iter()
        .filter(|b| b.ray_count >= MIN_BIN_RAYS)
        .map(|b| rel(b.fcl_sq, 0.25))
        .fold(0.0, f64::max);
    c.that(
        dev < 0.03,
        format!(
            "sphere grid 8192: |f_cl|^2 in [{:.4}, {:.4}] over {} bins, max deviation from 1/4 = {:.2}% (3%)",
            s.min_populated,
            s.max_populated,
            s.populated_bins,
            100.0 * dev
        ),
    );

    let cyl = AnalyticBody::Cylinder { radius: 1.0, height: 1.0 };
    let rc = trace(&cyl, &TraceConfig::with_grid(1024)).unwrap();
    c.that(
        rel(rc.r_cl, 2.0 * rc.sigma_cl) < 5e-3,
        format!("flat-cap cylinder: R_cl / 2 sigma_cl = {:.6}", rc.r_cl / (2.0 * rc.sigma_cl)),
    );
    let cyl_mesh = make_body(&cyl, 4).unwrap();
    let rm = trace(&MeshScatterer::new(&cyl_mesh), &TraceConfig::with_grid(512)).unwrap();
    c.that(
        rel(rm.r_cl, 2.0 * rm.sigma_cl) < 5e-3,
        format!("flat-cap cylinder mesh: R_cl / 2 sigma_cl = {:.6}", rm.r_cl / (2.0 * rm.sigma_cl)),
    );

    let ell_mesh = prolate(4);
    let convex: Vec<(&str, usize)> = vec![
        ("sphere", r.max_bounces_seen),
        ("cylinder", rc.max_bounces_seen),
        ("ellipsoid", trace(&AnalyticBody::Ellipsoid { a: 2.0, b: 1.0, c: 0.5 }, &TraceConfig::with_grid(512)).unwrap().max_bounces_seen),
        ("ellipsoid mesh", trace(&MeshScatterer::new(&ell_mesh), &TraceConfig::with_grid(512)).unwrap().max_bounces_seen),
        ("cylinder mesh", rm.max_bounces_seen),
    ];
    for (name, bounces) in convex {
        c.that(bounces == 1, format!("{name}: max bounces = {bounces} (exactly 1)"));
    }
}

fn numbers(doc: &str) -> Vec<f64> {
    doc.lines()
        .filter(|l| !l.starts_with('#') && !l.contains("\"config\""))
        .flat_map(|l| l.split(|ch: char| ch == ',' || ch == ':' || ch.is_whitespace()))
        .filter_map(|t| t.trim_matches(|ch| ch == '"' || ch == '[' || ch == ']').parse::<f64>().ok())
        .collect()
}

fn determinism_criterion(c: &mut Check) {
    let commands: &[&[&str]] = &[
        &["capacity", "--body", "ellipsoid:2,1,1", "--level", "4"],
        &["lowfreq", "--body", "ellipsoid:2,1,1", "--level", "3", "--k-min", "0.02", "--k-max", "0.12", "--samples", "4"],
        &["raytrace", "--body", "ellipsoid:1,1,2", "--grid", "256"],
        &["fig1", "--samples", "40"],
    ];
    for args in commands {
        let doc = |threads: &str| {
            let mut argv = vec!["hardscatter"];
            argv.extend_from_slice(args);
            argv.extend_from_slice(&["--threads", threads]);
            execute(&RunConfig::from_cli(Cli::parse_from(argv)).unwrap()).unwrap()
        };
        let (a, b) = (doc("1"), doc("1"));
        c.that(a == b, format!("{}: byte-identical rerun", args[0]));
        let (x, y) = (numbers(&a), numbers(&doc("4")));
        let drift = x
            .iter()
            .zip(&y)
            .map(|(p, q)| if p == q { 0.0 } else { (p - q).abs() / p.abs().max(q.abs()) })
            .fold(0.0, f64::max);
        c.that(
            x.len() == y.len() && drift <= 1e-12,
            format!("{}: 1 vs 4 threads, {} fields, max relative drift {drift:.1e}", args[0], x.len()),
        );
    }
    let bits = |threads| with_threads(threads, || capacity(&sphere(4)).unwrap().to_bits());
    c.that(bits(2) == bits(2), "capacity bits stable for a fixed thread count");
}

fn main() {
    let criteria: [(&str, fn(&mut Check)); 9] = [
        ("1 capacity", capacity_criterion),
        ("2 density oracles", density_criterion),
        ("3 identities", identities_criterion),
        ("4 D2 triangulation", d2_criterion),
        ("5 forward excess", theorem1_criterion),
        ("6 optical theorem", optical_criterion),
        ("7 sphere sweep", fig1_criterion),
        ("8 classical", classical_criterion),
        ("9 determinism", determinism_criterion),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        println!("criterion {name}");
        let mut check = Check::new();
        let start = Instant::now();
        run(&mut check);
        let verdict = if check.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name} ({:.2?})", start.elapsed());
        failed += usize::from(!check.failures.is_empty());
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
