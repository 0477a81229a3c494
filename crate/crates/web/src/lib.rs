//! Browser bindings for a few `hardscatter` computations.
//!
//! Every function returns plain numbers or a JSON string, so the page
//! needs no extra glue.

use hardscatter::classical::{fcl_histogram, summarize, trace, TraceConfig};
use hardscatter::geometry::{make_body, AnalyticBody};
use hardscatter::lowfreq::{LowFreqAnalysis, SphereQuadrature};
use hardscatter::sphere_oracle::sweep;
use wasm_bindgen::prelude::*;

fn js_err(e: hardscatter::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn parse_body(spec: &str) -> Result<AnalyticBody, JsError> {
    spec.parse().map_err(js_err)
}

/// Exact unit-sphere cross sections at `samples` log-spaced `ka` values.
/// Returns `[ka, σ/π, σ_T/π]` triples, flattened.
#[wasm_bindgen]
pub fn sphere_sweep(ka_min: f64, ka_max: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    if !(ka_min > 0.0 && ka_max > ka_min && samples >= 2) {
        return Err(JsError::new("need 0 < ka_min < ka_max and at least 2 samples"));
    }
    let ks: Vec<f64> = (0..samples)
        .map(|i| ka_min * (ka_max / ka_min).powf(i as f64 / (samples - 1) as f64))
        .collect();
    let rows = sweep(1.0, &ks).map_err(js_err)?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.cross.ka(), r.cross.sigma / r.cross.geometric(), r.cross.sigma_t / r.cross.geometric()])
        .collect())
}

/// Classical tracing of an analytic body. Returns JSON with `sigma_cl`,
/// `R_cl`, `max_bounces`, and `fcl_sq_by_cos`: the histogram averaged over
/// azimuth, one value per `cos θ` bin from backward to forward.
#[wasm_bindgen]
pub fn classical_scattering(body: &str, grid: usize) -> Result<String, JsError> {
    let body = parse_body(body)?;
    let result = trace(&body, &TraceConfig::with_grid(grid)).map_err(js_err)?;
    let bins = fcl_histogram(&result);
    let summary = summarize(&result, &bins);
    let n_phi = result.histogram.n_phi;
    let by_cos: Vec<f64> = bins
        .chunks(n_phi)
        .map(|row| row.iter().map(|b| b.fcl_sq).sum::<f64>() / n_phi as f64)
        .collect();
    let doc = serde_json::json!({
        "sigma_cl": result.sigma_cl,
        "R_cl": result.r_cl,
        "R_cl_cos": summary.cos_weighted,
        "max_bounces": result.max_bounces_seen,
        "fcl_sq_by_cos": by_cos,
    });
    Ok(doc.to_string())
}

/// Low-frequency functionals of an analytic body meshed at `level` (≤ 4).
#[wasm_bindgen]
pub fn lowfreq_functionals(body: &str, level: usize) -> Result<String, JsError> {
    if level > 4 {
        return Err(JsError::new("level must be at most 4 in the browser"));
    }
    let body = parse_body(body)?;
    let mesh = make_body(&body, level).map_err(js_err)?;
    let quad = SphereQuadrature::new(32, 64).map_err(js_err)?;
    let analysis = LowFreqAnalysis::run(&mesh, &quad).map_err(js_err)?;
    let mut doc = serde_json::to_value(analysis.report()).map_err(|e| JsError::new(&e.to_string()))?;
    doc["triangles"] = mesh.len().into();
    Ok(doc.to_string())
}
