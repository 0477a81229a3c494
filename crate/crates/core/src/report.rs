//! Output formatting shared by the CSV and JSON writers.

/// Decimal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header comment block for CSV outputs.
pub fn csv_header(command: &str, config: &str) -> String {
    format!(
        "# hardscatter {} {command}\n# incident direction: +z (e); forward scattering is cos_theta = +1\n# config: {config}\n",
        env!("CARGO_PKG_VERSION")
    )
}
