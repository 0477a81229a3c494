//! Closed triangulated surfaces: validation, generators, OFF I/O, volume,
//! z-reflection and shadow area.

mod body;
mod mesh;
mod off;
mod shadow;

pub use body::{box_mesh, icosphere, make_body, AnalyticBody};
pub use mesh::{TriMesh, DEGENERATE_AREA_FACTOR};
pub use off::{parse_off, write_off};
pub use shadow::{shadow_area, DEFAULT_SHADOW_GRID};

/// Reads and validates an OFF file.
pub fn load_mesh(path: &std::path::Path) -> crate::Result<TriMesh> {
    let text = std::fs::read_to_string(path)?;
    parse_off(&text)
}

/// Enclosed volume of a valid mesh.
pub fn mesh_volume(mesh: &TriMesh) -> f64 {
    mesh.volume()
}

/// The z-reflected mesh.
pub fn reflect(mesh: &TriMesh) -> TriMesh {
    mesh.reflect()
}
