//! Single-layer potential on a triangulated surface and the layer densities
//! of the low-frequency expansion.
//!
//! Densities follow the representation `u(r) = ∫ μ(p)/|p − r| dσ(p)`, so the
//! jump of the normal derivative across the surface is `4πμ`.

mod density;
mod kernel;
mod layers;
mod operator;

pub use density::SurfaceDensity;
pub use kernel::triangle_inverse_distance;
pub use layers::{capacity, capacity_from, distance_potential, mu0, mu1_parts, mu2, LayerDensities};
pub use operator::{
    read_operator_dump, solve_density, FactoredOperator, SingleLayerOperator, NEAR_FIELD_FACTOR, SOLVE_TOLERANCE,
};

/// `assemble_single_layer` in operation form.
pub fn assemble_single_layer(mesh: &crate::geometry::TriMesh) -> SingleLayerOperator<'_> {
    SingleLayerOperator::assemble(mesh)
}
