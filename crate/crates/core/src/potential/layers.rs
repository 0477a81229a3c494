use rayon::prelude::*;

use super::operator::is_near;
use super::{FactoredOperator, SingleLayerOperator, SurfaceDensity};
use crate::geometry::TriMesh;
use crate::quadrature::triangle_points;
use crate::Result;

/// `μ₀`: the density with boundary potential `−1`.
pub fn mu0(op: &FactoredOperator<'_, '_>) -> Result<SurfaceDensity> {
    op.solve(&vec![-1.0; op.mesh().len()])
}

/// `C = −∫ μ₀ dσ`.
pub fn capacity_from(mesh: &TriMesh, mu0: &SurfaceDensity) -> f64 {
    -mu0.integral(mesh)
}

/// Capacity of a mesh (assembles, factors and solves).
pub fn capacity(mesh: &TriMesh) -> Result<f64> {
    let op = SingleLayerOperator::assemble(mesh);
    let factored = op.factor()?;
    Ok(capacity_from(mesh, &mu0(&factored)?))
}

/// First-order densities: `μ₁ˢ = −C μ₀` and `μ₁ᵃ` with boundary data `−z`.
pub fn mu1_parts(
    op: &FactoredOperator<'_, '_>,
    capacity: f64,
    mu0: &SurfaceDensity,
) -> Result<(SurfaceDensity, SurfaceDensity)> {
    let data: Vec<f64> = op.mesh().centroids().iter().map(|c| -c.z).collect();
    Ok((mu0.scaled(-capacity), op.solve(&data)?))
}

/// `∫ μ(p) |p − cᵢ| dσ(p)` at every collocation point. Same near/far split
/// as the operator; the self term uses the centroid value, which is zero.
pub fn distance_potential(mesh: &TriMesh, density: &SurfaceDensity) -> Vec<f64> {
    let n = mesh.len();
    let diam: Vec<f64> = (0..n).map(|i| mesh.triangle_diameter(i)).collect();
    let centroids = mesh.centroids();
    let areas = mesh.areas();
    let mu = density.values();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let c = &centroids[i];
            let mut acc = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let integral = if is_near(mesh, &diam, i, j) {
                    let nodes = triangle_points(&mesh.corners(j));
                    areas[j] / 3.0 * nodes.iter().map(|p| (p - c).norm()).sum::<f64>()
                } else {
                    areas[j] * (centroids[j] - c).norm()
                };
                acc += mu[j] * integral;
            }
            acc
        })
        .collect()
}

fn mu2_data(mesh: &TriMesh, mu0: &SurfaceDensity, mu1_integral: f64) -> Vec<f64> {
    let u0 = distance_potential(mesh, mu0);
    mesh.centroids()
        .iter()
        .zip(&u0)
        .map(|(c, u)| -0.5 * c.z * c.z - mu1_integral - 0.5 * u)
        .collect()
}

/// Second-order density with data `−z²/2 − ∫μ₁ − ½∫μ₀|p − r|`.
pub fn mu2(op: &FactoredOperator<'_, '_>, mu0: &SurfaceDensity, mu1: &SurfaceDensity) -> Result<SurfaceDensity> {
    let mesh = op.mesh();
    op.solve(&mu2_data(mesh, mu0, mu1.integral(mesh)))
}

/// The full density hierarchy of a body together with the pieces of its
/// z-reflected partner that define the antisymmetric parts.
#[derive(Debug, Clone)]
pub struct LayerDensities {
    pub capacity: f64,
    pub mu0: SurfaceDensity,
    pub mu1_sym: SurfaceDensity,
    pub mu1_anti: SurfaceDensity,
    pub mu2: SurfaceDensity,
    pub mu2_anti: SurfaceDensity,
}

impl LayerDensities {
    /// Solves every order on `op`.
    ///
    /// Antisymmetric parts are `½[g(p, Ω) − g(ρp, ρΩ)]`. The reflected body
    /// is isometric with an index-preserving triangle map, so its operator
    /// equals `op` entrywise and the same factorisation serves both; only
    /// the boundary data are taken from the reflected geometry.
    pub fn compute(op: &FactoredOperator<'_, '_>) -> Result<Self> {
        let mesh = op.mesh();
        let mu0 = mu0(op)?;
        let capacity = capacity_from(mesh, &mu0);
        let (mu1_sym, mu1_anti) = mu1_parts(op, capacity, &mu0)?;
        let mu1 = mu1_sym.add(&mu1_anti);
        let mu2 = mu2(op, &mu0, &mu1)?;

        let reflected = mesh.reflect();
        let mu1_reflected_data: Vec<f64> = reflected.centroids().iter().map(|c| capacity - c.z).collect();
        let mu1_reflected = op.solve(&mu1_reflected_data)?;
        let mu2_reflected = op.solve(&mu2_data(&reflected, &mu0, mu1_reflected.integral(&reflected)))?;
        let mu2_anti = mu2.half_difference(&mu2_reflected);

        Ok(LayerDensities {
            capacity,
            mu0,
            mu1_sym,
            mu1_anti,
            mu2,
            mu2_anti,
        })
    }

    pub fn mu1(&self) -> SurfaceDensity {
        self.mu1_sym.add(&self.mu1_anti)
    }
}
