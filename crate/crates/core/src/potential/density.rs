use std::fmt::Write as _;

use crate::geometry::TriMesh;
use crate::report::fmt17;
use crate::Vec3;

/// Piecewise-constant real field, one value per triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceDensity {
    values: Vec<f64>,
}

impl SurfaceDensity {
    pub fn new(values: Vec<f64>) -> Self {
        SurfaceDensity { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `∫ μ dσ`.
    pub fn integral(&self, mesh: &TriMesh) -> f64 {
        self.values.iter().zip(mesh.areas()).map(|(v, a)| v * a).sum()
    }

    /// `∫ g(p) μ(p) dσ` with `g` sampled at centroids.
    pub fn moment(&self, mesh: &TriMesh, g: impl Fn(&Vec3) -> f64) -> f64 {
        self.values
            .iter()
            .zip(mesh.areas())
            .zip(mesh.centroids())
            .map(|((v, a), c)| v * a * g(c))
            .sum()
    }

    /// `∫ p μ(p) dσ`.
    pub fn first_moment(&self, mesh: &TriMesh) -> Vec3 {
        self.values
            .iter()
            .zip(mesh.areas())
            .zip(mesh.centroids())
            .fold(Vec3::zeros(), |acc, ((v, a), c)| acc + c * (v * a))
    }

    pub fn scaled(&self, factor: f64) -> SurfaceDensity {
        SurfaceDensity::new(self.values.iter().map(|v| v * factor).collect())
    }

    pub fn add(&self, other: &SurfaceDensity) -> SurfaceDensity {
        SurfaceDensity::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    /// `½(self − other)`; with `other` the density of the reflected problem
    /// this is the antisymmetric part.
    pub fn half_difference(&self, other: &SurfaceDensity) -> SurfaceDensity {
        SurfaceDensity::new(self.values.iter().zip(&other.values).map(|(a, b)| 0.5 * (a - b)).collect())
    }

    pub fn half_sum(&self, other: &SurfaceDensity) -> SurfaceDensity {
        SurfaceDensity::new(self.values.iter().zip(&other.values).map(|(a, b)| 0.5 * (a + b)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// CSV with columns `triangle_index,cx,cy,cz,area,value`.
    pub fn to_csv(&self, mesh: &TriMesh) -> String {
        let mut out = String::from("triangle_index,cx,cy,cz,area,value\n");
        for (i, ((v, c), a)) in self.values.iter().zip(mesh.centroids()).zip(mesh.areas()).enumerate() {
            let _ = writeln!(
                out,
                "{i},{},{},{},{},{}",
                fmt17(c.x),
                fmt17(c.y),
                fmt17(c.z),
                fmt17(*a),
                fmt17(*v)
            );
        }
        out
    }
}
