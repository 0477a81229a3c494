use std::collections::HashMap;

use crate::{Error, Result, Vec3};

/// Relative area threshold below which a triangle is considered degenerate.
pub const DEGENERATE_AREA_FACTOR: f64 = 1e-12;

/// A closed, consistently and outwardly oriented triangulated surface.
///
/// Construction validates the invariants; every value of this type is a
/// watertight 2-manifold with positive signed volume.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    centroids: Vec<Vec3>,
    normals: Vec<Vec3>,
    areas: Vec<f64>,
    diameter: f64,
}

impl TriMesh {
    /// Builds and validates a mesh.
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Topology("mesh has no triangles".into()));
        }
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= vertices.len() {
                    return Err(Error::Topology(format!(
                        "triangle {t} references vertex {v}, but only {} vertices exist",
                        vertices.len()
                    )));
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::Topology(format!("triangle {t} repeats a vertex")));
            }
        }
        if vertices.iter().any(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(Error::Topology("non-finite vertex coordinate".into()));
        }

        let diameter = max_pairwise_distance(&vertices);
        let threshold = DEGENERATE_AREA_FACTOR * diameter * diameter;

        let mut centroids = Vec::with_capacity(triangles.len());
        let mut normals = Vec::with_capacity(triangles.len());
        let mut areas = Vec::with_capacity(triangles.len());
        for (index, tri) in triangles.iter().enumerate() {
            let [a, b, c] = tri.map(|i| vertices[i]);
            let cross = (b - a).cross(&(c - a));
            let area = 0.5 * cross.norm();
            if !(area > threshold) {
                return Err(Error::Degenerate {
                    index,
                    area,
                    threshold,
                });
            }
            centroids.push((a + b + c) / 3.0);
            normals.push(cross / (2.0 * area));
            areas.push(area);
        }

        check_topology(&triangles)?;

        let mesh = TriMesh {
            vertices,
            triangles,
            centroids,
            normals,
            areas,
            diameter,
        };
        let volume = mesh.volume();
        if !(volume > 0.0) {
            return Err(Error::InwardOrientation(volume));
        }
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn centroids(&self) -> &[Vec3] {
        &self.centroids
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Corner positions of triangle `i`.
    pub fn corners(&self, i: usize) -> [Vec3; 3] {
        self.triangles[i].map(|v| self.vertices[v])
    }

    /// Longest edge of triangle `i`.
    pub fn triangle_diameter(&self, i: usize) -> f64 {
        let [a, b, c] = self.corners(i);
        (b - a).norm().max((c - b).norm()).max((a - c).norm())
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Enclosed volume, `(1/3) Σ (cᵢ·nᵢ) Aᵢ`.
    pub fn volume(&self) -> f64 {
        self.centroids
            .iter()
            .zip(&self.normals)
            .zip(&self.areas)
            .map(|((c, n), a)| c.dot(n) * a)
            .sum::<f64>()
            / 3.0
    }

    /// Mirror image under `z → −z`. Triangle `i` of the result is the image
    /// of triangle `i` of `self`; windings are flipped to stay outward.
    pub fn reflect(&self) -> TriMesh {
        let flip = |v: &Vec3| Vec3::new(v.x, v.y, -v.z);
        TriMesh {
            vertices: self.vertices.iter().map(flip).collect(),
            triangles: self.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect(),
            centroids: self.centroids.iter().map(flip).collect(),
            normals: self.normals.iter().map(flip).collect(),
            areas: self.areas.clone(),
            diameter: self.diameter,
        }
    }

    /// Applies `p ↦ λp + offset`, `λ > 0`.
    pub fn transformed(&self, scale: f64, offset: Vec3) -> Result<TriMesh> {
        if !(scale > 0.0) {
            return Err(Error::invalid("scale", "must be positive"));
        }
        TriMesh::new(
            self.vertices.iter().map(|v| v * scale + offset).collect(),
            self.triangles.clone(),
        )
    }

    pub fn scaled(&self, scale: f64) -> Result<TriMesh> {
        self.transformed(scale, Vec3::zeros())
    }

    pub fn translated(&self, offset: Vec3) -> Result<TriMesh> {
        self.transformed(1.0, offset)
    }

    /// Applies an arbitrary vertex map and revalidates.
    pub fn map_vertices(&self, f: impl Fn(&Vec3) -> Vec3) -> Result<TriMesh> {
        TriMesh::new(self.vertices.iter().map(f).collect(), self.triangles.clone())
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounds(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }
}

fn max_pairwise_distance(vertices: &[Vec3]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            best = best.max((a - b).norm_squared());
        }
    }
    best.sqrt()
}

fn check_topology(triangles: &[[usize; 3]]) -> Result<()> {
    // directed edge -> number of occurrences
    let mut directed: HashMap<(usize, usize), u32> = HashMap::with_capacity(3 * triangles.len());
    for tri in triangles {
        for k in 0..3 {
            let edge = (tri[k], tri[(k + 1) % 3]);
            *directed.entry(edge).or_insert(0) += 1;
        }
    }
    let mut edges: Vec<_> = directed.iter().map(|(&e, &n)| (e, n)).collect();
    edges.sort_unstable();
    for ((a, b), n) in edges {
        let reverse = directed.get(&(b, a)).copied().unwrap_or(0);
        let undirected = n + reverse;
        if undirected == 1 {
            return Err(Error::Topology(format!(
                "open surface: edge ({a}, {b}) belongs to a single triangle"
            )));
        }
        if undirected > 2 {
            return Err(Error::Topology(format!(
                "non-manifold edge ({a}, {b}) shared by {undirected} triangles"
            )));
        }
        if n != 1 {
            return Err(Error::Orientation(a, b));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> (Vec<Vec3>, Vec<[usize; 3]>) {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ];
        let t = vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]];
        (v, t)
    }

    #[test]
    fn tetrahedron_volume() {
        let (v, t) = tetra();
        let m = TriMesh::new(v, t).unwrap();
        assert!((m.volume() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn inverted_winding_is_rejected() {
        let (v, t) = tetra();
        let t = t.into_iter().map(|[a, b, c]| [a, c, b]).collect();
        assert!(matches!(TriMesh::new(v, t), Err(Error::InwardOrientation(_))));
    }

    #[test]
    fn single_flipped_face_is_an_orientation_error() {
        let (v, mut t) = tetra();
        t[3] = [1, 3, 2];
        assert!(matches!(TriMesh::new(v, t), Err(Error::Orientation(..))));
    }

    #[test]
    fn open_surface() {
        let (v, mut t) = tetra();
        t.pop();
        let err = TriMesh::new(v, t).unwrap_err();
        assert!(err.to_string().contains("open surface"), "{err}");
    }

    #[test]
    fn degenerate_triangle() {
        let (mut v, t) = tetra();
        v[3] = Vec3::new(0.5, 0.5, 0.0);
        assert!(matches!(TriMesh::new(v, t), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn reflect_is_an_involution() {
        let (v, t) = tetra();
        let m = TriMesh::new(v, t).unwrap().translated(Vec3::new(0.1, 0.2, 0.3)).unwrap();
        let back = m.reflect().reflect();
        assert_eq!(back.vertices(), m.vertices());
        assert_eq!(back.triangles(), m.triangles());
        assert!((m.reflect().volume() - m.volume()).abs() < 1e-15);
    }
}
