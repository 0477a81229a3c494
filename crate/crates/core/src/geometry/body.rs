use std::collections::HashMap;
use std::f64::consts::PI;

use super::TriMesh;
use crate::{Error, Result, Vec3};

/// Closed-form test bodies. Every size parameter is a length and must be
/// strictly positive. All bodies are centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticBody {
    Sphere { radius: f64 },
    /// Semi-axes along x, y and z.
    Ellipsoid { a: f64, b: f64, c: f64 },
    /// Flat-capped cylinder with its axis along the incident direction `z`.
    Cylinder { radius: f64, height: f64 },
}

impl AnalyticBody {
    pub fn validate(&self) -> Result<()> {
        let params: &[(&str, f64)] = match self {
            AnalyticBody::Sphere { radius } => &[("radius", *radius)],
            AnalyticBody::Ellipsoid { a, b, c } => &[("a", *a), ("b", *b), ("c", *c)],
            AnalyticBody::Cylinder { radius, height } => &[("radius", *radius), ("height", *height)],
        };
        for (name, value) in params {
            if !(*value > 0.0 && value.is_finite()) {
                return Err(Error::invalid(name, format!("must be a positive length, got {value}")));
            }
        }
        Ok(())
    }

    /// Whether the surface is smooth (the cylinder has rims).
    pub fn is_smooth(&self) -> bool {
        !matches!(self, AnalyticBody::Cylinder { .. })
    }

    pub fn volume(&self) -> f64 {
        match *self {
            AnalyticBody::Sphere { radius } => 4.0 / 3.0 * PI * radius.powi(3),
            AnalyticBody::Ellipsoid { a, b, c } => 4.0 / 3.0 * PI * a * b * c,
            AnalyticBody::Cylinder { radius, height } => PI * radius * radius * height,
        }
    }

    /// Axis-aligned bounding box.
    pub fn bounds(&self) -> (Vec3, Vec3) {
        let half = match *self {
            AnalyticBody::Sphere { radius } => Vec3::repeat(radius),
            AnalyticBody::Ellipsoid { a, b, c } => Vec3::new(a, b, c),
            AnalyticBody::Cylinder { radius, height } => Vec3::new(radius, radius, height / 2.0),
        };
        (-half, half)
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            AnalyticBody::Sphere { radius } => 2.0 * radius,
            AnalyticBody::Ellipsoid { a, b, c } => 2.0 * a.max(b).max(c),
            AnalyticBody::Cylinder { radius, height } => (4.0 * radius * radius + height * height).sqrt(),
        }
    }
}

impl std::fmt::Display for AnalyticBody {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalyticBody::Sphere { radius } => write!(f, "sphere:{radius}"),
            AnalyticBody::Ellipsoid { a, b, c } => write!(f, "ellipsoid:{a},{b},{c}"),
            AnalyticBody::Cylinder { radius, height } => write!(f, "cylinder:{radius},{height}"),
        }
    }
}

impl std::str::FromStr for AnalyticBody {
    type Err = Error;

    /// Parses `sphere:R`, `ellipsoid:A,B,C` or `cylinder:R,H`.
    fn from_str(spec: &str) -> Result<Self> {
        let bad = |msg: String| Error::invalid("body", msg);
        let (kind, params) = spec
            .split_once(':')
            .ok_or_else(|| bad(format!("expected KIND:PARAMS, got `{spec}`")))?;
        let values = params
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad(format!("`{v}` is not a number"))))
            .collect::<Result<Vec<f64>>>()?;
        let body = match (kind.trim(), values.as_slice()) {
            ("sphere", &[radius]) => AnalyticBody::Sphere { radius },
            ("ellipsoid", &[a, b, c]) => AnalyticBody::Ellipsoid { a, b, c },
            ("cylinder", &[radius, height]) => AnalyticBody::Cylinder { radius, height },
            ("sphere" | "ellipsoid" | "cylinder", _) => {
                return Err(bad(format!("wrong number of parameters in `{spec}`")))
            }
            (other, _) => return Err(bad(format!("unknown body kind `{other}`"))),
        };
        body.validate().map_err(|e| bad(e.to_string()))?;
        Ok(body)
    }
}

/// Triangulates an analytic body with vertices on its surface.
///
/// Refinement level `ℓ` of the sphere and ellipsoid yields `20·4^(ℓ−1)`
/// triangles (level 4 is the 1280-face icosphere); level 0 is the bare
/// icosahedron, like level 1. The cylinder doubles its angular and axial
/// resolution per level and closes both ends with flat fans.
pub fn make_body(body: &AnalyticBody, level: usize) -> Result<TriMesh> {
    body.validate()?;
    match *body {
        AnalyticBody::Sphere { radius } => icosphere(level.saturating_sub(1))?.scaled(radius),
        AnalyticBody::Ellipsoid { a, b, c } => {
            icosphere(level.saturating_sub(1))?.map_vertices(|v| Vec3::new(a * v.x, b * v.y, c * v.z))
        }
        AnalyticBody::Cylinder { radius, height } => cylinder(radius, height, level),
    }
}

/// Unit icosphere after `subdivisions` rounds of 4:1 midpoint splitting.
pub fn icosphere(subdivisions: usize) -> Result<TriMesh> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                vertices.push(((vertices[a] + vertices[b]) / 2.0).normalize());
                vertices.len() - 1
            })
        };
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    TriMesh::new(vertices, faces)
}

fn cylinder(radius: f64, height: f64, level: usize) -> Result<TriMesh> {
    let n_phi = 6usize << level.min(12);
    let n_z = ((height * n_phi as f64) / (2.0 * PI * radius)).round().max(1.0) as usize;
    let ring = |k: usize, j: usize| k * n_phi + (j % n_phi);

    let mut vertices = Vec::with_capacity((n_z + 1) * n_phi + 2);
    for k in 0..=n_z {
        let z = -height / 2.0 + height * k as f64 / n_z as f64;
        for j in 0..n_phi {
            let t = 2.0 * PI * j as f64 / n_phi as f64;
            vertices.push(Vec3::new(radius * t.cos(), radius * t.sin(), z));
        }
    }
    let bottom = vertices.len();
    vertices.push(Vec3::new(0.0, 0.0, -height / 2.0));
    let top = vertices.len();
    vertices.push(Vec3::new(0.0, 0.0, height / 2.0));

    let mut faces = Vec::with_capacity(2 * n_phi * (n_z + 1));
    for k in 0..n_z {
        for j in 0..n_phi {
            let (a, b, c, d) = (ring(k, j), ring(k, j + 1), ring(k + 1, j + 1), ring(k + 1, j));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    for j in 0..n_phi {
        faces.push([bottom, ring(0, j + 1), ring(0, j)]);
        faces.push([top, ring(n_z, j), ring(n_z, j + 1)]);
    }
    TriMesh::new(vertices, faces)
}

/// Axis-aligned box with each face split into `n × n` squares.
pub fn box_mesh(min: Vec3, max: Vec3, n: usize) -> Result<TriMesh> {
    let n = n.max(1);
    let mut index: HashMap<[usize; 3], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut vertex = |p: [usize; 3], vertices: &mut Vec<Vec3>| -> usize {
        *index.entry(p).or_insert_with(|| {
            let t = |axis: usize| min[axis] + (max[axis] - min[axis]) * p[axis] as f64 / n as f64;
            vertices.push(Vec3::new(t(0), t(1), t(2)));
            vertices.len() - 1
        })
    };
    let mut faces = Vec::with_capacity(12 * n * n);
    for axis in 0..3 {
        let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
        for side in [0, n] {
            for i in 0..n {
                for j in 0..n {
                    let corner = |di: usize, dj: usize| {
                        let mut p = [0usize; 3];
                        p[axis] = side;
                        p[u] = i + di;
                        p[v] = j + dj;
                        p
                    };
                    let p00 = vertex(corner(0, 0), &mut vertices);
                    let p10 = vertex(corner(1, 0), &mut vertices);
                    let p11 = vertex(corner(1, 1), &mut vertices);
                    let p01 = vertex(corner(0, 1), &mut vertices);
                    if side == n {
                        faces.push([p00, p10, p11]);
                        faces.push([p00, p11, p01]);
                    } else {
                        faces.push([p00, p11, p10]);
                        faces.push([p00, p01, p11]);
                    }
                }
            }
        }
    }
    TriMesh::new(vertices, faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_specs_parse_and_print() {
        for spec in ["sphere:1", "ellipsoid:2,1,1", "cylinder:1,0.5"] {
            let body: AnalyticBody = spec.parse().unwrap();
            assert_eq!(body.to_string(), spec);
        }
        for bad in ["sphere", "sphere:1,2", "cube:1", "sphere:-1", "ellipsoid:1,x,1"] {
            assert!(bad.parse::<AnalyticBody>().is_err(), "{bad}");
        }
    }

    #[test]
    fn icosphere_face_counts() {
        for level in 1..=4 {
            let m = make_body(&AnalyticBody::Sphere { radius: 1.0 }, level).unwrap();
            assert_eq!(m.len(), 20 * 4usize.pow(level as u32 - 1));
        }
        assert_eq!(make_body(&AnalyticBody::Sphere { radius: 1.0 }, 4).unwrap().len(), 1280);
    }

    #[test]
    fn ellipsoid_volume_level4() {
        let m = make_body(&AnalyticBody::Ellipsoid { a: 2.0, b: 1.0, c: 1.0 }, 4).unwrap();
        let exact = 4.0 / 3.0 * PI * 2.0;
        assert!((m.volume() / exact - 1.0).abs() < 0.01, "{}", m.volume());
    }

    #[test]
    fn cylinder_caps_are_flat() {
        let m = make_body(&AnalyticBody::Cylinder { radius: 1.0, height: 2.0 }, 3).unwrap();
        let mut caps = 0;
        for (i, n) in m.normals().iter().enumerate() {
            let zs: Vec<f64> = m.corners(i).iter().map(|p| p.z).collect();
            if zs.iter().all(|&z| z == 1.0) {
                assert!((n - Vec3::z()).norm() < 1e-14);
                caps += 1;
            } else if zs.iter().all(|&z| z == -1.0) {
                assert!((n + Vec3::z()).norm() < 1e-14);
                caps += 1;
            }
        }
        assert_eq!(caps, 2 * 48);
    }

    #[test]
    fn box_volume_and_count() {
        let m = box_mesh(Vec3::zeros(), Vec3::new(1.0, 2.0, 3.0), 3).unwrap();
        assert_eq!(m.len(), 12 * 9);
        assert!((m.volume() - 6.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_positive_sizes() {
        assert!(make_body(&AnalyticBody::Sphere { radius: 0.0 }, 2).is_err());
        assert!(make_body(&AnalyticBody::Cylinder { radius: 1.0, height: -1.0 }, 2).is_err());
    }
}
