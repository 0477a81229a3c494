//! Ray–surface intersection for analytic bodies and triangle meshes.

use crate::geometry::{AnalyticBody, TriMesh};
use crate::Vec3;

/// First intersection along a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hit {
    /// Ray parameter and outward unit normal.
    Surface { t: f64, normal: Vec3 },
    /// The ray met a triangle edge or vertex, where the normal is
    /// ambiguous; the caller perturbs and retraces.
    Edge,
}

/// A body that can be hit by rays from outside.
pub trait Scatterer: Sync {
    /// Nearest hit with `t > t_min` of `origin + t·dir` (`dir` unit).
    fn intersect(&self, origin: &Vec3, dir: &Vec3, t_min: f64) -> Option<Hit>;
    fn bounds(&self) -> (Vec3, Vec3);
    fn diameter(&self) -> f64;
}

fn smallest_root_above(a: f64, b: f64, c: f64, t_min: f64) -> Option<f64> {
    // a t² + 2b t + c = 0
    let disc = b * b - a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let q = -(b + b.signum() * sq);
    let (mut t0, mut t1) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    if t0 > t1 {
        std::mem::swap(&mut t0, &mut t1);
    }
    [t0, t1].into_iter().find(|&t| t > t_min)
}

impl Scatterer for AnalyticBody {
    fn intersect(&self, o: &Vec3, d: &Vec3, t_min: f64) -> Option<Hit> {
        match *self {
            AnalyticBody::Sphere { radius } => {
                let t = smallest_root_above(d.dot(d), o.dot(d), o.dot(o) - radius * radius, t_min)?;
                let p = o + d * t;
                Some(Hit::Surface { t, normal: p / radius })
            }
            AnalyticBody::Ellipsoid { a, b, c } => {
                let s = Vec3::new(1.0 / a, 1.0 / b, 1.0 / c);
                let (os, ds) = (o.component_mul(&s), d.component_mul(&s));
                let t = smallest_root_above(ds.dot(&ds), os.dot(&ds), os.dot(&os) - 1.0, t_min)?;
                let p = o + d * t;
                let normal = p.component_mul(&s).component_mul(&s).normalize();
                Some(Hit::Surface { t, normal })
            }
            AnalyticBody::Cylinder { radius, height } => {
                let half = height / 2.0;
                let mut best: Option<(f64, Vec3)> = None;
                let mut consider = |t: f64, n: Vec3| {
                    if t > t_min && best.is_none_or(|(bt, _)| t < bt) {
                        best = Some((t, n));
                    }
                };
                if d.z != 0.0 {
                    for (zc, nz) in [(-half, -1.0), (half, 1.0)] {
                        let t = (zc - o.z) / d.z;
                        let p = o + d * t;
                        if p.x * p.x + p.y * p.y <= radius * radius {
                            consider(t, Vec3::new(0.0, 0.0, nz));
                        }
                    }
                }
                let a = d.x * d.x + d.y * d.y;
                if a > 0.0 {
                    let b = o.x * d.x + o.y * d.y;
                    let c = o.x * o.x + o.y * o.y - radius * radius;
                    let disc = b * b - a * c;
                    if disc >= 0.0 {
                        let sq = disc.sqrt();
                        for t in [(-b - sq) / a, (-b + sq) / a] {
                            let p = o + d * t;
                            if p.z.abs() <= half {
                                consider(t, Vec3::new(p.x, p.y, 0.0) / radius);
                            }
                        }
                    }
                }
                best.map(|(t, normal)| Hit::Surface { t, normal })
            }
        }
    }

    fn bounds(&self) -> (Vec3, Vec3) {
        AnalyticBody::bounds(self)
    }

    fn diameter(&self) -> f64 {
        AnalyticBody::diameter(self)
    }
}

/// Barycentric margin below which a hit counts as an edge hit.
pub const EDGE_EPSILON: f64 = 1e-12;

/// A triangle mesh with a uniform-grid acceleration structure.
#[derive(Debug, Clone)]
pub struct MeshScatterer<'m> {
    mesh: &'m TriMesh,
    lo: Vec3,
    cell: Vec3,
    dims: [usize; 3],
    cells: Vec<Vec<u32>>,
}

impl<'m> MeshScatterer<'m> {
    pub fn new(mesh: &'m TriMesh) -> Self {
        let (lo, hi) = mesh.bounds();
        let pad = 1e-9 * mesh.diameter();
        let (lo, hi) = (lo - Vec3::repeat(pad), hi + Vec3::repeat(pad));
        let extent = hi - lo;
        let per_axis = ((mesh.len() as f64).cbrt() * 1.5).ceil().max(1.0) as usize;
        let longest = extent.max();
        let dims = [0, 1, 2].map(|a| ((extent[a] / longest * per_axis as f64).ceil() as usize).max(1));
        let cell = Vec3::new(
            extent.x / dims[0] as f64,
            extent.y / dims[1] as f64,
            extent.z / dims[2] as f64,
        );
        let mut cells = vec![Vec::new(); dims[0] * dims[1] * dims[2]];
        for i in 0..mesh.len() {
            let c = mesh.corners(i);
            let tmin = c[0].inf(&c[1]).inf(&c[2]);
            let tmax = c[0].sup(&c[1]).sup(&c[2]);
            let index = |p: &Vec3, a: usize| (((p[a] - lo[a]) / cell[a]).floor().max(0.0) as usize).min(dims[a] - 1);
            for x in index(&tmin, 0)..=index(&tmax, 0) {
                for y in index(&tmin, 1)..=index(&tmax, 1) {
                    for z in index(&tmin, 2)..=index(&tmax, 2) {
                        cells[(z * dims[1] + y) * dims[0] + x].push(i as u32);
                    }
                }
            }
        }
        MeshScatterer {
            mesh,
            lo,
            cell,
            dims,
            cells,
        }
    }

    pub fn mesh(&self) -> &'m TriMesh {
        self.mesh
    }

    /// Möller–Trumbore test against triangle `i`.
    fn triangle(&self, i: usize, o: &Vec3, d: &Vec3) -> Option<(f64, bool)> {
        let [a, b, c] = self.mesh.corners(i);
        let (e1, e2) = (b - a, c - a);
        let p = d.cross(&e2);
        let det = e1.dot(&p);
        if det.abs() < 1e-14 * e1.norm() * e2.norm() {
            return None;
        }
        let inv = 1.0 / det;
        let s = o - a;
        let u = s.dot(&p) * inv;
        if !(-EDGE_EPSILON..=1.0 + EDGE_EPSILON).contains(&u) {
            return None;
        }
        let q = s.cross(&e1);
        let v = d.dot(&q) * inv;
        if v < -EDGE_EPSILON || u + v > 1.0 + EDGE_EPSILON {
            return None;
        }
        let t = e2.dot(&q) * inv;
        let edge = u < EDGE_EPSILON || v < EDGE_EPSILON || u + v > 1.0 - EDGE_EPSILON;
        Some((t, edge))
    }

    #[cfg(test)]
    fn brute_force(&self, o: &Vec3, d: &Vec3, t_min: f64) -> Option<Hit> {
        self.scan(0..self.mesh.len(), o, d, t_min, f64::INFINITY)
    }

    fn scan(&self, tris: impl Iterator<Item = usize>, o: &Vec3, d: &Vec3, t_min: f64, t_max: f64) -> Option<Hit> {
        let mut best: Option<(f64, usize, bool)> = None;
        for i in tris {
            if let Some((t, edge)) = self.triangle(i, o, d) {
                if t > t_min && t <= t_max && best.is_none_or(|(bt, _, _)| t < bt) {
                    best = Some((t, i, edge));
                }
            }
        }
        best.map(|(t, i, edge)| {
            if edge {
                Hit::Edge
            } else {
                Hit::Surface {
                    t,
                    normal: self.mesh.normals()[i],
                }
            }
        })
    }
}

impl Scatterer for MeshScatterer<'_> {
    fn intersect(&self, o: &Vec3, d: &Vec3, t_min: f64) -> Option<Hit> {
        // Clip the ray to the grid box.
        let hi = self.lo + self.cell.component_mul(&Vec3::new(
            self.dims[0] as f64,
            self.dims[1] as f64,
            self.dims[2] as f64,
        ));
        let (mut t0, mut t1) = (t_min, f64::INFINITY);
        for a in 0..3 {
            if d[a] == 0.0 {
                if o[a] < self.lo[a] || o[a] > hi[a] {
                    return None;
                }
            } else {
                let (ta, tb) = ((self.lo[a] - o[a]) / d[a], (hi[a] - o[a]) / d[a]);
                t0 = t0.max(ta.min(tb));
                t1 = t1.min(ta.max(tb));
            }
        }
        if t0 > t1 {
            return None;
        }

        // Amanatides–Woo traversal.
        let p = o + d * t0;
        let mut idx = [0usize; 3];
        let mut step = [0isize; 3];
        let mut t_next = [f64::INFINITY; 3];
        let mut t_delta = [f64::INFINITY; 3];
        for a in 0..3 {
            let cell = (((p[a] - self.lo[a]) / self.cell[a]).floor().max(0.0) as usize).min(self.dims[a] - 1);
            idx[a] = cell;
            if d[a] > 0.0 {
                step[a] = 1;
                t_next[a] = (self.lo[a] + (cell + 1) as f64 * self.cell[a] - o[a]) / d[a];
                t_delta[a] = self.cell[a] / d[a];
            } else if d[a] < 0.0 {
                step[a] = -1;
                t_next[a] = (self.lo[a] + cell as f64 * self.cell[a] - o[a]) / d[a];
                t_delta[a] = -self.cell[a] / d[a];
            }
        }
        let slack = 1e-9 * self.mesh.diameter();
        let mut t_cell = t0;
        loop {
            let flat = (idx[2] * self.dims[1] + idx[1]) * self.dims[0] + idx[0];
            let exit = t_next[0].min(t_next[1]).min(t_next[2]);
            let tris = self.cells[flat].iter().map(|&i| i as usize);
            if let Some(hit) = self.scan(tris, o, d, t_min.max(t_cell - slack), exit + slack) {
                return Some(hit);
            }
            let a = (0..3).min_by(|&x, &y| t_next[x].total_cmp(&t_next[y])).unwrap_or(0);
            if t_next[a] > t1 {
                return None;
            }
            let next = idx[a] as isize + step[a];
            if next < 0 || next >= self.dims[a] as isize {
                return None;
            }
            idx[a] = next as usize;
            t_cell = t_next[a];
            t_next[a] += t_delta[a];
        }
    }

    fn bounds(&self) -> (Vec3, Vec3) {
        self.mesh.bounds()
    }

    fn diameter(&self) -> f64 {
        self.mesh.diameter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_body;

    fn surface(hit: Option<Hit>) -> (f64, Vec3) {
        match hit {
            Some(Hit::Surface { t, normal }) => (t, normal),
            other => panic!("expected a surface hit, got {other:?}"),
        }
    }

    #[test]
    fn sphere_hit_from_below() {
        let s = AnalyticBody::Sphere { radius: 2.0 };
        let (t, n) = surface(s.intersect(&Vec3::new(0.0, 0.0, -5.0), &Vec3::z(), 0.0));
        assert!((t - 3.0).abs() < 1e-14);
        assert!((n + Vec3::z()).norm() < 1e-14);
        assert!(s.intersect(&Vec3::new(2.5, 0.0, -5.0), &Vec3::z(), 0.0).is_none());
    }

    #[test]
    fn ellipsoid_normal_is_gradient() {
        let e = AnalyticBody::Ellipsoid { a: 2.0, b: 1.0, c: 1.0 };
        let o = Vec3::new(1.0, 0.0, -3.0);
        let (t, n) = surface(e.intersect(&o, &Vec3::z(), 0.0));
        let p = o + Vec3::z() * t;
        assert!((p.x * p.x / 4.0 + p.y * p.y + p.z * p.z - 1.0).abs() < 1e-14);
        let g = Vec3::new(p.x / 4.0, p.y, p.z).normalize();
        assert!((n - g).norm() < 1e-14);
    }

    #[test]
    fn cylinder_cap_and_side() {
        let c = AnalyticBody::Cylinder { radius: 1.0, height: 2.0 };
        let (t, n) = surface(c.intersect(&Vec3::new(0.3, 0.2, -4.0), &Vec3::z(), 0.0));
        assert!((t - 3.0).abs() < 1e-14 && n == -Vec3::z());
        let (t, n) = surface(c.intersect(&Vec3::new(-4.0, 0.0, 0.5), &Vec3::x(), 0.0));
        assert!((t - 3.0).abs() < 1e-14 && (n + Vec3::x()).norm() < 1e-14);
    }

    #[test]
    fn grid_traversal_agrees_with_brute_force() {
        let mesh = make_body(&AnalyticBody::Ellipsoid { a: 1.5, b: 1.0, c: 0.7 }, 4).unwrap();
        let scatterer = MeshScatterer::new(&mesh);
        let mut state = 0x9e37_79b9_7f4a_7c15_u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..2000 {
            let o = Vec3::new(next(), next(), next()) * 3.0;
            let d = Vec3::new(next(), next(), next()).normalize();
            let fast = scatterer.intersect(&o, &d, 0.0);
            let slow = scatterer.brute_force(&o, &d, 0.0);
            match (fast, slow) {
                (Some(Hit::Surface { t: a, .. }), Some(Hit::Surface { t: b, .. })) => assert!((a - b).abs() < 1e-12),
                (a, b) => assert_eq!(a, b),
            }
        }
    }
}
