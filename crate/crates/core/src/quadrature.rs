//! Quadrature rules: Gauss–Legendre on [-1, 1], the 3-point symmetric
//! triangle rule and a product rule on the unit sphere.

use std::f64::consts::PI;

use crate::{Error, Result, Vec3};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Barycentric nodes of the degree-2 symmetric rule (equal weights 1/3).
pub const TRIANGLE_RULE_3: [[f64; 3]; 3] = [
    [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
    [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
    [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
];

/// Physical nodes of the 3-point rule on a triangle.
pub fn triangle_points(corners: &[Vec3; 3]) -> [Vec3; 3] {
    TRIANGLE_RULE_3.map(|b| corners[0] * b[0] + corners[1] * b[1] + corners[2] * b[2])
}

/// Product rule on S²: Gauss–Legendre in `cos θ` times uniform `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    n_theta: usize,
    n_phi: usize,
}

impl SphereQuadrature {
    pub const DEFAULT_THETA: usize = 64;
    pub const DEFAULT_PHI: usize = 128;

    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 {
            return Err(Error::invalid("quad-theta", "needs at least 2 nodes"));
        }
        if n_phi < 4 {
            return Err(Error::invalid("quad-phi", "needs at least 4 nodes"));
        }
        let (x, w) = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (&c, &wc) in x.iter().zip(&w) {
            let s = (1.0 - c * c).sqrt();
            for j in 0..n_phi {
                let phi = (j as f64 + 0.5) * dphi;
                nodes.push(Vec3::new(s * phi.cos(), s * phi.sin(), c));
                weights.push(wc * dphi);
            }
        }
        Ok(SphereQuadrature {
            nodes,
            weights,
            n_theta,
            n_phi,
        })
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ g(q) dq` over the sphere.
    pub fn integrate(&self, g: impl Fn(&Vec3) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(q, w)| w * g(q)).sum()
    }

    /// `∫ values(q) dq` for values sampled at the nodes.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// `make_quadrature` in operation form.
pub fn make_quadrature(n_theta: usize, n_phi: usize) -> Result<SphereQuadrature> {
    SphereQuadrature::new(n_theta, n_phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [2, 5, 64, 2048] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
            let deg = (2 * n - 1).min(40) as i32;
            let even = if deg % 2 == 0 { deg } else { deg - 1 };
            let exact = 2.0 / (even as f64 + 1.0);
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(even)).sum();
            assert!((got - exact).abs() < 1e-13, "n={n}: {got} vs {exact}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn sphere_rule_exactness() {
        let q = SphereQuadrature::new(64, 128).unwrap();
        let four_pi = 4.0 * PI;
        assert!((q.weights().iter().sum::<f64>() - four_pi).abs() < 1e-12);
        assert!(q.integrate(|q| q.z).abs() < 1e-12);
        assert!((q.integrate(|q| q.z * q.z) - four_pi / 3.0).abs() < 1e-12);
    }

    #[test]
    fn transverse_moment_vanishes() {
        let q = SphereQuadrature::new(64, 128).unwrap();
        for p in [Vec3::new(0.3, -1.2, 0.7), Vec3::new(5.0, 2.0, -1.0)] {
            let v = q.integrate(|q| (q.x * p.x + q.y * p.y) * q.z * q.z);
            assert!(v.abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn rejects_small_orders() {
        assert!(SphereQuadrature::new(1, 8).is_err());
        assert!(SphereQuadrature::new(4, 3).is_err());
    }
}
