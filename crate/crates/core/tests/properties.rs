use approx::assert_relative_eq;
use hardscatter::geometry::{make_body, AnalyticBody, TriMesh};
use hardscatter::lowfreq::functionals;
use hardscatter::sphere_oracle::spherical_bessel_all;
use hardscatter::Vec3;
use proptest::prelude::*;

fn ellipsoid(a: f64, b: f64, c: f64) -> TriMesh {
    make_body(&AnalyticBody::Ellipsoid { a, b, c }, 2).unwrap()
}

fn egg(a: f64, b: f64, c: f64, tilt: f64) -> TriMesh {
    ellipsoid(a, b, c).map_vertices(|p| p * (1.0 + tilt * p.z / c)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn functionals_scale_with_size(a in 0.5..2.0f64, c in 0.5..2.0f64, tilt in -0.3..0.3f64, s in 0.3..4.0f64) {
        let mesh = egg(a, 1.0, c, tilt);
        let f = functionals(&mesh).unwrap();
        let g = functionals(&mesh.scaled(s).unwrap()).unwrap();
        assert_relative_eq!(g.capacity, s * f.capacity, max_relative = 1e-9);
        assert_relative_eq!(g.volume, s.powi(3) * f.volume, max_relative = 1e-12);
        assert_relative_eq!(g.d2, s.powi(4) * f.d2, max_relative = 1e-8);
        assert!((g.k_moment - s * s * f.k_moment).abs() <= 1e-8 * s * s * f.capacity * f.diameter);
    }

    #[test]
    fn functionals_ignore_translation(x in -3.0..3.0f64, y in -3.0..3.0f64, z in -3.0..3.0f64, tilt in -0.3..0.3f64) {
        let mesh = egg(1.0, 0.8, 1.4, tilt);
        let f = functionals(&mesh).unwrap();
        let g = functionals(&mesh.translated(Vec3::new(x, y, z)).unwrap()).unwrap();
        assert_relative_eq!(g.capacity, f.capacity, max_relative = 1e-9);
        assert_relative_eq!(g.d2, f.d2, max_relative = 1e-6);
    }

    #[test]
    fn d2_is_even_under_reflection(a in 0.5..2.0f64, c in 0.5..2.0f64, tilt in -0.3..0.3f64) {
        let mesh = egg(a, 1.0, c, tilt);
        let f = functionals(&mesh).unwrap();
        let g = functionals(&mesh.reflect()).unwrap();
        assert_relative_eq!(g.d2, f.d2, max_relative = 1e-6);
        assert!((g.k_moment + f.k_moment).abs() <= 1e-9 * f.capacity * f.diameter);
    }

    #[test]
    fn bessel_wronskian(x in 0.01..300.0f64) {
        let (j, y) = spherical_bessel_all(40, x).unwrap();
        for l in 1..=40 {
            let w = j[l] * y[l - 1] - j[l - 1] * y[l];
            if y[l].abs() < 1e150 {
                assert_relative_eq!(w * x * x, 1.0, max_relative = 1e-10);
            }
        }
    }
}
