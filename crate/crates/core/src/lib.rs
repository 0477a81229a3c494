//! Scattering of scalar waves by hard (Dirichlet) bodies.
//!
//! The crate covers three regimes of the same problem:
//!
//! * [`potential`] and [`lowfreq`]: the low-frequency expansion of the
//!   scattering amplitude built from single-layer densities on a
//!   triangulated surface, giving the capacity and the order-k² gap
//!   between the total and transport cross sections.
//! * [`sphere_oracle`]: the exact partial-wave solution for a hard sphere,
//!   valid at every wavenumber.
//! * [`classical`]: specular ray tracing, the high-frequency limit.
//!
//! The incident wave travels along `+z`; "forward" means `+z` everywhere.

pub mod classical;
pub mod cli;
mod error;
pub mod geometry;
pub mod lowfreq;
pub mod potential;
pub mod quadrature;
pub mod report;
pub mod sphere_oracle;

pub use error::{Error, Result};

/// 3D vector type used throughout.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Unit vector of the incident direction.
pub fn incident_direction() -> Vec3 {
    Vec3::new(0.0, 0.0, 1.0)
}

/// Runs `f` on a dedicated rayon pool with `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
