//! Numerical radius of dense complex matrices with certified enclosures,
//! plus a catalog of numerical-radius inequalities that can be evaluated,
//! chained and swept across random matrix ensembles.

pub mod bounds;
pub mod ensemble;
pub mod error;
pub mod exec;
pub mod io;
pub mod linalg;
pub mod radius;
pub mod rng;

pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::ComplexMatrix;
pub use radius::{numerical_radius, RadiusConfig, RadiusEstimate};

/// Default absolute/relative tolerance `1e-9 * max(1, scale)`.
pub fn tolerance(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}
