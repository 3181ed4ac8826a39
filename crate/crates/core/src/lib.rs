//! Dynamics of Schwarz reflections of the cubic Chebyshev polynomial.
//!
//! The crate covers four closely linked objects:
//!
//! * the polynomial `f(u) = u³ − 3u`, its fibers and affine charts ([`cubic`]);
//! * the Schwarz reflection `σ_a` of the quadrature domain `Ω_a = f(Δ_a)`
//!   ([`schwarz`]) and its parameter space ([`params`]);
//! * the ideal triangle group and its boundary map ([`tri_group`]) together
//!   with the parabolic anti-rational family `e^{iα}(z̄ + 1/z̄) + A`
//!   ([`antirat`]);
//! * the 2:2 anti-holomorphic correspondence lifting `σ_a` ([`corr`]).
//!
//! Rasterization lives in [`render`]; [`cli`] and [`verify`] back the
//! `schwarz` binary.

pub mod antirat;
pub mod cli;
pub mod complex;
pub mod corr;
pub mod cubic;
pub mod error;
pub mod params;
pub mod render;
pub mod schwarz;
pub mod tri_group;
pub mod verify;

pub use complex::ComplexPoint;
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use schwarz::SchwarzParam;
