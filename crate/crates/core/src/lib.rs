//! Numerical laboratory for singular holomorphic functions on domains in ℂⁿ.
//!
//! The crate builds explicit singular kernels (poles, branch logarithms,
//! complex powers, Levi-polynomial kernels) on a catalog of bounded domains
//! and measures their Bergman-space integrability by Monte Carlo quadrature
//! over dyadic level sets of the kernel denominator.
//!
//! Modules:
//! - [`geometry`]: domains, sampling, connected components, supporting functionals.
//! - [`kernels`]: singular kernels with branch bookkeeping.
//! - [`levi`]: defining functions, Levi polynomial, coercivity, model integrals.
//! - [`quadrature`]: shell profiles, threshold estimation, L^p masses, metrics.
//! - [`genericity`]: perturbation ladders, unboundedness verdicts, witness series.
//! - [`experiment`]: serializable configs and the reports behind the binary.

pub mod cvec;
pub mod error;
pub mod experiment;
pub mod genericity;
pub mod geometry;
pub mod kernels;
pub mod levi;
pub mod linalg;
pub mod quadrature;
pub mod rng;

pub use cvec::{c, LogComplex, Point, C64};
pub use error::{LabError, Result};
