//! Quadratic discrepancy of finite point sets on the Heisenberg group.
//!
//! The crate evaluates `∫₀¹∫|D_N(z,t;ρ)|² dz dt dρ` for cylindrical test
//! boxes in two independent ways (direct Monte Carlo and a closed spectral
//! formula built on the group Fourier transform of radial functions), and
//! carries the special functions, asymptotic envelopes and smoothing
//! kernels needed to cross-check them.

pub mod asymptotics;
pub mod cli;
pub mod discrepancy;
pub mod error;
pub mod gft;
pub mod heatkernel;
pub mod hgroup;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use hgroup::{GroupContext, HPoint};
