//! Group Fourier transform of cylindrically radial functions on ℍⁿ.
//!
//! A radial `f` acts on the `k`-th Hermite level of the Schrödinger
//! representation `π_λ` as the scalar `E_n·f̂(λ,k)`, where `f̂` is the
//! Laguerre integral in [`gft_radial`] and `E_n = (2π)ⁿ 2^{(1−n)/2}`
//! ([`eigen_factor`]).

pub mod coefficients;
pub mod hermite_check;
pub mod profile;
pub mod table;

pub use coefficients::{chihat_box, chihat_box_dilated, g_integral, gft_radial, ChiEngine};
pub use hermite_check::special_hermite_check;
pub use profile::{BoxProfile, FnProfile, GaussianProfile, HeatProfile, RadialProfile, VerticalDecay, ZeroProfile};
pub use table::{plancherel_energy, reconstruct, Energy, LambdaGrid, Reconstruction, SpectralTable};

use std::f64::consts::PI;

/// Eigenvalue factor `E_n = (2π)ⁿ 2^{(1−n)/2}` linking `f̂(λ,k)` to the
/// action of `π_λ(f)` on degree-`k` Hermite functions.
pub fn eigen_factor(n: usize) -> f64 {
    (2.0 * PI).powi(n as i32) * 2f64.powf(0.5 * (1.0 - n as f64))
}
