//! Direct check, for n = 1, that the diagonal matrix coefficients of the
//! Schrödinger representation on Hermite functions are rescaled Laguerre
//! functions.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::quad::{integrate_panels, uniform_breaks, QuadConfig};
use crate::specfun::{hermite_h, phi_k_radial};

/// Returns `(⟨π_λ(z)Φ_k, Φ_k⟩, (2π/|λ|)φ_k^λ(z))` for `z = x + iy ∈ ℂ`,
/// where `π_λ(x,y,0)φ(ξ) = e^{iλ(xξ+xy/2)}φ(ξ+y)` and
/// `Φ_k(ξ) = |λ|^{1/4} h_k(|λ|^{1/2}ξ)`. The first entry is computed by
/// quadrature, the second in closed form.
pub fn special_hermite_check(lambda: f64, k: usize, z: Complex64) -> Result<(Complex64, f64)> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(domain("special Hermite check needs λ ≠ 0"));
    }
    if k > 3 {
        return Err(domain(format!("special Hermite check supports k ≤ 3, got {k}")));
    }
    let (x, y) = (z.re, z.im);
    let a = lambda.abs();
    let sa = a.sqrt();
    let amp = a.powf(0.25);
    let phi = |xi: f64| amp * hermite_h(k, sa * xi);
    // The product Φ(ξ+y)Φ(ξ) is centred at −y/2 and negligible beyond R.
    let radius = ((2.0 * k as f64 + 1.0).sqrt() + 10.0) / sa;
    let centre = -0.5 * y;
    let panels = ((2.0 * radius * (a.sqrt() * x.abs().max(1.0))).ceil() as usize).clamp(16, 4000);
    let breaks = uniform_breaks(centre - radius, centre + radius, panels);
    let lhs = integrate_panels(
        |xi: f64| {
            let phase = lambda * (x * xi + 0.5 * x * y);
            Complex64::from_polar(1.0, phase) * (phi(xi + y) * phi(xi))
        },
        &breaks,
        QuadConfig::abs(1e-12),
    )?
    .value;
    let rhs = 2.0 * std::f64::consts::PI / a * phi_k_radial(lambda, k, 1, z.norm_sqr())?;
    Ok((lhs, rhs))
}
