//! Special functions: Laguerre, Hermite, Bessel, Airy, the auxiliary maps
//! `A`, `Θ`, and the leading-order uniform Laguerre asymptotics.

pub mod airy;
pub mod auxiliary;
pub mod bessel;
pub mod fw;
pub mod hermite;
pub mod laguerre;

pub use airy::{ai_tilde, airy, airy_iai, Airy};
pub use auxiliary::{alpha0, eta0, fn_a, fn_theta, fn_theta_prime};
pub use bessel::{bessel_j, bessel_y, j_tilde};
pub use fw::{bessel_error_scaling, fw_approx, FwRegime, FwResult};
pub use hermite::{hermite_h, hermite_h_all};
pub use laguerre::{laguerre_l, laguerre_lambda, laguerre_lambda_all, laguerre_lambda_into, ln_rk, rk};

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Laguerre index `k` in dimension `n`, with `ν = 4k + 2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NuIndex {
    pub k: usize,
    pub n: usize,
}

impl NuIndex {
    pub fn new(k: usize, n: usize) -> Self {
        assert!(n >= 1, "dimension n must be positive");
        Self { k, n }
    }

    /// The index with the given `ν`; `ν − 2n` must be a nonnegative multiple of 4.
    pub fn from_nu(nu: usize, n: usize) -> Result<Self> {
        if n == 0 || nu < 2 * n || (nu - 2 * n) % 4 != 0 {
            return Err(domain(format!("ν = {nu} is not of the form 4k + 2n with n = {n}")));
        }
        Ok(Self::new((nu - 2 * n) / 4, n))
    }

    pub fn nu(&self) -> usize {
        4 * self.k + 2 * self.n
    }

    /// `r_k = r_k^{n−1}`.
    pub fn rk(&self) -> f64 {
        rk(self.k, (self.n - 1) as f64)
    }
}

/// `dim(k) = C(k+n−1, n−1)`, the number of multi-indices of length `k`.
pub fn dim_k(k: usize, n: usize) -> f64 {
    (1..n).fold(1.0, |acc, i| acc * (k + i) as f64 / i as f64)
}

/// `φ_k^λ(z) = (|λ|/2π)ⁿ L_k^{n−1}(|λ||z|²/2) e^{−|λ||z|²/4}`, as a
/// function of `|z|²`.
pub fn phi_k_radial(lambda: f64, k: usize, n: usize, z_norm_sq: f64) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(domain("φ_k^λ needs λ ≠ 0"));
    }
    let a = lambda.abs();
    let x = 0.5 * a * z_norm_sq;
    Ok((a / (2.0 * PI)).powi(n as i32) * laguerre_l(k, (n - 1) as f64, x) * (-0.5 * x).exp())
}

/// `φ_k^λ(z)` for interleaved coordinates `z`.
pub fn phi_k(lambda: f64, k: usize, n: usize, z: &[f64]) -> Result<f64> {
    assert_eq!(z.len(), 2 * n, "z needs 2n coordinates");
    phi_k_radial(lambda, k, n, z.iter().map(|v| v * v).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_index() {
        let i = NuIndex::new(3, 2);
        assert_eq!(i.nu(), 16);
        assert_eq!(NuIndex::from_nu(16, 2).unwrap(), i);
        assert!(NuIndex::from_nu(17, 2).is_err());
        assert!((NuIndex::new(4, 3).rk().powi(2) - 1.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn dims() {
        assert_eq!(dim_k(7, 1), 1.0);
        assert_eq!(dim_k(4, 3), 15.0);
    }

    #[test]
    fn phi_examples() {
        let v = phi_k(1.3, 4, 3, &[0.0; 6]).unwrap();
        assert!((v - (1.3 / (2.0 * PI)).powi(3) * 15.0).abs() < 1e-14);
        let v = phi_k(2.0, 0, 1, &[1.0, 0.0]).unwrap();
        assert!((v - (-0.5f64).exp() / PI).abs() < 1e-15);
        let z = [0.3, -0.4, 1.1, 0.2];
        assert_eq!(phi_k(-2.5, 3, 2, &z).unwrap(), phi_k(2.5, 3, 2, &z).unwrap());
        assert!(phi_k(0.0, 0, 1, &[0.0, 0.0]).is_err());
    }
}
