//! Cylindrically radial functions described by their vertical Fourier
//! slice `f^λ(r) = ∫ f(z, t) e^{iλt} dt` with `r = |z|`.

use std::f64::consts::PI;

use num_complex::Complex64;

/// How the slice decays in `λ`; used to size λ-grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VerticalDecay {
    /// `f^λ = 0` for `|λ|` above the bound.
    Compact(f64),
    /// `|f^λ| ≲ e^{−rate·|λ|}`.
    Exponential(f64),
    /// `|f^λ| ≲ |λ|^{−order}`.
    Polynomial(f64),
}

pub trait RadialProfile: Sync {
    /// `f^λ(r)`.
    fn slice(&self, r: f64, lambda: f64) -> Complex64;

    /// Radius beyond which the slice vanishes (`Some`) or is negligible
    /// at double precision (`None` means "use [`RadialProfile::decay_radius`]").
    fn radial_support(&self) -> Option<f64>;

    /// Radius past which `|f^λ(r)|` is below ~1e−18 of its peak.
    fn decay_radius(&self, lambda: f64) -> f64 {
        let _ = lambda;
        self.radial_support().unwrap_or(f64::INFINITY)
    }

    fn vertical_decay(&self) -> VerticalDecay;
}

/// `χ_{B_ρ}`: slice `2 sin(ρ²λ)/λ` on `r ≤ ρ`.
#[derive(Clone, Copy, Debug)]
pub struct BoxProfile {
    pub rho: f64,
}

impl BoxProfile {
    pub fn unit() -> Self {
        Self { rho: 1.0 }
    }
}

impl RadialProfile for BoxProfile {
    fn slice(&self, r: f64, lambda: f64) -> Complex64 {
        if r > self.rho {
            return Complex64::new(0.0, 0.0);
        }
        let h = self.rho * self.rho;
        let v = if lambda == 0.0 {
            2.0 * h
        } else {
            2.0 * (h * lambda).sin() / lambda
        };
        Complex64::new(v, 0.0)
    }

    fn radial_support(&self) -> Option<f64> {
        Some(self.rho)
    }

    fn vertical_decay(&self) -> VerticalDecay {
        VerticalDecay::Polynomial(1.0)
    }
}

/// Heat kernel `q_s` on ℍⁿ, via the Mehler closed form of its slice
/// `Σ_k e^{−(2k+n)|λ|s} φ_k^λ(r) = (|λ|/(4π sinh|λ|s))ⁿ e^{−(|λ|r²/4)coth(|λ|s)}`.
#[derive(Clone, Copy, Debug)]
pub struct HeatProfile {
    pub s: f64,
    pub n: usize,
}

impl HeatProfile {
    pub fn new(s: f64, n: usize) -> Self {
        assert!(s > 0.0 && n >= 1);
        Self { s, n }
    }

    /// `(prefactor, exponent rate)` with slice = prefactor·e^{−rate·r²}.
    fn parts(&self, lambda: f64) -> (f64, f64) {
        let a = lambda.abs() * self.s;
        if a < 1e-8 {
            let pre = (1.0 / (4.0 * PI * self.s)).powi(self.n as i32);
            return (pre, 1.0 / (4.0 * self.s));
        }
        let pre = (lambda.abs() / (4.0 * PI * a.sinh())).powi(self.n as i32);
        (pre, 0.25 * lambda.abs() / a.tanh())
    }
}

impl RadialProfile for HeatProfile {
    fn slice(&self, r: f64, lambda: f64) -> Complex64 {
        let (pre, rate) = self.parts(lambda);
        Complex64::new(pre * (-rate * r * r).exp(), 0.0)
    }

    fn radial_support(&self) -> Option<f64> {
        None
    }

    fn decay_radius(&self, lambda: f64) -> f64 {
        (42.0 / self.parts(lambda).1).sqrt()
    }

    fn vertical_decay(&self) -> VerticalDecay {
        VerticalDecay::Exponential(self.n as f64 * self.s)
    }
}

/// `f(z, t) = e^{−a|z|² − bt²}` with slice `√(π/b) e^{−λ²/4b} e^{−ar²}`.
#[derive(Clone, Copy, Debug)]
pub struct GaussianProfile {
    pub a: f64,
    pub b: f64,
}

impl GaussianProfile {
    /// `‖f‖₂²` on ℍⁿ: `(π/2a)ⁿ √(π/2b)`.
    pub fn l2_norm_sq(&self, n: usize) -> f64 {
        (PI / (2.0 * self.a)).powi(n as i32) * (PI / (2.0 * self.b)).sqrt()
    }
}

impl RadialProfile for GaussianProfile {
    fn slice(&self, r: f64, lambda: f64) -> Complex64 {
        let v = (PI / self.b).sqrt() * (-lambda * lambda / (4.0 * self.b) - self.a * r * r).exp();
        Complex64::new(v, 0.0)
    }

    fn radial_support(&self) -> Option<f64> {
        None
    }

    fn decay_radius(&self, _lambda: f64) -> f64 {
        (42.0 / self.a).sqrt()
    }

    fn vertical_decay(&self) -> VerticalDecay {
        VerticalDecay::Exponential(0.0)
    }
}

/// The zero function.
#[derive(Clone, Copy, Debug)]
pub struct ZeroProfile;

impl RadialProfile for ZeroProfile {
    fn slice(&self, _r: f64, _lambda: f64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn radial_support(&self) -> Option<f64> {
        Some(1.0)
    }

    fn vertical_decay(&self) -> VerticalDecay {
        VerticalDecay::Compact(0.0)
    }
}

/// A profile given by a closure, with explicit support radius.
pub struct FnProfile<F> {
    pub slice: F,
    pub support: f64,
    pub decay: VerticalDecay,
}

impl<F: Fn(f64, f64) -> Complex64 + Sync> RadialProfile for FnProfile<F> {
    fn slice(&self, r: f64, lambda: f64) -> Complex64 {
        (self.slice)(r, lambda)
    }

    fn radial_support(&self) -> Option<f64> {
        Some(self.support)
    }

    fn vertical_decay(&self) -> VerticalDecay {
        self.decay
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::phi_k_radial;

    #[test]
    fn heat_slice_matches_eigen_series() {
        for n in 1..=2usize {
            let p = HeatProfile::new(0.5, n);
            for &(lambda, r) in &[(1.0, 0.0), (1.0, 0.7), (-3.0, 1.2), (0.2, 2.0)] {
                let series: f64 = (0..400)
                    .map(|k| {
                        (-(2.0 * k as f64 + n as f64) * f64::abs(lambda) * 0.5).exp()
                            * phi_k_radial(lambda, k, n, r * r).unwrap()
                    })
                    .sum();
                let v = p.slice(r, lambda).re;
                assert!(
                    (v - series).abs() < 1e-12 * series.abs().max(1e-3),
                    "n={n} λ={lambda} r={r}"
                );
            }
        }
    }

    #[test]
    fn heat_slice_small_lambda_limit() {
        let p = HeatProfile::new(0.3, 1);
        let a = p.slice(0.4, 1e-10).re;
        let b = p.slice(0.4, 1e-6).re;
        assert!((a - b).abs() < 1e-9 * a);
    }

    #[test]
    fn box_slice() {
        let b = BoxProfile { rho: 0.5 };
        assert_eq!(b.slice(0.6, 1.0).re, 0.0);
        assert!((b.slice(0.5, 2.0).re - (0.5f64).sin()).abs() < 1e-15);
        assert_eq!(b.slice(0.1, 0.0).re, 0.5);
        assert_eq!(b.slice(0.1, -2.0), b.slice(0.1, 2.0).conj());
    }
}
