//! Scalar group Fourier coefficients `f̂(λ, k)` of radial functions, the
//! box coefficients `χ̂_B(λ, k)`, and a batched engine producing whole
//! k-columns of `χ̂_B` and of the ρ-averages `∫₀¹|χ̂_{B_ρ}(λ,k)|² dρ`.

use num_complex::Complex64;

use super::profile::RadialProfile;
use crate::error::{domain, Result};
use crate::quad::{integrate_panels, uniform_breaks, GaussLegendre, QuadConfig};
use crate::specfun::{laguerre_lambda, laguerre_lambda_into, rk};

/// Requested absolute tolerance for single coefficients.
pub const COEFF_TOL: f64 = 1e-9;

/// Beyond `x_cut(ν)` every `Λ_k^{n−1}` with `4k + 2n ≤ ν` is below 1e−17.
pub fn laguerre_cutoff(nu: f64) -> f64 {
    nu + 40.0 * nu.cbrt() + 40.0
}

fn nu_of(k: usize, n: usize) -> f64 {
    (4 * k + 2 * n) as f64
}

fn panel_cap(panels: usize) -> usize {
    8 * panels + 4000
}

/// `f̂(λ,k) = r_k ∫₀^∞ f^λ(r)(|λ|r²)^{(1−n)/2} Λ_k^{n−1}(|λ|r²/2) r^{2n−1} dr`.
pub fn gft_radial<P: RadialProfile + ?Sized>(profile: &P, lambda: f64, k: usize, n: usize) -> Result<Complex64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(domain("group Fourier coefficient needs λ ≠ 0"));
    }
    let a = lambda.abs();
    let nu = nu_of(k, n);
    let r_cut = (2.0 * laguerre_cutoff(nu) / a).sqrt();
    let upper = r_cut.min(profile.decay_radius(lambda));
    // (|λ|r²)^{(1−n)/2} r^{2n−1} = |λ|^{(1−n)/2} rⁿ.
    let pre = rk(k, (n - 1) as f64) * a.powf(0.5 * (1.0 - n as f64));
    let wavelength = 2.0 * std::f64::consts::PI / (0.5 * nu * a).sqrt();
    let min_panels = (32usize.max(8 * k)).div_ceil(21);
    let panels = ((2.0 * upper / wavelength).ceil() as usize).max(min_panels).max(8);
    let breaks = uniform_breaks(0.0, upper, panels);
    let delta = (n - 1) as f64;
    let cfg = QuadConfig {
        abs_tol: COEFF_TOL / pre.max(1e-300),
        rel_tol: 0.0,
        max_panels: panel_cap(panels),
    };
    let r = integrate_panels(
        |r: f64| {
            let x = 0.5 * a * r * r;
            let l = laguerre_lambda(k, delta, x).unwrap_or(0.0);
            profile.slice(r, lambda) * (l * r.powi(n as i32))
        },
        &breaks,
        cfg,
    )?;
    Ok(r.value * pre)
}

/// `G_k(X) = ∫₀^X Λ_k^{n−1}(x) x^{(n−1)/2} dx`, computed as
/// `2∫₀^{√X} Λ_k(s²) sⁿ ds` by adaptive quadrature.
pub fn g_integral(k: usize, n: usize, upper_x: f64, abs_tol: f64) -> Result<f64> {
    if upper_x <= 0.0 {
        return Ok(0.0);
    }
    let nu = nu_of(k, n);
    let s_end = upper_x.min(laguerre_cutoff(nu)).sqrt();
    let wavelength = 2.0 * std::f64::consts::PI / nu.sqrt();
    let panels = ((2.0 * s_end / wavelength).ceil() as usize).max(4);
    let breaks = uniform_breaks(0.0, s_end, panels);
    let delta = (n - 1) as f64;
    let cfg = QuadConfig {
        abs_tol: 0.5 * abs_tol,
        rel_tol: 1e-13,
        max_panels: panel_cap(panels),
    };
    let r = integrate_panels(
        |s: f64| laguerre_lambda(k, delta, s * s).unwrap_or(0.0) * s.powi(n as i32),
        &breaks,
        cfg,
    )?;
    Ok(2.0 * r.value)
}

/// `r_k 2^{(n+1)/2} sin λ / λ^{n+1}` for `λ > 0`.
fn chi_prefactor(lambda: f64, k: usize, n: usize) -> f64 {
    rk(k, (n - 1) as f64) * 2f64.powf(0.5 * (n as f64 + 1.0)) * lambda.sin() / lambda.powi(n as i32 + 1)
}

/// `χ̂_B(λ,k) = r_k (sin λ/λ^{n+1}) 2^{(n+1)/2} ∫₀^{λ/2} Λ_k^{n−1}(x) x^{(n−1)/2} dx`
/// (for `λ > 0`; even in `λ`).
pub fn chihat_box(lambda: f64, k: usize, n: usize) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(domain("χ̂_B needs λ ≠ 0"));
    }
    let a = lambda.abs();
    let pre = chi_prefactor(a, k, n);
    if pre == 0.0 {
        return Ok(0.0);
    }
    let tol = (0.1 * COEFF_TOL / pre.abs()).max(1e-16);
    Ok(pre * g_integral(k, n, 0.5 * a, tol)?)
}

/// `χ̂_{B_ρ}(λ,k) = ρ^{2n+2} χ̂_B(ρ²λ, k)`.
pub fn chihat_box_dilated(rho: f64, lambda: f64, k: usize, n: usize) -> Result<f64> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(domain(format!("dilation radius must lie in (0, 1], got {rho}")));
    }
    Ok(rho.powi(2 * n as i32 + 2) * chihat_box(rho * rho * lambda, k, n)?)
}

/// Batched evaluation of `χ̂_B(λ, ·)` and of `∫₀¹|χ̂_{B_ρ}(λ, ·)|² dρ` for
/// all `k ≤ k_max` at once, on composite Gauss–Legendre panels in
/// `s = √x`. Cumulative integrals inside a panel use the spectral
/// integration matrix of the Legendre nodes.
#[derive(Clone, Debug)]
pub struct ChiEngine {
    n: usize,
    k_max: usize,
    gl: GaussLegendre,
    /// Row-major `m × m`: `∫_{−1}^{x_i} ℓ_j`.
    imat: Vec<f64>,
    rks: Vec<f64>,
}

const ENGINE_ORDER: usize = 16;

impl ChiEngine {
    pub fn new(n: usize, k_max: usize) -> Self {
        assert!(n >= 1);
        let gl = GaussLegendre::new(ENGINE_ORDER);
        let imat = integration_matrix(&gl);
        let rks = (0..=k_max).map(|k| rk(k, (n - 1) as f64)).collect();
        Self {
            n,
            k_max,
            gl,
            imat,
            rks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    fn nu_max(&self) -> f64 {
        nu_of(self.k_max, self.n)
    }

    fn s_cut(&self) -> f64 {
        laguerre_cutoff(self.nu_max()).sqrt()
    }

    // Fills vals[j*(K+1) + k] = 2 Λ_k(σ_j²) σ_jⁿ at the panel nodes.
    fn panel_integrand(&self, a: f64, b: f64, vals: &mut [f64]) -> Result<()> {
        let kk = self.k_max + 1;
        let delta = (self.n - 1) as f64;
        for (j, (s, _)) in self.gl.mapped(a, b).enumerate() {
            let row = &mut vals[j * kk..(j + 1) * kk];
            laguerre_lambda_into(delta, s * s, row)?;
            let f = 2.0 * s.powi(self.n as i32);
            for v in row.iter_mut() {
                *v *= f;
            }
        }
        Ok(())
    }

    fn panel_width(&self) -> f64 {
        (4.0 / self.nu_max().sqrt()).min(0.5)
    }

    /// `G_k(X)` for all `k ≤ k_max`.
    pub fn g_all(&self, upper_x: f64) -> Result<Vec<f64>> {
        let kk = self.k_max + 1;
        let mut g = vec![0.0; kk];
        if upper_x <= 0.0 {
            return Ok(g);
        }
        let s_end = upper_x.sqrt().min(self.s_cut());
        let panels = (s_end / self.panel_width()).ceil().max(1.0) as usize;
        let h = s_end / panels as f64;
        let mut vals = vec![0.0; ENGINE_ORDER * kk];
        for p in 0..panels {
            let a = p as f64 * h;
            self.panel_integrand(a, a + h, &mut vals)?;
            for (j, w) in self.gl.weights.iter().enumerate() {
                let wj = 0.5 * h * w;
                for (gk, v) in g.iter_mut().zip(&vals[j * kk..(j + 1) * kk]) {
                    *gk += wj * v;
                }
            }
        }
        Ok(g)
    }

    /// `χ̂_B(λ, k)` for all `k ≤ k_max`.
    pub fn chihat_all(&self, lambda: f64) -> Result<Vec<f64>> {
        if lambda == 0.0 {
            return Err(domain("χ̂_B needs λ ≠ 0"));
        }
        let a = lambda.abs();
        let mut g = self.g_all(0.5 * a)?;
        let base = 2f64.powf(0.5 * (self.n as f64 + 1.0)) * a.sin() / a.powi(self.n as i32 + 1);
        for (gk, r) in g.iter_mut().zip(&self.rks) {
            *gk *= r * base;
        }
        Ok(g)
    }

    /// `∫₀¹ |χ̂_{B_ρ}(λ, k)|² dρ` for all `k ≤ k_max`.
    ///
    /// With `s = ρ√(λ/2)` this is
    /// `r_k² 2^{n+1} λ^{−2n−2} √(2/λ) ∫₀^{√(λ/2)} sin²(2s²) G_k(s²)² ds`.
    pub fn avg_square_all(&self, lambda: f64) -> Result<Vec<f64>> {
        if lambda == 0.0 {
            return Err(domain("average needs λ ≠ 0"));
        }
        let a = lambda.abs();
        let kk = self.k_max + 1;
        let s_total = (0.5 * a).sqrt();
        let s_cut = self.s_cut();
        let width = self.panel_width().min(0.6 / s_total.max(1.0));
        let panels = (s_total / width).ceil().max(1.0) as usize;
        let h = s_total / panels as f64;
        let m = ENGINE_ORDER;
        let mut g = vec![0.0; kk];
        let mut acc = vec![0.0; kk];
        let mut vals = vec![0.0; m * kk];
        let mut g_nodes = vec![0.0; kk];
        for p in 0..panels {
            let lo = p as f64 * h;
            let hi = lo + h;
            let half = 0.5 * h;
            if lo >= s_cut {
                // G is constant from here on; only sin²(2s²) varies.
                let mut sw = 0.0;
                for (s, w) in self.gl.mapped(lo, hi) {
                    sw += w * (2.0 * s * s).sin().powi(2);
                }
                for (ak, gk) in acc.iter_mut().zip(&g) {
                    *ak += sw * gk * gk;
                }
                continue;
            }
            self.panel_integrand(lo, hi, &mut vals)?;
            for (i, (s, w)) in self.gl.mapped(lo, hi).enumerate() {
                g_nodes.copy_from_slice(&g);
                let row = &self.imat[i * m..(i + 1) * m];
                for (j, mij) in row.iter().enumerate() {
                    let c = half * mij;
                    for (gn, v) in g_nodes.iter_mut().zip(&vals[j * kk..(j + 1) * kk]) {
                        *gn += c * v;
                    }
                }
                let sw = w * (2.0 * s * s).sin().powi(2);
                for (ak, gn) in acc.iter_mut().zip(&g_nodes) {
                    *ak += sw * gn * gn;
                }
            }
            for (j, w) in self.gl.weights.iter().enumerate() {
                let wj = half * w;
                for (gk, v) in g.iter_mut().zip(&vals[j * kk..(j + 1) * kk]) {
                    *gk += wj * v;
                }
            }
        }
        let base = 2f64.powi(self.n as i32 + 1) * a.powi(-2 * self.n as i32 - 2) * (2.0 / a).sqrt();
        for (ak, r) in acc.iter_mut().zip(&self.rks) {
            *ak *= base * r * r;
        }
        Ok(acc)
    }
}

// M[i][j] = ∫_{−1}^{x_i} ℓ_j(x) dx for the Lagrange basis on the nodes,
// via the Legendre expansion ℓ_j = Σ_p w_j P_p(x_j) P_p (2p+1)/2 and
// ∫_{−1}^x P_p = (P_{p+1} − P_{p−1})/(2p+1).
pub(crate) fn integration_matrix(gl: &GaussLegendre) -> Vec<f64> {
    let m = gl.nodes.len();
    let legendre = |x: f64| {
        let mut p = vec![0.0; m + 1];
        p[0] = 1.0;
        if m >= 1 {
            p[1] = x;
        }
        for q in 2..=m {
            let qf = q as f64;
            p[q] = ((2.0 * qf - 1.0) * x * p[q - 1] - (qf - 1.0) * p[q - 2]) / qf;
        }
        p
    };
    let pn: Vec<Vec<f64>> = gl.nodes.iter().map(|&x| legendre(x)).collect();
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        let xi = gl.nodes[i];
        for j in 0..m {
            let mut v = 0.5 * (xi + 1.0);
            for p in 1..m {
                v += 0.5 * pn[j][p] * (pn[i][p + 1] - pn[i][p - 1]);
            }
            out[i * m + j] = gl.weights[j] * v;
        }
    }
    out
}
