//! The heat kernel `q_s` on ℍⁿ and the band-limited kernel
//! `K_s = F ∗_t q_s`, whose spectrum is `F̂(λ)e^{−(2k+n)|λ|s}`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::gft::{HeatProfile, LambdaGrid, RadialProfile};
use crate::hgroup::HPoint;
use crate::quad::{integrate_panels, pairwise_sum, uniform_breaks, GaussLegendre, QuadConfig};
use crate::specfun::{dim_k, laguerre_lambda_into, rk};

// Composite rule on [0, 1] holding the cached F̂ values.
const SPECTRAL_PANELS: usize = 48;
const SPECTRAL_ORDER: usize = 16;

/// The bump `Ψ`, its transform square `F` and `F̂ = (Ψ∗Ψ)/2π`.
#[derive(Clone, Debug)]
pub struct CutoffPair {
    scale: f64,
    /// `‖Ψ‖₂²` after normalization (should be 2π).
    pub psi_norm_check: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    fhat: Vec<f64>,
}

/// `Ψ(λ) = c·exp(−1/(¼−λ²))` on `|λ| < ½` with `‖Ψ‖₂ = √(2π)`; `F̂` is
/// tabulated on a fixed λ-rule for the spectral sums.
pub fn build_cutoff() -> Result<CutoffPair> {
    let bump = |l: f64| {
        if l.abs() < 0.5 {
            (-1.0 / (0.25 - l * l)).exp()
        } else {
            0.0
        }
    };
    let cfg = QuadConfig {
        abs_tol: 1e-16,
        rel_tol: 1e-13,
        max_panels: 2000,
    };
    let sq = integrate_panels(|l: f64| bump(l).powi(2), &uniform_breaks(-0.5, 0.5, 8), cfg)?.value;
    let scale = (2.0 * PI / sq).sqrt();
    let mut cut = CutoffPair {
        scale,
        psi_norm_check: 0.0,
        nodes: Vec::new(),
        weights: Vec::new(),
        fhat: Vec::new(),
    };
    cut.psi_norm_check = integrate_panels(|l: f64| cut.psi(l).powi(2), &uniform_breaks(-0.5, 0.5, 8), cfg)?.value;
    let breaks = uniform_breaks(0.0, 1.0, SPECTRAL_PANELS);
    let (nodes, weights) = GaussLegendre::cached(SPECTRAL_ORDER).composite(&breaks);
    let fhat = nodes.iter().map(|&l| cut.f_hat(l)).collect::<Result<Vec<_>>>()?;
    cut.nodes = nodes;
    cut.weights = weights;
    cut.fhat = fhat;
    Ok(cut)
}

impl CutoffPair {
    pub fn psi(&self, l: f64) -> f64 {
        if l.abs() < 0.5 {
            self.scale * (-1.0 / (0.25 - l * l)).exp()
        } else {
            0.0
        }
    }

    /// `F̂(λ) = (1/2π)∫Ψ(μ)Ψ(λ−μ)dμ`, supported in `[−1, 1]`.
    pub fn f_hat(&self, l: f64) -> Result<f64> {
        let a = l.abs();
        if a >= 1.0 {
            return Ok(0.0);
        }
        let (lo, hi) = (a - 0.5, 0.5);
        let cfg = QuadConfig {
            abs_tol: 1e-15,
            rel_tol: 1e-13,
            max_panels: 2000,
        };
        let r = integrate_panels(|m: f64| self.psi(m) * self.psi(a - m), &uniform_breaks(lo, hi, 8), cfg)?;
        Ok(r.value / (2.0 * PI))
    }

    /// `F(t) = ((1/2π)∫Ψ(λ)e^{−iλt}dλ)²`.
    pub fn f(&self, t: f64) -> Result<f64> {
        let panels = ((t.abs() / 2.0).ceil() as usize).max(8);
        let cfg = QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_panels: 4 * panels + 2000,
        };
        let g = integrate_panels(
            |l: f64| self.psi(l) * (l * t).cos(),
            &uniform_breaks(0.0, 0.5, panels),
            cfg,
        )?;
        Ok((g.value / PI).powi(2))
    }

    /// Cached `(λ_i, w_i, F̂(λ_i))` on `[0, 1]`.
    pub fn spectral_rule(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.fhat)
            .map(|((&l, &w), &f)| (l, w, f))
    }
}

/// `K̂_s(λ,k) = F̂(λ)e^{−(2k+n)|λ|s}`.
pub fn k_s_hat(cut: &CutoffPair, s: f64, l: f64, k: usize, n: usize) -> Result<f64> {
    check_s(s)?;
    if l.abs() > 1.0 {
        return Ok(0.0);
    }
    Ok(cut.f_hat(l)? * (-(2.0 * k as f64 + n as f64) * l.abs() * s).exp())
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain(format!("K_s needs s in (0, 1), got {s}")));
    }
    Ok(())
}

/// `Σ_k e^{−(2k+n)|λ|s}φ_k^λ(z)` summed in closed form (Mehler).
pub fn heat_slice(s: f64, l: f64, z_norm_sq: f64, n: usize) -> f64 {
    HeatProfile::new(s, n).slice(z_norm_sq.sqrt(), l).re
}

/// `q_s(z,t) = (1/π)∫₀^∞ cos(λt) Σ_k e^{−(2k+n)λs}φ_k^λ(z) dλ`, with the
/// k-sum taken in closed form.
pub fn q_s_eval(s: f64, p: &HPoint) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(format!("heat kernel needs s > 0, got {s}")));
    }
    let n = p.n();
    let r2 = p.z_norm_sq();
    let rate = n as f64 * s + 0.25 * r2;
    let upper = (60.0 + n as f64 * (60.0 / rate).ln().max(0.0)) / rate;
    let panels = ((upper * p.t.abs() / PI).ceil() as usize).max(16);
    let peak = (1.0 / (4.0 * PI * s)).powi(n as i32) / s;
    let cfg = QuadConfig {
        abs_tol: 1e-13 * peak,
        rel_tol: 0.0,
        max_panels: 8 * panels + 4000,
    };
    let r = integrate_panels(
        |l: f64| (l * p.t).cos() * heat_slice(s, l, r2, n),
        &uniform_breaks(0.0, upper, panels),
        cfg,
    )?;
    Ok(r.value / PI)
}

/// A truncated spectral sum with the bound on what was dropped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// `q_s` from the series truncated at `k_max` on the positive λ-grid
/// `grid`; the dropped k-terms are bounded through `|φ_k^λ| ≤ (|λ|/2π)ⁿdim(k)`
/// by the exact sum `Σ_{k>K} dim(k)xᵏ`, `x = e^{−2|λ|s}`, and
/// `|λ| > λ_max` by the closed-form slice at `z = 0`.
pub fn q_s_series(s: f64, p: &HPoint, k_max: usize, grid: &LambdaGrid, tol: f64) -> Result<SeriesValue> {
    spectral_series(s, p, k_max, grid, tol, true, |_| 1.0)
}

/// `K_s` from the series truncated at `k_max`, on the cached λ-rule.
pub fn k_s_series(cut: &CutoffPair, s: f64, p: &HPoint, k_max: usize, tol: f64) -> Result<SeriesValue> {
    check_s(s)?;
    let grid = LambdaGrid {
        nodes: cut.nodes.clone(),
        weights: cut.weights.clone(),
    };
    // F̂ vanishes beyond 1: no λ-tail.
    spectral_series(s, p, k_max, &grid, tol, false, |i| cut.fhat[i])
}

fn spectral_series(
    s: f64,
    p: &HPoint,
    k_max: usize,
    grid: &LambdaGrid,
    tol: f64,
    lambda_tail: bool,
    weight: impl Fn(usize) -> f64,
) -> Result<SeriesValue> {
    if !grid.is_half() {
        return Err(domain("series evaluation expects a positive λ-grid"));
    }
    let n = p.n();
    let nf = n as f64;
    let delta = nf - 1.0;
    let r2 = p.z_norm_sq();
    let kk = k_max + 1;
    let rks: Vec<f64> = (0..kk).map(|k| rk(k, delta)).collect();
    let mut lag = vec![0.0; kk];
    let mut terms = Vec::with_capacity(grid.len());
    let mut tails = Vec::with_capacity(grid.len());
    for (i, (&l, &w)) in grid.nodes.iter().zip(&grid.weights).enumerate() {
        let x = 0.5 * l * r2;
        if x > 0.0 {
            laguerre_lambda_into(delta, x, &mut lag)?;
            let sc = x.powf(-0.5 * delta);
            for (v, r) in lag.iter_mut().zip(&rks) {
                *v *= sc / r;
            }
        } else {
            for (k, v) in lag.iter_mut().enumerate() {
                *v = dim_k(k, n);
            }
        }
        let damp = (-2.0 * l * s).exp();
        let mut e = (-nf * l * s).exp();
        let mut acc = 0.0;
        for v in &lag {
            acc += e * v;
            e *= damp;
        }
        let scale = (l / (2.0 * PI)).powi(n as i32) * weight(i);
        terms.push(w * scale * (l * p.t).cos() * acc);
        let geo = (-nf * l * s).exp() * geometric_tail(kk, n, damp);
        tails.push(w * scale.abs() * geo);
    }
    let value = pairwise_sum(&terms) / PI;
    let mut tail = pairwise_sum(&tails) / PI;
    let top = grid.nodes.last().copied().unwrap_or(0.0);
    if lambda_tail {
        // |Σ_k e^{−(2k+n)λs}φ_k| ≤ the closed form at z = 0, integrated past λ_max.
        let upper = top + 60.0 / (nf * s);
        let cfg = QuadConfig::abs(1e-16);
        let r = integrate_panels(|l: f64| heat_slice(s, l, 0.0, n), &uniform_breaks(top, upper, 32), cfg)?;
        tail += r.value / PI;
    }
    if tail > tol {
        return Err(Error::Truncation {
            bound: tail,
            tolerance: tol,
        });
    }
    Ok(SeriesValue {
        value,
        tail_bound: tail,
    })
}

/// `Σ_{k≥m} dim(k)xᵏ = (1−x)^{−n} Σ_{j<n} C(m+n−1, j)(1−x)ʲx^{m+n−1−j}`,
/// the upper tail of a negative binomial law.
fn geometric_tail(m: usize, n: usize, x: f64) -> f64 {
    let y = 1.0 - x;
    let top = (m + n - 1) as f64;
    let mut binom = 1.0;
    let mut sum = 0.0;
    for j in 0..n {
        if j > 0 {
            binom *= (top - (j - 1) as f64) / j as f64;
        }
        sum += binom * y.powi(j as i32) * x.powf(top - j as f64);
    }
    sum / y.powi(n as i32)
}

/// `K_s(z,t) = (1/π)∫₀¹ cos(λt)F̂(λ)Σ_k e^{−(2k+n)λs}φ_k^λ(z) dλ`, the
/// k-sum in closed form.
pub fn k_s_eval(cut: &CutoffPair, s: f64, p: &HPoint) -> Result<f64> {
    check_s(s)?;
    let n = p.n();
    let r2 = p.z_norm_sq();
    let terms: Vec<f64> = cut
        .spectral_rule()
        .map(|(l, w, f)| w * f * (l * p.t).cos() * heat_slice(s, l, r2, n))
        .collect();
    Ok(pairwise_sum(&terms) / PI)
}

/// `K_s(z,t) = ∫F(t−τ)q_s(z,τ)dτ` by direct quadrature in τ.
pub fn k_s_convolution(cut: &CutoffPair, s: f64, p: &HPoint) -> Result<f64> {
    check_s(s)?;
    let r2 = p.z_norm_sq();
    // q_s(z,·) is negligible past this window.
    let half = 12.0 * s + 3.0 * r2 + 1.0;
    let peak = k_s_eval(cut, s, &HPoint::origin(p.n()))?;
    let cfg = QuadConfig {
        abs_tol: 1e-9 * peak,
        rel_tol: 0.0,
        max_panels: 4000,
    };
    let mut err = None;
    let r = integrate_panels(
        |tau: f64| {
            let q = HPoint::new(p.z.clone(), tau);
            match (cut.f(p.t - tau), q_s_eval(s, &q)) {
                (Ok(f), Ok(v)) => f * v,
                (Err(e), _) | (_, Err(e)) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        },
        &uniform_breaks(-half, half, 24),
        cfg,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// `value ≤ c·e^{−a·x}` fitted on samples `(x, value)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FittedBound {
    pub c: f64,
    pub a: f64,
}

impl FittedBound {
    /// Takes half the smallest observed log-decay rate relative to the
    /// largest sample as `a`, then the smallest `c` covering the samples,
    /// padded by `margin`.
    pub fn fit(samples: &[(f64, f64)], margin: f64) -> Result<Self> {
        let top = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        if !(top > 0.0) {
            return Err(domain("bound fitting needs a positive sample"));
        }
        let a = samples
            .iter()
            .filter(|(x, v)| *x > 0.0 && *v > 0.0 && *v < top)
            .map(|(x, v)| (top / v).ln() / x)
            .fold(f64::INFINITY, f64::min);
        let a = if a.is_finite() { 0.5 * a } else { 0.0 };
        let c = samples.iter().map(|(x, v)| v * (a * x).exp()).fold(0.0f64, f64::max) * margin;
        Ok(Self { c, a })
    }

    pub fn bound(&self, x: f64) -> f64 {
        self.c * (-self.a * x).exp()
    }

    /// Samples violating the bound.
    pub fn violations(&self, samples: &[(f64, f64)]) -> usize {
        samples.iter().filter(|(x, v)| *v > self.bound(*x)).count()
    }
}
