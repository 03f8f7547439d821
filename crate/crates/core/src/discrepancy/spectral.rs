//! The spectral evaluator: `∫₀¹∫|D_N|²` as a λ-integral of Hermite-level
//! sums of `∫₀¹|χ̂_{B_ρ}(λ,k)|²dρ` against the point-set weights.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::measure::MeasureModel;
use super::pointset::PointSet;
use super::{BreakdownRow, DiscrepancyEstimate};
use crate::error::{domain, Error, Result};
use crate::gft::coefficients::integration_matrix;
use crate::gft::table::{extrapolate, hybrid_breaks};
use crate::gft::{chihat_box, eigen_factor, ChiEngine};
use crate::hgroup::{im_hermitian, GroupContext, HPoint};
use crate::quad::{pairwise_sum, GaussLegendre};
use crate::specfun::{dim_k, laguerre_lambda_into, rk};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    pub k_max: usize,
    pub lambda_max: f64,
    /// Width of the uniform λ-panels.
    pub panel_width: f64,
    /// Smallest break of the geometric refinement towards λ = 0.
    pub lambda_min: f64,
    /// Gauss–Legendre order per λ-panel.
    pub order: usize,
    /// Largest acceptable truncation estimate.
    pub tolerance: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            k_max: 200,
            lambda_max: 200.0,
            panel_width: 0.5,
            lambda_min: 1e-4,
            order: 8,
            tolerance: f64::INFINITY,
        }
    }
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && !v.is_nan();
        if self.k_max < 4
            || !self.lambda_max.is_finite()
            || !positive(self.lambda_max)
            || !positive(self.panel_width)
            || !positive(self.lambda_min)
            || !positive(self.tolerance)
            || !(2..=64).contains(&self.order)
        {
            return Err(Error::Precondition(format!("invalid spectral configuration {self:?}")));
        }
        Ok(())
    }
}

/// Which signed measure the weights describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaMode {
    /// `σ = Σ_j δ_{p_j} − Nμ`.
    Discrepancy,
    /// `σ = Σ_j δ_{p_j}`.
    PointsOnly,
}

/// `Lₖ^{n−1}(x)e^{−x/2}` for all `k`, that is `(2π/|λ|)ⁿφ_k^λ` at `x = |λ||z|²/2`.
struct LevelFunctions {
    delta: f64,
    rks: Vec<f64>,
    dims: Vec<f64>,
}

impl LevelFunctions {
    fn new(n: usize, k_max: usize) -> Self {
        let delta = (n - 1) as f64;
        Self {
            delta,
            rks: (0..=k_max).map(|k| rk(k, delta)).collect(),
            dims: (0..=k_max).map(|k| dim_k(k, n)).collect(),
        }
    }

    fn eval(&self, x: f64, out: &mut [f64]) -> Result<()> {
        if x < 1e-280 {
            out.copy_from_slice(&self.dims);
            return Ok(());
        }
        laguerre_lambda_into(self.delta, x, out)?;
        let scale = x.powf(0.5 * self.delta);
        for (v, r) in out.iter_mut().zip(&self.rks) {
            *v /= r * scale;
        }
        Ok(())
    }
}

fn weights_all(
    levels: &LevelFunctions,
    points: &[HPoint],
    lambda: f64,
    emu: &[f64],
    mode: SigmaMode,
) -> Result<Vec<f64>> {
    let kk = levels.dims.len();
    let big_n = points.len() as f64;
    let a = lambda.abs();
    let mut w: Vec<f64> = levels.dims.iter().map(|d| big_n * d).collect();
    let mut buf = vec![0.0; kk];
    for (j, p) in points.iter().enumerate() {
        for q in &points[j + 1..] {
            let dz: f64 = p.z.iter().zip(&q.z).map(|(u, v)| (u - v) * (u - v)).sum();
            let phase = lambda * (p.t - q.t - 0.5 * im_hermitian(&q.z, &p.z));
            let c = 2.0 * phase.cos();
            levels.eval(0.5 * a * dz, &mut buf)?;
            for (wk, b) in w.iter_mut().zip(&buf) {
                *wk += c * b;
            }
        }
    }
    if mode == SigmaMode::Discrepancy && !points.is_empty() {
        let mut cross = vec![0.0; kk];
        for p in points {
            let c = (lambda * p.t).cos();
            levels.eval(0.5 * a * p.z_norm_sq(), &mut buf)?;
            for (s, b) in cross.iter_mut().zip(&buf) {
                *s += c * b;
            }
        }
        for k in 0..kk {
            w[k] += -2.0 * big_n * emu[k] * cross[k] + big_n * big_n * emu[k] * emu[k] * levels.dims[k];
        }
    }
    Ok(w)
}

/// `Σ_{|α|=k}‖σ̂(λ)Φ_α^λ‖²` for the given signed measure.
pub fn spectral_weight_with(p: &PointSet, mu: &MeasureModel, lambda: f64, k: usize, mode: SigmaMode) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(domain("spectral weight needs λ ≠ 0"));
    }
    let n = mu.n();
    if p.n != n {
        return Err(domain("point set dimension does not match the measure"));
    }
    let levels = LevelFunctions::new(n, k);
    let mut emu = vec![0.0; k + 1];
    if mode == SigmaMode::Discrepancy {
        emu[k] = eigen_factor(n) * chihat_box(lambda, k, n)? / GroupContext::new(n).unit_box_volume();
    }
    Ok(weights_all(&levels, &p.points, lambda, &emu, mode)?[k])
}

pub fn spectral_weight(p: &PointSet, mu: &MeasureModel, lambda: f64, k: usize) -> Result<f64> {
    spectral_weight_with(p, mu, lambda, k, SigmaMode::Discrepancy)
}

/// Point-set independent tables on the λ-grid: the averages
/// `∫₀¹|χ̂_{B_ρ}(λ,k)|²dρ` and `E_n·μ̂(λ,k)`.
///
/// The average equals `λ^{−Q−1/2}/2·∫₀^λ u^{Q−1/2}χ̂_B(u,k)²du`, so one
/// cumulative integral along the grid produces it at every node.
#[derive(Clone, Debug)]
pub struct SpectralPlan {
    n: usize,
    cfg: SpectralConfig,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    avg: Vec<f64>,
    emu: Vec<f64>,
}

impl SpectralPlan {
    pub fn new(mu: &MeasureModel, cfg: SpectralConfig) -> Result<Self> {
        cfg.validate()?;
        let n = mu.n();
        let kk = cfg.k_max + 1;
        let q = GroupContext::new(n).q() as f64;
        let gl = GaussLegendre::new(cfg.order);
        let imat = integration_matrix(&gl);
        let breaks = hybrid_breaks(cfg.lambda_max, cfg.panel_width, cfg.lambda_min);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for pair in breaks.windows(2) {
            for (x, w) in gl.mapped(pair[0], pair[1]) {
                nodes.push(x);
                weights.push(w);
            }
        }
        let engine = ChiEngine::new(n, cfg.k_max);
        let chi: Vec<Vec<f64>> = nodes.par_iter().map(|&l| engine.chihat_all(l)).collect::<Result<_>>()?;

        let m = cfg.order;
        let mut avg = vec![0.0; nodes.len() * kk];
        let mut base = vec![0.0; kk];
        // The first panel touches λ = 0 where u^{Q−1/2} is not polynomial;
        // its averages come from the engine directly.
        for i in 0..m {
            avg[i * kk..(i + 1) * kk].copy_from_slice(&engine.avg_square_all(nodes[i])?);
        }
        let b1 = breaks[1];
        for (b, a) in base.iter_mut().zip(engine.avg_square_all(b1)?) {
            *b = 2.0 * b1.powf(q + 0.5) * a;
        }
        for (p, pair) in breaks.windows(2).enumerate().skip(1) {
            let half = 0.5 * (pair[1] - pair[0]);
            let f: Vec<Vec<f64>> = (0..m)
                .map(|j| {
                    let u = nodes[p * m + j];
                    let s = u.powf(q - 0.5);
                    chi[p * m + j].iter().map(|c| s * c * c).collect()
                })
                .collect();
            for i in 0..m {
                let idx = p * m + i;
                let norm = 0.5 * nodes[idx].powf(-q - 0.5);
                let row = &mut avg[idx * kk..(idx + 1) * kk];
                for k in 0..kk {
                    let c: f64 = (0..m).map(|j| imat[i * m + j] * f[j][k]).sum();
                    row[k] = (base[k] + half * c) * norm;
                }
            }
            for (j, fj) in f.iter().enumerate() {
                for k in 0..kk {
                    base[k] += half * gl.weights[j] * fj[k];
                }
            }
        }
        let scale = eigen_factor(n) / GroupContext::new(n).unit_box_volume();
        let emu = chi.iter().flat_map(|row| row.iter().map(move |c| scale * c)).collect();
        Ok(Self {
            n,
            cfg,
            nodes,
            weights,
            avg,
            emu,
        })
    }

    pub fn config(&self) -> &SpectralConfig {
        &self.cfg
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `∫₀¹|χ̂_{B_ρ}(λ_i,k)|²dρ` for all `k`.
    pub fn avg_row(&self, i: usize) -> &[f64] {
        let kk = self.cfg.k_max + 1;
        &self.avg[i * kk..(i + 1) * kk]
    }

    pub fn l2(&self, p: &PointSet) -> Result<DiscrepancyEstimate> {
        self.l2_with(p, SigmaMode::Discrepancy)
    }

    /// Evaluates the spectral formula; tails beyond `k_max` and `λ_max` are
    /// extrapolated from the last two doubling blocks, added to the value
    /// and reported as `trunc_bound`.
    pub fn l2_with(&self, p: &PointSet, mode: SigmaMode) -> Result<DiscrepancyEstimate> {
        if p.n != self.n {
            return Err(domain("point set dimension does not match the plan"));
        }
        let kk = self.cfg.k_max + 1;
        let levels = LevelFunctions::new(self.n, self.cfg.k_max);
        let e = eigen_factor(self.n);
        // Both signs of λ contribute equally.
        let prefactor = 2.0 * e * e / (2.0 * PI).powi(self.n as i32 + 1);
        // The j = ℓ terms contribute N·dim(k) to every weight; by Plancherel
        // their full integral is N·∫₀¹|B_ρ|dρ = N|B_1|/(Q+1). Only the rest
        // is truncated and extrapolated.
        let big_n = p.len() as f64;
        let rows: Vec<Vec<f64>> = self
            .nodes
            .par_iter()
            .enumerate()
            .map(|(i, &l)| {
                let w = weights_all(&levels, &p.points, l, &self.emu[i * kk..(i + 1) * kk], mode)?;
                let ln = prefactor * l.powi(self.n as i32);
                Ok(w.iter()
                    .zip(&levels.dims)
                    .zip(self.avg_row(i))
                    .map(|((wk, d), ak)| ln * (wk - big_n * d) * ak)
                    .collect())
            })
            .collect::<Result<_>>()?;
        let diag_rows: Vec<f64> = (0..self.nodes.len())
            .map(|i| {
                let ln = prefactor * self.nodes[i].powi(self.n as i32);
                let terms: Vec<f64> = levels
                    .dims
                    .iter()
                    .zip(self.avg_row(i))
                    .map(|(d, a)| ln * big_n * d * a)
                    .collect();
                pairwise_sum(&terms)
            })
            .collect();
        let ctx = GroupContext::new(self.n);
        let diagonal = big_n * ctx.unit_box_volume() / (ctx.q() as f64 + 1.0);

        let row_sums: Vec<f64> = rows.iter().map(|r| pairwise_sum(r)).collect();
        let mut columns = vec![0.0; kk];
        for (row, w) in rows.iter().zip(&self.weights) {
            for (c, v) in columns.iter_mut().zip(row) {
                *c += w * v;
            }
        }
        let weighted: Vec<f64> = row_sums.iter().zip(&self.weights).map(|(r, w)| r * w).collect();
        let truncated = pairwise_sum(&weighted);
        let diag_weighted: Vec<f64> = diag_rows.iter().zip(&self.weights).map(|(r, w)| r * w).collect();
        let diag_truncated = pairwise_sum(&diag_weighted);

        let top = self.cfg.lambda_max;
        let (mut upper, mut lower) = (0.0, 0.0);
        for ((l, w), r) in self.nodes.iter().zip(&self.weights).zip(&row_sums) {
            if *l > 0.5 * top {
                upper += w * r;
            } else if *l > 0.25 * top {
                lower += w * r;
            }
        }
        let (lambda_tail, lambda_bound) = signed_tail(lower, upper);
        let k_upper: f64 = columns[self.cfg.k_max / 2 + 1..].iter().sum();
        let k_lower: f64 = columns[self.cfg.k_max / 4 + 1..=self.cfg.k_max / 2].iter().sum();
        let (k_tail, k_bound) = signed_tail(k_lower, k_upper);
        let bound = lambda_bound + k_bound;
        let value = diagonal + truncated + lambda_tail + k_tail;
        if bound > self.cfg.tolerance {
            return Err(Error::Truncation {
                bound,
                tolerance: self.cfg.tolerance,
            });
        }
        let breakdown = columns
            .iter()
            .enumerate()
            .map(|(k, v)| BreakdownRow {
                key: format!("offdiag k={k}"),
                value: *v,
            })
            .chain([
                BreakdownRow {
                    key: "diagonal".into(),
                    value: diagonal,
                },
                BreakdownRow {
                    key: "diagonal_truncated".into(),
                    value: diag_truncated,
                },
                BreakdownRow {
                    key: "k_tail".into(),
                    value: k_tail,
                },
                BreakdownRow {
                    key: "lambda_tail".into(),
                    value: lambda_tail,
                },
            ])
            .collect();
        Ok(DiscrepancyEstimate {
            value: value.max(0.0),
            stat_stderr: 0.0,
            trunc_bound: bound,
            breakdown: Some(breakdown),
        })
    }
}

/// Tail of a signed sequence of doubling blocks as `(estimate, bound)`.
/// A geometric continuation is used when the blocks shrink without a sign
/// change; otherwise the estimate is zero and the last block bounds it.
fn signed_tail(lower: f64, upper: f64) -> (f64, f64) {
    if upper == 0.0 {
        return (0.0, 0.0);
    }
    if lower * upper > 0.0 && upper.abs() < lower.abs() {
        let est = upper.signum() * extrapolate(lower.abs(), upper.abs());
        return (est, est.abs());
    }
    (0.0, upper.abs())
}

pub fn l2_spectral(p: &PointSet, mu: &MeasureModel, cfg: SpectralConfig) -> Result<DiscrepancyEstimate> {
    SpectralPlan::new(mu, cfg)?.l2(p)
}
