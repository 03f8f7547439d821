//! Growth of the quadratic discrepancy with the number of points.

use serde::Serialize;

use super::direct::{DirectSampler, McConfig};
use super::generate::{gen_iid, gen_jittered};
use super::measure::MeasureModel;
use super::pointset::PointSet;
use super::spectral::{SpectralConfig, SpectralPlan};
use crate::error::{Error, Result};

/// Ordinary least squares `y = a + b·x`; returns `(b, stderr(b), a)`.
/// The standard error is NaN for two points.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points");
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let se = if xs.len() > 2 {
        let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
        (rss / (m - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    (b, se, a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    Iid,
    Jittered,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Iid => "iid",
            Generator::Jittered => "jittered",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "iid" => Some(Generator::Iid),
            "jittered" => Some(Generator::Jittered),
            _ => None,
        }
    }

    pub fn generate(&self, mu: &MeasureModel, big_n: usize, seed: u64) -> PointSet {
        match self {
            Generator::Iid => gen_iid(mu, big_n, seed),
            Generator::Jittered => gen_jittered(mu, big_n, seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub generator: &'static str,
    pub n_target: usize,
    pub n_actual: usize,
    pub rep: usize,
    pub l2: f64,
    pub stderr: f64,
    pub trunc: f64,
}

/// Direct and spectral values for the first set of the smallest size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralAudit {
    pub n_target: usize,
    pub direct: f64,
    pub direct_stderr: f64,
    pub spectral: f64,
    pub spectral_trunc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingResult {
    pub rows: Vec<ScalingRow>,
    pub slope: f64,
    pub slope_stderr: f64,
    pub audit: Option<SpectralAudit>,
    /// Sets whose l2 falls below 0.3 of the lower `c·N^{1/2}` envelope.
    pub roth_violations: usize,
}

impl ScalingResult {
    /// `(mean N_actual, mean l2)` per target size, in input order.
    pub fn means(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(usize, f64, f64, usize)> = Vec::new();
        for r in &self.rows {
            match out.iter_mut().find(|e| e.0 == r.n_target) {
                Some(e) => {
                    e.1 += r.n_actual as f64;
                    e.2 += r.l2;
                    e.3 += 1;
                }
                None => out.push((r.n_target, r.n_actual as f64, r.l2, 1)),
            }
        }
        out.into_iter()
            .map(|(_, n, l, c)| (n / c as f64, l / c as f64))
            .collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "generator,N_target,N_actual,rep,l2,stderr,trunc")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{:e},{:e},{:e}",
                r.generator, r.n_target, r.n_actual, r.rep, r.l2, r.stderr, r.trunc
            )?;
        }
        writeln!(w, "slope,slope_stderr")?;
        writeln!(w, "{:e},{:e}", self.slope, self.slope_stderr)?;
        Ok(())
    }
}

/// Seed of repetition `rep` at size `big_n` (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, big_n: usize, rep: usize) -> u64 {
    let mut x =
        seed ^ (big_n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (rep as u64).wrapping_mul(0xd1b5_4a32_d192_ed03);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Mean l2 per size on one shared direct sample, and the slope of
/// `log(mean l2)` against `log(mean N_actual)`. With `audit` set, the first
/// set of the smallest size is also evaluated on the spectral path.
pub fn scaling_study(
    mu: &MeasureModel,
    generator: Generator,
    n_list: &[usize],
    reps: usize,
    seed: u64,
    mc: McConfig,
    audit: Option<SpectralConfig>,
) -> Result<ScalingResult> {
    if n_list.len() < 4 || reps < 3 {
        return Err(Error::Precondition(
            "scaling needs at least 4 positive sizes and 3 repetitions".into(),
        ));
    }
    scaling_table(mu, generator, n_list, reps, seed, mc, audit)
}

/// [`scaling_study`] without the minimum-size requirements, for quick
/// runs. The slope needs two distinct sizes; with fewer it is NaN.
pub fn scaling_table(
    mu: &MeasureModel,
    generator: Generator,
    n_list: &[usize],
    reps: usize,
    seed: u64,
    mc: McConfig,
    audit: Option<SpectralConfig>,
) -> Result<ScalingResult> {
    if n_list.is_empty() || reps == 0 || n_list.contains(&0) {
        return Err(Error::Precondition(
            "scaling needs positive sizes and at least one repetition".into(),
        ));
    }
    let sampler = DirectSampler::new(mu, mc)?;
    let mut rows = Vec::with_capacity(n_list.len() * reps);
    for &big_n in n_list {
        for rep in 0..reps {
            let p = generator.generate(mu, big_n, derive_seed(seed, big_n, rep));
            let est = sampler.l2(&p);
            rows.push(ScalingRow {
                generator: generator.name(),
                n_target: big_n,
                n_actual: p.len(),
                rep,
                l2: est.value,
                stderr: est.stat_stderr,
                trunc: est.trunc_bound,
            });
        }
    }
    let audit = match audit {
        Some(cfg) => {
            let smallest = *n_list.iter().min().unwrap();
            let p = generator.generate(mu, smallest, derive_seed(seed, smallest, 0));
            let d = sampler.l2(&p);
            let s = SpectralPlan::new(mu, cfg)?.l2(&p)?;
            Some(SpectralAudit {
                n_target: smallest,
                direct: d.value,
                direct_stderr: d.stat_stderr,
                spectral: s.value,
                spectral_trunc: s.trunc_bound,
            })
        }
        None => None,
    };
    let mut result = ScalingResult {
        rows,
        slope: 0.0,
        slope_stderr: 0.0,
        audit,
        roth_violations: 0,
    };
    let means = result.means();
    let xs: Vec<f64> = means.iter().map(|m| m.0.ln()).collect();
    let ys: Vec<f64> = means.iter().map(|m| m.1.ln()).collect();
    if xs.len() >= 2 {
        let (slope, se, _) = least_squares(&xs, &ys);
        result.slope = slope;
        result.slope_stderr = se;
    } else {
        result.slope = f64::NAN;
        result.slope_stderr = f64::NAN;
    }
    // Lower envelope c·N^{1/2} through the lowest per-size mean.
    let c = means.iter().map(|(n, l)| l / n.sqrt()).fold(f64::INFINITY, f64::min);
    result.roth_violations = result
        .rows
        .iter()
        .filter(|r| r.l2 < 0.3 * c * (r.n_actual as f64).sqrt())
        .count();
    Ok(result)
}
