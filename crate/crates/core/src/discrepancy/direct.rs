//! Local discrepancy and the direct Monte-Carlo evaluator of
//! `∫₀¹∫|D_N(z,t;ρ)|² dz dt dρ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::measure::{ball_volume, mu_box_mass, MeasureModel};
use super::pointset::PointSet;
use super::{BreakdownRow, DiscrepancyEstimate};
use crate::error::{Error, Result};
use crate::hgroup::{in_translated_box, HPoint};
use crate::quad::pairwise_sum;

/// Samples per RNG stream.
pub const BLOCK: usize = 1024;
pub const MIN_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
}

/// `Σ_j 1[p_j ∈ center∘B_ρ] − N·μ(center∘B_ρ)`.
pub fn local_discrepancy(p: &PointSet, mu: &MeasureModel, center: &HPoint, rho: f64) -> Result<f64> {
    let count = p.points.iter().filter(|q| in_translated_box(center, rho, q)).count();
    if p.is_empty() {
        return Ok(0.0);
    }
    Ok(count as f64 - p.len() as f64 * mu_box_mass(mu, center, rho)?)
}

/// Half-height and z-radius of the region outside which `D_N(·;ρ)` vanishes.
pub fn bounding_region(rho: f64) -> (f64, f64) {
    (1.0 + rho, 1.0 + rho * rho + 0.5 * rho * (1.0 + rho))
}

fn region_volume(n: usize, rho: f64) -> f64 {
    let (rz, ht) = bounding_region(rho);
    ball_volume(2 * n) * rz.powi(2 * n as i32) * 2.0 * ht
}

fn uniform_in_ball<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let mut z = vec![0.0; dim];
    loop {
        for v in z.iter_mut() {
            *v = rng.gen_range(-1.0..=1.0);
        }
        if z.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            break;
        }
    }
    z.iter_mut().for_each(|v| *v *= radius);
    z
}

pub(crate) fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

/// Uniform `(z, t, ρ)` samples over the bounding region with cached box masses.
/// The cache makes many point sets cheap to evaluate against one sample.
#[derive(Clone, Debug)]
pub struct DirectSampler {
    n: usize,
    centers: Vec<HPoint>,
    rhos: Vec<f64>,
    weights: Vec<f64>,
    masses: Vec<f64>,
}

impl DirectSampler {
    pub fn new(mu: &MeasureModel, mc: McConfig) -> Result<Self> {
        if mc.samples < MIN_SAMPLES {
            return Err(Error::Precondition(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                mc.samples
            )));
        }
        let n = mu.n();
        let blocks = mc.samples.div_ceil(BLOCK);
        let drawn: Vec<Vec<(HPoint, f64, f64, f64)>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = block_rng(mc.seed, b);
                let len = BLOCK.min(mc.samples - b * BLOCK);
                (0..len)
                    .map(|_| {
                        let rho = 1.0 - rng.gen::<f64>();
                        let (rz, ht) = bounding_region(rho);
                        let z = uniform_in_ball(&mut rng, 2 * n, rz);
                        let t = rng.gen_range(-ht..=ht);
                        let c = HPoint { z, t };
                        let m = mu_box_mass(mu, &c, rho)?;
                        Ok((c, rho, region_volume(n, rho), m))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = Self {
            n,
            centers: Vec::new(),
            rhos: Vec::new(),
            weights: Vec::new(),
            masses: Vec::new(),
        };
        for (c, rho, w, m) in drawn.into_iter().flatten() {
            s.centers.push(c);
            s.rhos.push(rho);
            s.weights.push(w);
            s.masses.push(m);
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Direct estimate for `p` on this sample.
    pub fn l2(&self, p: &PointSet) -> DiscrepancyEstimate {
        assert_eq!(p.n, self.n, "point set dimension mismatch");
        let big_n = p.len() as f64;
        let index = PointIndex::new(&p.points);
        let terms: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                let d = index.count(&self.centers[i], self.rhos[i]) as f64 - big_n * self.masses[i];
                self.weights[i] * d * d
            })
            .collect();
        let mut est = mean_estimate(&terms);
        est.breakdown = Some(self.strata(&terms));
        est
    }

    /// `N·∫∫μ(1−μ)`, the mean of [`Self::l2`] over iid sets of size `big_n`.
    pub fn expected_iid(&self, big_n: usize) -> DiscrepancyEstimate {
        let terms: Vec<f64> = self
            .masses
            .iter()
            .zip(&self.weights)
            .map(|(m, w)| big_n as f64 * w * m * (1.0 - m))
            .collect();
        mean_estimate(&terms)
    }

    /// Contribution of the ρ-deciles.
    fn strata(&self, terms: &[f64]) -> Vec<BreakdownRow> {
        let mut sums = [0.0f64; 10];
        for (rho, v) in self.rhos.iter().zip(terms) {
            sums[((rho * 10.0) as usize).min(9)] += v;
        }
        sums.iter()
            .enumerate()
            .map(|(i, s)| BreakdownRow {
                key: format!("rho[{:.1},{:.1}]", i as f64 / 10.0, (i + 1) as f64 / 10.0),
                value: s / terms.len() as f64,
            })
            .collect()
    }
}

fn mean_estimate(terms: &[f64]) -> DiscrepancyEstimate {
    let m = terms.len() as f64;
    let mean = pairwise_sum(terms) / m;
    let dev: Vec<f64> = terms.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (m - 1.0).max(1.0);
    DiscrepancyEstimate {
        value: mean.max(0.0),
        stat_stderr: (var / m).sqrt(),
        trunc_bound: 0.0,
        breakdown: None,
    }
}

pub fn l2_direct(p: &PointSet, mu: &MeasureModel, mc: McConfig) -> Result<DiscrepancyEstimate> {
    Ok(DirectSampler::new(mu, mc)?.l2(p))
}

/// `N·∫₀¹∫μ(box)(1−μ(box))`, estimated on the same sample as [`l2_direct`].
pub fn expected_iid_l2(mu: &MeasureModel, big_n: usize, mc: McConfig) -> Result<DiscrepancyEstimate> {
    Ok(DirectSampler::new(mu, mc)?.expected_iid(big_n))
}

/// Draws `samples` triples outside the bounding region (inside a larger
/// shell) and counts those where `D_N` is not exactly zero.
pub fn audit_bounding_region(p: &PointSet, mu: &MeasureModel, samples: usize, seed: u64) -> Result<usize> {
    let n = mu.n();
    let index = PointIndex::new(&p.points);
    let blocks = samples.div_ceil(BLOCK);
    let bad: Vec<usize> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed ^ 0x5eed_a0d1, b);
            let len = BLOCK.min(samples - b * BLOCK);
            let mut bad = 0;
            let mut done = 0;
            while done < len {
                let rho = 1.0 - rng.gen::<f64>();
                let (rz, ht) = bounding_region(rho);
                let z = uniform_in_ball(&mut rng, 2 * n, 2.0 * rz);
                let t = rng.gen_range(-2.0 * ht..=2.0 * ht);
                let inside = z.iter().map(|v| v * v).sum::<f64>() <= rz * rz && t.abs() <= ht;
                if inside {
                    continue;
                }
                done += 1;
                let c = HPoint { z, t };
                if index.count(&c, rho) != 0 || mu_box_mass(mu, &c, rho)? != 0.0 {
                    bad += 1;
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(bad.iter().sum())
}

/// Uniform grid over the first complex coordinate for box-membership counts.
pub(crate) struct PointIndex<'a> {
    points: &'a [HPoint],
    lo: f64,
    cell: f64,
    side: usize,
    starts: Vec<usize>,
    order: Vec<usize>,
}

impl<'a> PointIndex<'a> {
    pub(crate) fn new(points: &'a [HPoint]) -> Self {
        let extent = points
            .iter()
            .map(|p| p.z[0].abs().max(p.z[1].abs()))
            .fold(1.0f64, f64::max);
        let side = ((points.len() as f64).sqrt() / 2.0).ceil().clamp(1.0, 64.0) as usize;
        let lo = -extent;
        let cell = 2.0 * extent / side as f64;
        let key = |p: &HPoint| {
            let ix = (((p.z[0] - lo) / cell) as usize).min(side - 1);
            let iy = (((p.z[1] - lo) / cell) as usize).min(side - 1);
            iy * side + ix
        };
        let mut counts = vec![0usize; side * side + 1];
        for p in points {
            counts[key(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut order = vec![0usize; points.len()];
        for (j, p) in points.iter().enumerate() {
            let k = key(p);
            order[fill[k]] = j;
            fill[k] += 1;
        }
        Self {
            points,
            lo,
            cell,
            side,
            starts: counts,
            order,
        }
    }

    fn range(&self, centre: f64, rho: f64) -> Option<(usize, usize)> {
        let a = ((centre - rho - self.lo) / self.cell).floor();
        let b = ((centre + rho - self.lo) / self.cell).floor();
        if b < 0.0 || a >= self.side as f64 {
            return None;
        }
        Some((a.max(0.0) as usize, (b as usize).min(self.side - 1)))
    }

    pub(crate) fn count(&self, center: &HPoint, rho: f64) -> usize {
        let (Some((x0, x1)), Some((y0, y1))) = (self.range(center.z[0], rho), self.range(center.z[1], rho)) else {
            return 0;
        };
        let mut total = 0;
        for iy in y0..=y1 {
            let row = iy * self.side;
            for &j in &self.order[self.starts[row + x0]..self.starts[row + x1 + 1]] {
                if in_translated_box(center, rho, &self.points[j]) {
                    total += 1;
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::generate::gen_iid;

    fn mc(samples: usize, seed: u64) -> McConfig {
        McConfig { samples, seed }
    }

    #[test]
    fn index_matches_brute_force() {
        let mu = MeasureModel::normalized_box(1);
        let p = gen_iid(&mu, 300, 4);
        let index = PointIndex::new(&p.points);
        let mut rng = block_rng(9, 0);
        for _ in 0..2000 {
            let rho = rng.gen_range(0.01..1.0);
            let c = HPoint {
                z: uniform_in_ball(&mut rng, 2, 2.0),
                t: rng.gen_range(-2.5..2.5),
            };
            let brute = p.points.iter().filter(|q| in_translated_box(&c, rho, q)).count();
            assert_eq!(index.count(&c, rho), brute);
        }
    }

    #[test]
    fn local_discrepancy_examples() {
        let mu = MeasureModel::normalized_box(1);
        let c = HPoint::h1(0.2, 0.1, -0.3);
        assert_eq!(local_discrepancy(&PointSet::empty(1), &mu, &c, 0.5).unwrap(), 0.0);
        let one = PointSet::new(1, vec![c.clone()], "manual", 0);
        assert!((local_discrepancy(&one, &mu, &c, 1e-3).unwrap() - 1.0).abs() < 1e-6);
        let away = PointSet::new(1, vec![HPoint::h1(-0.9, 0.0, 0.0); 3], "manual", 0);
        let m = mu_box_mass(&mu, &c, 0.3).unwrap();
        assert!((local_discrepancy(&away, &mu, &c, 0.3).unwrap() + 3.0 * m).abs() < 1e-15);
    }

    #[test]
    fn empty_set_is_exactly_zero() {
        let mu = MeasureModel::normalized_box(1);
        let est = l2_direct(&PointSet::empty(1), &mu, mc(2000, 1)).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.stat_stderr, 0.0);
        assert!(l2_direct(&PointSet::empty(1), &mu, mc(999, 1)).is_err());
    }

    #[test]
    fn doubling_the_set_quadruples_l2() {
        let mu = MeasureModel::normalized_box(1);
        let sampler = DirectSampler::new(&mu, mc(20_000, 3)).unwrap();
        let p = gen_iid(&mu, 10, 8);
        let mut doubled = p.clone();
        doubled.points.extend(p.points.iter().cloned());
        let a = sampler.l2(&p).value;
        let b = sampler.l2(&doubled).value;
        assert!((b - 4.0 * a).abs() < 1e-9 * b, "{a} {b}");
    }

    #[test]
    fn deterministic_and_block_independent() {
        let mu = MeasureModel::normalized_box(1);
        let p = gen_iid(&mu, 12, 2);
        let a = l2_direct(&p, &mu, mc(3000, 77)).unwrap();
        let b = l2_direct(&p, &mu, mc(3000, 77)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| l2_direct(&p, &mu, mc(3000, 77)).unwrap());
        assert_eq!(a.value.to_bits(), c.value.to_bits());
    }

    #[test]
    fn breakdown_sums_to_value() {
        let mu = MeasureModel::normalized_box(1);
        let p = gen_iid(&mu, 6, 5);
        let est = l2_direct(&p, &mu, mc(4000, 5)).unwrap();
        let total: f64 = est.breakdown.unwrap().iter().map(|r| r.value).sum();
        assert!((total - est.value).abs() < 1e-10 * est.value);
    }

    #[test]
    fn nothing_survives_outside_the_region() {
        let mu = MeasureModel::normalized_box(1);
        let p = gen_iid(&mu, 64, 3);
        assert_eq!(audit_bounding_region(&p, &mu, 100_000, 1).unwrap(), 0);
    }

    #[test]
    fn expected_iid_is_linear_in_n() {
        let mu = MeasureModel::normalized_box(1);
        let s = DirectSampler::new(&mu, mc(5000, 2)).unwrap();
        let a = s.expected_iid(10).value;
        assert!((s.expected_iid(30).value - 3.0 * a).abs() < 1e-12 * a);
    }
}
