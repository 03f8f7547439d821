//! Point-set generators: iid sampling from `μ` and a jittered stratification
//! adapted to the group dilations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::measure::{uniform_in_box, MeasureModel};
use super::pointset::PointSet;
use crate::hgroup::{im_hermitian, in_box, GroupContext, HPoint};

/// `N` iid points from the normalized box measure.
pub fn gen_iid(mu: &MeasureModel, big_n: usize, seed: u64) -> PointSet {
    let n = mu.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..big_n).map(|_| uniform_in_box(&mut rng, n, 1.0)).collect();
    PointSet::new(n, points, "iid", seed)
}

/// Cells `c∘([−δ/2, δ/2)^{2n} × [jδ², (j+1)δ²))` with `c` on the lattice `δℤ^{2n}`.
/// Each is a left translate of one small box, so all share its Korányi
/// diameter, and for fixed `c` the slabs tile the fibre over the z-cell.
#[derive(Clone, Debug)]
pub struct JitterGrid {
    pub n: usize,
    pub delta: f64,
    cells: Vec<(Vec<f64>, i64)>,
}

impl JitterGrid {
    pub fn new(mu: &MeasureModel, n_target: usize) -> Self {
        assert!(n_target >= 1, "need a positive target size");
        let n = mu.n();
        let ctx = GroupContext::new(n);
        let delta = (ctx.unit_box_volume() / n_target as f64).powf(1.0 / ctx.q() as f64);
        let dim = 2 * n;
        let half_diag = 0.5 * delta * (dim as f64).sqrt();
        let m = (1.0 / delta + 1.0).ceil() as i64;
        let mut cells = Vec::new();
        let mut idx = vec![-m; dim];
        loop {
            let c: Vec<f64> = idx.iter().map(|&i| i as f64 * delta).collect();
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm - half_diag <= 1.0 {
                let s = 0.5 * norm * half_diag;
                let lo = ((-1.0 - s) / (delta * delta)).floor() as i64;
                let hi = ((1.0 + s) / (delta * delta)).ceil() as i64;
                for j in lo..hi {
                    cells.push((c.clone(), j));
                }
            }
            // Odometer over the lattice indices.
            let mut d = 0;
            while d < dim {
                idx[d] += 1;
                if idx[d] <= m {
                    break;
                }
                idx[d] = -m;
                d += 1;
            }
            if d == dim {
                break;
            }
        }
        Self { n, delta, cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The point of cell `i` with local coordinates `u ∈ [0,1]^{2n+1}`.
    pub fn point(&self, i: usize, u: &[f64]) -> HPoint {
        let (c, j) = &self.cells[i];
        let d = self.delta;
        let zl: Vec<f64> = u[..2 * self.n].iter().map(|v| (v - 0.5) * d).collect();
        let tl = (*j as f64 + u[2 * self.n]) * d * d;
        let z = c.iter().zip(&zl).map(|(a, b)| a + b).collect();
        HPoint {
            z,
            t: tl + 0.5 * im_hermitian(c, &zl),
        }
    }
}

/// One uniform point per cell, kept when it lands in `B_1`. A boundary cell
/// therefore contributes a point with probability equal to its share of
/// `B_1`, and the actual size fluctuates around `n_target`.
pub fn gen_jittered(mu: &MeasureModel, n_target: usize, seed: u64) -> PointSet {
    let grid = JitterGrid::new(mu, n_target);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = vec![0.0; 2 * grid.n + 1];
    let mut points = Vec::with_capacity(n_target + n_target / 4);
    for i in 0..grid.len() {
        u.iter_mut().for_each(|v| *v = rng.gen::<f64>());
        let p = grid.point(i, &u);
        if in_box(1.0, &p) {
            points.push(p);
        }
    }
    PointSet::new(grid.n, points, format!("jittered:target={n_target}"), seed)
}
