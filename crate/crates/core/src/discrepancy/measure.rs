//! The reference measure and the masses it assigns to translated boxes and
//! Korányi balls.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::beta_reg;
use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::hgroup::{group_mul, in_box, koranyi_norm, GroupContext, HPoint};
use crate::quad::{integrate_panels, QuadConfig};

/// Absolute tolerance on box masses.
pub const MASS_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureModel {
    /// `χ_{B_1}/|B_1|`.
    NormalizedBox { n: usize },
}

impl MeasureModel {
    pub fn normalized_box(n: usize) -> Self {
        assert!(n >= 1, "dimension n must be positive");
        MeasureModel::NormalizedBox { n }
    }

    pub fn n(&self) -> usize {
        match *self {
            MeasureModel::NormalizedBox { n } => n,
        }
    }

    pub fn total_mass(&self) -> f64 {
        1.0
    }

    pub fn density(&self, p: &HPoint) -> f64 {
        match *self {
            MeasureModel::NormalizedBox { n } => {
                if in_box(1.0, p) {
                    1.0 / GroupContext::new(n).unit_box_volume()
                } else {
                    0.0
                }
            }
        }
    }
}

/// Volume of the unit ball in `ℝ^d`.
pub(crate) fn ball_volume(d: usize) -> f64 {
    let d = d as f64;
    PI.powf(0.5 * d) / statrs::function::gamma::gamma(0.5 * d + 1.0)
}

/// Volume of the cap of height `h ∈ [0, 2r]` cut from a ball of radius `r` in `ℝ^d`.
fn cap_volume(d: usize, r: f64, h: f64) -> f64 {
    if h <= 0.0 || r <= 0.0 {
        return 0.0;
    }
    let full = ball_volume(d) * r.powi(d as i32);
    if h >= 2.0 * r {
        return full;
    }
    let a = 0.5 * (d as f64 + 1.0);
    if h <= r {
        let x = ((2.0 * r * h - h * h) / (r * r)).clamp(0.0, 1.0);
        0.5 * full * beta_reg(a, 0.5, x)
    } else {
        full - cap_volume(d, r, 2.0 * r - h)
    }
}

/// Volume of the intersection of balls of radii `r1`, `r2` in `ℝ^d` whose
/// centres are `dist` apart.
pub(crate) fn lens_volume(d: usize, r1: f64, r2: f64, dist: f64) -> f64 {
    if r1 <= 0.0 || r2 <= 0.0 || dist >= r1 + r2 {
        return 0.0;
    }
    if dist <= (r1 - r2).abs() {
        return ball_volume(d) * r1.min(r2).powi(d as i32);
    }
    if d == 1 {
        return (r1.min(dist + r2) - (-r1).max(dist - r2)).max(0.0);
    }
    // Plane of intersection sits at distance x from the first centre.
    let x = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist);
    cap_volume(d, r1, r1 - x) + cap_volume(d, r2, r2 - (dist - x))
}

fn overlap(lo: f64, hi: f64) -> f64 {
    (hi.min(1.0) - lo.max(-1.0)).max(0.0)
}

/// `μ(center∘B_ρ)`.
///
/// With `u = J z_c/|z_c|` the vertical offset `½Im(z_c·w̄)` is `½|z_c|⟨u,w⟩`,
/// so the 2n-dimensional integral reduces to one over `v = ⟨u,w⟩` of the
/// slab length times the (2n−1)-volume of the slice, which is a lens
/// because `z_c ⟂ u`.
pub fn mu_box_mass(mu: &MeasureModel, center: &HPoint, rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(domain(format!("box radius must be positive, got {rho}")));
    }
    let n = mu.n();
    if center.n() != n {
        return Err(domain("centre dimension does not match the measure"));
    }
    let r2 = rho * rho;
    let dist = center.z_norm_sq().sqrt();
    let tc = center.t;
    if dist > 1.0 + rho {
        return Ok(0.0);
    }
    let vmax = rho.min(1.0);
    let half = 0.5 * dist;
    if tc + half * vmax + r2 < -1.0 || tc - half * vmax - r2 > 1.0 {
        return Ok(0.0);
    }
    let vol1 = GroupContext::new(n).unit_box_volume();
    // The translate lies inside B_1.
    if dist + rho <= 1.0 && tc.abs() + half * vmax + r2 <= 1.0 {
        return Ok(rho.powi(2 * n as i32 + 2));
    }
    let d = 2 * n - 1;
    let slab = |v: f64| {
        let a = tc + half * v;
        overlap(a - r2, a + r2)
    };
    let slice = |v: f64| {
        let v2 = v * v;
        let ra = (1.0 - v2).max(0.0).sqrt();
        let rb = (r2 - v2).max(0.0).sqrt();
        lens_volume(d, ra, rb, dist)
    };

    let mut breaks = vec![-vmax, 0.0, vmax];
    if half > 0.0 {
        for target in [-1.0 - r2, -1.0 + r2, 1.0 - r2, 1.0 + r2] {
            breaks.push((target - tc) / half);
        }
        // Where the two balls of the slice become tangent.
        let c = (dist * dist + 1.0 - r2) / (2.0 * dist);
        if c.abs() < 1.0 {
            let vk = (1.0 - c * c).sqrt();
            breaks.push(vk);
            breaks.push(-vk);
        }
    }
    breaks.retain(|v| v.is_finite() && v.abs() <= vmax);
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    if breaks.len() < 2 {
        return Ok(0.0);
    }
    let cfg = QuadConfig::abs(MASS_TOL * vol1).with_max_panels(4000);
    let res = integrate_panels(|v: f64| slab(v) * slice(v), &breaks, cfg)?;
    Ok((res.value / vol1).clamp(0.0, 1.0))
}

/// `|𝔅_1|`, the Lebesgue volume of the unit Korányi ball.
pub fn koranyi_ball_volume(n: usize) -> f64 {
    // ∫_{|z|≤1} 2(1−|z|⁴)^{1/2} dz in polar form.
    let shell = 2.0 * n as f64 * ball_volume(2 * n);
    let cfg = QuadConfig::abs(1e-13);
    let inner = integrate_panels(
        |u: f64| 2.0 * (1.0 - u.powi(4)).max(0.0).sqrt() * u.powi(2 * n as i32 - 1),
        &[0.0, 0.5, 0.9, 1.0],
        cfg,
    )
    .expect("smooth integrand");
    shell * inner.value
}

/// Monte-Carlo `μ(center∘𝔅_r)` with its standard error.
///
/// Points are drawn uniformly in the Korányi ball itself, so the estimator
/// stays relative for small `r`.
pub fn mu_ball_mass(mu: &MeasureModel, center: &HPoint, r: f64, samples: usize, seed: u64) -> (f64, f64) {
    assert!(r > 0.0, "ball radius must be positive");
    assert!(samples > 0, "need at least one sample");
    // The Korányi norm is subadditive and ‖p‖ ≤ 2^{1/4} on B_1.
    if koranyi_norm(center) + 2f64.powf(0.25) <= r {
        return (1.0, 0.0);
    }
    let n = mu.n();
    let vol1 = GroupContext::new(n).unit_box_volume();
    let scale = koranyi_ball_volume(n) * r.powi(2 * n as i32 + 2) / vol1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    let mut drawn = 0usize;
    while drawn < samples {
        let q = uniform_in_box(&mut rng, n, r);
        if koranyi_norm(&q) > r {
            continue;
        }
        drawn += 1;
        if in_box(1.0, &group_mul(center, &q)) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    ((scale * p).min(1.0), scale * se)
}

/// Uniform point in `B_r` (rejection for the z-ball).
pub(crate) fn uniform_in_box<R: Rng>(rng: &mut R, n: usize, r: f64) -> HPoint {
    let mut z = vec![0.0; 2 * n];
    loop {
        for v in z.iter_mut() {
            *v = rng.gen_range(-1.0..=1.0);
        }
        if z.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            break;
        }
    }
    for v in z.iter_mut() {
        *v *= r;
    }
    HPoint {
        z,
        t: r * r * rng.gen_range(-1.0..=1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgroup::in_translated_box;

    fn mc_box_mass(center: &HPoint, rho: f64, samples: usize) -> f64 {
        let n = center.n();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let hits = (0..samples)
            .filter(|_| in_translated_box(center, rho, &uniform_in_box(&mut rng, n, 1.0)))
            .count();
        hits as f64 / samples as f64
    }

    #[test]
    fn containment_and_interior() {
        let mu = MeasureModel::normalized_box(1);
        let o = HPoint::origin(1);
        assert_eq!(mu_box_mass(&mu, &o, 1.0).unwrap(), 1.0);
        assert!((mu_box_mass(&mu, &o, 1.7).unwrap() - 1.0).abs() < 1e-8);
        assert!((mu_box_mass(&mu, &o, 0.1).unwrap() - 1e-4).abs() < 1e-8);
        let c = HPoint::h1(0.3, -0.2, 0.1);
        assert!((mu_box_mass(&mu, &c, 0.2).unwrap() - 0.2f64.powi(4)).abs() < 1e-8);
    }

    #[test]
    fn far_centres_have_zero_mass() {
        let mu = MeasureModel::normalized_box(1);
        let rho = 0.3;
        let far = 1.0 + 2f64.powf(0.25) * rho;
        for c in [
            HPoint::h1(far + 0.01, 0.0, 0.0),
            HPoint::h1(0.0, 0.0, (far + 0.01).powi(2)),
            HPoint::h1(0.0, 1.4, 0.9),
        ] {
            if koranyi_norm(&c) > far {
                assert_eq!(mu_box_mass(&mu, &c, rho).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn lens_volume_limits() {
        for d in [1usize, 3, 5] {
            let v = ball_volume(d);
            assert!((lens_volume(d, 1.0, 0.5, 0.2) - v * 0.5f64.powi(d as i32)).abs() < 1e-14);
            assert_eq!(lens_volume(d, 1.0, 0.5, 1.6), 0.0);
        }
        // Equal unit spheres at distance 1: 5π/12.
        assert!((lens_volume(3, 1.0, 1.0, 1.0) - 5.0 * PI / 12.0).abs() < 1e-12);
        assert!((lens_volume(1, 1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_masses_match_monte_carlo() {
        for n in [1usize, 2] {
            let mu = MeasureModel::normalized_box(n);
            let mut z = vec![0.0; 2 * n];
            z[0] = 0.7;
            z[1] = 0.4;
            for (t, rho) in [(0.6, 0.5), (-0.9, 0.35), (0.0, 0.8)] {
                let c = HPoint::new(z.clone(), t);
                let exact = mu_box_mass(&mu, &c, rho).unwrap();
                let samples = 400_000;
                let mc = mc_box_mass(&c, rho, samples);
                let se = (mc * (1.0 - mc) / samples as f64).sqrt();
                assert!(
                    (exact - mc).abs() < 4.0 * se + 1e-6,
                    "n={n} t={t} ρ={rho}: {exact} vs {mc}"
                );
            }
        }
    }

    #[test]
    fn ball_volume_n1() {
        // |𝔅_1| for n = 1 is 2π∫₀¹2u(1−u⁴)^{1/2}du = π²/2.
        assert!((koranyi_ball_volume(1) - PI * PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn ball_mass_full_and_ahlfors() {
        let mu = MeasureModel::normalized_box(1);
        let (m, _) = mu_ball_mass(&mu, &HPoint::origin(1), 50.0, 2000, 1);
        assert_eq!(m, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let limit = koranyi_ball_volume(1) / GroupContext::new(1).unit_box_volume();
        for &r in &[0.05, 0.1, 0.2] {
            let mut worst = 0.0f64;
            for i in 0..100 {
                let c = uniform_in_box(&mut rng, 1, 1.0);
                let (m, se) = mu_ball_mass(&mu, &c, r, 500, i);
                worst = worst.max((m - 2.0 * se) / r.powi(4));
            }
            assert!(worst <= limit * (1.0 + 1e-12), "r={r}: {worst}");
        }
        let (m, se) = mu_ball_mass(&mu, &HPoint::h1(0.1, 0.2, 0.1), 0.05, 20_000, 5);
        assert!((m / 0.05f64.powi(4) - limit).abs() < 1e-9 + se / 0.05f64.powi(4));
    }
}
