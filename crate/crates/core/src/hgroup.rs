//! Group law, Korányi norm, dilations and box geometry on ℍⁿ = ℂⁿ×ℝ.
//!
//! Complex coordinates are stored as interleaved real pairs
//! `[x1, y1, …, xn, yn]`; `t` is the central coordinate.

use std::f64::consts::PI;

/// Dimension `n` and homogeneous dimension `Q = 2n + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupContext {
    n: usize,
}

impl GroupContext {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "dimension n must be positive");
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        2 * self.n + 2
    }

    /// Lebesgue volume of the unit box `{|z| ≤ 1} × [−1, 1]`.
    pub fn unit_box_volume(&self) -> f64 {
        2.0 * PI.powi(self.n as i32) / factorial(self.n)
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// An element `(z, t)` of ℍⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoint {
    pub z: Vec<f64>,
    pub t: f64,
}

impl HPoint {
    /// Builds a point from interleaved coordinates; `z.len()` must be even and positive.
    pub fn new(z: Vec<f64>, t: f64) -> Self {
        assert!(!z.is_empty() && z.len() % 2 == 0, "z needs 2n real coordinates");
        assert!(
            t.is_finite() && z.iter().all(|v| v.is_finite()),
            "coordinates must be finite"
        );
        Self { z, t }
    }

    pub fn origin(n: usize) -> Self {
        Self::new(vec![0.0; 2 * n], 0.0)
    }

    /// Convenience constructor for n = 1.
    pub fn h1(x: f64, y: f64, t: f64) -> Self {
        Self::new(vec![x, y], t)
    }

    pub fn n(&self) -> usize {
        self.z.len() / 2
    }

    /// `|z|²`.
    pub fn z_norm_sq(&self) -> f64 {
        self.z.iter().map(|v| v * v).sum()
    }
}

/// `Im(Σ zⱼ·conj(wⱼ))` for interleaved coordinates.
pub fn im_hermitian(z: &[f64], w: &[f64]) -> f64 {
    debug_assert_eq!(z.len(), w.len());
    z.chunks_exact(2)
        .zip(w.chunks_exact(2))
        .map(|(a, b)| a[1] * b[0] - a[0] * b[1])
        .sum()
}

fn same_dim(a: &HPoint, b: &HPoint) {
    assert_eq!(a.z.len(), b.z.len(), "points have different dimensions");
}

/// `(z, t)∘(w, s) = (z + w, t + s + ½Im(z·w̄))`.
pub fn group_mul(a: &HPoint, b: &HPoint) -> HPoint {
    same_dim(a, b);
    let z = a.z.iter().zip(&b.z).map(|(x, y)| x + y).collect();
    HPoint {
        z,
        t: a.t + b.t + 0.5 * im_hermitian(&a.z, &b.z),
    }
}

pub fn group_inv(a: &HPoint) -> HPoint {
    HPoint {
        z: a.z.iter().map(|v| -v).collect(),
        t: -a.t,
    }
}

/// `(|z|⁴ + t²)^{1/4}`.
pub fn koranyi_norm(a: &HPoint) -> f64 {
    let r2 = a.z_norm_sq();
    (r2 * r2 + a.t * a.t).sqrt().sqrt()
}

/// `D_ρ(z, t) = (ρz, ρ²t)`.
pub fn dilate(rho: f64, a: &HPoint) -> HPoint {
    assert!(rho > 0.0, "dilation factor must be positive");
    HPoint {
        z: a.z.iter().map(|v| rho * v).collect(),
        t: rho * rho * a.t,
    }
}

/// Membership in the closed box `B_ρ = {|z| ≤ ρ, |t| ≤ ρ²}`.
pub fn in_box(rho: f64, p: &HPoint) -> bool {
    assert!(rho > 0.0, "box radius must be positive");
    p.z_norm_sq() <= rho * rho && p.t.abs() <= rho * rho
}

/// Membership of `p` in `center∘B_ρ`.
pub fn in_translated_box(center: &HPoint, rho: f64, p: &HPoint) -> bool {
    assert!(rho > 0.0, "box radius must be positive");
    same_dim(center, p);
    let dz: f64 = center.z.iter().zip(&p.z).map(|(c, q)| (q - c) * (q - c)).sum();
    if dz > rho * rho {
        return false;
    }
    let dt = p.t - center.t - 0.5 * im_hermitian(&center.z, &p.z);
    dt.abs() <= rho * rho
}

/// `|B_ρ| = ρ^Q·|B_1|`.
pub fn box_volume(rho: f64, ctx: GroupContext) -> f64 {
    assert!(rho > 0.0, "box radius must be positive");
    rho.powi(ctx.q() as i32) * ctx.unit_box_volume()
}
