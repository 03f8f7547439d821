//! Regime-wise approximations of `χ̂_B(λ,k)`, lower envelopes for its
//! ρ-averages, and the I-term infimum over `F_Λ`.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::gft::{chihat_box, chihat_box_dilated, ChiEngine};
use crate::quad::{integrate, QuadConfig};
use crate::specfun::{airy_iai, bessel_j, eta0, fn_a, fn_theta, fn_theta_prime, NuIndex};

/// Smallest ν for which envelope checks are asserted.
pub const NU_LARGE: usize = 50;

/// `⟨x⟩ = (1 + x²)^{1/2}`.
pub fn bracket(x: f64) -> f64 {
    x.hypot(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegimeId {
    BesselMain,
    AiryTransition,
    OscillatoryPlateau,
    FarTail,
}

impl RegimeId {
    /// Case split at `ν`, `2(ν+ν^{1/3})` and `3ν`.
    pub fn classify(lambda: f64, nu: f64) -> Self {
        if lambda <= nu {
            RegimeId::BesselMain
        } else if lambda <= airy_end(nu) {
            RegimeId::AiryTransition
        } else if lambda <= 3.0 * nu {
            RegimeId::OscillatoryPlateau
        } else {
            RegimeId::FarTail
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RegimeId::BesselMain => "bessel",
            RegimeId::AiryTransition => "airy",
            RegimeId::OscillatoryPlateau => "plateau",
            RegimeId::FarTail => "tail",
        }
    }
}

fn airy_end(nu: f64) -> f64 {
    2.0 * (nu + nu.cbrt())
}

/// `F_Λ = {(λ,k) : ⟨λν⟩ ≤ Λ, |λ| ≤ 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FLambdaRegion {
    pub lambda_cap: f64,
}

impl FLambdaRegion {
    pub fn contains(&self, lambda: f64, nu: f64) -> bool {
        lambda != 0.0 && lambda.abs() <= 1.0 && bracket(lambda * nu) <= self.lambda_cap
    }

    /// Largest admissible `|λ|` for this ν, if any.
    pub fn lambda_max(&self, nu: f64) -> Option<f64> {
        if self.lambda_cap <= 1.0 {
            return None;
        }
        Some(((self.lambda_cap * self.lambda_cap - 1.0).sqrt() / nu).min(1.0))
    }
}

/// Main term of the regime containing `λ`, with `Ω` replaced by its
/// explicit variable part.
pub fn chihat_asymptotic(lambda: f64, idx: NuIndex) -> Result<(f64, RegimeId)> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain(format!("asymptotic form needs λ > 0, got {lambda}")));
    }
    let n = idx.n;
    let nf = n as f64;
    let nu = idx.nu() as f64;
    let sign = if idx.k % 2 == 0 { 1.0 } else { -1.0 };
    let t = lambda / (2.0 * nu);
    let norm = idx.rk().powi(2) * nu.powf(nf - 1.0);
    let regime = RegimeId::classify(lambda, nu);
    let v = match regime {
        RegimeId::BesselMain => {
            let a = fn_a(t)?;
            let omega = norm * (lambda / nu).powf(-0.25) * a.sqrt() * (1.0 - t).powf(-0.75);
            lambda.sin() / lambda * bessel_j(n, nu * a)? / (lambda * nu).powf(0.5 * nf) * omega
        }
        RegimeId::AiryTransition => {
            let (iai, _) = airy_iai(nu.powf(2.0 / 3.0) * fn_theta(t)?)?;
            let omega = norm * 2f64.powf(1.5 - nf) * t.powf(0.5 * nf - 1.0) * eta0(t, n)? / fn_theta_prime(t)?;
            sign * lambda.sin() / lambda * (lambda * nu).powf(-0.5 * nf) * iai * omega
        }
        RegimeId::OscillatoryPlateau => sign * lambda.sin() / lambda.powf(nf + 1.0),
        RegimeId::FarTail => sign * lambda.sin() / lambda.powf(nf + 1.0) * 2f64.powf(0.5 * (3.0 * nf + 1.0)),
    };
    Ok((v, regime))
}

/// `∫₀¹ |χ̂_{B_ρ}(λ,k)|² dρ` by adaptive quadrature in ρ, absolute
/// tolerance 1e−10 times the sampled peak of the integrand.
pub fn avg_square(lambda: f64, idx: NuIndex) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain(format!("average needs λ > 0, got {lambda}")));
    }
    let (k, n) = (idx.k, idx.n);
    let f = |rho: f64| chihat_box_dilated(rho, lambda, k, n).map(|v| v * v).unwrap_or(f64::NAN);
    let peak = (1..=64).map(|i| f(i as f64 / 64.0)).fold(0.0f64, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    // The integrand oscillates through sin(ρ²λ); keep panels below a period.
    let panels = (lambda.sqrt() * 2.0).ceil().max(4.0) as usize;
    let breaks = crate::quad::uniform_breaks(0.0, 1.0, panels);
    let cfg = QuadConfig {
        abs_tol: 1e-10 * peak,
        rel_tol: 0.0,
        max_panels: 40 * panels + 2000,
    };
    let r = crate::quad::integrate_panels(f, &breaks, cfg)?;
    if !r.value.is_finite() {
        return Err(domain("χ̂_B evaluation failed inside the ρ-average"));
    }
    Ok(r.value)
}

/// Three-branch lower envelope for the ρ-average, `Q = 2n+2`.
pub fn envelope_lower(lambda: f64, idx: NuIndex) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain(format!("envelope needs λ > 0, got {lambda}")));
    }
    let q = (2 * idx.n + 2) as f64;
    let nu = idx.nu() as f64;
    Ok(if lambda <= nu {
        bracket(lambda * nu).powf(-0.5 * q + 0.5) * bracket(lambda).powi(-2)
    } else if lambda <= airy_end(nu) {
        let u = nu.powf(2.0 / 3.0) * (1.0 - lambda / (2.0 * nu));
        lambda.powf(-q - 2.0 / 3.0) * bracket(u.abs()).powf(-0.5)
    } else {
        lambda.powf(-q - 1.0) * (lambda - 2.0 * nu)
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioRow {
    pub nu: usize,
    pub k: usize,
    pub lambda: f64,
    pub avg_square: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeReport {
    pub c_min: f64,
    pub rows: Vec<RatioRow>,
}

impl EnvelopeReport {
    /// `c_min` restricted to one ν.
    pub fn c_min_for(&self, nu: usize) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.nu == nu)
            .map(|r| r.ratio)
            .reduce(f64::min)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "nu,k,lambda,avg_square,envelope,ratio")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.nu, r.k, r.lambda, r.avg_square, r.envelope, r.ratio
            )?;
        }
        Ok(())
    }
}

/// `m` log-spaced points in `(lo, hi]`, the last one equal to `hi`.
pub fn log_grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && m >= 1);
    let r = (hi / lo).ln();
    (1..=m)
        .map(|i| {
            if i == m {
                hi
            } else {
                lo * (r * i as f64 / m as f64).exp()
            }
        })
        .collect()
}

/// The envelope sweep of [`envelope_ratios`] restricted to `ν ≥ 50`.
pub fn verify_envelope(idxs: &[NuIndex], lambdas: &[f64]) -> Result<EnvelopeReport> {
    if let Some(bad) = idxs.iter().find(|i| i.nu() < NU_LARGE) {
        return Err(Error::Precondition(format!(
            "envelope checks need ν ≥ {NU_LARGE}, got ν = {}",
            bad.nu()
        )));
    }
    envelope_ratios(idxs, lambdas)
}

/// Ratios `avg_square/envelope_lower` over `idxs × lambdas`, and their minimum.
pub fn envelope_ratios(idxs: &[NuIndex], lambdas: &[f64]) -> Result<EnvelopeReport> {
    if idxs.is_empty() || lambdas.is_empty() {
        return Err(domain("envelope sweep needs at least one index and one λ"));
    }
    let mut rows = Vec::with_capacity(idxs.len() * lambdas.len());
    for &idx in idxs {
        let eng = ChiEngine::new(idx.n, idx.k);
        let part: Vec<RatioRow> = lambdas
            .par_iter()
            .map(|&l| {
                let avg = eng.avg_square_all(l)?[idx.k];
                let env = envelope_lower(l, idx)?;
                Ok(RatioRow {
                    nu: idx.nu(),
                    k: idx.k,
                    lambda: l,
                    avg_square: avg,
                    envelope: env,
                    ratio: avg / env,
                })
            })
            .collect::<Result<_>>()?;
        rows.extend(part);
    }
    let c_min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    Ok(EnvelopeReport { c_min, rows })
}

/// Points per k in the I-term λ-grid.
pub const I_TERM_POINTS: usize = 40;

/// Grid minimum of `e^{ν|λ|s/2} ∫₀¹|χ̂_{B_ρ}(λ,k)|²dρ` over `F_Λ`, with
/// `2n ≤ ν ≤ 2Λ` and, for each k, the points of a fixed log grid on
/// `[10⁻³/ν, 1]` that lie in `F_Λ`. The grid does not depend on Λ, so
/// the result is monotone in Λ.
pub fn i_term(cap: f64, s: f64, n: usize) -> Result<f64> {
    i_term_with(cap, s, n, I_TERM_POINTS)
}

pub fn i_term_with(cap: f64, s: f64, n: usize, points: usize) -> Result<f64> {
    if n == 0 {
        return Err(domain("dimension n must be positive"));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(domain(format!("I-term needs s in (0, 1), got {s}")));
    }
    let q = (2 * n + 2) as f64;
    if !(s * cap > q - 1.0) {
        return Err(Error::Precondition(format!(
            "I-term needs sΛ > Q−1 = {}, got {}",
            q - 1.0,
            s * cap
        )));
    }
    let region = FLambdaRegion { lambda_cap: cap };
    let mut cells = Vec::new();
    let mut k = 0;
    loop {
        let idx = NuIndex::new(k, n);
        let nu = idx.nu() as f64;
        if nu > 2.0 * cap {
            break;
        }
        for l in log_grid(1e-3 / nu, 1.0, points) {
            if region.contains(l, nu) {
                cells.push((idx, l));
            }
        }
        k += 1;
    }
    if cells.is_empty() {
        return Err(Error::Precondition(format!("F_Λ is empty for Λ = {cap}")));
    }
    let eng = ChiEngine::new(n, k.saturating_sub(1));
    let vals: Vec<f64> = cells
        .par_iter()
        .map(|&(idx, l)| {
            let avg = eng.avg_square_all(l)?[idx.k];
            Ok((0.5 * idx.nu() as f64 * l * s).exp() * avg)
        })
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
}

/// `∫₀^λ (u/λ)^Q |χ̂_B(u,k)|² du / (2√(uλ))`: the ρ-average after `u = ρ²λ`.
pub fn avg_square_substituted(lambda: f64, idx: NuIndex) -> Result<f64> {
    let q = (2 * idx.n + 2) as i32;
    let f = |u: f64| {
        let c = chihat_box(u, idx.k, idx.n).unwrap_or(f64::NAN);
        (u / lambda).powi(q) * c * c / (2.0 * (u * lambda).sqrt())
    };
    let r = integrate(f, 0.0, lambda, QuadConfig::abs(1e-12).with_max_panels(20_000))?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sinc_ratio(l: f64, k: usize, n: usize) -> f64 {
        chihat_box(l, k, n).unwrap().abs() / (l.sin() / l.powi(n as i32 + 1)).abs()
    }

    #[test]
    fn far_tail_constant() {
        // λ = 40ν with ν = 6, chosen away from the zeros of sin λ.
        let idx = NuIndex::new(1, 1);
        let l = 40.0 * idx.nu() as f64 + 0.5;
        assert!((sinc_ratio(l, 1, 1) / 4.0 - 1.0).abs() < 0.02);
        let (v, r) = chihat_asymptotic(l, idx).unwrap();
        assert_eq!(r, RegimeId::FarTail);
        assert!((v / chihat_box(l, 1, 1).unwrap() - 1.0).abs() < 0.02);
    }

    #[test]
    fn regime_boundaries() {
        let idx = NuIndex::new(25, 1);
        let nu = idx.nu() as f64;
        assert_eq!(chihat_asymptotic(nu, idx).unwrap().1, RegimeId::BesselMain);
        assert_eq!(
            chihat_asymptotic(nu * (1.0 + 1e-9), idx).unwrap().1,
            RegimeId::AiryTransition
        );
        assert_eq!(
            RegimeId::classify(airy_end(nu) + 1e-9, nu),
            RegimeId::OscillatoryPlateau
        );
        assert_eq!(RegimeId::classify(3.0 * nu + 1e-9, nu), RegimeId::FarTail);
        assert!(chihat_asymptotic(0.0, idx).is_err());
    }

    #[test]
    fn bessel_regime_tracks_exact_value() {
        let idx = NuIndex::new(25, 1);
        let nu = idx.nu() as f64;
        let mut checked = 0;
        for i in 0..200 {
            let l = 0.5 + (0.9 * nu - 0.5) * i as f64 / 199.0;
            let (approx, _) = chihat_asymptotic(l, idx).unwrap();
            let a = fn_a(l / (2.0 * nu)).unwrap();
            let j = bessel_j(1, nu * a).unwrap();
            // Stay away from zeros of sin λ · J_n.
            if l.sin().abs() < 0.3 || j.abs() < 0.3 * (2.0 / (std::f64::consts::PI * nu * a)).sqrt() {
                continue;
            }
            let ratio = chihat_box(l, idx.k, 1).unwrap() / approx;
            assert!((0.125..=8.0).contains(&ratio), "λ={l}: ratio {ratio}");
            checked += 1;
        }
        assert!(checked > 30);
    }

    #[test]
    fn far_tail_decay_bound() {
        for k in [0usize, 3, 10] {
            let nu = (4 * k + 2) as f64;
            for i in 1..50 {
                let l = 3.0 * nu + 7.3 * i as f64;
                assert!(chihat_box(l, k, 1).unwrap().abs() * l.powi(2) <= 4.5, "k={k} λ={l}");
            }
        }
    }

    #[test]
    fn average_positive_and_matches_engine() {
        for &(k, l) in &[(0usize, 2.0), (3, 0.05), (12, 30.0), (12, 120.0)] {
            let idx = NuIndex::new(k, 1);
            let a = avg_square(l, idx).unwrap();
            assert!(a > 0.0);
            let e = ChiEngine::new(1, k).avg_square_all(l).unwrap()[k];
            assert!((a - e).abs() < 1e-9 * a.max(1e-6), "k={k} λ={l}: {a} vs {e}");
        }
    }

    #[test]
    fn average_against_monte_carlo() {
        let closed = |rho: f64| {
            let u = rho * rho * 2.0;
            let c = 4.0 * u.sin() / (u * u) * (1.0 - (-u / 4.0).exp());
            (rho.powi(4) * c).powi(2)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = 1_000_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..m {
            let v = closed(rng.gen::<f64>());
            s1 += v;
            s2 += v * v;
        }
        let mean = s1 / m as f64;
        let se = ((s2 / m as f64 - mean * mean) / m as f64).sqrt();
        let a = avg_square(2.0, NuIndex::new(0, 1)).unwrap();
        assert!((a - mean).abs() < 3.0 * se, "{a} vs {mean} ± {se}");
    }

    #[test]
    fn substitution_identity() {
        for &(k, l) in &[(0usize, 2.0), (2, 9.0)] {
            let idx = NuIndex::new(k, 1);
            let a = avg_square(l, idx).unwrap();
            let b = avg_square_substituted(l, idx).unwrap();
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn envelope_branches() {
        let idx = NuIndex::new(25, 1);
        let nu = 102.0;
        let e = |l: f64| envelope_lower(l, idx).unwrap();
        for (below, above) in [(nu, nu * (1.0 + 1e-9)), (airy_end(nu), airy_end(nu) + 1.0)] {
            let r = e(below) / e(above);
            assert!((0.25..=4.0).contains(&r), "seam at {below}: {r}");
        }
        assert!((e(1e-9) - 1.0).abs() < 1e-12);
        // Third branch: e·λ^{Q+1} = λ − 2ν exactly.
        for l in [airy_end(nu) + 1e-6, airy_end(nu) + 3.0, 500.0] {
            assert!((e(l) * l.powi(5) / (l - 2.0 * nu) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton_grid() {
        let idx = NuIndex::new(12, 1);
        let rep = verify_envelope(&[idx], &[3.0]).unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert_eq!(rep.c_min, rep.rows[0].ratio);
        assert!(verify_envelope(&[NuIndex::new(2, 1)], &[3.0]).is_err());
    }

    #[test]
    fn envelope_constant_is_positive_and_stable() {
        let idxs: Vec<NuIndex> = [50usize, 102, 202]
            .iter()
            .map(|&nu| NuIndex::from_nu(nu, 1).unwrap())
            .collect();
        let mut mins = Vec::new();
        for idx in &idxs {
            let grid = log_grid(0.01, 8.0 * idx.nu() as f64, 60);
            let rep = verify_envelope(&[*idx], &grid).unwrap();
            assert!(rep.c_min > 0.0);
            mins.push(rep.c_min);
        }
        let r = mins[2] / mins[0];
        assert!((0.1..=10.0).contains(&r), "{mins:?}");
    }

    #[test]
    fn envelope_grid_refinement() {
        let idx = NuIndex::from_nu(102, 1).unwrap();
        // 60 points per decade, then doubled.
        let decades = (816.0f64 / 0.01).log10();
        let m = (60.0 * decades).ceil() as usize;
        let a = verify_envelope(&[idx], &log_grid(0.01, 816.0, m)).unwrap().c_min;
        let b = verify_envelope(&[idx], &log_grid(0.01, 816.0, 2 * m)).unwrap().c_min;
        assert!((a / b - 1.0).abs() < 0.05, "{a} vs {b}");
    }

    #[test]
    fn i_term_scaling() {
        let q = 4.0f64;
        let vals: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&s: &f64| i_term(6.0 / s, s, 1).unwrap() / s.powf(0.5 * (q - 1.0)))
            .collect();
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(lo > 0.0 && hi / lo <= 10.0, "{vals:?}");
    }

    #[test]
    fn i_term_preconditions_and_monotonicity() {
        assert!(matches!(i_term(2.0, 0.5, 1), Err(Error::Precondition(_))));
        let a = i_term(40.0, 0.2, 1).unwrap();
        let b = i_term(80.0, 0.2, 1).unwrap();
        assert!(b <= a * (1.0 + 1e-12));
    }

    #[test]
    fn f_lambda_membership() {
        let f = FLambdaRegion { lambda_cap: 10.0 };
        assert!(f.contains(0.5, 6.0));
        assert!(!f.contains(0.5, 60.0));
        assert!(!f.contains(1.5, 2.0));
        assert!(FLambdaRegion { lambda_cap: 0.5 }.lambda_max(6.0).is_none());
    }
}
