//! The maps `A(t)` and `Θ(t)` of the uniform Laguerre asymptotics and the
//! leading-order amplitudes `α₀`, `η₀`.

use std::f64::consts::FRAC_PI_4;

use crate::error::{domain, Result};

// Θ is evaluated from its Taylor series at t = 1 when |t − 1| is below this.
const THETA_SERIES_RADIUS: f64 = 1e-4;
const TWO_POW_M23: f64 = 0.629_960_524_947_436_6;

/// `A(t) = ½(arcsin√t + √(t − t²))` on `[0, 1]`.
pub fn fn_a(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("A(t) needs t in [0, 1], got {t}")));
    }
    Ok(0.5 * (t.sqrt().asin() + (t - t * t).sqrt()))
}

/// `Θ(t)` for `t ≥ 0`: negative on `[0, 1)`, zero at 1, positive beyond.
pub fn fn_theta(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("Θ(t) needs t >= 0, got {t}")));
    }
    let s = t - 1.0;
    if s.abs() < THETA_SERIES_RADIUS {
        return Ok(TWO_POW_M23 * s * (1.0 + s * (-0.2 + s * (17.0 / 175.0 - s * 473.0 / 7875.0))));
    }
    if t < 1.0 {
        let r = t.sqrt();
        let x = 0.75 * (r.acos() - (t - t * t).sqrt());
        Ok(-x.powf(2.0 / 3.0))
    } else {
        let r = t.sqrt();
        let x = 0.75 * ((t * t - t).sqrt() - r.acosh());
        Ok(x.powf(2.0 / 3.0))
    }
}

/// `Θ′(t) = ½√(|t−1|/t)/√|Θ(t)|`, with the series derivative near 1.
pub fn fn_theta_prime(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("Θ′(t) needs t > 0, got {t}")));
    }
    let s = t - 1.0;
    if s.abs() < THETA_SERIES_RADIUS {
        return Ok(TWO_POW_M23 * (1.0 + s * (-0.4 + s * (51.0 / 175.0 - s * 4.0 * 473.0 / 7875.0))));
    }
    let th = fn_theta(t)?;
    Ok(0.5 * (s.abs() / t).sqrt() / th.abs().sqrt())
}

/// `α₀(t) = (1−t)^{−1/4}(A(t)/√t)^{n−1/2}`, with `α₀(0) = 1`.
pub fn alpha0(t: f64, n: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(domain(format!("α₀(t) needs t in [0, 1), got {t}")));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let ratio = fn_a(t)? / t.sqrt();
    Ok((1.0 - t).powf(-0.25) * ratio.powf(n as f64 - 0.5))
}

/// `η₀(t) = t^{1/4−n/2}(4Θ(t)/(t−1))^{1/4}`, with `η₀(1) = 2^{1/3}`.
pub fn eta0(t: f64, n: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("η₀(t) needs t > 0, got {t}")));
    }
    let s = t - 1.0;
    let q = if s.abs() < THETA_SERIES_RADIUS {
        4.0 * TWO_POW_M23 * (1.0 + s * (-0.2 + s * 17.0 / 175.0))
    } else {
        4.0 * fn_theta(t)? / s
    };
    Ok(t.powf(0.25 - 0.5 * n as f64) * q.powf(0.25))
}

/// `A(1) = π/4`; exposed for callers bounding `νA(t)`.
pub const A_AT_ONE: f64 = FRAC_PI_4;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn a_values() {
        assert_eq!(fn_a(0.0).unwrap(), 0.0);
        assert!((fn_a(0.5).unwrap() - (PI / 8.0 + 0.25)).abs() < 1e-15);
        assert!((fn_a(1.0).unwrap() - A_AT_ONE).abs() < 1e-15);
        assert!(fn_a(-0.1).is_err() && fn_a(1.1).is_err());
    }

    #[test]
    fn a_bounds() {
        for i in 1..=1000 {
            let t = i as f64 / 1001.0;
            let a = fn_a(t).unwrap();
            assert!(PI / 4.0 * t.sqrt() <= a + 1e-15 && a <= t.sqrt() + 1e-15, "t={t}");
        }
    }

    #[test]
    fn a_derivative() {
        for &t in &[0.1, 0.4, 0.8] {
            let h = 1e-6;
            let d = (fn_a(t + h).unwrap() - fn_a(t - h).unwrap()) / (2.0 * h);
            assert!((d - 0.5 * ((1.0 - t) / t).sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn theta_values() {
        assert_eq!(fn_theta(1.0).unwrap(), 0.0);
        assert!((fn_theta(0.0).unwrap() + (3.0 * PI / 8.0).powf(2.0 / 3.0)).abs() < 1e-14);
        assert!(fn_theta(-1.0).is_err());
    }

    #[test]
    fn theta_series_seam() {
        for sign in [-1.0, 1.0] {
            let t_in = 1.0 + sign * 0.999_999e-4;
            let t_out = 1.0 + sign * 1.000_001e-4;
            let a = fn_theta(t_in).unwrap();
            let b = fn_theta(t_out).unwrap();
            let slope = fn_theta_prime(1.0 + sign * 1e-4).unwrap();
            assert!((b - a - slope * (t_out - t_in)).abs() < 1e-12, "sign {sign}");
            let pa = fn_theta_prime(t_in).unwrap();
            let pb = fn_theta_prime(t_out).unwrap();
            assert!((pa - pb).abs() < 1e-8);
        }
    }

    #[test]
    fn theta_increasing_and_bounded() {
        let mut prev = fn_theta(3e-4).unwrap();
        for i in 2..=10_000 {
            let t = 3.0 * i as f64 / 10_000.0;
            let th = fn_theta(t).unwrap();
            assert!(th > prev, "t={t}");
            prev = th;
            if t >= 1.5 {
                assert!(th <= (0.75 * t).powf(2.0 / 3.0));
            }
        }
        for &t in &[5.0, 50.0, 500.0] {
            assert!(fn_theta(t).unwrap() <= (0.75 * t).powf(2.0 / 3.0));
        }
    }

    #[test]
    fn theta_prime_matches_difference() {
        for &t in &[0.05, 0.5, 0.99, 1.01, 2.0, 10.0] {
            let h = 1e-6;
            let d = (fn_theta(t + h).unwrap() - fn_theta(t - h).unwrap()) / (2.0 * h);
            assert!((d - fn_theta_prime(t).unwrap()).abs() < 1e-7, "t={t}");
        }
    }

    #[test]
    fn amplitude_limits() {
        for n in 1..=3 {
            assert!((eta0(1.0, n).unwrap() - 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
            assert!((eta0(1.0 + 2e-4, n).unwrap() - eta0(1.0 + 5e-5, n).unwrap()).abs() < 1e-3);
            assert_eq!(alpha0(0.0, n).unwrap(), 1.0);
            assert!((alpha0(1e-6, n).unwrap() - 1.0).abs() < 1e-5);
        }
    }
}
