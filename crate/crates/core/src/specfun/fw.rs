//! Leading-order uniform (Bessel/Airy) approximation of `Λ_k^{n−1}(x)`.

use super::airy::{ai_tilde, airy};
use super::auxiliary::{alpha0, eta0, fn_a, fn_theta};
use super::bessel::{bessel_j, j_tilde};
use super::laguerre::laguerre_lambda;
use super::NuIndex;
use crate::error::{domain, Result};

/// `t = x/ν` at or below this uses the Bessel form.
pub const FW_THRESHOLD: f64 = 0.4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FwRegime {
    Bessel,
    Airy,
}

#[derive(Clone, Copy, Debug)]
pub struct FwResult {
    pub value: f64,
    pub regime: FwRegime,
    /// Scale of the neglected remainder.
    pub envelope: f64,
}

pub fn fw_approx(idx: NuIndex, x: f64) -> Result<FwResult> {
    if !(x >= 0.0) {
        return Err(domain(format!("FW approximation needs x >= 0, got {x}")));
    }
    let n = idx.n;
    let nu = idx.nu() as f64;
    let t = x / nu;
    let pre = 2f64.powi(1 - n as i32) * idx.rk() * x.powf(0.5 * (n as f64 - 1.0));
    if t <= FW_THRESHOLD {
        let m = n - 1;
        if x == 0.0 {
            let value = if n == 1 { idx.rk() } else { 0.0 };
            let envelope = if n == 1 {
                idx.rk() / (nu * nu)
            } else {
                f64::MIN_POSITIVE
            };
            return Ok(FwResult {
                value,
                regime: FwRegime::Bessel,
                envelope,
            });
        }
        let a = fn_a(t)?;
        let arg = nu * a;
        let a_pow = a.powi(m as i32);
        let value = pre * alpha0(t, n)? * bessel_j(m, arg)? / a_pow;
        let envelope = pre / (nu * nu) / a_pow * j_tilde(m, arg)?;
        Ok(FwResult {
            value,
            regime: FwRegime::Bessel,
            envelope: envelope.max(f64::MIN_POSITIVE),
        })
    } else {
        let arg = nu.powf(2.0 / 3.0) * fn_theta(t)?;
        let sign = if idx.k % 2 == 0 { 1.0 } else { -1.0 };
        let value = sign * pre * nu.powf(-1.0 / 3.0) * eta0(t, n)? * airy(arg).ai;
        let envelope = pre * nu.powf(-7.0 / 3.0) * ai_tilde(arg);
        Ok(FwResult {
            value,
            regime: FwRegime::Airy,
            envelope: envelope.max(f64::MIN_POSITIVE),
        })
    }
}

/// Supremum over `ts` of `|Λ_k^{n−1}(νt) − FW|/envelope` for one index.
pub fn sup_normalized_error(idx: NuIndex, ts: &[f64]) -> Result<f64> {
    let nu = idx.nu() as f64;
    let mut worst = 0.0f64;
    for &t in ts {
        let x = nu * t;
        let fw = fw_approx(idx, x)?;
        let exact = laguerre_lambda(idx.k, (idx.n - 1) as f64, x)?;
        worst = worst.max((exact - fw.value).abs() / fw.envelope);
    }
    Ok(worst)
}

/// Bessel-regime error scaling: for each `ν` the sup over `t ∈ [0.05, 0.5]`
/// of `|Λ_k^{n−1} − Bessel form|/envelope`, and the log-log slope of those
/// sups against `ν`.
pub fn bessel_error_scaling(n: usize, nus: &[usize], points: usize) -> Result<(Vec<f64>, f64)> {
    let ts: Vec<f64> = (0..points)
        .map(|i| 0.05 + 0.45 * i as f64 / (points - 1) as f64)
        .collect();
    let mut sups = Vec::with_capacity(nus.len());
    for &nu in nus {
        let idx = NuIndex::from_nu(nu, n)?;
        let mut s = 0.0f64;
        for &t in &ts {
            s = s.max(bessel_form_error(idx, t)?);
        }
        sups.push(s);
    }
    let xs: Vec<f64> = nus.iter().map(|&v| (v as f64).ln()).collect();
    let ys: Vec<f64> = sups.iter().map(|v| v.ln()).collect();
    Ok((sups, crate::discrepancy::scaling::least_squares(&xs, &ys).0))
}

// The Bessel form is valid for any t < 1; the threshold only picks the
// better of the two forms in fw_approx.
fn bessel_form_error(idx: NuIndex, t: f64) -> Result<f64> {
    let n = idx.n;
    let nu = idx.nu() as f64;
    let x = nu * t;
    let pre = 2f64.powi(1 - n as i32) * idx.rk() * x.powf(0.5 * (n as f64 - 1.0));
    let a = fn_a(t)?;
    let m = n - 1;
    let a_pow = a.powi(m as i32);
    let value = pre * alpha0(t, n)? * bessel_j(m, nu * a)? / a_pow;
    let envelope = pre / (nu * nu) / a_pow * j_tilde(m, nu * a)?;
    let exact = laguerre_lambda(idx.k, m as f64, x)?;
    Ok((exact - value).abs() / envelope)
}
