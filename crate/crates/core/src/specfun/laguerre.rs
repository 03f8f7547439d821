//! Generalized Laguerre polynomials and the orthonormal Laguerre functions
//! `Λ_k^δ(t) = r_k^δ L_k^δ(t) e^{−t/2} t^{δ/2}`.

use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};

/// `L_k^δ(t)` by the three-term recurrence.
pub fn laguerre_l(k: usize, delta: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + delta - t;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + delta - t) * cur - (jf + delta) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln r_k^δ = ½(ln k! − ln Γ(k+δ+1))`.
pub fn ln_rk(k: usize, delta: f64) -> f64 {
    0.5 * (ln_gamma(k as f64 + 1.0) - ln_gamma(k as f64 + delta + 1.0))
}

/// `r_k^δ = (k!/Γ(k+δ+1))^{1/2}`.
pub fn rk(k: usize, delta: f64) -> f64 {
    ln_rk(k, delta).exp()
}

/// `Λ_k^δ(t)`, stable for large `k` and `t`.
pub fn laguerre_lambda(k: usize, delta: f64, t: f64) -> Result<f64> {
    let mut out = 0.0;
    lambda_sweep(k, delta, t, |j, v| {
        if j == k {
            out = v;
        }
    })?;
    Ok(out)
}

/// `Λ_j^δ(t)` for all `j ≤ k_max`.
pub fn laguerre_lambda_all(k_max: usize, delta: f64, t: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; k_max + 1];
    lambda_sweep(k_max, delta, t, |j, v| out[j] = v)?;
    Ok(out)
}

/// Writes `Λ_j^δ(t)` for `j < out.len()` into `out`.
pub fn laguerre_lambda_into(delta: f64, t: f64, out: &mut [f64]) -> Result<()> {
    if out.is_empty() {
        return Ok(());
    }
    let k_max = out.len() - 1;
    lambda_sweep(k_max, delta, t, |j, v| out[j] = v)
}

// Runs the normalized recurrence
//   Λ_{j+1} = [(2j+1+δ−t)Λ_j − √(j(j+δ))Λ_{j−1}] / √((j+1)(j+1+δ))
// on a mantissa with a separate log scale, so neither e^{−t/2} nor the
// growth of L_j can overflow.
fn lambda_sweep(k_max: usize, delta: f64, t: f64, mut emit: impl FnMut(usize, f64)) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("Laguerre function needs t >= 0, got {t}")));
    }
    if t == 0.0 {
        for j in 0..=k_max {
            let v = if delta == 0.0 { 1.0 } else { 0.0 };
            emit(j, v);
        }
        return Ok(());
    }
    let mut log_scale = ln_rk(0, delta) - 0.5 * t + 0.5 * delta * t.ln();
    let mut prev = 0.0;
    let mut cur = 1.0;
    emit(0, log_scale.exp());
    for j in 0..k_max {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + delta - t) * cur - (jf * (jf + delta)).sqrt() * prev)
            / ((jf + 1.0) * (jf + 1.0 + delta)).sqrt();
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e150 || (mag < 1e-150 && mag > 0.0) {
            let s = mag.ln();
            cur /= mag;
            prev /= mag;
            log_scale += s;
        }
        emit(j + 1, cur * log_scale.exp());
    }
    Ok(())
}
