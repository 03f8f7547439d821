//! Normalized Hermite functions `h_k(x) = (2^k k! √π)^{−1/2} H_k(x) e^{−x²/2}`.

use std::f64::consts::PI;

/// `h_k(x)` via the stable normalized recurrence.
pub fn hermite_h(k: usize, x: f64) -> f64 {
    hermite_h_all(k, x)[k]
}

/// `h_j(x)` for all `j ≤ k_max`.
pub fn hermite_h_all(k_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    let h0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(h0);
    if k_max == 0 {
        return out;
    }
    out.push(x * 2f64.sqrt() * h0);
    for j in 1..k_max {
        let jf = j as f64;
        let next = x * (2.0 / (jf + 1.0)).sqrt() * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}
