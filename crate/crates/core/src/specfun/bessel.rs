//! Bessel functions of integer order `J_m`, `Y_m` and the positive
//! envelope `J̃_m`.
//!
//! Below [`BESSEL_SWITCH`] everything comes from one Miller backward
//! recurrence: `J_m` directly, `Y_0` and `Y_1` from Neumann series in the
//! even-order `J`s. Above it, Hankel asymptotics for orders 0 and 1 feed
//! forward recurrences.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Seam between the recurrence/series branch and the Hankel branch.
pub const BESSEL_SWITCH: f64 = 20.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `J_m(x)` for `x ≥ 0`.
pub fn bessel_j(m: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain(format!("Bessel J needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    if x < BESSEL_SWITCH || m as f64 > 0.5 * x {
        return Ok(miller(m.max(1), x)[m]);
    }
    let (j0, j1, _, _) = hankel01(x);
    Ok(forward(m, x, j0, j1))
}

/// `Y_m(x)` for `x > 0`.
pub fn bessel_y(m: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("Bessel Y needs x > 0, got {x}")));
    }
    let (y0, y1) = if x < BESSEL_SWITCH {
        neumann_y01(x)
    } else {
        let (_, _, y0, y1) = hankel01(x);
        (y0, y1)
    };
    Ok(forward(m, x, y0, y1))
}

/// Positive envelope of `J_m`: `J_m(x)` up to `x = max(1, m)` (below the
/// first zero) and the Hankel modulus `(J_m² + Y_m²)^{1/2}` beyond.
pub fn j_tilde(m: usize, x: f64) -> Result<f64> {
    let seam = (m as f64).max(1.0);
    if x <= seam {
        bessel_j(m, x)
    } else {
        Ok(bessel_j(m, x)?.hypot(bessel_y(m, x)?))
    }
}

// Normalized J_0..=J_top by backward recurrence with J_0 + 2ΣJ_{2k} = 1.
fn miller(m: usize, x: f64) -> Vec<f64> {
    let big = (m as f64).max(x);
    let mut start = (big + 20.0 + (40.0 * big).sqrt()) as usize;
    start += start % 2;
    let mut v = vec![0.0; start + 2];
    v[start] = 1e-30;
    for k in (1..=start).rev() {
        v[k - 1] = 2.0 * k as f64 / x * v[k] - v[k + 1];
        if v[k - 1].abs() > 1e250 {
            for w in v.iter_mut().skip(k - 1) {
                *w *= 1e-250;
            }
        }
    }
    let norm = v[0] + 2.0 * v.iter().skip(2).step_by(2).sum::<f64>();
    v.truncate(start + 1);
    for w in v.iter_mut() {
        *w /= norm;
    }
    v
}

fn neumann_y01(x: f64) -> (f64, f64) {
    let j = miller(1, x);
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut sign = -1.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let kf = k as f64;
        s0 += sign * j[2 * k] / kf;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / kf;
        sign = -sign;
        k += 1;
    }
    let y0 = 2.0 / PI * lg * j[0] - 4.0 / PI * s0;
    let y1 = 2.0 / PI * (lg * j[1] - j[0] / x) + 2.0 / PI * s1;
    (y0, y1)
}

// Hankel asymptotic expansion for orders 0 and 1.
fn hankel01(x: f64) -> (f64, f64, f64, f64) {
    let pq = |m: f64| {
        let mu = 4.0 * m * m;
        let mut p = 1.0;
        let mut q = 0.0;
        let mut a = 1.0;
        let mut last = f64::INFINITY;
        for j in 1..60 {
            let jf = j as f64;
            a *= (mu - (2.0 * jf - 1.0).powi(2)) / (jf * 8.0 * x);
            if a.abs() >= last || a.abs() < 1e-18 {
                break;
            }
            last = a.abs();
            // a_j/x^j alternates between Q and P with signs (+Q, −P, −Q, +P, …).
            match j % 4 {
                1 => q += a,
                2 => p -= a,
                3 => q -= a,
                _ => p += a,
            }
        }
        (p, q)
    };
    let amp = (2.0 / (PI * x)).sqrt();
    let (p0, q0) = pq(0.0);
    let (p1, q1) = pq(1.0);
    let (s0, c0) = (x - 0.25 * PI).sin_cos();
    let (s1, c1) = (x - 0.75 * PI).sin_cos();
    (
        amp * (p0 * c0 - q0 * s0),
        amp * (p1 * c1 - q1 * s1),
        amp * (p0 * s0 + q0 * c0),
        amp * (p1 * s1 + q1 * c1),
    )
}

fn forward(m: usize, x: f64, f0: f64, f1: f64) -> f64 {
    if m == 0 {
        return f0;
    }
    let (mut a, mut b) = (f0, f1);
    for k in 1..m {
        let c = 2.0 * k as f64 / x * b - a;
        a = b;
        b = c;
    }
    b
}
