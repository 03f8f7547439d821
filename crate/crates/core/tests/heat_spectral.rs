//! Cross-checks between the group Fourier transform and the heat kernel.

use std::f64::consts::PI;

use hdisc::gft::{eigen_factor, gft_radial, reconstruct, HeatProfile, LambdaGrid, SpectralTable};
use hdisc::heatkernel::q_s_eval;
use hdisc::HPoint;
use num_complex::Complex64;

fn heat_coefficient(s: f64, n: usize, l: f64, k: usize) -> f64 {
    2f64.powf(0.5 * (n as f64 - 1.0))
        * (2.0 * PI).powi(-(n as i32))
        * (-(2.0 * k as f64 + n as f64) * l.abs() * s).exp()
}

#[test]
fn quadrature_coefficients_match_closed_form() {
    for n in 1..=2 {
        let p = HeatProfile::new(0.5, n);
        for &l in &[0.01, 0.3, 1.0, 7.5] {
            for k in [0usize, 1, 9, 40] {
                let v = gft_radial(&p, l, k, n).unwrap();
                assert!(
                    (v.re - heat_coefficient(0.5, n, l, k)).abs() < 1e-9,
                    "n={n} λ={l} k={k}"
                );
            }
        }
    }
}

#[test]
fn semigroup_is_diagonal() {
    // E_n·q̂_{1/4}(λ,k)² = q̂_{1/2}(λ,k).
    for n in 1..=2 {
        let (a, b) = (HeatProfile::new(0.25, n), HeatProfile::new(0.5, n));
        for &l in &[0.2, 1.0, -3.0] {
            for k in [0usize, 2, 7] {
                let fa = gft_radial(&a, l, k, n).unwrap();
                let fb = gft_radial(&b, l, k, n).unwrap();
                let prod = fa * fa * eigen_factor(n);
                assert!((prod - fb).norm() < 1e-6, "n={n} λ={l} k={k}");
            }
        }
    }
}

#[test]
fn reconstruction_round_trip() {
    let s = 0.5;
    let grid = LambdaGrid::hybrid(80.0, 0.5, 1e-5);
    let table = SpectralTable::from_fn(1, 6000, grid, |l, k| {
        Ok(Complex64::new(heat_coefficient(s, 1, l, k), 0.0))
    })
    .unwrap();
    for (x, t) in [(0.0, 0.0), (0.5, 0.2)] {
        let exact = q_s_eval(s, &HPoint::h1(x, 0.0, t)).unwrap();
        let r = reconstruct(&table, &[x, 0.0], t, 1e-4).unwrap();
        assert!((r.value - exact).abs() < 1e-4, "({x},{t}): {} vs {exact}", r.value);
    }
}
