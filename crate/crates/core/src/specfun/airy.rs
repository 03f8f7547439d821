//! Airy functions `Ai`, `Bi`, `Ai′`, the envelope `Ãi`, and the repeated
//! integrals `IAi`, `IIAi`.
//!
//! Maclaurin series are used on `[AIRY_NEG_SWITCH, AIRY_POS_SWITCH]`, where
//! cancellation in `Ai = c₁f − c₂g` costs at most a few digits; outside,
//! the standard asymptotic expansions are optimally truncated.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::Result;
use crate::quad::{integrate_panels, uniform_breaks, QuadConfig};

pub const AIRY_POS_SWITCH: f64 = 6.0;
pub const AIRY_NEG_SWITCH: f64 = -7.0;

const AI0: f64 = 0.355_028_053_887_817_239_3;
const MINUS_AIP0: f64 = 0.258_819_403_792_806_798_4;

/// `(Ai, Bi, Ai′)` at `u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Airy {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
}

pub fn airy(u: f64) -> Airy {
    if (AIRY_NEG_SWITCH..=AIRY_POS_SWITCH).contains(&u) {
        maclaurin(u)
    } else if u > 0.0 {
        asymptotic_pos(u)
    } else {
        asymptotic_neg(-u)
    }
}

/// `(Ai² + Bi²)^{1/2}` for `u < 0`, `Ai(u)` for `u ≥ 0`.
pub fn ai_tilde(u: f64) -> f64 {
    let a = airy(u);
    if u < 0.0 {
        a.ai.hypot(a.bi)
    } else {
        a.ai
    }
}

fn maclaurin(u: f64) -> Airy {
    let u3 = u * u * u;
    let (mut f, mut g) = (1.0, u);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut tf, mut tg) = (1.0, u);
    let (mut tfp, mut tgp) = (0.5 * u * u, 1.0);
    for k in 1..200 {
        let kf = k as f64;
        tf *= u3 / ((3.0 * kf) * (3.0 * kf - 1.0));
        tg *= u3 / ((3.0 * kf + 1.0) * (3.0 * kf));
        if k >= 2 {
            tfp *= u3 / ((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
        }
        tgp *= u3 / ((3.0 * kf) * (3.0 * kf - 2.0));
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        if tf.abs() + tg.abs() + tfp.abs() + tgp.abs() < 1e-18 * scale {
            break;
        }
    }
    Airy {
        ai: AI0 * f - MINUS_AIP0 * g,
        bi: 3f64.sqrt() * (AI0 * f + MINUS_AIP0 * g),
        ai_prime: AI0 * fp - MINUS_AIP0 * gp,
    }
}

// Coefficients u_k, v_k of the Airy asymptotic expansions.
fn uv_coefficients() -> ([f64; 40], [f64; 40]) {
    let mut uk = [0.0; 40];
    let mut vk = [0.0; 40];
    uk[0] = 1.0;
    vk[0] = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        uk[k] = uk[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        vk[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk[k];
    }
    (uk, vk)
}

// Σ s_k c_k / ζ^k with an alternating-sign flag, truncated at the smallest term.
fn series(c: &[f64; 40], zeta: f64, alternating: bool) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for (k, &ck) in c.iter().enumerate() {
        let term = ck * pow;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        sum += if alternating && k % 2 == 1 { -term } else { term };
        if last < 1e-17 * sum.abs() {
            break;
        }
        pow /= zeta;
    }
    sum
}

fn asymptotic_pos(x: f64) -> Airy {
    let (uk, vk) = uv_coefficients();
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let q = x.powf(0.25);
    let e = (-zeta).exp();
    Airy {
        ai: e / (2.0 * PI.sqrt() * q) * series(&uk, zeta, true),
        bi: zeta.exp() / (PI.sqrt() * q) * series(&uk, zeta, false),
        ai_prime: -q * e / (2.0 * PI.sqrt()) * series(&vk, zeta, true),
    }
}

// Expansions for Ai(−x), Bi(−x), Ai′(−x) split into even and odd parts.
fn asymptotic_neg(x: f64) -> Airy {
    let (uk, vk) = uv_coefficients();
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let split = |c: &[f64; 40]| {
        let mut even = 0.0;
        let mut odd = 0.0;
        let mut pow = 1.0;
        let mut last = f64::INFINITY;
        for (k, &ck) in c.iter().enumerate() {
            let term = ck * pow;
            if term.abs() > last {
                break;
            }
            last = term.abs();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                even += sign * term;
            } else {
                odd += sign * term;
            }
            if last < 1e-17 {
                break;
            }
            pow /= zeta;
        }
        (even, odd)
    };
    let (ue, uo) = split(&uk);
    let (ve, vo) = split(&vk);
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let q = x.powf(0.25);
    let a = 1.0 / (PI.sqrt() * q);
    Airy {
        ai: a * (c * ue + s * uo),
        bi: a * (-s * ue + c * uo),
        ai_prime: q / PI.sqrt() * (s * ve - c * vo),
    }
}

/// `(IAi(u), IIAi(u))` where `IAi = ∫_{−∞}^u Ai` and `IIAi = ∫_{−∞}^u IAi`.
///
/// `IAi` is `2/3 + ∫₀^u Ai` by adaptive quadrature; `IIAi` uses the exact
/// antiderivative `u·IAi(u) − Ai′(u)`, whose value at 0 is `−Ai′(0)`.
pub fn airy_iai(u: f64) -> Result<(f64, f64)> {
    let iai = iai(u)?;
    Ok((iai, u * iai - airy(u).ai_prime))
}

fn iai(u: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(2.0 / 3.0);
    }
    // Ai is below 1e-70 past u = 40.
    let upper = u.min(40.0);
    let width = upper.abs();
    // About two panels per local wavelength 2π/√|u|.
    let per_unit = if upper < 0.0 { 1.0 + width.sqrt() / PI } else { 1.0 };
    let panels = (width * per_unit).ceil().max(1.0) as usize;
    let breaks = uniform_breaks(0.0_f64.min(upper), 0.0_f64.max(upper), panels);
    let cfg = QuadConfig::abs(1e-12).with_max_panels(4 * panels + 2000);
    let r = integrate_panels(|x: f64| airy(x).ai, &breaks, cfg)?;
    Ok(2.0 / 3.0 + r.value.copysign(upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath references at 30 digits: (u, Ai, Bi, Ai′).
    const REF: &[(f64, f64, f64, f64)] = &[
        (
            -100.0,
            0.17675339323955287809,
            0.024273887680160131606,
            -0.2422970316605838054,
        ),
        (
            -30.0,
            -0.087968188456842162833,
            -0.22444694220056631974,
            1.2286206026374851347,
        ),
        (
            -7.5,
            0.32177571638064787527,
            -0.11246348507649080638,
            0.31880950669855459621,
        ),
        (
            -7.0,
            0.18428083525050563728,
            0.29376207185441402012,
            -0.77100816841012654773,
        ),
        (
            -4.5,
            0.29215278105595946688,
            0.2538726576969326368,
            -0.52336253231574770071,
        ),
        (
            -1.0,
            0.5355608832923521188,
            0.10399738949694461189,
            -0.010160567116645209395,
        ),
        (
            0.5,
            0.23169360648083348977,
            0.8542770431031554933,
            -0.22491053266468389314,
        ),
        (
            3.0,
            0.0065911393574607191443,
            14.037328963730232032,
            -0.011912976705951318474,
        ),
        (
            4.5,
            0.00033025032351430898366,
            227.58808183559971846,
            -0.00071786656755750888869,
        ),
        (
            6.0,
            9.9476943602528895702e-6,
            6536.4461048098634538,
            -0.000024765200397034954754,
        ),
        (
            6.5,
            2.7958823432049135855e-6,
            22340.607718396998158,
            -7.2319314666017925598e-6,
        ),
        (
            12.0,
            1.393184688875360839e-13,
            329807225829.07417618,
            -4.854736554985308463e-13,
        ),
        (
            30.0,
            3.2082175915504955711e-49,
            9.0572885121513069519e+46,
            -1.7598765814327259821e-48,
        ),
    ];

    fn check(u: f64, ai: f64, bi: f64, aip: f64) {
        let a = airy(u);
        assert!((a.ai - ai).abs() < 1e-10, "Ai({u}) = {}, want {ai}", a.ai);
        assert!(
            (a.ai_prime - aip).abs() < 1e-10,
            "Ai'({u}) = {}, want {aip}",
            a.ai_prime
        );
        assert!(
            (a.bi - bi).abs() < 1e-10 * bi.abs().max(1.0),
            "Bi({u}) = {}, want {bi}",
            a.bi
        );
    }

    #[test]
    fn reference_values() {
        for &(u, ai, bi, aip) in REF {
            check(u, ai, bi, aip);
        }
    }

    #[test]
    fn origin() {
        let a = airy(0.0);
        let gamma_two_thirds = 1.354_117_939_426_400_4;
        assert!((a.ai - 3f64.powf(-2.0 / 3.0) / gamma_two_thirds).abs() < 1e-15);
    }

    #[test]
    fn first_zero() {
        assert!(airy(-2.338_107_410_459_767).ai.abs() < 1e-12);
        assert!(airy(-2.33811).ai.abs() < 1e-5);
    }

    #[test]
    fn seam_continuity() {
        for s in [AIRY_POS_SWITCH, AIRY_NEG_SWITCH] {
            let a = maclaurin(s);
            let b = if s > 0.0 { asymptotic_pos(s) } else { asymptotic_neg(-s) };
            assert!((a.ai - b.ai).abs() < 1e-10, "Ai seam at {s}");
            assert!((a.ai_prime - b.ai_prime).abs() < 1e-10, "Ai' seam at {s}");
            // Bi is only used for u < 0; on the growing side compare relatively.
            assert!((a.bi - b.bi).abs() < 1e-8 * a.bi.abs().max(1.0), "Bi seam at {s}");
        }
    }

    #[test]
    fn wronskian() {
        // Ai·Bi′ − Ai′·Bi = 1/π; Bi′ from a central difference is enough
        // to catch sign and branch mistakes.
        for &u in &[-30.0, -7.5, -3.0, 0.5, 5.0, 7.0] {
            let h = 1e-5;
            let bip = (airy(u + h).bi - airy(u - h).bi) / (2.0 * h);
            let a = airy(u);
            let w = a.ai * bip - a.ai_prime * a.bi;
            assert!((w - 1.0 / PI).abs() < 1e-6, "u={u}: {w}");
        }
    }

    #[test]
    fn positive_decay_law() {
        for u in [20.0f64, 50.0] {
            let resid = airy(u).ai.ln() + 2.0 / 3.0 * u.powf(1.5) + 0.25 * u.ln() - (1.0 / (2.0 * PI.sqrt())).ln();
            assert!(resid.abs() < 0.01, "u={u}: {resid}");
        }
    }

    #[test]
    fn ai_tilde_positive() {
        for i in 0..2000 {
            let u = -100.0 + 0.06 * i as f64;
            assert!(ai_tilde(u) > 0.0, "u={u}");
        }
    }

    #[test]
    fn iai_limits() {
        let (iai0, iiai0) = airy_iai(0.0).unwrap();
        assert_eq!(iai0, 2.0 / 3.0);
        assert!((iiai0 - MINUS_AIP0).abs() < 1e-15);
        assert!((airy_iai(10.0).unwrap().0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn iai_oscillation_law() {
        for u in [-20.0f64, -40.0, -80.0] {
            let x = -u;
            let lhs = airy_iai(u).unwrap().0 * PI.sqrt() * x.powf(0.75);
            let rhs = (2.0 / 3.0 * x.powf(1.5) + FRAC_PI_4).cos();
            assert!((lhs - rhs).abs() < 2.0 * x.powf(-1.5), "u={u}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn iiai_closed_form_matches_quadrature() {
        // ∫_a^b IAi = IIAi(b) − IIAi(a), and IIAi decays as u → −∞.
        let (a, b) = (-12.0, 3.0);
        let breaks = uniform_breaks(a, b, 30);
        let q = integrate_panels(|x: f64| airy_iai(x).unwrap().0, &breaks, QuadConfig::abs(1e-10)).unwrap();
        let diff = airy_iai(b).unwrap().1 - airy_iai(a).unwrap().1;
        assert!((q.value - diff).abs() < 1e-9, "{} vs {}", q.value, diff);
        for u in [-50.0f64, -200.0] {
            assert!(airy_iai(u).unwrap().1.abs() < 2.0 * (-u).powf(-1.25));
        }
    }
}
