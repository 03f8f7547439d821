//! Tabulated coefficients `f̂(λ_i, k)` on a λ-quadrature grid, with
//! reconstruction, Plancherel energy and CSV serialization.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use super::coefficients::{gft_radial, ChiEngine};
use super::eigen_factor;
use super::profile::RadialProfile;
use crate::error::{domain, Error, Result};
use crate::quad::{pairwise_sum, GaussLegendre};
use crate::specfun::{dim_k, laguerre_lambda_into, rk};

const GRID_ORDER: usize = 8;

/// λ-nodes with quadrature weights. A grid with only positive nodes stands
/// for the symmetric grid under `f̂(−λ,k) = conj f̂(λ,k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LambdaGrid {
    /// Composite Gauss–Legendre (order 8) on the given panel breaks.
    pub fn from_breaks(breaks: &[f64]) -> Self {
        let (nodes, weights) = GaussLegendre::cached(GRID_ORDER).composite(breaks);
        Self { nodes, weights }
    }

    /// Panels on `(0, λ_max]`: geometric refinement toward 0 down to
    /// `λ_min`, uniform of width `h` on `[h, λ_max]`.
    pub fn hybrid(lambda_max: f64, h: f64, lambda_min: f64) -> Self {
        Self::from_breaks(&hybrid_breaks(lambda_max, h, lambda_min))
    }

    /// Trapezoid weights on arbitrary increasing nodes. For positive-only
    /// nodes the first interval also covers `[0, λ_0]`.
    pub fn trapezoid(nodes: Vec<f64>) -> Self {
        let m = nodes.len();
        let mut weights = vec![0.0; m];
        for i in 1..m {
            let h = nodes[i] - nodes[i - 1];
            weights[i - 1] += 0.5 * h;
            weights[i] += 0.5 * h;
        }
        if m > 0 && nodes[0] > 0.0 {
            weights[0] += nodes[0];
        }
        Self { nodes, weights }
    }

    /// The grid reflected to cover both signs of λ.
    pub fn mirrored(&self) -> Self {
        let mut nodes: Vec<f64> = self.nodes.iter().rev().map(|l| -l).collect();
        let mut weights: Vec<f64> = self.weights.iter().rev().copied().collect();
        nodes.extend_from_slice(&self.nodes);
        weights.extend_from_slice(&self.weights);
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.weights.len() {
            return Err(domain("λ-grid nodes and weights differ in length"));
        }
        if self.nodes.iter().any(|&l| l == 0.0 || !l.is_finite()) {
            return Err(domain("λ-grid must consist of finite nonzero values"));
        }
        if self.nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain("λ-grid must be strictly increasing"));
        }
        Ok(())
    }

    pub fn is_half(&self) -> bool {
        self.nodes.first().is_some_and(|&l| l > 0.0)
    }
}

pub fn hybrid_breaks(lambda_max: f64, h: f64, lambda_min: f64) -> Vec<f64> {
    assert!(lambda_max > 0.0 && h > 0.0 && lambda_min > 0.0);
    let mut breaks = vec![0.0];
    let first = h.min(lambda_max);
    let mut b = lambda_min.min(first);
    while b < first {
        breaks.push(b);
        b *= 2.0;
    }
    let panels = (lambda_max / h).ceil().max(1.0) as usize;
    let step = lambda_max / panels as f64;
    for i in 1..=panels {
        let v = i as f64 * step;
        if v > *breaks.last().unwrap() {
            breaks.push(v);
        }
    }
    breaks
}

/// Coefficients `f̂(λ_i, k)`, `0 ≤ k ≤ k_max`, stored row-major by λ.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTable {
    pub n: usize,
    pub k_max: usize,
    pub grid: LambdaGrid,
    pub values: Vec<Complex64>,
    /// Estimated sup-norm contribution of the dropped `k > k_max` and
    /// `|λ| > λ_max` parts in [`reconstruct`].
    pub tail_bound: f64,
}

impl SpectralTable {
    pub fn new(n: usize, k_max: usize, grid: LambdaGrid, values: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(domain("dimension n must be positive"));
        }
        grid.validate()?;
        if values.len() != grid.len() * (k_max + 1) {
            return Err(domain("table values do not match grid × (k_max+1)"));
        }
        let mut t = Self {
            n,
            k_max,
            grid,
            values,
            tail_bound: 0.0,
        };
        t.tail_bound = t.estimate_pointwise_tail();
        Ok(t)
    }

    /// Table of an arbitrary coefficient function.
    pub fn from_fn<F>(n: usize, k_max: usize, grid: LambdaGrid, f: F) -> Result<Self>
    where
        F: Fn(f64, usize) -> Result<Complex64> + Sync,
    {
        let kk = k_max + 1;
        let rows: Vec<Vec<Complex64>> = grid
            .nodes
            .par_iter()
            .map(|&l| (0..kk).map(|k| f(l, k)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Self::new(n, k_max, grid, rows.concat())
    }

    /// Table of a radial profile via [`gft_radial`].
    pub fn from_profile<P: RadialProfile + ?Sized>(
        profile: &P,
        n: usize,
        k_max: usize,
        grid: LambdaGrid,
    ) -> Result<Self> {
        Self::from_fn(n, k_max, grid, |l, k| gft_radial(profile, l, k, n))
    }

    /// Table of `χ_{B_ρ}` via the batched box engine and dilation.
    pub fn chi_box(n: usize, k_max: usize, rho: f64, grid: LambdaGrid) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(domain(format!("dilation radius must lie in (0, 1], got {rho}")));
        }
        let eng = ChiEngine::new(n, k_max);
        let scale = rho.powi(2 * n as i32 + 2);
        let rows: Vec<Vec<Complex64>> = grid
            .nodes
            .par_iter()
            .map(|&l| {
                eng.chihat_all(rho * rho * l)
                    .map(|col| col.into_iter().map(|v| Complex64::new(scale * v, 0.0)).collect())
            })
            .collect::<Result<_>>()?;
        Self::new(n, k_max, grid, rows.concat())
    }

    pub fn value(&self, i: usize, k: usize) -> Complex64 {
        self.values[i * (self.k_max + 1) + k]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let kk = self.k_max + 1;
        &self.values[i * kk..(i + 1) * kk]
    }

    fn estimate_pointwise_tail(&self) -> f64 {
        let n = self.n;
        let pre = 2f64.powf(0.5 * (1.0 - n as f64)) * (2.0 * PI).powi(n as i32 - 1);
        let mirror = if self.grid.is_half() { 2.0 } else { 1.0 };
        // |φ_k^λ| ≤ (|λ|/2π)ⁿ dim(k).
        let (_, l_part, k_part) = integrate_terms(self, |i, k, v| {
            let l = self.grid.nodes[i].abs();
            v.norm() * dim_k(k, n) * (l / (2.0 * PI)).powi(n as i32)
        });
        mirror * pre * (k_part + l_part)
    }
}

/// Weighted λ-integral of the k-summed `term`, split into
/// `(truncated, λ-tail, k-tail)`. The k-tail is extrapolated from the
/// λ-integrated k-blocks, the λ-tail from the k-summed λ-blocks.
fn integrate_terms<F>(table: &SpectralTable, term: F) -> (f64, f64, f64)
where
    F: Fn(usize, usize, Complex64) -> f64,
{
    let kk = table.k_max + 1;
    let mut rows = Vec::with_capacity(table.grid.len());
    let mut columns = vec![0.0; kk];
    for (i, w) in table.grid.weights.iter().enumerate() {
        let terms: Vec<f64> = table.row(i).iter().enumerate().map(|(k, v)| term(i, k, *v)).collect();
        for (c, t) in columns.iter_mut().zip(&terms) {
            *c += w * t;
        }
        rows.push(pairwise_sum(&terms));
    }
    (
        weighted_sum(&table.grid, &rows),
        lambda_tail(&table.grid, &rows),
        k_tail(&columns),
    )
}

fn weighted_sum(grid: &LambdaGrid, vals: &[f64]) -> f64 {
    let terms: Vec<f64> = vals.iter().zip(&grid.weights).map(|(v, w)| v * w).collect();
    pairwise_sum(&terms)
}

/// Sum of a geometric continuation whose ratio is read off two adjacent
/// doubling blocks. Returns ∞ when the blocks do not decrease.
pub(crate) fn extrapolate(lower: f64, upper: f64) -> f64 {
    if upper <= 0.0 {
        return 0.0;
    }
    if lower <= 0.0 {
        return f64::INFINITY;
    }
    let q = upper / lower;
    if q >= 1.0 {
        return f64::INFINITY;
    }
    upper * q / (1.0 - q)
}

// Σ_{k > K} estimated from the blocks (K/4, K/2] and (K/2, K].
fn k_tail(terms: &[f64]) -> f64 {
    let kmax = terms.len() - 1;
    if kmax < 4 {
        return if terms.last().copied().unwrap_or(0.0) > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    let upper: f64 = terms[kmax / 2 + 1..=kmax].iter().sum();
    let lower: f64 = terms[kmax / 4 + 1..=kmax / 2].iter().sum();
    extrapolate(lower, upper)
}

// ∫_{|λ| > Λ} estimated from the blocks Λ/4 < |λ| ≤ Λ/2 and Λ/2 < |λ| ≤ Λ.
fn lambda_tail(grid: &LambdaGrid, vals: &[f64]) -> f64 {
    let top = grid.nodes.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let mut upper = 0.0;
    let mut lower = 0.0;
    for ((l, w), v) in grid.nodes.iter().zip(&grid.weights).zip(vals) {
        let a = l.abs();
        if a > 0.5 * top {
            upper += w * v;
        } else if a > 0.25 * top {
            lower += w * v;
        }
    }
    // Both signs of a full grid contribute to the same blocks.
    extrapolate(lower, upper)
}

/// Pointwise reconstruction with its accuracy guarantee.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reconstruction {
    pub value: f64,
    /// Imaginary part of the λ-integral (zero up to rounding for real `f`).
    pub imag_residue: f64,
    pub tail_bound: f64,
}

/// `f(z,t) ≈ 2^{(1−n)/2}(2π)^{n−1} ∫ e^{−itλ} Σ_k f̂(λ,k) φ_k^λ(z) dλ`.
/// Fails with a truncation error when the table's tail bound exceeds `tol`.
pub fn reconstruct(table: &SpectralTable, z: &[f64], t: f64, tol: f64) -> Result<Reconstruction> {
    let n = table.n;
    if z.len() != 2 * n {
        return Err(domain(format!("z needs {} coordinates, got {}", 2 * n, z.len())));
    }
    if table.tail_bound > tol {
        return Err(Error::Truncation {
            bound: table.tail_bound,
            tolerance: tol,
        });
    }
    let r2: f64 = z.iter().map(|v| v * v).sum();
    let delta = (n - 1) as f64;
    let kk = table.k_max + 1;
    let rks: Vec<f64> = (0..kk).map(|k| rk(k, delta)).collect();
    let mut lag = vec![0.0; kk];
    let mut terms = Vec::with_capacity(table.grid.len());
    for (i, (&l, &w)) in table.grid.nodes.iter().zip(&table.grid.weights).enumerate() {
        let a = l.abs();
        let x = 0.5 * a * r2;
        // L_k^{n−1}(x) e^{−x/2} from the normalized functions.
        if x > 0.0 {
            laguerre_lambda_into(delta, x, &mut lag)?;
            let s = x.powf(-0.5 * delta);
            for (v, r) in lag.iter_mut().zip(&rks) {
                *v *= s / r;
            }
        } else {
            for (k, v) in lag.iter_mut().enumerate() {
                *v = dim_k(k, n);
            }
        }
        let scale = (a / (2.0 * PI)).powi(n as i32);
        let inner: Complex64 = table.row(i).iter().zip(&lag).map(|(c, v)| c * v).sum();
        terms.push(Complex64::from_polar(w * scale, -t * l) * inner);
    }
    let mut total = pairwise_sum(&terms);
    if table.grid.is_half() {
        total = Complex64::new(2.0 * total.re, 0.0);
    }
    let pre = 2f64.powf(0.5 * (1.0 - n as f64)) * (2.0 * PI).powi(n as i32 - 1);
    Ok(Reconstruction {
        value: pre * total.re,
        imag_residue: pre * total.im,
        tail_bound: table.tail_bound,
    })
}

/// Spectral energy and the estimated contribution of what the table omits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Energy {
    /// `truncated + k_tail + lambda_tail`.
    pub value: f64,
    pub truncated: f64,
    pub k_tail: f64,
    pub lambda_tail: f64,
}

impl Energy {
    pub fn tail_bound(&self) -> f64 {
        self.k_tail + self.lambda_tail
    }
}

/// `(2π)^{−(n+1)} ∫ Σ_k dim(k) |E_n f̂(λ,k)|² |λ|ⁿ dλ`.
pub fn plancherel_energy(table: &SpectralTable) -> Energy {
    let n = table.n;
    let e = eigen_factor(n);
    let c = e * e / (2.0 * PI).powi(n as i32 + 1);
    let mirror = if table.grid.is_half() { 2.0 } else { 1.0 };
    let (sum, l_tail, k_tail) = integrate_terms(table, |i, k, v| {
        dim_k(k, n) * v.norm_sqr() * table.grid.nodes[i].abs().powi(n as i32)
    });
    let truncated = mirror * c * sum;
    let k_tail = mirror * c * k_tail;
    let lambda_tail = mirror * c * l_tail;
    Energy {
        value: truncated + k_tail + lambda_tail,
        truncated,
        k_tail,
        lambda_tail,
    }
}

impl SpectralTable {
    /// Writes `n,k_max,tail_bound`, one data line, then `lambda,k,re,im` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n,k_max,tail_bound")?;
        writeln!(w, "{},{},{}", self.n, self.k_max, self.tail_bound)?;
        writeln!(w, "lambda,k,re,im")?;
        let mut line = String::new();
        for (i, l) in self.grid.nodes.iter().enumerate() {
            for k in 0..=self.k_max {
                let v = self.value(i, k);
                line.clear();
                let _ = writeln!(line, "{l},{k},{},{}", v.re, v.im);
                w.write_all(line.as_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads the CSV layout of [`SpectralTable::write_csv`]. Quadrature
    /// weights are not serialized; the grid gets trapezoid weights.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = |what: &str| -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .map_err(Error::from)
        };
        if next("header")?.trim() != "n,k_max,tail_bound" {
            return Err(Error::Parse("expected header n,k_max,tail_bound".into()));
        }
        let meta = next("table metadata")?;
        let f: Vec<&str> = meta.trim().split(',').collect();
        if f.len() != 3 {
            return Err(Error::Parse(format!("bad metadata line {meta:?}")));
        }
        let n: usize = parse(f[0])?;
        let k_max: usize = parse(f[1])?;
        let tail_bound: f64 = parse(f[2])?;
        if next("row header")?.trim() != "lambda,k,re,im" {
            return Err(Error::Parse("expected header lambda,k,re,im".into()));
        }
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 4 {
                return Err(Error::Parse(format!("bad row {line:?}")));
            }
            let l: f64 = parse(f[0])?;
            let k: usize = parse(f[1])?;
            if k != values.len() % (k_max + 1) {
                return Err(Error::Parse(format!("rows out of order at {line:?}")));
            }
            if k == 0 {
                nodes.push(l);
            } else if nodes.last() != Some(&l) {
                return Err(Error::Parse(format!("λ changes inside a k-block at {line:?}")));
            }
            values.push(Complex64::new(parse(f[2])?, parse(f[3])?));
        }
        if values.len() != nodes.len() * (k_max + 1) {
            return Err(Error::Parse("incomplete final k-block".into()));
        }
        let grid = LambdaGrid::trapezoid(nodes);
        grid.validate()?;
        if !(tail_bound >= 0.0) {
            return Err(Error::Parse("tail_bound must be nonnegative".into()));
        }
        Ok(Self {
            n,
            k_max,
            grid,
            values,
            tail_bound,
        })
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gft::profile::{GaussianProfile, HeatProfile};

    fn heat_coeff(s: f64, n: usize) -> impl Fn(f64, usize) -> Result<Complex64> + Sync {
        move |l: f64, k: usize| {
            let v = 2f64.powf(0.5 * (n as f64 - 1.0))
                * (2.0 * PI).powi(-(n as i32))
                * (-(2.0 * k as f64 + n as f64) * l.abs() * s).exp();
            Ok(Complex64::new(v, 0.0))
        }
    }

    #[test]
    fn grid_integrates_smooth_functions() {
        let g = LambdaGrid::hybrid(30.0, 0.5, 1e-3);
        let v: f64 = g.nodes.iter().zip(&g.weights).map(|(l, w)| w * (-l).exp()).sum();
        assert!((v - (1.0 - (-30.0f64).exp())).abs() < 1e-13);
        let m = g.mirrored();
        assert!(!m.is_half() && m.len() == 2 * g.len());
        assert!(m.validate().is_ok());
    }

    #[test]
    fn rejects_bad_grids() {
        let bad = LambdaGrid {
            nodes: vec![1.0, 0.5],
            weights: vec![1.0, 1.0],
        };
        assert!(SpectralTable::new(1, 0, bad, vec![Complex64::new(0.0, 0.0); 2]).is_err());
        let zero = LambdaGrid {
            nodes: vec![0.0, 0.5],
            weights: vec![1.0, 1.0],
        };
        assert!(SpectralTable::new(1, 0, zero, vec![Complex64::new(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn heat_energy_and_reconstruction_at_origin() {
        // ‖q_{1/2}‖² = q_1(0) = 1/16 (n=1), 1/(96π) (n=2) from the Mehler slice.
        for n in 1..=2 {
            let exact = if n == 1 { 1.0 / 16.0 } else { 1.0 / (96.0 * PI) };
            let grid = LambdaGrid::hybrid(120.0, 0.25, 1e-4);
            let t = SpectralTable::from_fn(n, 300, grid.clone(), heat_coeff(0.5, n)).unwrap();
            let e = plancherel_energy(&t);
            assert!(
                (e.value - exact).abs() < 0.2 * e.tail_bound(),
                "n={n}: {e:?} vs {exact}"
            );
            assert!((e.truncated - exact).abs() < 2.0 * e.tail_bound());
            let t2 = SpectralTable::from_fn(n, 300, grid, heat_coeff(1.0, n)).unwrap();
            let q = reconstruct(&t2, &vec![0.0; 2 * n], 0.0, 1e-3).unwrap();
            assert!((q.value - exact).abs() <= q.tail_bound, "n={n}: {} vs {exact}", q.value);
        }
    }

    #[test]
    fn gaussian_energy_matches_l2_norm() {
        for (n, tol) in [(1usize, 0.005), (2, 0.01)] {
            let p = GaussianProfile { a: 1.0, b: 1.0 };
            let grid = LambdaGrid::hybrid(12.0, 1.0, 1e-3);
            let t = SpectralTable::from_profile(&p, n, 80, grid).unwrap();
            let e = plancherel_energy(&t);
            let exact = p.l2_norm_sq(n);
            assert!((e.value - exact).abs() < tol * exact, "n={n}: {} vs {exact}", e.value);
        }
    }

    #[test]
    fn box_energy_is_box_volume() {
        for rho in [1.0, 0.5] {
            let t = SpectralTable::chi_box(1, 100, rho, LambdaGrid::hybrid(100.0, 0.5, 1e-4)).unwrap();
            let e = plancherel_energy(&t);
            let vol = 2.0 * PI * rho.powi(4);
            assert!((e.value - vol).abs() < 0.01 * vol, "ρ={rho}: {e:?}");
            assert!(e.truncated < vol);
        }
    }

    #[test]
    fn radial_symmetry_and_real_output() {
        let grid = LambdaGrid::hybrid(60.0, 0.5, 1e-3).mirrored();
        let t = SpectralTable::from_profile(&HeatProfile::new(0.5, 2), 2, 60, grid).unwrap();
        let a = reconstruct(&t, &[0.3, 0.4, 0.0, 0.0], 0.2, 1e-2).unwrap();
        let b = reconstruct(&t, &[0.0, 0.0, -0.5, 0.0], 0.2, 1e-2).unwrap();
        assert!((a.value - b.value).abs() < 1e-10);
        assert!(a.imag_residue.abs() < 1e-10);
    }

    #[test]
    fn truncation_is_signalled() {
        let grid = LambdaGrid::hybrid(2.0, 0.5, 1e-3);
        let t = SpectralTable::from_fn(1, 3, grid, heat_coeff(0.1, 1)).unwrap();
        assert!(t.tail_bound > 1e-3);
        assert!(matches!(
            reconstruct(&t, &[0.0, 0.0], 0.0, 1e-6),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn zero_table() {
        let grid = LambdaGrid::hybrid(5.0, 0.5, 1e-3);
        let t = SpectralTable::from_fn(1, 8, grid, |_, _| Ok(Complex64::new(0.0, 0.0))).unwrap();
        assert_eq!(plancherel_energy(&t).value, 0.0);
        assert_eq!(t.tail_bound, 0.0);
    }

    #[test]
    fn csv_round_trip_is_bit_stable() {
        let grid = LambdaGrid::hybrid(3.0, 0.5, 0.1);
        let t = SpectralTable::from_fn(2, 4, grid, |l, k| {
            Ok(Complex64::new(l.sin() / (k as f64 + 1.0), 1.0 / 3.0 * l))
        })
        .unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = SpectralTable::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.values, t.values);
        assert_eq!(back.grid.nodes, t.grid.nodes);
        assert_eq!(back.tail_bound, t.tail_bound);
        let mut again = Vec::new();
        back.write_csv(&mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(SpectralTable::read_csv("n,k_max\n".as_bytes()).is_err());
        assert!(SpectralTable::read_csv("n,k_max,tail_bound\n1,1,0\nlambda,k,re,im\n1,0,1,0\n".as_bytes()).is_err());
    }
}
