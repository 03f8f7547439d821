//! Command-line harness: validation suites, discrepancy evaluation, the
//! scaling experiment and the kernel/envelope/I-term sweeps.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 a numerical
//! threshold or tolerance was not met.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::asymptotics::{i_term, log_grid, verify_envelope, EnvelopeReport};
use crate::discrepancy::{
    l2_direct, scaling_study, scaling_table, Generator, McConfig, MeasureModel, PointSet, SigmaMode, SpectralConfig,
    SpectralPlan,
};
use crate::error::{Error, Result};
use crate::gft::{chihat_box, plancherel_energy, special_hermite_check, LambdaGrid, SpectralTable};
use crate::heatkernel::{build_cutoff, k_s_eval, CutoffPair, FittedBound};
use crate::hgroup::{GroupContext, HPoint};
use crate::specfun::{bessel_error_scaling, NuIndex};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_THRESHOLD: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hdisc", version, about = "Quadratic discrepancy on the Heisenberg group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Dimension n of ℍⁿ.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest Hermite level.
    #[arg(long, global = true)]
    kmax: Option<usize>,
    /// Largest |λ|.
    #[arg(long, global = true)]
    lmax: Option<f64>,
    /// Monte-Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Comma-separated target sizes for the scaling run.
    #[arg(long = "Ns", global = true, value_delimiter = ',')]
    ns: Option<Vec<usize>>,
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: $HDISC_WORKERS, else all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Flat key=value file; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the validation suites and write a JSON report.
    Validate {
        /// Run only this suite.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Spectral l2 discrepancy of a point-set file.
    Discrepancy {
        file: PathBuf,
        /// Also run the direct Monte-Carlo evaluator.
        #[arg(long)]
        audit: bool,
        /// Use σ = Σδ (no μ term); an empty file then gives 0.
        #[arg(long)]
        test_mode: bool,
    },
    /// Discrepancy growth with N; CSV with a slope footer.
    Scaling {
        /// iid or jittered.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Smoothing-kernel positivity, scale and decay checks.
    Kernel,
    /// Averaged-envelope constants per ν.
    Envelope,
    /// Scaled I-term per s.
    Iterm,
}

/// Fully resolved settings of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub n: usize,
    pub seed: u64,
    pub k_max: usize,
    pub lambda_max: f64,
    pub lambda_step: f64,
    pub lambda_min: f64,
    pub samples: usize,
    pub ns: Vec<usize>,
    pub reps: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub workers: Option<usize>,
    pub generator: String,
}

impl RunConfig {
    fn defaults(command: &str) -> Self {
        Self {
            command: command.to_string(),
            n: 1,
            seed: 1,
            k_max: 200,
            lambda_max: 200.0,
            lambda_step: 0.5,
            lambda_min: 1e-4,
            samples: 100_000,
            ns: (4..=12).map(|k| 1usize << k).collect(),
            reps: 5,
            out: None,
            workers: None,
            generator: "jittered".into(),
        }
    }

    pub fn spectral(&self) -> SpectralConfig {
        SpectralConfig {
            k_max: self.k_max,
            lambda_max: self.lambda_max,
            panel_width: self.lambda_step,
            lambda_min: self.lambda_min,
            ..SpectralConfig::default()
        }
    }

    pub fn mc(&self) -> McConfig {
        McConfig {
            samples: self.samples,
            seed: self.seed,
        }
    }

    fn apply(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let bad = |what: &str| format!("invalid value {value:?} for key {key:?}: {what}");
        match key {
            "n" => self.n = value.parse().map_err(|_| bad("expected an integer"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("expected an integer"))?,
            "kmax" => self.k_max = value.parse().map_err(|_| bad("expected an integer"))?,
            "lmax" => self.lambda_max = value.parse().map_err(|_| bad("expected a number"))?,
            "lstep" => self.lambda_step = value.parse().map_err(|_| bad("expected a number"))?,
            "lmin" => self.lambda_min = value.parse().map_err(|_| bad("expected a number"))?,
            "samples" => self.samples = value.parse().map_err(|_| bad("expected an integer"))?,
            "Ns" => {
                self.ns = value
                    .split(',')
                    .map(|v| v.trim().parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("expected comma-separated integers"))?
            }
            "reps" => self.reps = value.parse().map_err(|_| bad("expected an integer"))?,
            "out" => self.out = Some(PathBuf::from(value)),
            "workers" => self.workers = Some(value.parse().map_err(|_| bad("expected an integer"))?),
            "generator" => self.generator = value.to_string(),
            _ => return Err(format!("unknown config key {key:?}")),
        }
        Ok(())
    }

    fn check(&self) -> std::result::Result<(), String> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if self.n == 0 || self.k_max == 0 || self.samples == 0 || self.reps == 0 {
            return Err("n, kmax, samples and reps must be positive".into());
        }
        if !positive(self.lambda_max) || !positive(self.lambda_step) || !positive(self.lambda_min) {
            return Err("lmax, lstep and lmin must be positive".into());
        }
        if self.ns.is_empty() || self.ns.contains(&0) {
            return Err("Ns must be a non-empty list of positive sizes".into());
        }
        if self.workers == Some(0) {
            return Err("workers must be positive".into());
        }
        if Generator::parse(&self.generator).is_none() {
            return Err(format!(
                "unknown generator {:?} (expected iid or jittered)",
                self.generator
            ));
        }
        Ok(())
    }
}

/// Parses a flat `key=value` file; blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> std::result::Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn resolve(cli: &Cli) -> std::result::Result<RunConfig, String> {
    let name = match &cli.command {
        Command::Validate { .. } => "validate",
        Command::Discrepancy { .. } => "discrepancy",
        Command::Scaling { .. } => "scaling",
        Command::Kernel => "kernel",
        Command::Envelope => "envelope",
        Command::Iterm => "iterm",
    };
    let mut cfg = RunConfig::defaults(name);
    if let Ok(w) = std::env::var("HDISC_WORKERS") {
        cfg.apply("workers", &w).map_err(|e| format!("HDISC_WORKERS: {e}"))?;
    }
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        for (k, v) in parse_config_file(&text)? {
            cfg.apply(&k, &v)?;
        }
    }
    if let Some(v) = cli.n {
        cfg.n = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.kmax {
        cfg.k_max = v;
    }
    if let Some(v) = cli.lmax {
        cfg.lambda_max = v;
    }
    if let Some(v) = cli.samples {
        cfg.samples = v;
    }
    if let Some(v) = &cli.ns {
        cfg.ns = v.clone();
    }
    if let Some(v) = cli.reps {
        cfg.reps = v;
    }
    if let Some(v) = &cli.out {
        cfg.out = Some(v.clone());
    }
    if let Some(v) = cli.workers {
        cfg.workers = Some(v);
    }
    if let Command::Scaling { generator: Some(g) } = &cli.command {
        cfg.generator = g.clone();
    }
    cfg.check()?;
    Ok(cfg)
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        builder = builder.num_threads(w);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start workers: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = pool.install(|| dispatch(&cli.command, &cfg));
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Truncation { .. } | Error::Quadrature { .. } => EXIT_THRESHOLD,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<i32> {
    match cmd {
        Command::Validate { suite } => cmd_validate(cfg, suite.as_deref()),
        Command::Discrepancy { file, audit, test_mode } => cmd_discrepancy(cfg, file, *audit, *test_mode),
        Command::Scaling { .. } => cmd_scaling(cfg),
        Command::Kernel => cmd_kernel(cfg),
        Command::Envelope => cmd_envelope(cfg),
        Command::Iterm => cmd_iterm(cfg),
    }
}

fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &cfg.out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_THRESHOLD
    }
}

/// Outcome of one validation suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: bool,
    pub metric: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    fn new(suite: &str, metric: f64, tolerance: f64, pass: bool) -> Self {
        Self {
            suite: suite.to_string(),
            pass,
            metric,
            tolerance,
        }
    }
}

pub const SUITES: [&str; 5] = ["plancherel", "chi_closed_form", "phi_k", "fw_scaling", "cutoff"];

/// Relative error of the truncated energy of `χ_{B_1}` against `|B_1|`.
pub fn suite_plancherel(n: usize, k_max: usize, lambda_max: f64) -> Result<SuiteResult> {
    let grid = LambdaGrid::hybrid(lambda_max, 0.5, 1e-4);
    let table = SpectralTable::chi_box(n, k_max, 1.0, grid)?;
    let energy = plancherel_energy(&table);
    let exact = GroupContext::new(n).unit_box_volume();
    let rel = (energy.value - exact).abs() / exact;
    Ok(SuiteResult::new("plancherel", rel, 5e-3, rel <= 5e-3))
}

/// Largest deviation of `χ̂_B(λ,0)`, n = 1, from `(4 sinλ/λ²)(1−e^{−λ/4})`
/// on 100 points of `(0, 50]`.
pub fn suite_chi_closed_form() -> Result<SuiteResult> {
    let mut worst = 0.0f64;
    for i in 1..=100 {
        let l = 0.5 * i as f64;
        let exact = 4.0 * l.sin() / (l * l) * (1.0 - (-l / 4.0).exp());
        worst = worst.max((chihat_box(l, 0, 1)? - exact).abs());
    }
    Ok(SuiteResult::new("chi_closed_form", worst, 1e-8, worst <= 1e-8))
}

/// Largest gap between the Hermite matrix coefficients and `(2π/|λ|)φ_k^λ`.
pub fn suite_phi_k() -> Result<SuiteResult> {
    let zs = [
        Complex64::new(0.3, 0.0),
        Complex64::new(-0.5, 0.8),
        Complex64::new(1.2, -0.7),
    ];
    let mut worst = 0.0f64;
    for k in 0..=2 {
        for &l in &[0.5, 1.0, 2.0] {
            for &z in &zs {
                let (lhs, rhs) = special_hermite_check(l, k, z)?;
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    Ok(SuiteResult::new("phi_k", worst, 1e-6, worst <= 1e-6))
}

/// Log-log slope of the envelope-normalized Bessel-regime error, n = 1.
pub fn suite_fw_scaling() -> Result<SuiteResult> {
    let (_, slope) = bessel_error_scaling(1, &[50, 102, 202, 402], 200)?;
    Ok(SuiteResult::new(
        "fw_scaling",
        slope,
        0.5,
        (-2.5..=-1.5).contains(&slope),
    ))
}

/// Worst violation among `‖Ψ‖² = 2π`, `F̂(0) = 1`, `F̂ ≤ 1`, `supp F̂ ⊆ [−1,1]`, `F ≥ 0`.
pub fn suite_cutoff(cut: &CutoffPair) -> Result<SuiteResult> {
    let mut worst = (cut.psi_norm_check - 2.0 * std::f64::consts::PI).abs();
    worst = worst.max((cut.f_hat(0.0)? - 1.0).abs());
    for i in 0..=400 {
        let l = -1.0 + i as f64 / 200.0;
        worst = worst.max(cut.f_hat(l)? - 1.0);
    }
    worst = worst.max(cut.f_hat(1.001)?.abs()).max(cut.f_hat(-1.5)?.abs());
    for i in 0..=200 {
        worst = worst.max(-cut.f(-50.0 + 0.5 * i as f64)?);
    }
    Ok(SuiteResult::new("cutoff", worst, 1e-8, worst <= 1e-8))
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteResult> {
    match name {
        "plancherel" => suite_plancherel(cfg.n, cfg.k_max, cfg.lambda_max),
        "chi_closed_form" => suite_chi_closed_form(),
        "phi_k" => suite_phi_k(),
        "fw_scaling" => suite_fw_scaling(),
        "cutoff" => suite_cutoff(&build_cutoff()?),
        other => Err(Error::Precondition(format!("unknown suite {other:?}"))),
    }
}

fn cmd_validate(cfg: &RunConfig, only: Option<&str>) -> Result<i32> {
    let names: Vec<&str> = match only {
        Some(s) if SUITES.contains(&s) => vec![s],
        Some(s) => {
            eprintln!("error: unknown suite {s:?}; available: {}", SUITES.join(", "));
            return Ok(EXIT_USAGE);
        }
        None => SUITES.to_vec(),
    };
    let mut results = Vec::new();
    for name in names {
        results.push(run_suite(name, cfg)?);
    }
    let pass = results.iter().all(|r| r.pass);
    let mut text = serde_json::to_string_pretty(&results).expect("serializable");
    text.push('\n');
    emit(cfg, text.as_bytes())?;
    Ok(pass_code(pass))
}

fn read_points(path: &Path) -> Result<PointSet> {
    let file = fs::File::open(path).map_err(|e| Error::Parse(format!("cannot open {}: {e}", path.display())))?;
    PointSet::read_csv(BufReader::new(file))
}

fn cmd_discrepancy(cfg: &RunConfig, file: &Path, audit: bool, test_mode: bool) -> Result<i32> {
    let points = read_points(file)?;
    if points.is_empty() && !test_mode {
        return Err(Error::Precondition(
            "point set is empty (use --test-mode for σ = 0)".into(),
        ));
    }
    let mu = MeasureModel::normalized_box(points.n);
    let mode = if test_mode {
        SigmaMode::PointsOnly
    } else {
        SigmaMode::Discrepancy
    };
    let spectral = SpectralPlan::new(&mu, cfg.spectral())?.l2_with(&points, mode)?;
    let mut payload = json!({
        "value": spectral.value,
        "stat_stderr": spectral.stat_stderr,
        "trunc_bound": spectral.trunc_bound,
        "config": cfg,
        "seed": cfg.seed,
        "n": points.n,
        "N": points.len(),
    });
    if audit {
        let direct = l2_direct(&points, &mu, cfg.mc())?;
        payload["direct"] = json!({ "value": direct.value, "stat_stderr": direct.stat_stderr });
        payload["agreement_ratio"] = json!(if direct.value > 0.0 {
            spectral.value / direct.value
        } else {
            f64::NAN
        });
    }
    let mut text = serde_json::to_string_pretty(&payload).expect("serializable");
    text.push('\n');
    emit(cfg, text.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_scaling(cfg: &RunConfig) -> Result<i32> {
    let generator = Generator::parse(&cfg.generator).expect("checked in config");
    let mu = MeasureModel::normalized_box(cfg.n);
    let result = if cfg.ns.len() >= 4 && cfg.reps >= 3 {
        scaling_study(&mu, generator, &cfg.ns, cfg.reps, cfg.seed, cfg.mc(), None)?
    } else {
        eprintln!("warning: fewer than 4 sizes or 3 repetitions; the slope is indicative only");
        scaling_table(&mu, generator, &cfg.ns, cfg.reps, cfg.seed, cfg.mc(), None)?
    };
    let mut buf = Vec::new();
    result.write_csv(&mut buf)?;
    emit(cfg, &buf)?;
    Ok(EXIT_OK)
}

/// One row of the kernel sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelRow {
    pub s: f64,
    pub k00: f64,
    pub k00_times_s: f64,
    pub min_ratio: f64,
    pub fit_c: f64,
    pub fit_a: f64,
    pub violations: usize,
}

impl KernelRow {
    pub fn pass(&self) -> bool {
        self.min_ratio >= -1e-8 && self.k00_times_s > 0.0 && self.violations == 0
    }
}

/// `K_s` on a grid relative to `K_s(0,0)`, and a decay bound
/// `K_s·sⁿ(1+|t|)⁴ ≤ C e^{−A|z|²/s}` fitted on one grid and checked on a
/// shifted one (n = 1).
pub fn kernel_sweep(cut: &CutoffPair, s: f64) -> Result<KernelRow> {
    let k00 = k_s_eval(cut, s, &HPoint::origin(1))?;
    let mut min_ratio = f64::INFINITY;
    for i in 0..12 {
        for j in 0..12 {
            let p = HPoint::h1(0.15 * i as f64, 0.0, 0.8 * j as f64);
            min_ratio = min_ratio.min(k_s_eval(cut, s, &p)? / k00);
        }
    }
    let samples = |off: f64| -> Result<Vec<(f64, f64)>> {
        let mut v = Vec::new();
        for i in 0..8 {
            for j in 0..8 {
                let r = (0.12 * i as f64 + off) * (s / 0.1).sqrt();
                let t = 1.5 * j as f64 + 10.0 * off;
                let k = k_s_eval(cut, s, &HPoint::h1(r, 0.0, t))?;
                v.push((r * r / s, k * s * (1.0 + t).powi(4)));
            }
        }
        Ok(v)
    };
    let fit = FittedBound::fit(&samples(0.0)?, 1.5)?;
    let violations = fit.violations(&samples(0.06)?);
    Ok(KernelRow {
        s,
        k00,
        k00_times_s: k00 * s,
        min_ratio,
        fit_c: fit.c,
        fit_a: fit.a,
        violations,
    })
}

fn cmd_kernel(cfg: &RunConfig) -> Result<i32> {
    let cut = build_cutoff()?;
    let mut rows = Vec::new();
    for s in [0.2, 0.1, 0.05] {
        rows.push(kernel_sweep(&cut, s)?);
    }
    let mut out = String::from("s,k00,k00_times_s,min_ratio,fit_c,fit_a,violations,pass\n");
    for r in &rows {
        out.push_str(&format!(
            "{},{:e},{:e},{:e},{:e},{:e},{},{}\n",
            r.s,
            r.k00,
            r.k00_times_s,
            r.min_ratio,
            r.fit_c,
            r.fit_a,
            r.violations,
            r.pass()
        ));
    }
    let pass = rows.iter().all(KernelRow::pass);
    out.push_str(&format!("summary,{}\n", if pass { "pass" } else { "fail" }));
    emit(cfg, out.as_bytes())?;
    Ok(pass_code(pass))
}

/// Envelope sweep over ν ∈ {50, 102, 202} on 60 log-spaced λ in `[0.01, 8ν]`.
pub fn envelope_sweep(n: usize) -> Result<Vec<(usize, EnvelopeReport)>> {
    let mut out = Vec::new();
    for nu in [50usize, 102, 202] {
        let idx = NuIndex::from_nu(nu, n)?;
        let grid = log_grid(0.01, 8.0 * nu as f64, 60);
        out.push((nu, verify_envelope(&[idx], &grid)?));
    }
    Ok(out)
}

/// `c_min > 0` for every ν and `max/min ≤ 10`.
pub fn envelope_pass(reports: &[(usize, EnvelopeReport)]) -> bool {
    let mins: Vec<f64> = reports.iter().map(|(_, r)| r.c_min).collect();
    let lo = mins.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = mins.iter().copied().fold(0.0f64, f64::max);
    lo > 0.0 && hi / lo <= 10.0
}

fn cmd_envelope(cfg: &RunConfig) -> Result<i32> {
    let reports = envelope_sweep(cfg.n)?;
    let mut out = String::from("nu,c_min\n");
    for (nu, r) in &reports {
        out.push_str(&format!("{nu},{:e}\n", r.c_min));
    }
    let pass = envelope_pass(&reports);
    out.push_str(&format!("summary,{}\n", if pass { "pass" } else { "fail" }));
    emit(cfg, out.as_bytes())?;
    Ok(pass_code(pass))
}

/// `i_term(6/s, s)/s^{(Q−1)/2}` for s ∈ {0.2, 0.1, 0.05}.
pub fn iterm_sweep(n: usize) -> Result<Vec<(f64, f64)>> {
    let q = GroupContext::new(n).q() as f64;
    [0.2, 0.1, 0.05]
        .iter()
        .map(|&s| Ok((s, i_term(6.0 / s, s, n)? / s.powf(0.5 * (q - 1.0)))))
        .collect()
}

/// Positive values within a factor-10 band.
pub fn iterm_pass(rows: &[(f64, f64)]) -> bool {
    let lo = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.1).fold(0.0f64, f64::max);
    lo > 0.0 && hi / lo <= 10.0
}

fn cmd_iterm(cfg: &RunConfig) -> Result<i32> {
    let rows = iterm_sweep(cfg.n)?;
    let mut out = String::from("s,scaled_i_term\n");
    for (s, v) in &rows {
        out.push_str(&format!("{s},{v:e}\n"));
    }
    let pass = iterm_pass(&rows);
    out.push_str(&format!("summary,{}\n", if pass { "pass" } else { "fail" }));
    emit(cfg, out.as_bytes())?;
    Ok(pass_code(pass))
}
