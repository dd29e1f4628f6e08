//! Named pass/fail checks comparing exact curves with sampled ones.
//!
//! Every report carries its parameters, metrics and thresholds; `pass` is
//! recomputed from those alone, so a stored report can be re-judged.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::{Boundary, ContinuumBoxSpec, LatticeBoxSpec, ModelSpec, TreeSpec};
use crate::format::g12;
use crate::free_models::{
    bethe_dos_smoothed, continuum_free_ids, continuum_ids_smoothed, lattice_dos_curve, lattice_dos_smoothed,
    lattice_offdiag_charfn, BetheFreeModel, LatticeDosRule, LatticeFreeModel,
};
use crate::measures::{CauchyKernel, Grid, GridDensity};
use crate::spectra::{charfn_mc, dos_mc, ids_mc, ids_on_grid, local_dos, LocalRoute, Observation};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    /// Metrics without a threshold are informational.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<f64>,
}

impl Metric {
    pub fn bounded(name: &str, value: f64, threshold: f64) -> Self {
        Metric {
            name: name.to_string(),
            value,
            threshold: Some(threshold),
        }
    }

    pub fn info(name: &str, value: f64) -> Self {
        Metric {
            name: name.to_string(),
            value,
            threshold: None,
        }
    }

    /// NaN never passes.
    pub fn within(&self) -> bool {
        self.threshold.is_none_or(|t| self.value <= t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub parameters: serde_json::Value,
    pub metrics: Vec<Metric>,
    pub pass: bool,
    pub seed: Option<u64>,
    /// Wall time; not serialised so that reports stay byte-reproducible.
    #[serde(skip)]
    pub runtime: Duration,
}

impl CheckReport {
    pub fn new(name: &str, parameters: serde_json::Value, seed: Option<u64>, metrics: Vec<Metric>) -> Self {
        let pass = metrics.iter().all(Metric::within);
        CheckReport {
            name: name.to_string(),
            parameters,
            metrics,
            pass,
            seed,
            runtime: Duration::ZERO,
        }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }

    /// Replaces every threshold by `t` and re-judges.
    pub fn force_threshold(&mut self, t: f64) {
        for m in &mut self.metrics {
            if m.threshold.is_some() {
                m.threshold = Some(t);
            }
        }
        self.pass = self.metrics.iter().all(Metric::within);
    }

    fn timed(mut self, start: Instant) -> Self {
        self.runtime = start.elapsed();
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<16} {}  ({:.1} s)",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.runtime.as_secs_f64()
        )?;
        for m in &self.metrics {
            match m.threshold {
                Some(t) => writeln!(
                    f,
                    "    {:<28} {:>14}  <= {:<10} {}",
                    m.name,
                    g12(m.value),
                    g12(t),
                    if m.within() { "ok" } else { "EXCEEDED" }
                )?,
                None => writeln!(f, "    {:<28} {:>14}", m.name, g12(m.value))?,
            }
        }
        Ok(())
    }
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that a broken metric fails its threshold.
    xs.into_iter().fold(0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

/// Value below which `q` of the sample lies (nearest rank).
fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

fn ring_box(dim: u32, side: usize) -> Result<ModelSpec> {
    Ok(ModelSpec::Lattice(LatticeBoxSpec::new(dim, side, Boundary::Periodic)?))
}

/// Disorder-averaged amplitude `⟨δ_0, e^{itH} δ_x⟩` against
/// `e^{-λ|t|} ⟨δ_0, e^{itH_0} δ_x⟩` on the infinite lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharfnCheck {
    pub dim: u32,
    pub lambda: f64,
    pub side: usize,
    pub n_samples: usize,
    pub t_max: f64,
    pub t_step: f64,
    /// Offset of `ψ` from `φ = δ_0` along the first axis.
    pub psi_offset: usize,
    pub seed: u64,
}

impl Default for CharfnCheck {
    fn default() -> Self {
        CharfnCheck {
            dim: 1,
            lambda: 1.0,
            side: 512,
            n_samples: 400,
            t_max: 6.0,
            t_step: 0.05,
            psi_offset: 0,
            seed: 0,
        }
    }
}

/// Floor of the absolute deviation budget `max(0.03, 4 SE)`.
pub const CHARFN_ABS_BUDGET: f64 = 0.03;

pub fn check_theorem1_charfn(cfg: &CharfnCheck) -> Result<CheckReport> {
    let start = Instant::now();
    let kernel = CauchyKernel::new(cfg.lambda)?;
    let model = ring_box(cfg.dim, cfg.side)?;
    let spec = match model {
        ModelSpec::Lattice(s) => s,
        _ => unreachable!(),
    };
    if cfg.psi_offset >= cfg.side {
        return Err(Error::invalid("psi offset must be smaller than the box side"));
    }
    let t_grid = Grid::new(0.0, cfg.t_max, cfg.t_step)?.energies().collect::<Vec<_>>();
    let mut coords = vec![0usize; cfg.dim as usize];
    coords[0] = cfg.psi_offset;
    let psi = spec.site_index(&coords);
    let est = charfn_mc(&model, &kernel, &t_grid, cfg.n_samples, cfg.seed, 0, psi)?;

    let free = LatticeFreeModel::new(cfg.dim)?;
    let mut offset = vec![0i64; cfg.dim as usize];
    offset[0] = cfg.psi_offset as i64;
    let exact = t_grid
        .iter()
        .map(|&t| Ok(lattice_offdiag_charfn(&free, &offset, t)? * kernel.charfn(t)))
        .collect::<Result<Vec<Complex64>>>()?;
    let se = est.std_error.as_ref().expect("at least two samples");
    let z = est.z_scores(&exact).expect("at least two samples");
    let budget_ratio = max_of(
        est.mean
            .iter()
            .zip(&exact)
            .zip(se)
            .map(|((m, e), s)| (m - e).norm() / CHARFN_ABS_BUDGET.max(4.0 * s)),
    );
    let metrics = vec![
        Metric::bounded("max_z", max_of(z.iter().copied()), 4.0),
        Metric::bounded("deviation_over_budget", budget_ratio, 1.0),
        Metric::info("max_deviation", est.max_deviation(&exact)),
        Metric::info("max_std_error", max_of(se.iter().copied())),
    ];
    Ok(CheckReport::new("theorem1-charfn", serde_json::to_value(cfg).expect("plain data"), Some(cfg.seed), metrics).timed(start))
}

/// Smoothed density at the origin of a periodic box, broadened by `η`,
/// against the exact free curve at `λ + η`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DosCheck {
    pub dim: u32,
    pub lambda: f64,
    pub eta: f64,
    pub side: usize,
    pub n_samples: usize,
    pub grid: String,
    pub observation: Observation,
    pub max_z: f64,
    /// `None` leaves the sup distance informational.
    pub max_sup: Option<f64>,
    pub seed: u64,
}

impl Default for DosCheck {
    fn default() -> Self {
        DosCheck {
            dim: 1,
            lambda: 1.0,
            eta: 0.1,
            side: 2000,
            n_samples: 200,
            grid: "-6:6:0.02".to_string(),
            observation: Observation::Trace,
            max_z: 4.0,
            max_sup: Some(0.005),
            seed: 0,
        }
    }
}

impl DosCheck {
    /// Square box of about 2000 sites, relaxed z-score bound.
    pub fn two_dimensional() -> Self {
        DosCheck {
            dim: 2,
            side: 45,
            n_samples: 100,
            max_z: 5.0,
            max_sup: None,
            ..DosCheck::default()
        }
    }
}

pub fn check_theorem1_dos(cfg: &DosCheck) -> Result<CheckReport> {
    let start = Instant::now();
    let kernel = CauchyKernel::new(cfg.lambda)?;
    let grid: Grid = cfg.grid.parse()?;
    let model = ring_box(cfg.dim, cfg.side)?;
    let est = dos_mc(&model, &kernel, &grid, cfg.n_samples, cfg.seed, cfg.eta, cfg.observation, LocalRoute::Auto)?;
    let target = CauchyKernel::new(cfg.lambda + cfg.eta)?;
    let exact = lattice_dos_curve(&LatticeFreeModel::new(cfg.dim)?, &target, &grid)?;
    let exact_c: Vec<Complex64> = exact.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let sup = est.max_deviation(&exact_c);
    let mut metrics = Vec::new();
    if let Some(z) = est.z_scores(&exact_c) {
        metrics.push(Metric::bounded("max_z", max_of(z.iter().copied()), cfg.max_z));
        metrics.push(Metric::bounded("z_95th_percentile", quantile(&z, 0.95), 2.5));
    }
    metrics.push(match cfg.max_sup {
        Some(t) => Metric::bounded("sup_distance", sup, t),
        None => Metric::info("sup_distance", sup),
    });
    if let Some(se) = &est.std_error {
        metrics.push(Metric::info("max_std_error", max_of(se.iter().copied())));
    }
    Ok(CheckReport::new("theorem1-dos", serde_json::to_value(cfg).expect("plain data"), Some(cfg.seed), metrics).timed(start))
}

/// Truncated Bethe lattice against the smoothed Kesten–McKay law.
///
/// Every vertex of the infinite tree is equivalent, so the estimate
/// averages the vertices within `radius` of the root. The exact finite-tree
/// expectation of that average is the free ball measure smoothed at
/// `λ + η`; its distance from Kesten–McKay is the truncation bias, which is
/// subtracted before comparing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetheCheck {
    pub branching: u32,
    pub lambda: f64,
    pub eta: f64,
    pub depth: u32,
    pub radius: usize,
    pub n_samples: usize,
    pub window: f64,
    pub step: f64,
    pub seed: u64,
}

impl Default for BetheCheck {
    fn default() -> Self {
        BetheCheck {
            branching: 2,
            lambda: 1.0,
            eta: 0.1,
            depth: 14,
            radius: 6,
            n_samples: 100,
            window: 2.9,
            step: 0.02,
            seed: 0,
        }
    }
}

pub fn check_bethe(cfg: &BetheCheck) -> Result<CheckReport> {
    let start = Instant::now();
    if cfg.radius > cfg.depth as usize {
        return Err(Error::invalid("averaging radius exceeds the tree depth"));
    }
    let kernel = CauchyKernel::new(cfg.lambda)?;
    let target = CauchyKernel::new(cfg.lambda + cfg.eta)?;
    let grid = Grid::new(-cfg.window, cfg.window, cfg.step)?;
    let model = ModelSpec::Tree(TreeSpec::new(cfg.branching, cfg.depth)?);
    let observe = Observation::Ball(cfg.radius);
    let est = dos_mc(&model, &kernel, &grid, cfg.n_samples, cfg.seed, cfg.eta, observe, LocalRoute::Resolvent)?;
    let finite = local_dos(&model.free()?, observe, &grid, target.lambda(), LocalRoute::Resolvent)?;
    let bethe = BetheFreeModel::new(cfg.branching)?;
    let km: Vec<f64> = grid.energies().map(|e| bethe_dos_smoothed(&bethe, &target, e)).collect();

    let mean = est.mean_re();
    let corrected = max_of((0..grid.len()).map(|j| (mean[j] - (finite[j] - km[j]) - km[j]).abs()));
    let raw = max_of((0..grid.len()).map(|j| (mean[j] - km[j]).abs()));
    let bias = max_of((0..grid.len()).map(|j| (finite[j] - km[j]).abs()));
    let finite_c: Vec<Complex64> = finite.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut metrics = vec![
        Metric::bounded("corrected_sup_distance", corrected, 0.01),
        Metric::info("raw_sup_distance", raw),
        Metric::info("truncation_bias", bias),
        Metric::info("vertices_averaged", model_ball_len(&model, cfg.radius)? as f64),
    ];
    if let Some(z) = est.z_scores(&finite_c) {
        metrics.push(Metric::info("max_z", max_of(z)));
    }
    Ok(CheckReport::new("bethe", serde_json::to_value(cfg).expect("plain data"), Some(cfg.seed), metrics).timed(start))
}

fn model_ball_len(model: &ModelSpec, radius: usize) -> Result<usize> {
    Ok(crate::spectra::TreeResolvent::new(&model.free()?, 0)?.ball_len(radius))
}

/// Cauchy–Riemann residuals of the continued lattice density in a strip.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripCheck {
    pub dim: u32,
    pub lambda: f64,
    pub heights: Vec<f64>,
    pub re_grid: String,
    pub h: f64,
}

impl Default for StripCheck {
    fn default() -> Self {
        StripCheck {
            dim: 1,
            lambda: 1.0,
            heights: vec![-0.5, -0.25, 0.0, 0.25, 0.5],
            re_grid: "-6:6:0.25".to_string(),
            h: 1e-4,
        }
    }
}

pub fn check_analytic_strip(cfg: &StripCheck) -> Result<CheckReport> {
    let start = Instant::now();
    let kernel = CauchyKernel::new(cfg.lambda)?;
    if let Some(y) = cfg.heights.iter().find(|y| y.abs() >= cfg.lambda - 0.1) {
        return Err(Error::invalid(format!("height {y} is not inside |y| < λ - 0.1")));
    }
    let grid: Grid = cfg.re_grid.parse()?;
    let model = LatticeFreeModel::new(cfg.dim)?;
    let y_max = cfg.heights.iter().fold(0.0f64, |a, y| a.max(y.abs())) + cfg.h;
    let x_max = grid.e_min().abs().max(grid.e_max().abs()) + cfg.h;
    let rule = LatticeDosRule::new(&model, &kernel, x_max, y_max)?;
    let f = |x: f64, y: f64| rule.eval_complex(Complex64::new(x, y));

    let mut residual = 0.0f64;
    let mut real_axis = 0.0f64;
    for &y in &cfg.heights {
        for x in grid.energies() {
            let dx = (f(x + cfg.h, y)? - f(x - cfg.h, y)?) / (2.0 * cfg.h);
            let dy = (f(x, y + cfg.h)? - f(x, y - cfg.h)?) / (2.0 * cfg.h);
            // u_x = v_y and u_y = -v_x.
            residual = residual.max((dx.re - dy.im).abs()).max((dy.re + dx.im).abs());
            if y == 0.0 {
                let real = lattice_dos_smoothed(&model, &kernel, x)?;
                real_axis = real_axis.max((f(x, 0.0)?.re - real).abs()).max(f(x, 0.0)?.im.abs());
            }
        }
    }

    let mut missed = 0usize;
    for y in [cfg.lambda, 1.05 * cfg.lambda, -1.05 * cfg.lambda] {
        let err = crate::free_models::lattice_dos_smoothed_complex(&model, &kernel, Complex64::new(0.3, y));
        if !matches!(err, Err(Error::OutsideStrip { .. })) {
            missed += 1;
        }
    }
    let metrics = vec![
        Metric::bounded("max_cr_residual", residual, 1e-5),
        Metric::bounded("real_axis_mismatch", real_axis, 1e-12),
        Metric::bounded("outside_strip_not_rejected", missed as f64, 0.0),
    ];
    Ok(CheckReport::new("analytic-strip", serde_json::to_value(cfg).expect("plain data"), None, metrics).timed(start))
}

/// Averaged eigenvalue counting per unit length of the discretised
/// continuum operator against the smoothed free law `√E/π`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuumCheck {
    pub lambda: f64,
    pub length: usize,
    pub mesh: f64,
    pub n_samples: usize,
    pub grid: String,
    pub seed: u64,
}

impl Default for ContinuumCheck {
    fn default() -> Self {
        ContinuumCheck {
            lambda: 0.2,
            length: 200,
            mesh: 0.05,
            n_samples: 100,
            grid: "0:4:0.05".to_string(),
            seed: 0,
        }
    }
}

/// Lower end of the disorder-off comparison window.
const FREE_CONTROL_MIN: f64 = 0.5;

pub fn check_continuum_ids(cfg: &ContinuumCheck) -> Result<CheckReport> {
    let start = Instant::now();
    let kernel = CauchyKernel::new(cfg.lambda)?;
    let grid: Grid = cfg.grid.parse()?;
    let spec = ContinuumBoxSpec::new(cfg.length, cfg.mesh)?;
    // Keep to energies where the mesh dispersion is accurate.
    let e_limit = 0.05 / (cfg.mesh * cfg.mesh);
    if grid.e_max() > e_limit {
        return Err(Error::invalid(format!("energy grid exceeds {e_limit} for mesh {}", cfg.mesh)));
    }
    let model = ModelSpec::Continuum(spec);
    let est = ids_mc(&model, &kernel, &grid, cfg.n_samples, cfg.seed)?;
    let exact: Vec<Complex64> = grid
        .energies()
        .map(|e| Complex64::new(continuum_ids_smoothed(&kernel, e), 0.0))
        .collect();
    let free = ids_on_grid(&model.free()?, model.volume(), &grid)?;
    let control = max_of(
        grid.energies()
            .zip(&free)
            .filter(|(e, _)| *e >= FREE_CONTROL_MIN)
            .map(|(e, v)| (v - continuum_free_ids(e)).abs()),
    );
    let mut metrics = vec![
        Metric::bounded("sup_distance", est.max_deviation(&exact), 0.02),
        Metric::bounded("free_control_sup", control, 0.01),
    ];
    if let Some(se) = &est.std_error {
        metrics.push(Metric::info("max_std_error", max_of(se.iter().copied())));
    }
    Ok(CheckReport::new("continuum-ids", serde_json::to_value(cfg).expect("plain data"), Some(cfg.seed), metrics).timed(start))
}

/// `ψ_{λ2} * (ψ_{λ1} * μ) = ψ_{λ1+λ2} * μ` for the lattice density, with
/// the outer convolution done numerically on a wide grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupCheck {
    pub dim: u32,
    pub lambda1: f64,
    pub lambda2: f64,
    pub window: f64,
    pub out_step: f64,
    pub support: f64,
    pub support_step: f64,
}

impl Default for SemigroupCheck {
    fn default() -> Self {
        SemigroupCheck {
            dim: 1,
            lambda1: 0.5,
            lambda2: 0.5,
            window: 8.0,
            out_step: 0.05,
            support: 40.0,
            support_step: 0.02,
        }
    }
}

/// The numerically convolved curve and the exact target.
pub fn semigroup_curves(cfg: &SemigroupCheck) -> Result<(GridDensity, GridDensity)> {
    let model = LatticeFreeModel::new(cfg.dim)?;
    let k1 = CauchyKernel::new(cfg.lambda1)?;
    let k2 = CauchyKernel::new(cfg.lambda2)?;
    let wide = Grid::new(-cfg.support, cfg.support, cfg.support_step)?;
    let out = Grid::new(-cfg.window, cfg.window, cfg.out_step)?;
    let inner = lattice_dos_curve(&model, &k1, &wide)?;
    let convolved = inner.convolve_cauchy(&k2, &out);
    let exact = lattice_dos_curve(&model, &k1.compose(&k2), &out)?;
    Ok((convolved, exact))
}

pub fn check_semigroup(cfg: &SemigroupCheck) -> Result<CheckReport> {
    let start = Instant::now();
    let (convolved, exact) = semigroup_curves(cfg)?;
    let metrics = vec![Metric::bounded("sup_distance", convolved.sup_distance(&exact)?, 1e-4)];
    Ok(CheckReport::new("semigroup", serde_json::to_value(cfg).expect("plain data"), None, metrics).timed(start))
}

/// The checks runnable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckName {
    Theorem1Charfn,
    Theorem1Dos,
    Bethe,
    AnalyticStrip,
    ContinuumIds,
    Semigroup,
}

impl CheckName {
    pub const ALL: [CheckName; 6] = [
        CheckName::Semigroup,
        CheckName::AnalyticStrip,
        CheckName::Theorem1Charfn,
        CheckName::Theorem1Dos,
        CheckName::Bethe,
        CheckName::ContinuumIds,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::Theorem1Charfn => "theorem1-charfn",
            CheckName::Theorem1Dos => "theorem1-dos",
            CheckName::Bethe => "bethe",
            CheckName::AnalyticStrip => "analytic-strip",
            CheckName::ContinuumIds => "continuum-ids",
            CheckName::Semigroup => "semigroup",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = CheckName::ALL.iter().map(|c| c.as_str()).collect();
                Error::invalid(format!("unknown check '{s}' (known: {})", known.join(", ")))
            })
    }
}

/// Run-wide settings applied on top of each check's defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckOptions {
    pub seed: u64,
    pub n_samples: Option<usize>,
    /// Box side, tree depth or continuum length, depending on the check.
    pub size: Option<usize>,
}

pub fn run_check(name: CheckName, opts: &CheckOptions) -> Result<CheckReport> {
    match name {
        CheckName::Theorem1Charfn => {
            let d = CharfnCheck::default();
            check_theorem1_charfn(&CharfnCheck {
                seed: opts.seed,
                n_samples: opts.n_samples.unwrap_or(d.n_samples),
                side: opts.size.unwrap_or(d.side),
                ..d
            })
        }
        CheckName::Theorem1Dos => {
            let d = DosCheck::default();
            check_theorem1_dos(&DosCheck {
                seed: opts.seed,
                n_samples: opts.n_samples.unwrap_or(d.n_samples),
                side: opts.size.unwrap_or(d.side),
                ..d
            })
        }
        CheckName::Bethe => {
            let d = BetheCheck::default();
            let depth = opts.size.map_or(Ok(d.depth), u32::try_from).map_err(|_| Error::invalid("depth too large"))?;
            check_bethe(&BetheCheck {
                seed: opts.seed,
                n_samples: opts.n_samples.unwrap_or(d.n_samples),
                radius: d.radius.min(depth as usize),
                depth,
                ..d
            })
        }
        CheckName::AnalyticStrip => check_analytic_strip(&StripCheck::default()),
        CheckName::ContinuumIds => {
            let d = ContinuumCheck::default();
            check_continuum_ids(&ContinuumCheck {
                seed: opts.seed,
                n_samples: opts.n_samples.unwrap_or(d.n_samples),
                length: opts.size.unwrap_or(d.length),
                ..d
            })
        }
        CheckName::Semigroup => check_semigroup(&SemigroupCheck::default()),
    }
}

/// JSON array of reports, one per line, in run order.
pub fn reports_json(reports: &[CheckReport]) -> String {
    let lines: Vec<String> = reports
        .iter()
        .map(|r| serde_json::to_string(r).expect("reports serialise"))
        .collect();
    format!("[\n{}\n]\n", lines.join(",\n"))
}
