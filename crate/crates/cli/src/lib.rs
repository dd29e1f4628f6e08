//! Command-line front end: exact curves, disorder ensembles, and checks.
//!
//! Every file written is paired with `<stem>.manifest.json`, which records
//! the subcommand, the full parameter set, the seed and the tool version.
//! Without `--out` the CSV or JSON goes to standard output.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use cauchy_dos::ensemble::{Boundary, ContinuumBoxSpec, LatticeBoxSpec, ModelSpec, TreeSpec};
use cauchy_dos::format::g12;
use cauchy_dos::free_models::{
    bethe_dos_smoothed, continuum_ids_smoothed, lattice_dos_curve, lattice_offdiag_charfn, BetheFreeModel,
    LatticeFreeModel,
};
use cauchy_dos::measures::{CauchyKernel, Grid};
use cauchy_dos::spectra::{charfn_mc, dos_mc, ids_mc, LocalRoute, McEstimate, Observation};
use cauchy_dos::verify::{reports_json, run_check, CheckName, CheckOptions, CheckReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE_CAP: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cauchy_dos::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e.root() {
                cauchy_dos::Error::InvalidArgument(_) | cauchy_dos::Error::OutsideStrip { .. } => EXIT_USAGE,
                cauchy_dos::Error::ResourceCap { .. } => EXIT_RESOURCE_CAP,
                _ => 1,
            },
            CliError::Io(_) => 1,
            CliError::ChecksFailed { .. } => EXIT_CHECK_FAILED,
        }
    }

    /// Extra guidance printed after the error message.
    pub fn advice(&self) -> Option<&'static str> {
        match self {
            CliError::Core(e) if matches!(e.root(), cauchy_dos::Error::ResourceCap { .. }) => {
                Some("boxes beyond the eigensolver cap can still be sampled in the time domain with `charfn`")
            }
            _ => None,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "cauchy-dos", version, about = "Density of states for operators with Cauchy disorder")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact smoothed density (lattice, Bethe) or integrated density (continuum).
    Exact(ExactArgs),
    /// Disorder-averaged smoothed density or integrated density.
    Sample(SampleArgs),
    /// Disorder-averaged amplitude ⟨δ_0, e^{itH} δ_x⟩ on a lattice box.
    Charfn(CharfnArgs),
    /// Run named checks (or `all`) and report pass/fail.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Lattice,
    Bethe,
    Continuum,
}

#[derive(Debug, Args, Serialize)]
pub struct ExactArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Lattice dimension.
    #[arg(long, default_value_t = 1)]
    pub dim: u32,
    /// Bethe branching number.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Cauchy scale λ.
    #[arg(long)]
    pub lambda: f64,
    /// Energy grid `min:max:step`.
    #[arg(long, allow_hyphen_values = true, default_value = "-6:6:0.01")]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long, default_value_t = 1)]
    pub dim: u32,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long)]
    pub lambda: f64,
    /// Side of the periodic lattice box.
    #[arg(long, default_value_t = 2000)]
    pub size: usize,
    /// Depth of the truncated tree.
    #[arg(long, default_value_t = 14)]
    pub depth: u32,
    /// Continuum box length.
    #[arg(long, default_value_t = 200)]
    pub length: usize,
    /// Continuum mesh step.
    #[arg(long, default_value_t = 0.05)]
    pub mesh: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Extra Cauchy broadening η of each sampled measure.
    #[arg(long, default_value_t = 0.1)]
    pub broaden: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "-6:6:0.02")]
    pub grid: String,
    /// `auto`, `site:N`, `ball:R` or `trace`. Auto is the trace on lattice
    /// boxes and the radius-6 ball on trees.
    #[arg(long, default_value = "auto")]
    pub observe: String,
    /// Append the exact curve at λ + η and z-scores.
    #[arg(long)]
    pub compare_exact: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CharfnArgs {
    #[arg(long, value_enum, default_value = "lattice")]
    pub model: ModelKind,
    #[arg(long, default_value_t = 1)]
    pub dim: u32,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 512)]
    pub size: usize,
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    /// Time grid `min:max:step`.
    #[arg(long, allow_hyphen_values = true, default_value = "0:6:0.05")]
    pub t_grid: String,
    /// `ψ = δ_x` with `x` this far from the origin along the first axis.
    #[arg(long, default_value_t = 0)]
    pub psi_offset: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    /// Check name or `all`.
    pub name: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override every threshold (to induce failures).
    #[arg(long, allow_hyphen_values = true)]
    pub force_threshold: Option<f64>,
    /// Override the sample count of sampled checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Override the box side, tree depth or continuum length.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Provenance written next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: serde_json::Value,
    pub master_seed: Option<u64>,
    pub version: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

/// `<dir>/<stem>.manifest.json` for `<dir>/<stem>.<ext>`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.manifest.json"))
}

struct Emitter<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    start: Instant,
}

impl Emitter<'_> {
    fn emit(&mut self, out: Option<&Path>, body: &[u8], subcommand: &str, params: impl Serialize, seed: Option<u64>) -> CliResult<()> {
        match out {
            None => self.stdout.write_all(body)?,
            Some(path) => {
                fs::write(path, body)?;
                let manifest = RunManifest {
                    subcommand: subcommand.to_string(),
                    parameters: serde_json::to_value(params).expect("arguments serialise"),
                    master_seed: seed,
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    wall_time_seconds: self.start.elapsed().as_secs_f64(),
                    outputs: vec![path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()],
                };
                let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
                text.push('\n');
                fs::write(manifest_path(path), text)?;
            }
        }
        Ok(())
    }
}

/// Runs one parsed command line.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let mut em = Emitter {
        stdout,
        stderr,
        start: Instant::now(),
    };
    match &cli.command {
        Command::Exact(a) => cmd_exact(a, &mut em),
        Command::Sample(a) => cmd_sample(a, &mut em),
        Command::Charfn(a) => cmd_charfn(a, &mut em),
        Command::Check(a) => cmd_check(a, &mut em),
    }
}

fn parse_grid(s: &str) -> CliResult<Grid> {
    s.parse::<Grid>().map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_exact(a: &ExactArgs, em: &mut Emitter) -> CliResult<()> {
    let kernel = CauchyKernel::new(a.lambda)?;
    let grid = parse_grid(&a.grid)?;
    let mut body = Vec::new();
    match a.model {
        ModelKind::Lattice => {
            lattice_dos_curve(&LatticeFreeModel::new(a.dim)?, &kernel, &grid)?.write_csv(&mut body)?;
        }
        ModelKind::Bethe => {
            let model = BetheFreeModel::new(a.k)?;
            writeln!(body, "energy,density")?;
            for e in grid.energies() {
                writeln!(body, "{},{}", g12(e), g12(bethe_dos_smoothed(&model, &kernel, e)))?;
            }
        }
        ModelKind::Continuum => {
            writeln!(body, "energy,ids")?;
            for e in grid.energies() {
                writeln!(body, "{},{}", g12(e), g12(continuum_ids_smoothed(&kernel, e)))?;
            }
        }
    }
    em.emit(a.out.as_deref(), &body, "exact", a, None)
}

fn parse_observe(s: &str, model: ModelKind, depth: u32) -> CliResult<Observation> {
    let bad = || CliError::Usage(format!("--observe must be auto, trace, site:N or ball:R, got {s:?}"));
    match s {
        "auto" => Ok(match model {
            ModelKind::Bethe => Observation::Ball(6.min(depth as usize)),
            _ => Observation::Trace,
        }),
        "trace" => Ok(Observation::Trace),
        _ => {
            let (kind, n) = s.split_once(':').ok_or_else(bad)?;
            let n: usize = n.parse().map_err(|_| bad())?;
            match kind {
                "site" => Ok(Observation::Site(n)),
                "ball" => Ok(Observation::Ball(n)),
                _ => Err(bad()),
            }
        }
    }
}

fn sample_model(a: &SampleArgs) -> CliResult<ModelSpec> {
    Ok(match a.model {
        ModelKind::Lattice => ModelSpec::Lattice(LatticeBoxSpec::new(a.dim, a.size, Boundary::Periodic)?),
        ModelKind::Bethe => ModelSpec::Tree(TreeSpec::new(a.k, a.depth)?),
        ModelKind::Continuum => ModelSpec::Continuum(ContinuumBoxSpec::new(a.length, a.mesh)?),
    })
}

fn cmd_sample(a: &SampleArgs, em: &mut Emitter) -> CliResult<()> {
    let kernel = CauchyKernel::new(a.lambda)?;
    let grid = parse_grid(&a.grid)?;
    let model = sample_model(a)?;
    if a.samples == 1 {
        writeln!(
            em.stderr,
            "warning: a single sample has no standard error; the std_error column is omitted"
        )?;
    }
    let est = match a.model {
        ModelKind::Continuum => ids_mc(&model, &kernel, &grid, a.samples, a.seed)?,
        _ => {
            let observe = parse_observe(&a.observe, a.model, a.depth)?;
            dos_mc(&model, &kernel, &grid, a.samples, a.seed, a.broaden, observe, LocalRoute::Auto)?
        }
    };
    let exact = if a.compare_exact {
        Some(match a.model {
            ModelKind::Lattice => {
                let target = CauchyKernel::new(a.lambda + a.broaden)?;
                lattice_dos_curve(&LatticeFreeModel::new(a.dim)?, &target, &grid)?.values().to_vec()
            }
            ModelKind::Bethe => {
                let target = CauchyKernel::new(a.lambda + a.broaden)?;
                let bethe = BetheFreeModel::new(a.k)?;
                grid.energies().map(|e| bethe_dos_smoothed(&bethe, &target, e)).collect()
            }
            ModelKind::Continuum => grid.energies().map(|e| continuum_ids_smoothed(&kernel, e)).collect(),
        })
    } else {
        None
    };
    let body = sample_csv(&est, exact.as_deref())?;
    em.emit(a.out.as_deref(), &body, "sample", a, Some(a.seed))
}

/// The estimate CSV, optionally with `exact` and `z` columns appended.
fn sample_csv(est: &McEstimate, exact: Option<&[f64]>) -> CliResult<Vec<u8>> {
    let mut base = Vec::new();
    est.write_csv(&mut base)?;
    let Some(exact) = exact else {
        return Ok(base);
    };
    let exact_c: Vec<Complex64> = exact.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let z = est.z_scores(&exact_c);
    let text = String::from_utf8(base).expect("CSV is UTF-8");
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        match (i, &z) {
            (0, Some(_)) => writeln!(out, "{line},exact,z")?,
            (0, None) => writeln!(out, "{line},exact")?,
            (_, Some(z)) => writeln!(out, "{line},{},{}", g12(exact[i - 1]), g12(z[i - 1]))?,
            (_, None) => writeln!(out, "{line},{}", g12(exact[i - 1]))?,
        }
    }
    Ok(out)
}

fn cmd_charfn(a: &CharfnArgs, em: &mut Emitter) -> CliResult<()> {
    if a.model != ModelKind::Lattice {
        return Err(CliError::Usage("charfn supports --model lattice only".into()));
    }
    let kernel = CauchyKernel::new(a.lambda)?;
    let t_grid: Vec<f64> = parse_grid(&a.t_grid)?.energies().collect();
    let spec = LatticeBoxSpec::new(a.dim, a.size, Boundary::Periodic)?;
    if a.psi_offset >= a.size {
        return Err(CliError::Usage("--psi-offset must be smaller than --size".into()));
    }
    let mut coords = vec![0usize; a.dim as usize];
    coords[0] = a.psi_offset;
    let psi = spec.site_index(&coords);
    let est = charfn_mc(&ModelSpec::Lattice(spec), &kernel, &t_grid, a.samples, a.seed, 0, psi)?;

    let free = LatticeFreeModel::new(a.dim)?;
    let mut offset = vec![0i64; a.dim as usize];
    offset[0] = a.psi_offset as i64;
    let se = est.std_error.as_ref().expect("charfn needs two samples");
    let mut body = Vec::new();
    writeln!(body, "t,mean,mean_im,std_error,exact,exact_im")?;
    for (k, &t) in t_grid.iter().enumerate() {
        let exact = lattice_offdiag_charfn(&free, &offset, t)? * kernel.charfn(t);
        let m = est.mean[k];
        writeln!(
            body,
            "{},{},{},{},{},{}",
            g12(t),
            g12(m.re),
            g12(m.im),
            g12(se[k]),
            g12(exact.re),
            g12(exact.im)
        )?;
    }
    em.emit(a.out.as_deref(), &body, "charfn", a, Some(a.seed))
}

fn cmd_check(a: &CheckArgs, em: &mut Emitter) -> CliResult<()> {
    let names: Vec<CheckName> = if a.name == "all" {
        CheckName::ALL.to_vec()
    } else {
        vec![a.name.parse().map_err(|e: cauchy_dos::Error| CliError::Usage(e.to_string()))?]
    };
    let opts = CheckOptions {
        seed: a.seed,
        n_samples: a.samples,
        size: a.size,
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for name in names {
        let mut report = run_check(name, &opts)?;
        if let Some(t) = a.force_threshold {
            report.force_threshold(t);
        }
        write!(em.stderr, "{report}")?;
        reports.push(report);
    }
    em.emit(a.out.as_deref(), reports_json(&reports).as_bytes(), "check", a, Some(a.seed))?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}
