//! Disorder averages over independent samples.
//!
//! Each sample is a pure function of `(master_seed, sample_index)`. Samples
//! run in parallel, are collected in index order and reduced by pairwise
//! summation, so estimates are bit-identical for any thread count.

use std::f64::consts::PI;
use std::io::Write;
use std::ops::Add;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::banded::{eigenvalues_banded, local_measure_banded};
use super::chebyshev::{amplitudes_on_grid, moment_estimate, SpectralBounds};
use super::dense::eig_sym_with_cap;
use super::tree::TreeResolvent;
use super::{empirical_ids, local_spectral_measure, DENSE_CAP};
use crate::ensemble::{ModelSpec, SymmetricOperator};
use crate::format::g12;
use crate::measures::{CauchyKernel, Grid, WeightedSpectrum};
use crate::{Error, Result};

/// Sample mean of a (possibly complex) series with its standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub x: Vec<f64>,
    pub mean: Vec<Complex64>,
    /// `None` with a single sample.
    pub std_error: Option<Vec<f64>>,
    pub n_samples: usize,
    pub master_seed: u64,
}

fn pairwise<T: Copy + Add<Output = T>>(xs: &[T], zero: T) -> T {
    match xs.len() {
        0 => zero,
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise(a, zero) + pairwise(b, zero)
        }
    }
}

impl McEstimate {
    /// `samples[i]` is the series of sample `i`; all must match `x` in length.
    pub fn from_samples(x: Vec<f64>, samples: &[Vec<Complex64>], master_seed: u64) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::invalid("no samples"));
        }
        if let Some(bad) = samples.iter().find(|s| s.len() != x.len()) {
            return Err(Error::invalid(format!("sample series has {} points, grid has {}", bad.len(), x.len())));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut column = vec![zero; n];
        let mut mean = Vec::with_capacity(x.len());
        let mut se = Vec::with_capacity(x.len());
        for j in 0..x.len() {
            for (c, s) in column.iter_mut().zip(samples) {
                *c = s[j];
            }
            let m = pairwise(&column, zero) / n as f64;
            mean.push(m);
            if n > 1 {
                let dev: Vec<f64> = column.iter().map(|c| (c - m).norm_sqr()).collect();
                let var = pairwise(&dev, 0.0) / (n - 1) as f64;
                se.push((var / n as f64).sqrt());
            }
        }
        Ok(McEstimate {
            x,
            mean,
            std_error: (n > 1).then_some(se),
            n_samples: n,
            master_seed,
        })
    }

    pub fn mean_re(&self) -> Vec<f64> {
        self.mean.iter().map(|m| m.re).collect()
    }

    /// `|mean - exact| / SE` per point; zero standard error gives 0 for an
    /// exact match and infinity otherwise.
    pub fn z_scores(&self, exact: &[Complex64]) -> Option<Vec<f64>> {
        let se = self.std_error.as_ref()?;
        Some(
            self.mean
                .iter()
                .zip(exact)
                .zip(se)
                .map(|((m, e), s)| {
                    let dev = (m - e).norm();
                    if *s > 0.0 {
                        dev / s
                    } else if dev <= 1e-12 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                })
                .collect(),
        )
    }

    /// Largest `|mean - exact|`.
    pub fn max_deviation(&self, exact: &[Complex64]) -> f64 {
        self.mean.iter().zip(exact).map(|(m, e)| (m - e).norm()).fold(0.0, f64::max)
    }

    /// `x,mean,mean_im,std_error,n_samples`; the error column is left out
    /// when there is a single sample.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        match &self.std_error {
            Some(se) => {
                writeln!(w, "x,mean,mean_im,std_error,n_samples")?;
                for ((x, m), s) in self.x.iter().zip(&self.mean).zip(se) {
                    writeln!(w, "{},{},{},{},{}", g12(*x), g12(m.re), g12(m.im), g12(*s), self.n_samples)?;
                }
            }
            None => {
                writeln!(w, "x,mean,mean_im,n_samples")?;
                for (x, m) in self.x.iter().zip(&self.mean) {
                    writeln!(w, "{},{},{},{}", g12(*x), g12(m.re), g12(m.im), self.n_samples)?;
                }
            }
        }
        Ok(())
    }
}

/// Runs `f` for every sample index in parallel and returns the results in
/// index order; the first failing index (in order) is reported.
fn run_samples<T: Send>(n_samples: usize, f: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    let results: Vec<Result<T>> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| f(i).map_err(|e| e.in_sample(i)))
        .collect();
    results.into_iter().collect()
}

fn check_site(model: &ModelSpec, site: usize) -> Result<()> {
    if site >= model.operator_dim() {
        return Err(Error::invalid(format!(
            "site {site} out of range for dimension {}",
            model.operator_dim()
        )));
    }
    Ok(())
}

/// `⟨δ_phi, e^{itH} δ_psi⟩` on the points of `t_grid`.
///
/// One sweep of Chebyshev moments serves every time. Heavy-tailed couplings
/// occasionally stretch the spectral interval so far that a dense
/// eigendecomposition is cheaper; such samples are diagonalised instead.
pub fn propagate_amplitudes(op: &SymmetricOperator, t_grid: &[f64], phi: usize, psi: usize) -> Result<Vec<Complex64>> {
    let n = op.dim();
    if phi >= n || psi >= n {
        return Err(Error::invalid(format!("sites ({phi}, {psi}) out of range for dimension {n}")));
    }
    let bounds = SpectralBounds::gershgorin(op);
    let t_max = t_grid.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let nnz = (2 * op.entries().len()) as f64;
    let chebyshev_work = moment_estimate(t_max, bounds) * (nnz + 4.0 * t_grid.len() as f64);
    if n <= DENSE_CAP && chebyshev_work > (n as f64).powi(3) {
        if t_grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("time grid must be finite"));
        }
        let eig = eig_sym_with_cap(op, DENSE_CAP)?;
        let weights: Vec<f64> = (0..n).map(|k| eig.component(phi, k) * eig.component(psi, k)).collect();
        return Ok(t_grid
            .iter()
            .map(|&t| {
                if t == 0.0 {
                    return Complex64::new(if phi == psi { 1.0 } else { 0.0 }, 0.0);
                }
                eig.values()
                    .iter()
                    .zip(&weights)
                    .map(|(&e, &w)| Complex64::new(0.0, t * e).exp() * w)
                    .sum()
            })
            .collect());
    }
    amplitudes_on_grid(op, phi, psi, t_grid, bounds)
}

/// Disorder average of `⟨δ_phi, e^{itH^ω} δ_psi⟩`.
pub fn charfn_mc(
    model: &ModelSpec,
    kernel: &CauchyKernel,
    t_grid: &[f64],
    n_samples: usize,
    master_seed: u64,
    phi: usize,
    psi: usize,
) -> Result<McEstimate> {
    if n_samples < 2 {
        return Err(Error::invalid("characteristic-function estimates need at least 2 samples"));
    }
    check_site(model, phi)?;
    check_site(model, psi)?;
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("time grid must be finite"));
    }
    let samples = run_samples(n_samples, |i| {
        let op = model.build(&model.draw(kernel, master_seed, i)?)?;
        propagate_amplitudes(&op, t_grid, phi, psi)
    })?;
    McEstimate::from_samples(t_grid.to_vec(), &samples, master_seed)
}

/// How the local measure at the observed site is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LocalRoute {
    /// Resolvent for trees, banded reduction otherwise.
    #[default]
    Auto,
    Dense,
    Banded,
    Resolvent,
}

/// Which local measures a density estimate averages.
///
/// The disorder-average identity holds site by site, so averaging over several
/// sites keeps the expectation and only lowers the variance. On a
/// vertex-transitive box (a periodic lattice) every site has the same
/// expected measure, so [`Observation::Trace`] estimates the same curve as
/// [`Observation::Site`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observation {
    /// `⟨δ_s, E_H(·) δ_s⟩` for one site.
    Site(usize),
    /// Equal-weight average over sites within graph distance `r` of site 0.
    Ball(usize),
    /// `tr E_H(·) / n`: the average over all sites.
    Trace,
}

impl Default for Observation {
    fn default() -> Self {
        Observation::Site(0)
    }
}

fn cap_check(op: &SymmetricOperator) -> Result<()> {
    if op.dim() > DENSE_CAP {
        return Err(Error::ResourceCap {
            n: op.dim(),
            cap: DENSE_CAP,
        });
    }
    Ok(())
}

/// Sites within graph distance `radius` of `root`, breadth-first.
fn ball(op: &SymmetricOperator, root: usize, radius: usize) -> Vec<usize> {
    let (order, parent) = crate::ensemble::bfs_order(op, root);
    let mut depth = vec![0usize; op.dim()];
    let mut out = Vec::new();
    for &v in &order {
        if let Some(p) = parent[v] {
            depth[v] = depth[p] + 1;
        }
        if depth[v] <= radius {
            out.push(v);
        }
    }
    out
}

/// `ψ_η`-smoothed observed measure of `op` on the grid.
pub fn local_dos(op: &SymmetricOperator, observe: Observation, grid: &Grid, eta: f64, route: LocalRoute) -> Result<Vec<f64>> {
    let kernel = CauchyKernel::new(eta)?;
    if let Observation::Site(s) = observe {
        if s >= op.dim() {
            return Err(Error::invalid(format!("site {s} out of range for dimension {}", op.dim())));
        }
    }
    let smear = |mu: &WeightedSpectrum| mu.smear(&kernel, grid).values().to_vec();
    let average = |curves: Vec<Vec<f64>>| {
        let m = curves.len() as f64;
        (0..grid.len())
            .map(|j| {
                let col: Vec<f64> = curves.iter().map(|c| c[j]).collect();
                pairwise(&col, 0.0) / m
            })
            .collect::<Vec<f64>>()
    };
    match route {
        LocalRoute::Resolvent => {
            let root = match observe {
                Observation::Site(s) => s,
                _ => 0,
            };
            let res = TreeResolvent::new(op, root)?;
            let count = match observe {
                Observation::Site(_) => 1,
                Observation::Ball(r) => res.ball_len(r),
                Observation::Trace if res.len() == op.dim() => res.len(),
                Observation::Trace => return Err(Error::invalid("trace over a disconnected tree operator")),
            };
            Ok(grid
                .energies()
                .map(|e| {
                    let g = res.diagonal_prefix(Complex64::new(e, eta), count);
                    let im: Vec<f64> = g.iter().map(|x| x.im).collect();
                    pairwise(&im, 0.0) / (count as f64 * PI)
                })
                .collect())
        }
        LocalRoute::Dense => {
            let eig = eig_sym_with_cap(op, DENSE_CAP)?;
            match observe {
                Observation::Site(s) => Ok(smear(&local_spectral_measure(&eig, s, s)?)),
                Observation::Ball(r) => {
                    let sites = ball(op, 0, r);
                    let curves = sites
                        .iter()
                        .map(|&s| local_spectral_measure(&eig, s, s).map(|mu| smear(&mu)))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(average(curves))
                }
                Observation::Trace => trace_density(eig.values(), &kernel, grid),
            }
        }
        LocalRoute::Banded | LocalRoute::Auto => {
            cap_check(op)?;
            match observe {
                Observation::Site(s) => Ok(smear(&local_measure_banded(op, s)?)),
                Observation::Ball(r) => {
                    let curves = ball(op, 0, r)
                        .iter()
                        .map(|&s| local_measure_banded(op, s).map(|mu| smear(&mu)))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(average(curves))
                }
                Observation::Trace => trace_density(&eigenvalues_banded(op)?, &kernel, grid),
            }
        }
    }
}

fn trace_density(values: &[f64], kernel: &CauchyKernel, grid: &Grid) -> Result<Vec<f64>> {
    let n = values.len() as f64;
    let weights = vec![1.0 / n; values.len()];
    let mu = WeightedSpectrum::from_real(values.to_vec(), weights)?;
    Ok(mu.smear(kernel, grid).values().to_vec())
}

/// Disorder average of the `ψ_η`-smoothed observed measure. By the Cauchy
/// semigroup its expectation is the free curve smoothed at `λ + η`.
#[allow(clippy::too_many_arguments)]
pub fn dos_mc(
    model: &ModelSpec,
    kernel: &CauchyKernel,
    grid: &Grid,
    n_samples: usize,
    master_seed: u64,
    eta: f64,
    observe: Observation,
    route: LocalRoute,
) -> Result<McEstimate> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid(format!("broadening must be positive, got {eta}")));
    }
    if n_samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    if let Observation::Site(s) = observe {
        check_site(model, s)?;
    }
    let route = match (route, model) {
        (LocalRoute::Auto, ModelSpec::Tree(_)) => LocalRoute::Resolvent,
        (LocalRoute::Auto, _) => LocalRoute::Banded,
        (r, _) => r,
    };
    if route != LocalRoute::Resolvent && model.operator_dim() > DENSE_CAP {
        return Err(Error::ResourceCap {
            n: model.operator_dim(),
            cap: DENSE_CAP,
        });
    }
    let samples = run_samples(n_samples, |i| {
        let op = model.build(&model.draw(kernel, master_seed, i)?)?;
        let dos = local_dos(&op, observe, grid, eta, route)?;
        Ok(dos.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    })?;
    McEstimate::from_samples(grid.energies().collect(), &samples, master_seed)
}

/// Eigenvalue counting function of `op` per `volume`, read off on the grid.
pub fn ids_on_grid(op: &SymmetricOperator, volume: f64, grid: &Grid) -> Result<Vec<f64>> {
    cap_check(op)?;
    let ids = empirical_ids(&eigenvalues_banded(op)?, volume)?;
    Ok(grid.energies().map(|e| ids.value_at(e)).collect())
}

/// Disorder average of the finite-volume integrated density of states.
pub fn ids_mc(model: &ModelSpec, kernel: &CauchyKernel, grid: &Grid, n_samples: usize, master_seed: u64) -> Result<McEstimate> {
    if n_samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    if model.operator_dim() > DENSE_CAP {
        return Err(Error::ResourceCap {
            n: model.operator_dim(),
            cap: DENSE_CAP,
        });
    }
    let samples = run_samples(n_samples, |i| {
        let op = model.build(&model.draw(kernel, master_seed, i)?)?;
        let ids = ids_on_grid(&op, model.volume(), grid)?;
        Ok(ids.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    })?;
    McEstimate::from_samples(grid.energies().collect(), &samples, master_seed)
}
