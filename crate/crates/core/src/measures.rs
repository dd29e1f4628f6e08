//! Cauchy kernel, finite spectral measures and sampled densities.
//!
//! The averaged local spectral measure of a Cauchy-disordered operator is the
//! free measure convolved with `ψ_λ`. For a finite point measure this
//! convolution is an exact finite sum of Poisson kernels, which
//! [`WeightedSpectrum::smear`] evaluates on a [`Grid`]; the same numbers are
//! available from the Stieltjes transform as `(1/π) Im m(E + iλ)`.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;

use crate::format::g12;
use crate::{Error, Result};

/// Default tolerance for comparisons that involve quadrature.
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Default tolerance for comparisons between exact finite sums.
pub const EXACT_SUM_TOL: f64 = 1e-10;

/// The Cauchy law `ψ_λ(x) = (1/π) λ / (λ² + x²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyKernel {
    lambda: f64,
}

impl CauchyKernel {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("Cauchy scale must be positive and finite, got {lambda}")));
        }
        Ok(CauchyKernel { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn density(&self, x: f64) -> f64 {
        let l = self.lambda;
        l / (PI * (l * l + x * x))
    }

    /// `∫ e^{isx} ψ_λ(x) dx = e^{-λ|s|}`.
    pub fn charfn(&self, s: f64) -> f64 {
        (-self.lambda * s.abs()).exp()
    }

    /// Inverse CDF: maps a uniform `u ∈ (0, 1)` to a `ψ_λ`-distributed value.
    pub fn sample(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::invalid(format!("uniform variate must lie in (0, 1), got {u}")));
        }
        Ok(self.lambda * (PI * (u - 0.5)).tan())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        0.5 + (x / self.lambda).atan() / PI
    }

    /// Mass of `ψ_λ(· - center)` inside `[a, b]`.
    pub fn window_mass(&self, a: f64, b: f64, center: f64) -> f64 {
        (((b - center) / self.lambda).atan() - ((a - center) / self.lambda).atan()) / PI
    }

    /// Mass of `ψ_λ` outside `[-w, w]`: `1 - (2/π) arctan(w/λ)`.
    pub fn missing_mass(&self, half_width: f64) -> f64 {
        1.0 - 2.0 / PI * (half_width / self.lambda).atan()
    }

    /// Semigroup: `ψ_a * ψ_b = ψ_{a+b}`.
    pub fn compose(&self, other: &CauchyKernel) -> CauchyKernel {
        CauchyKernel {
            lambda: self.lambda + other.lambda,
        }
    }
}

/// Uniform energy grid, closed at both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    e_min: f64,
    e_max: f64,
    step: f64,
}

impl Grid {
    pub fn new(e_min: f64, e_max: f64, step: f64) -> Result<Self> {
        if !(e_min.is_finite() && e_max.is_finite() && step.is_finite()) {
            return Err(Error::invalid("grid bounds and step must be finite"));
        }
        if !(step > 0.0) {
            return Err(Error::invalid(format!("grid step must be positive, got {step}")));
        }
        if e_max < e_min {
            return Err(Error::invalid(format!("grid maximum {e_max} is below minimum {e_min}")));
        }
        Ok(Grid { e_min, e_max, step })
    }

    pub fn e_min(&self) -> f64 {
        self.e_min
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// `floor((e_max - e_min) / step) + 1`, with a relative guard so that
    /// `-6:6:0.02` has 601 points despite binary rounding.
    pub fn len(&self) -> usize {
        let ratio = (self.e_max - self.e_min) / self.step;
        (ratio * (1.0 + 1e-12) + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn energy(&self, i: usize) -> f64 {
        self.e_min + i as f64 * self.step
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.energy(i))
    }

    /// Index of the grid point closest to `e`, if `e` lies on the grid range.
    pub fn index_of(&self, e: f64) -> Option<usize> {
        let i = ((e - self.e_min) / self.step).round();
        if i < 0.0 || i as usize >= self.len() {
            None
        } else {
            Some(i as usize)
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `min:max:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("grid must be min:max:step, got {s:?}")));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad number {p:?} in grid {s:?}")))
        };
        Grid::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.e_min, self.e_max, self.step)
    }
}

/// Finite spectral measure `Σ_i w_i δ_{E_i}`. Weights are complex so that
/// off-diagonal measures `⟨φ, E(·)ψ⟩` fit the same type.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSpectrum {
    points: Vec<f64>,
    weights: Vec<Complex64>,
}

impl WeightedSpectrum {
    pub fn new(points: Vec<f64>, weights: Vec<Complex64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::invalid(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) || weights.iter().any(|w| !(w.re.is_finite() && w.im.is_finite())) {
            return Err(Error::invalid("spectral points and weights must be finite"));
        }
        Ok(WeightedSpectrum { points, weights })
    }

    pub fn from_real(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::new(points, weights.into_iter().map(|w| Complex64::new(w, 0.0)).collect())
    }

    pub fn empty() -> Self {
        WeightedSpectrum {
            points: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn point_mass(at: f64) -> Self {
        WeightedSpectrum {
            points: vec![at],
            weights: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> Complex64 {
        self.weights.iter().sum()
    }

    /// True when the weights are real, non-negative and sum to one within `tol`.
    pub fn is_probability(&self, tol: f64) -> bool {
        self.weights.iter().all(|w| w.im.abs() <= tol && w.re >= -tol)
            && (self.total_weight().re - 1.0).abs() <= tol
    }

    /// `(ψ_λ * μ)(E)` at a single energy, real and imaginary parts.
    pub fn smeared_at(&self, kernel: &CauchyKernel, e: f64) -> Complex64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * kernel.density(e - p))
            .sum()
    }

    /// Real part of `ψ_λ * μ` on the grid.
    pub fn smear(&self, kernel: &CauchyKernel, grid: &Grid) -> GridDensity {
        let values = grid.energies().map(|e| self.smeared_at(kernel, e).re).collect();
        GridDensity {
            grid: *grid,
            values,
            imag: None,
        }
    }

    /// `ψ_λ * μ` on the grid with the imaginary part kept in its own column.
    pub fn smear_complex(&self, kernel: &CauchyKernel, grid: &Grid) -> GridDensity {
        let (values, imag) = grid
            .energies()
            .map(|e| {
                let v = self.smeared_at(kernel, e);
                (v.re, v.im)
            })
            .unzip();
        GridDensity {
            grid: *grid,
            values,
            imag: Some(imag),
        }
    }

    /// Stieltjes transform `m(z) = Σ_i w_i / (E_i - z)` for `Im z > 0`.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(Error::invalid(format!("Stieltjes transform needs Im z > 0, got {z}")));
        }
        Ok(self.points.iter().zip(&self.weights).map(|(&p, &w)| w / (p - z)).sum())
    }

    /// Mass of the smeared measure inside `[a, b]` (real part).
    pub fn window_mass(&self, kernel: &CauchyKernel, a: f64, b: f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, w)| w.re * kernel.window_mass(a, b, p))
            .sum()
    }
}

/// A real density sampled on a [`Grid`], optionally with an imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDensity {
    grid: Grid,
    values: Vec<f64>,
    imag: Option<Vec<f64>>,
}

impl GridDensity {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "grid has {} points but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        Ok(GridDensity {
            grid,
            values,
            imag: None,
        })
    }

    pub fn with_imag(grid: Grid, values: Vec<f64>, imag: Vec<f64>) -> Result<Self> {
        if imag.len() != values.len() {
            return Err(Error::invalid("real and imaginary columns differ in length"));
        }
        let mut d = Self::new(grid, values)?;
        d.imag = Some(imag);
        Ok(d)
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        GridDensity {
            grid: *grid,
            values: grid.energies().map(f).collect(),
            imag: None,
        }
    }

    pub fn try_from_fn(grid: &Grid, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let values = grid.energies().map(f).collect::<Result<Vec<_>>>()?;
        Ok(GridDensity {
            grid: *grid,
            values,
            imag: None,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn imag(&self) -> Option<&[f64]> {
        self.imag.as_deref()
    }

    /// Trapezoid integral over the grid.
    pub fn trapezoid(&self) -> f64 {
        trapezoid(&self.values, self.grid.step)
    }

    /// Largest absolute difference from `other` on the points whose energy
    /// lies in `[lo, hi]`. Both densities must share a grid.
    pub fn sup_distance_on(&self, other: &GridDensity, lo: f64, hi: f64) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::invalid("densities live on different grids"));
        }
        Ok(self
            .grid
            .energies()
            .zip(self.values.iter().zip(&other.values))
            .filter(|(e, _)| *e >= lo - 1e-12 && *e <= hi + 1e-12)
            .map(|(_, (a, b))| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn sup_distance(&self, other: &GridDensity) -> Result<f64> {
        self.sup_distance_on(other, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Trapezoid evaluation of `∫ ρ(E') ψ_λ(E - E') dE'` over this density's
    /// grid, sampled on `out`. Mass beyond the stored window is dropped.
    pub fn convolve_cauchy(&self, kernel: &CauchyKernel, out: &Grid) -> GridDensity {
        let step = self.grid.step;
        let n = self.values.len();
        let values = out
            .energies()
            .map(|e| {
                let mut acc = 0.0;
                for (i, (&v, ep)) in self.values.iter().zip(self.grid.energies()).enumerate() {
                    let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
                    acc += w * v * kernel.density(e - ep);
                }
                acc * step
            })
            .collect();
        GridDensity {
            grid: *out,
            values,
            imag: None,
        }
    }

    /// CSV with header `energy,density` (plus `density_im` when complex).
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        match &self.imag {
            None => {
                writeln!(w, "energy,density")?;
                for (e, v) in self.grid.energies().zip(&self.values) {
                    writeln!(w, "{},{}", g12(e), g12(*v))?;
                }
            }
            Some(im) => {
                writeln!(w, "energy,density,density_im")?;
                for ((e, v), vi) in self.grid.energies().zip(&self.values).zip(im) {
                    writeln!(w, "{},{},{}", g12(e), g12(*v), g12(*vi))?;
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            step * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// Right-continuous step function `N(E)`: the cumulative value at the last
/// jump not exceeding `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepIds {
    jumps: Vec<f64>,
    cumulative: Vec<f64>,
}

impl StepIds {
    pub fn new(jumps: Vec<f64>, cumulative: Vec<f64>) -> Result<Self> {
        if jumps.len() != cumulative.len() {
            return Err(Error::invalid("jumps and cumulative values differ in length"));
        }
        if jumps.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("jump locations must be sorted"));
        }
        if cumulative.windows(2).any(|w| w[1] < w[0]) || cumulative.first().is_some_and(|&c| c < 0.0) {
            return Err(Error::invalid("cumulative values must be non-negative and non-decreasing"));
        }
        Ok(StepIds { jumps, cumulative })
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn value_at(&self, e: f64) -> f64 {
        let k = self.jumps.partition_point(|&j| j <= e);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn shifted(&self, c: f64) -> StepIds {
        StepIds {
            jumps: self.jumps.iter().map(|j| j + c).collect(),
            cumulative: self.cumulative.clone(),
        }
    }

    /// CSV with header `energy,ids`, one row per jump.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "energy,ids")?;
        for (e, c) in self.jumps.iter().zip(&self.cumulative) {
            writeln!(w, "{},{}", g12(*e), g12(*c))?;
        }
        Ok(())
    }
}

/// Cumulative trapezoid integral of a non-negative density.
pub fn ids_of(density: &GridDensity) -> Result<StepIds> {
    if let Some(v) = density.values.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::invalid(format!("density must be non-negative, found {v}")));
    }
    let step = density.grid.step;
    let mut cumulative = Vec::with_capacity(density.values.len());
    let mut acc = 0.0;
    let mut prev: Option<f64> = None;
    for &v in &density.values {
        if let Some(p) = prev {
            acc += 0.5 * step * (p + v);
        }
        cumulative.push(acc);
        prev = Some(v);
    }
    Ok(StepIds {
        jumps: density.grid.energies().collect(),
        cumulative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(l: f64) -> CauchyKernel {
        CauchyKernel::new(l).unwrap()
    }

    #[test]
    fn density_values() {
        assert!((k(1.0).density(0.0) - 1.0 / PI).abs() < 1e-16);
        assert!((k(0.5).density(0.5) - 1.0 / PI).abs() < 1e-16);
        let mut last = f64::INFINITY;
        for x in [0.0, 1.0, 10.0, 1e3, 1e8] {
            let d = k(1.0).density(x);
            assert!(d > 0.0 && d < last);
            assert_eq!(d, k(1.0).density(-x));
            last = d;
        }
        assert!(k(1.0).density(1e200) < 1e-300);
    }

    #[test]
    fn charfn_values() {
        assert_eq!(k(1.0).charfn(0.0), 1.0);
        assert!((k(1.0).charfn(2.0) - 0.135_335_283_236_612_7).abs() < 1e-15);
        assert!((k(0.5).charfn(-3.0) - 0.223_130_160_148_429_83).abs() < 1e-15);
    }

    #[test]
    fn inverse_cdf() {
        assert_eq!(k(1.0).sample(0.5).unwrap(), 0.0);
        assert!((k(1.0).sample(0.75).unwrap() - 1.0).abs() < 1e-15);
        assert!((k(2.0).sample(0.25).unwrap() + 2.0).abs() < 1e-15);
        for u in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(k(1.0).sample(u), Err(Error::InvalidArgument(_))));
        }
    }

    #[test]
    fn kernel_rejects_bad_scale() {
        for l in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(CauchyKernel::new(l).is_err());
        }
    }

    #[test]
    fn grid_len_survives_rounding() {
        assert_eq!(Grid::new(-6.0, 6.0, 0.02).unwrap().len(), 601);
        assert_eq!(Grid::new(-6.0, 6.0, 0.01).unwrap().len(), 1201);
        assert_eq!(Grid::new(0.0, 1.0, 0.3).unwrap().len(), 4);
        assert_eq!(Grid::new(2.0, 2.0, 0.5).unwrap().len(), 1);
        let g: Grid = "-3:3:0.01".parse().unwrap();
        assert_eq!(g.len(), 601);
        assert!("1:2".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("1:0:0.1".parse::<Grid>().is_err());
    }

    #[test]
    fn point_mass_smears_to_kernel() {
        let g = Grid::new(-5.0, 5.0, 0.25).unwrap();
        let d = WeightedSpectrum::point_mass(0.0).smear(&k(1.0), &g);
        for (e, v) in g.energies().zip(d.values()) {
            assert_eq!(*v, k(1.0).density(e));
        }
    }

    #[test]
    fn two_masses_at_origin() {
        let s = WeightedSpectrum::from_real(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        let v = s.smeared_at(&k(1.0), 0.0).re;
        assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn empty_spectrum_is_zero() {
        let g = Grid::new(-1.0, 1.0, 0.5).unwrap();
        let s = WeightedSpectrum::empty();
        assert!(s.smear(&k(1.0), &g).values().iter().all(|v| *v == 0.0));
        assert_eq!(s.stieltjes(Complex64::new(0.3, 1.0)).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn mismatched_lengths_rejected() {
        assert!(WeightedSpectrum::from_real(vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn stieltjes_single_point() {
        let m = WeightedSpectrum::point_mass(0.0).stieltjes(Complex64::new(0.0, 1.0)).unwrap();
        assert!((m - Complex64::new(0.0, 1.0)).norm() < 1e-16);
        assert!((m.im / PI - k(1.0).density(0.0)).abs() < 1e-16);
        assert!(WeightedSpectrum::point_mass(0.0).stieltjes(Complex64::new(0.0, 0.0)).is_err());
        assert!(WeightedSpectrum::point_mass(0.0).stieltjes(Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn ids_of_cauchy_window() {
        let g = Grid::new(-50.0, 50.0, 0.01).unwrap();
        let ids = ids_of(&GridDensity::from_fn(&g, |x| k(1.0).density(x))).unwrap();
        let want = 2.0 / PI * 50f64.atan();
        assert!((ids.total() - 0.9873).abs() < 1e-3);
        assert!((ids.total() - want).abs() < 1e-6);
    }

    #[test]
    fn ids_of_uniform_ramp() {
        let g = Grid::new(-1.0, 1.0, 0.01).unwrap();
        let ids = ids_of(&GridDensity::from_fn(&g, |_| 0.5)).unwrap();
        assert!((ids.value_at(0.5) - 0.75).abs() < 1e-12);
        assert!((ids.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ids_of_zero_and_negative() {
        let g = Grid::new(0.0, 1.0, 0.1).unwrap();
        let ids = ids_of(&GridDensity::from_fn(&g, |_| 0.0)).unwrap();
        assert!(ids.cumulative().iter().all(|c| *c == 0.0));
        assert!(ids_of(&GridDensity::from_fn(&g, |e| e - 0.5)).is_err());
    }

    #[test]
    fn step_ids_right_continuous() {
        let ids = StepIds::new(vec![-2.0, 0.0, 0.0, 2.0], vec![0.25, 0.5, 0.75, 1.0]).unwrap();
        assert_eq!(ids.value_at(-3.0), 0.0);
        assert_eq!(ids.value_at(-1e-12), 0.25);
        assert_eq!(ids.value_at(0.0), 0.75);
        assert_eq!(ids.value_at(2.0), 1.0);
        assert!(StepIds::new(vec![1.0, 0.0], vec![0.5, 1.0]).is_err());
        assert!(StepIds::new(vec![0.0, 1.0], vec![0.5, 0.2]).is_err());
    }

    #[test]
    fn csv_schema() {
        let g = Grid::new(0.0, 1.0, 0.5).unwrap();
        let mut buf = Vec::new();
        GridDensity::from_fn(&g, |e| e * 2.0).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "energy,density\n0,0\n0.5,1\n1,2\n");
        let s = WeightedSpectrum::new(vec![0.0], vec![Complex64::new(0.0, 1.0)]).unwrap();
        let mut buf = Vec::new();
        s.smear_complex(&k(1.0), &g).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("energy,density,density_im\n0,0,0.318309886184\n"));
    }

    #[test]
    fn window_mass_matches_trapezoid() {
        // W >= 50 λ + max|E_i|.
        let s = WeightedSpectrum::from_real(vec![-1.3, 0.2, 2.0], vec![0.2, 0.5, 0.3]).unwrap();
        let kern = k(0.4);
        let w = 50.0 * 0.4 + 2.0;
        let g = Grid::new(-w, w, 0.01).unwrap();
        let mass = s.smear(&kern, &g).trapezoid();
        assert!((mass - s.window_mass(&kern, -w, w)).abs() < 1e-6);
    }

    fn spectrum_strategy() -> impl Strategy<Value = WeightedSpectrum> {
        prop::collection::vec((-3.0f64..3.0, 0.0f64..1.0), 1..8).prop_map(|pairs| {
            let total: f64 = pairs.iter().map(|p| p.1).sum::<f64>() + 1e-9;
            let (points, weights) = pairs.into_iter().map(|(p, w)| (p, w / total)).unzip();
            WeightedSpectrum::from_real(points, weights).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn poisson_consistency(s in spectrum_strategy(), lam in 0.05f64..3.0, e in -6.0f64..6.0) {
            let kern = k(lam);
            let via_stieltjes = s.stieltjes(Complex64::new(e, lam)).unwrap().im / PI;
            let direct = s.smeared_at(&kern, e).re;
            prop_assert!((via_stieltjes - direct).abs() <= EXACT_SUM_TOL);
        }

        #[test]
        fn smear_semigroup(s in spectrum_strategy(), l1 in 0.2f64..1.0, l2 in 0.2f64..1.0) {
            let wide = Grid::new(-120.0, 120.0, 0.02).unwrap();
            let inner = Grid::new(-4.0, 4.0, 0.5).unwrap();
            let once = s.smear(&k(l1), &wide).convolve_cauchy(&k(l2), &inner);
            let direct = s.smear(&k(l1 + l2), &inner);
            prop_assert!(once.sup_distance(&direct).unwrap() <= QUADRATURE_TOL);
        }

        #[test]
        fn smear_of_even_spectrum_is_even(pts in prop::collection::vec(0.0f64..4.0, 1..6), lam in 0.05f64..2.0) {
            let mut points = pts.clone();
            points.extend(pts.iter().map(|p| -p));
            let w = vec![1.0 / points.len() as f64; points.len()];
            let s = WeightedSpectrum::from_real(points, w).unwrap();
            let g = Grid::new(-5.0, 5.0, 0.125).unwrap();
            let d = s.smear(&k(lam), &g);
            let n = d.values().len();
            for i in 0..n {
                prop_assert!((d.values()[i] - d.values()[n - 1 - i]).abs() <= 1e-12);
            }
        }

        #[test]
        fn sampled_values_invert_cdf(u in 0.001f64..0.999, lam in 0.1f64..5.0) {
            let x = k(lam).sample(u).unwrap();
            prop_assert!((k(lam).cdf(x) - u).abs() < 1e-12);
        }
    }
}
