//! Free operators and their Cauchy-smoothed spectral data.
//!
//! * `Z^d` adjacency: the root amplitude `⟨δ_0, e^{itH_0} δ_0⟩ = J_0(2t)^d`,
//!   so the smoothed density is the Fourier–Laplace integral
//!   `(1/π) ∫_0^∞ e^{-λt} cos(Et) J_0(2t)^d dt`, which continues analytically
//!   to `|Im E| < λ`.
//! * Bethe lattice with branching `K`: the Kesten–McKay law at the root.
//! * 1D continuum `-d²/dx²`: integrated density `√E / π`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::bessel::bessel_j;
use crate::measures::{CauchyKernel, Grid, GridDensity};
use crate::quad::{composite_gk15, Adaptive};
use crate::{Error, Result};

/// Fourier integrals are truncated where `e^{-(λ - |Im E|) T}` drops below this.
const FOURIER_CUTOFF: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeFreeModel {
    dim: u32,
}

impl LatticeFreeModel {
    pub fn new(dim: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("lattice dimension must be at least 1"));
        }
        Ok(LatticeFreeModel { dim })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Spectrum of the adjacency operator: `[-2d, 2d]`.
    pub fn band(&self) -> (f64, f64) {
        let w = 2.0 * self.dim as f64;
        (-w, w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BetheFreeModel {
    branching: u32,
}

impl BetheFreeModel {
    pub fn new(branching: u32) -> Result<Self> {
        if branching < 2 {
            return Err(Error::invalid("Bethe branching number must be at least 2"));
        }
        Ok(BetheFreeModel { branching })
    }

    pub fn branching(&self) -> u32 {
        self.branching
    }

    /// `[-2√K, 2√K]`.
    pub fn band(&self) -> (f64, f64) {
        let w = 2.0 * (self.branching as f64).sqrt();
        (-w, w)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ContinuumFreeModel;

/// `⟨δ_0, e^{itH_0} δ_0⟩ = J_0(2t)^d`.
pub fn lattice_free_charfn(model: &LatticeFreeModel, t: f64) -> f64 {
    bessel_j(0, 2.0 * t).powi(model.dim as i32)
}

/// `⟨δ_0, e^{itH_0} δ_x⟩ = Π_j i^{x_j} J_{x_j}(2t)`.
pub fn lattice_offdiag_charfn(model: &LatticeFreeModel, x: &[i64], t: f64) -> Result<Complex64> {
    if x.len() != model.dim as usize {
        return Err(Error::invalid(format!(
            "offset has {} components, lattice dimension is {}",
            x.len(),
            model.dim
        )));
    }
    let mut amp = Complex64::new(1.0, 0.0);
    for &xj in x {
        // i^{-m} J_{-m} = i^m J_m, so only |x_j| matters.
        let m = xj.unsigned_abs();
        let m32 = u32::try_from(m).map_err(|_| Error::invalid("lattice offset too large"))?;
        amp *= Complex64::i().powu(m32) * bessel_j(m32, 2.0 * t);
    }
    Ok(amp)
}

/// Precomputed composite quadrature for `(1/π) ∫_0^T e^{-λt} cos(zt) J_0(2t)^d dt`,
/// valid for `|Re z| <= re_max` and `|Im z| <= im_max < λ`.
///
/// Panels are narrow enough that the 15-point rule resolves the fastest
/// oscillation `cos((|Re z| + 2d) t)` to far below the `1e-10` target; the
/// `J_0` factors are evaluated once per node and reused for every `z`.
#[derive(Clone, Debug)]
pub struct LatticeDosRule {
    lambda: f64,
    im_max: f64,
    re_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl LatticeDosRule {
    pub fn new(model: &LatticeFreeModel, kernel: &CauchyKernel, re_max: f64, im_max: f64) -> Result<Self> {
        let lambda = kernel.lambda();
        let im_max = im_max.abs();
        if im_max >= lambda {
            return Err(Error::OutsideStrip { im: im_max, lambda });
        }
        let re_max = re_max.abs();
        let decay = lambda - im_max;
        let t_max = -FOURIER_CUTOFF.ln() / decay;
        let omega = re_max + 2.0 * model.dim as f64 + im_max;
        let width = (2.5 / omega).min(1.0);
        let panels = (t_max / width).ceil() as usize;
        let (nodes, mut weights) = composite_gk15(0.0, t_max, panels);
        for (w, &t) in weights.iter_mut().zip(&nodes) {
            *w *= (-lambda * t).exp() * lattice_free_charfn(model, t) / PI;
        }
        Ok(LatticeDosRule {
            lambda,
            im_max,
            re_max,
            nodes,
            weights,
        })
    }

    fn check(&self, z: Complex64) -> Result<()> {
        if z.im.abs() >= self.lambda {
            return Err(Error::OutsideStrip {
                im: z.im,
                lambda: self.lambda,
            });
        }
        if z.im.abs() > self.im_max * (1.0 + 1e-12) || z.re.abs() > self.re_max * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::invalid(format!("{z} lies outside the range this rule was built for")));
        }
        Ok(())
    }

    pub fn eval(&self, e: f64) -> Result<f64> {
        self.check(Complex64::new(e, 0.0))?;
        Ok(self.nodes.iter().zip(&self.weights).map(|(t, w)| w * (e * t).cos()).sum())
    }

    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        Ok(self.nodes.iter().zip(&self.weights).map(|(&t, &w)| (z * t).cos() * w).sum())
    }
}

/// Cauchy-smoothed root density of the `Z^d` adjacency operator at real `E`.
pub fn lattice_dos_smoothed(model: &LatticeFreeModel, kernel: &CauchyKernel, e: f64) -> Result<f64> {
    LatticeDosRule::new(model, kernel, e, 0.0)?.eval(e)
}

/// Analytic continuation of [`lattice_dos_smoothed`] into `|Im z| < λ`.
pub fn lattice_dos_smoothed_complex(model: &LatticeFreeModel, kernel: &CauchyKernel, z: Complex64) -> Result<Complex64> {
    LatticeDosRule::new(model, kernel, z.re, z.im)?.eval_complex(z)
}

/// The smoothed lattice density on a grid, sharing one quadrature rule.
pub fn lattice_dos_curve(model: &LatticeFreeModel, kernel: &CauchyKernel, grid: &Grid) -> Result<GridDensity> {
    let re_max = grid.e_min().abs().max(grid.e_max().abs());
    let rule = LatticeDosRule::new(model, kernel, re_max, 0.0)?;
    GridDensity::try_from_fn(grid, |e| rule.eval(e))
}

/// Kesten–McKay law: root spectral density of the `(K+1)`-regular tree.
pub fn kesten_mckay_density(model: &BetheFreeModel, e: f64) -> f64 {
    let k = model.branching as f64;
    let inside = 4.0 * k - e * e;
    if inside <= 0.0 {
        return 0.0;
    }
    (k + 1.0) * inside.sqrt() / (2.0 * PI * ((k + 1.0) * (k + 1.0) - e * e))
}

/// Root Green function `⟨δ_0, (H_0 - z)^{-1} δ_0⟩` of the infinite tree for
/// `Im z > 0`, from the self-consistent branch recursion `Γ = 1/(-z - KΓ)`.
pub fn bethe_root_green(model: &BetheFreeModel, z: Complex64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::invalid("Bethe Green function needs Im z > 0"));
    }
    let k = model.branching as f64;
    let disc = (z * z - 4.0 * k).sqrt();
    let mut gamma = (-z + disc) / (2.0 * k);
    if gamma.im < 0.0 {
        gamma = (-z - disc) / (2.0 * k);
    }
    Ok(1.0 / (-z - (k + 1.0) * gamma))
}

/// `(ψ_λ * ρ_KM)(E)` by adaptive quadrature over the band, in the variable
/// `x = 2√K sin θ` which removes the square-root edges.
pub fn bethe_dos_smoothed(model: &BetheFreeModel, kernel: &CauchyKernel, e: f64) -> f64 {
    let k = model.branching as f64;
    let b = 2.0 * k.sqrt();
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let x = b * s;
        let jac = (k + 1.0) * b * b * c * c / (2.0 * PI * ((k + 1.0) * (k + 1.0) - x * x));
        jac * kernel.density(e - x)
    };
    let theta_e = (e / b).clamp(-1.0, 1.0).asin();
    Adaptive::with_tol(1e-12)
        .integrate_breaks(integrand, &[-FRAC_PI_2, theta_e, FRAC_PI_2])
        .value
}

/// `√max(E, 0) / π`.
pub fn continuum_free_ids(e: f64) -> f64 {
    e.max(0.0).sqrt() / PI
}

/// `(ψ_λ * N_0)(E)` with `N_0(E') = √max(E', 0)/π`.
///
/// With `E' = E - λ tan θ` the Cauchy weight becomes `dθ/π`, leaving
/// `(1/π) ∫ N_0(E - λ tan θ) dθ` over `θ ∈ (-π/2, atan(E/λ))`. The two
/// endpoint singularities are removed by `θ = -π/2 + u²` and `θ = θ_0 - v²`.
pub fn continuum_ids_smoothed(kernel: &CauchyKernel, e: f64) -> f64 {
    let lam = kernel.lambda();
    let theta0 = (e / lam).atan();
    let mid = 0.5 * (theta0 - FRAC_PI_2);
    let n0 = |theta: f64| continuum_free_ids(e - lam * theta.tan());
    let quad = Adaptive::with_tol(1e-12);

    // (-π/2, mid]
    let u_max = (mid + FRAC_PI_2).sqrt();
    let left = quad
        .integrate(
            |u: f64| {
                if u == 0.0 {
                    // Limit of 2u·√(E - λ tan(-π/2 + u²))/π as u → 0.
                    return 2.0 * lam.sqrt() / PI;
                }
                2.0 * u * n0(-FRAC_PI_2 + u * u)
            },
            0.0,
            u_max,
        )
        .value;
    // [mid, θ_0)
    let v_max = (theta0 - mid).sqrt();
    let right = quad.integrate(|v: f64| 2.0 * v * n0(theta0 - v * v), 0.0, v_max).value;
    (left + right) / PI
}
