//! Density of states for random operators with i.i.d. Cauchy couplings.
//!
//! For `H = H0 + Σ ω_n P_n` with Cauchy-distributed `ω_n` of scale `λ`, the
//! disorder average of any local spectral measure of `H` is the free measure
//! of `H0` convolved with the Cauchy density `ψ_λ`. Equivalently, the averaged
//! characteristic function `E⟨φ, e^{itH}ψ⟩` equals `e^{-λ|t|}⟨φ, e^{itH0}ψ⟩`.
//!
//! The crate evaluates the exact right-hand sides for three model families
//! (the `Z^d` lattice, the Bethe lattice, and the 1D continuum with a
//! partition-of-unity potential) and checks them against finite-volume
//! Monte Carlo:
//!
//! * [`measures`]: Cauchy kernel, point measures, grid densities, convolution.
//! * [`free_models`]: free densities of states and their Cauchy smoothing.
//! * [`ensemble`]: disorder sampling and Hamiltonian builders.
//! * [`spectra`]: eigensolvers, Chebyshev propagation, Monte Carlo averaging.
//! * [`verify`]: named pass/fail checks bundling the exact and sampled routes.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod ensemble;
mod error;
pub mod format;
pub mod free_models;
pub mod measures;
pub mod quad;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
