//! Finite-volume spectral computations and disorder averaging.
//!
//! Local spectral measures come from one of three exact routes:
//!
//! * [`eig_sym`]: dense Householder tridiagonalisation and implicit QL, with
//!   eigenvectors; used for general pairs `⟨φ, E(·)ψ⟩` and as an oracle.
//! * [`local_measure_banded`]: breadth-first reordering from the observed
//!   site, Givens band reduction that never touches that site, then QL
//!   tracking a single eigenvector component. Same measure, `O(n² b)` work.
//! * [`TreeResolvent`]: the exact root Green function of tree-shaped
//!   operators by recursive Schur complements, `O(n)` per energy.

mod banded;
mod chebyshev;
mod dense;
mod monte_carlo;
mod tree;
mod tridiagonal;

pub use banded::{eigenvalues_banded, local_measure_banded};
pub use chebyshev::{amplitude_from_moments, chebyshev_evolve, chebyshev_moments, moments_needed, SpectralBounds};
pub use dense::{eig_sym, eig_sym_with_cap, EigenDecomposition};
pub use monte_carlo::{charfn_mc, dos_mc, ids_mc, ids_on_grid, local_dos, propagate_amplitudes, LocalRoute, McEstimate, Observation};
pub use tree::TreeResolvent;

use crate::measures::{StepIds, WeightedSpectrum};
use crate::{Error, Result};

/// Largest operator handled by the eigen routes.
pub const DENSE_CAP: usize = 4096;

/// `⟨δ_φ, E_H(·) δ_ψ⟩` from a full eigendecomposition.
pub fn local_spectral_measure(eig: &EigenDecomposition, site_phi: usize, site_psi: usize) -> Result<WeightedSpectrum> {
    let n = eig.dim();
    if site_phi >= n || site_psi >= n {
        return Err(Error::invalid(format!(
            "sites ({site_phi}, {site_psi}) out of range for dimension {n}"
        )));
    }
    let weights = (0..n)
        .map(|k| eig.component(site_phi, k) * eig.component(site_psi, k))
        .collect();
    WeightedSpectrum::from_real(eig.values().to_vec(), weights)
}

/// Eigenvalue counting function normalised by `volume`: a jump of
/// `1/volume` at every eigenvalue. When the volume is at least the number of
/// eigenvalues (per-site normalisation) the reported value is capped at 1.
pub fn empirical_ids(eigenvalues: &[f64], volume: f64) -> Result<StepIds> {
    if !(volume > 0.0 && volume.is_finite()) {
        return Err(Error::invalid(format!("volume must be positive, got {volume}")));
    }
    let mut jumps = eigenvalues.to_vec();
    jumps.sort_by(f64::total_cmp);
    let cap = volume >= jumps.len() as f64;
    let cumulative = (1..=jumps.len())
        .map(|k| {
            let v = k as f64 / volume;
            if cap {
                v.min(1.0)
            } else {
                v
            }
        })
        .collect();
    StepIds::new(jumps, cumulative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{build_lattice, Boundary, DisorderSample, LatticeBoxSpec, SymmetricOperator};

    #[test]
    fn swap_matrix_measures() {
        let h = SymmetricOperator::from_entries(2, [(0, 1, 1.0)]).unwrap();
        let eig = eig_sym(&h).unwrap();
        let diag = local_spectral_measure(&eig, 0, 0).unwrap();
        assert!((diag.points()[0] + 1.0).abs() < 1e-14 && (diag.points()[1] - 1.0).abs() < 1e-14);
        for w in diag.weights() {
            assert!((w.re - 0.5).abs() < 1e-14);
        }
        let off = local_spectral_measure(&eig, 0, 1).unwrap();
        assert!((off.weights()[0].re + 0.5).abs() < 1e-14);
        assert!((off.weights()[1].re - 0.5).abs() < 1e-14);
        assert!(local_spectral_measure(&eig, 0, 2).is_err());
    }

    #[test]
    fn ring_ids() {
        let spec = LatticeBoxSpec::new(1, 4, Boundary::Periodic).unwrap();
        let h = build_lattice(&spec, &DisorderSample::zeros(4)).unwrap();
        let eig = eig_sym(&h).unwrap();
        let ids = empirical_ids(eig.values(), 4.0).unwrap();
        assert_eq!(ids.value_at(-1e-9), 0.25);
        assert_eq!(ids.value_at(1e-9), 0.75);
        assert_eq!(ids.value_at(2.0 + 1e-9), 1.0);

        let one = SymmetricOperator::from_entries(1, [(0, 0, 0.0)]).unwrap();
        let ids = empirical_ids(eig_sym(&one).unwrap().values(), 1.0).unwrap();
        assert_eq!(ids.jumps(), &[0.0]);
        assert_eq!(ids.cumulative(), &[1.0]);
        assert!(empirical_ids(&[0.0], 0.0).is_err());
    }

    #[test]
    fn ids_shift_covariance() {
        let spec = LatticeBoxSpec::new(1, 9, Boundary::Periodic).unwrap();
        let k = crate::measures::CauchyKernel::new(1.0).unwrap();
        let s = crate::ensemble::draw_sample(&k, 9, 5, 0).unwrap();
        let c = 0.625;
        let a = empirical_ids(eig_sym(&build_lattice(&spec, &s).unwrap()).unwrap().values(), 9.0).unwrap();
        let b = empirical_ids(eig_sym(&build_lattice(&spec, &s.shifted(c)).unwrap()).unwrap().values(), 9.0).unwrap();
        for (x, y) in a.jumps().iter().zip(b.jumps()) {
            assert!((y - x - c).abs() < 1e-12 * (1.0 + x.abs()));
        }
        assert_eq!(a.cumulative(), b.cumulative());
    }
}
