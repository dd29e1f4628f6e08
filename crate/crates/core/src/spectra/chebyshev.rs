//! `e^{itH} v` by Chebyshev expansion:
//! `e^{itH} = e^{ibt} Σ_n (2 - δ_{n0}) i^n J_n(at) T_n((H - b)/a)`.

use num_complex::Complex64;

use crate::bessel::bessel_j_sequence;
use crate::ensemble::SymmetricOperator;
use crate::{Error, Result};

const COEFF_CUTOFF: f64 = 1e-15;
const EXTRA_TERMS: f64 = 40.0;
const DRIFT_LIMIT: f64 = 1e-6;

/// An interval `[center - half_width, center + half_width]` that must
/// contain the spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBounds {
    pub center: f64,
    pub half_width: f64,
}

impl SpectralBounds {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::invalid(format!("bad spectral interval [{lo}, {hi}]")));
        }
        Ok(SpectralBounds {
            center: 0.5 * (lo + hi),
            half_width: (0.5 * (hi - lo)).max(f64::MIN_POSITIVE.sqrt()),
        })
    }

    /// Gershgorin interval, widened by 1% and a small absolute margin.
    pub fn gershgorin(op: &SymmetricOperator) -> Self {
        let (lo, hi) = op.gershgorin();
        let pad = 0.005 * (hi - lo) + 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        SpectralBounds::new(lo - pad, hi + pad).expect("Gershgorin interval is finite")
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Expansion coefficients `J_n(x)`, truncated at the first `n > |x| + 40`
/// with `|J_n(x)| < 1e-15`.
fn coefficients(x: f64) -> Vec<f64> {
    let floor = (x.abs() + EXTRA_TERMS).floor() as usize + 1;
    // The transition region past n = |x| widens like |x|^(1/3).
    let mut len = floor + 32 + (12.0 * x.abs().cbrt()) as usize;
    loop {
        let seq = bessel_j_sequence(len, x);
        if let Some(cut) = (floor..=len).find(|&n| seq[n].abs() < COEFF_CUTOFF) {
            let mut seq = seq;
            seq.truncate(cut);
            return seq;
        }
        len *= 2;
    }
}

/// `e^{itH} v`. Returns `v` unchanged at `t = 0`.
pub fn chebyshev_evolve(op: &SymmetricOperator, v: &[Complex64], t: f64, bounds: SpectralBounds) -> Result<Vec<Complex64>> {
    let n = op.dim();
    if v.len() != n {
        return Err(Error::invalid(format!("vector length {} does not match dimension {n}", v.len())));
    }
    if !t.is_finite() {
        return Err(Error::invalid("time must be finite"));
    }
    if t == 0.0 {
        return Ok(v.to_vec());
    }
    let SpectralBounds { center: b, half_width: a } = bounds;
    let coeffs = coefficients(a * t);

    // Scaled operator H' = (H - b)/a applied as (H v - b v)/a.
    let apply = |x: &[Complex64], y: &mut [Complex64]| {
        op.matvec_complex(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = (*yi - xi * b) / a;
        }
    };

    let i_pow = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut out: Vec<Complex64> = v.iter().map(|x| x * coeffs[0]).collect();
    let mut prev = v.to_vec();
    let mut cur = vec![Complex64::new(0.0, 0.0); n];
    if coeffs.len() > 1 {
        apply(&prev, &mut cur);
        let c = i_pow[1] * (2.0 * coeffs[1]);
        for (o, x) in out.iter_mut().zip(&cur) {
            *o += c * x;
        }
    }
    let mut next = vec![Complex64::new(0.0, 0.0); n];
    for (k, &jk) in coeffs.iter().enumerate().skip(2) {
        apply(&cur, &mut next);
        for (nx, p) in next.iter_mut().zip(&prev) {
            *nx = 2.0 * *nx - p;
        }
        let c = i_pow[k % 4] * (2.0 * jk);
        for (o, x) in out.iter_mut().zip(&next) {
            *o += c * x;
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    let phase = Complex64::new(0.0, b * t).exp();
    for o in out.iter_mut() {
        *o *= phase;
    }

    let (before, after) = (norm(v), norm(&out));
    let drift = (after - before).abs() / before.max(f64::MIN_POSITIVE);
    if !(drift <= DRIFT_LIMIT) {
        return Err(Error::Enclosure { drift });
    }
    Ok(out)
}

/// `μ_n = ⟨δ_phi, T_n((H - b)/a) δ_psi⟩` for `n < count`, the real moments
/// shared by every time in [`amplitude_from_moments`].
///
/// Any `|μ_n| > 1` beyond rounding means the spectrum escapes `bounds`.
pub fn chebyshev_moments(op: &SymmetricOperator, phi: usize, psi: usize, count: usize, bounds: SpectralBounds) -> Result<Vec<f64>> {
    let n = op.dim();
    if phi >= n || psi >= n {
        return Err(Error::invalid(format!("sites ({phi}, {psi}) out of range for dimension {n}")));
    }
    let SpectralBounds { center: b, half_width: a } = bounds;
    let apply = |x: &[f64], y: &mut [f64]| {
        op.matvec(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = (*yi - xi * b) / a;
        }
    };
    let mut moments = Vec::with_capacity(count);
    let mut prev = vec![0.0; n];
    prev[psi] = 1.0;
    let mut cur = vec![0.0; n];
    let mut next = vec![0.0; n];
    if count > 0 {
        moments.push(prev[phi]);
    }
    if count > 1 {
        apply(&prev, &mut cur);
        moments.push(cur[phi]);
    }
    for _ in 2..count {
        apply(&cur, &mut next);
        for (nx, p) in next.iter_mut().zip(&prev) {
            *nx = 2.0 * *nx - p;
        }
        moments.push(next[phi]);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    let excess = moments.iter().fold(0.0f64, |m, x| m.max(x.abs())) - 1.0;
    if excess > DRIFT_LIMIT {
        return Err(Error::Enclosure { drift: excess });
    }
    Ok(moments)
}

/// Number of moments [`amplitude_from_moments`] needs at time `t`.
pub fn moments_needed(t: f64, bounds: SpectralBounds) -> usize {
    coefficients(bounds.half_width * t).len()
}

/// `⟨δ_phi, e^{itH} δ_psi⟩` from the moments of [`chebyshev_moments`].
pub fn amplitude_from_moments(moments: &[f64], t: f64, bounds: SpectralBounds) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(Error::invalid("time must be finite"));
    }
    let coeffs = coefficients(bounds.half_width * t);
    if coeffs.len() > moments.len() {
        return Err(Error::invalid(format!(
            "time {t} needs {} moments, only {} given",
            coeffs.len(),
            moments.len()
        )));
    }
    Ok(sum_series(&coeffs, moments, t, bounds))
}

/// Amplitudes at every time of `t_grid`, with the expansion coefficients
/// computed once per time.
pub(crate) fn amplitudes_on_grid(
    op: &SymmetricOperator,
    phi: usize,
    psi: usize,
    t_grid: &[f64],
    bounds: SpectralBounds,
) -> Result<Vec<Complex64>> {
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("time grid must be finite"));
    }
    let coeffs: Vec<Vec<f64>> = t_grid.iter().map(|&t| coefficients(bounds.half_width * t)).collect();
    let count = coeffs.iter().map(Vec::len).max().unwrap_or(1);
    let moments = chebyshev_moments(op, phi, psi, count, bounds)?;
    Ok(coeffs
        .iter()
        .zip(t_grid)
        .map(|(c, &t)| sum_series(c, &moments, t, bounds))
        .collect())
}

/// Upper estimate of the moment count for times up to `|t_max|`.
pub(crate) fn moment_estimate(t_max: f64, bounds: SpectralBounds) -> f64 {
    let x = bounds.half_width * t_max.abs();
    x + EXTRA_TERMS + 32.0 + 12.0 * x.cbrt()
}

fn sum_series(coeffs: &[f64], moments: &[f64], t: f64, bounds: SpectralBounds) -> Complex64 {
    let (mut re, mut im) = (coeffs[0] * moments[0], 0.0);
    for (k, (&jk, &mk)) in coeffs.iter().zip(moments).enumerate().skip(1) {
        let c = 2.0 * jk * mk;
        match k % 4 {
            0 => re += c,
            1 => im += c,
            2 => re -= c,
            _ => im -= c,
        }
    }
    Complex64::new(0.0, bounds.center * t).exp() * Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{build_lattice, draw_sample, Boundary, LatticeBoxSpec};
    use crate::measures::CauchyKernel;
    use crate::spectra::eig_sym;

    fn delta(n: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn swap_matrix_closed_form() {
        let h = SymmetricOperator::from_entries(2, [(0, 1, 1.0)]).unwrap();
        let v = delta(2, 0);
        let out = chebyshev_evolve(&h, &v, 1.0, SpectralBounds::gershgorin(&h)).unwrap();
        assert!((out[0] - Complex64::new(1f64.cos(), 0.0)).norm() < 1e-13);
        assert!((out[1] - Complex64::new(0.0, 1f64.sin())).norm() < 1e-13);
        assert_eq!(chebyshev_evolve(&h, &v, 0.0, SpectralBounds::gershgorin(&h)).unwrap(), v);
        let back = chebyshev_evolve(&h, &out, -1.0, SpectralBounds::gershgorin(&h)).unwrap();
        assert!((back[0] - v[0]).norm() < 1e-13 && back[1].norm() < 1e-13);
    }

    #[test]
    fn enclosure_violation_is_detected() {
        let h = SymmetricOperator::from_entries(2, [(0, 1, 1.0), (0, 0, 5.0)]).unwrap();
        let bad = SpectralBounds::new(-1.0, 1.0).unwrap();
        let err = chebyshev_evolve(&h, &delta(2, 0), 10.0, bad).unwrap_err();
        assert!(matches!(err, Error::Enclosure { .. }), "{err}");
    }

    #[test]
    fn agrees_with_eigendecomposition() {
        let k = CauchyKernel::new(1.0).unwrap();
        let spec = LatticeBoxSpec::new(1, 60, Boundary::Periodic).unwrap();
        let h = build_lattice(&spec, &draw_sample(&k, 60, 4, 0).unwrap()).unwrap();
        let eig = eig_sym(&h).unwrap();
        let v = delta(60, 7);
        for t in [0.3, 2.0, -4.5, 10.0] {
            let got = chebyshev_evolve(&h, &v, t, SpectralBounds::gershgorin(&h)).unwrap();
            for site in [0, 7, 8, 30] {
                let want: Complex64 = (0..60)
                    .map(|m| Complex64::new(0.0, t * eig.values()[m]).exp() * eig.component(site, m) * eig.component(7, m))
                    .sum();
                assert!((got[site] - want).norm() < 1e-10, "t={t} site={site}");
            }
        }
    }

    #[test]
    fn moments_match_direct_evolution() {
        let k = CauchyKernel::new(1.0).unwrap();
        let spec = LatticeBoxSpec::new(1, 50, Boundary::Periodic).unwrap();
        let h = build_lattice(&spec, &draw_sample(&k, 50, 2, 3).unwrap()).unwrap();
        let bounds = SpectralBounds::gershgorin(&h);
        let ts = [0.0, 0.4, -1.5, 6.0];
        let count = ts.iter().map(|&t| moments_needed(t, bounds)).max().unwrap();
        let mu = chebyshev_moments(&h, 3, 5, count, bounds).unwrap();
        for t in ts {
            let direct = chebyshev_evolve(&h, &delta(50, 5), t, bounds).unwrap()[3];
            assert!((amplitude_from_moments(&mu, t, bounds).unwrap() - direct).norm() < 1e-12, "t={t}");
        }
        assert!(amplitude_from_moments(&mu[..3], 6.0, bounds).is_err());
    }

    #[test]
    fn moments_detect_escaped_spectrum() {
        let h = SymmetricOperator::from_entries(2, [(0, 0, 3.0), (1, 1, -1.0)]).unwrap();
        let tight = SpectralBounds::new(-1.0, 1.0).unwrap();
        assert!(matches!(chebyshev_moments(&h, 0, 0, 10, tight), Err(Error::Enclosure { .. })));
    }
}
