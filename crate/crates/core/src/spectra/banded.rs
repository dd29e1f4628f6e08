//! Band-limited route to eigenvalues and to the local measure at one site.
//!
//! Sites are renumbered breadth-first from the observed site, which keeps
//! ring-like operators at bandwidth 2. The band is reduced to tridiagonal
//! form by Givens rotations in planes `(r - 1, r)` with `r >= 2`, so the
//! first basis vector is never rotated and the first components of the
//! tridiagonal eigenvectors are those of the original operator.

use super::tridiagonal::{tql, NoVectors, RotationSink, SingleRow};
use crate::ensemble::{bfs_order, SymmetricOperator};
use crate::measures::WeightedSpectrum;
use crate::{Error, Result};

/// Lower band of a symmetric matrix, with one spare diagonal for the bulge.
struct Band {
    n: usize,
    w: usize,
    data: Vec<f64>,
}

impl Band {
    fn new(n: usize, bandwidth: usize) -> Self {
        let w = bandwidth + 1;
        Band {
            n,
            w,
            data: vec![0.0; n * (w + 1)],
        }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        if hi - lo > self.w {
            0.0
        } else {
            self.data[lo * (self.w + 1) + hi - lo]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        if hi - lo > self.w {
            debug_assert!(v == 0.0, "fill outside band at ({i}, {j}): {v}");
            return;
        }
        self.data[lo * (self.w + 1) + hi - lo] = v;
    }

    /// Rotates rows/columns `p` and `p + 1` so that entry `(p + 1, col)`
    /// vanishes.
    fn annihilate(&mut self, p: usize, col: usize) {
        let q = p + 1;
        let x = self.get(p, col);
        let y = self.get(q, col);
        if y == 0.0 {
            return;
        }
        let r = x.hypot(y);
        let (c, s) = (x / r, y / r);
        let lo = q.saturating_sub(self.w + 1);
        let hi = (p + self.w + 1).min(self.n - 1);
        for k in lo..=hi {
            if k == p || k == q {
                continue;
            }
            let xk = self.get(p, k);
            let yk = self.get(q, k);
            if xk == 0.0 && yk == 0.0 {
                continue;
            }
            self.set(p, k, c * xk + s * yk);
            self.set(q, k, c * yk - s * xk);
        }
        let (app, aqq, apq) = (self.get(p, p), self.get(q, q), self.get(p, q));
        let (cc, ss, cs) = (c * c, s * s, c * s);
        self.set(p, p, cc * app + 2.0 * cs * apq + ss * aqq);
        self.set(q, q, ss * app - 2.0 * cs * apq + cc * aqq);
        self.set(p, q, cs * (aqq - app) + (cc - ss) * apq);
        self.set(q, col, 0.0);
    }

    /// Reduces to tridiagonal form; returns `(diagonal, off-diagonal)`.
    fn tridiagonalize(mut self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let b = self.w - 1;
        if b > 1 {
            for j in 0..n.saturating_sub(2) {
                for r in (j + 2..=(j + b).min(n - 1)).rev() {
                    self.annihilate(r - 1, j);
                    // Chase the bulge at (q + b, q - 1) off the end.
                    let mut q = r;
                    while q + b < n {
                        self.annihilate(q + b - 1, q - 1);
                        q += b;
                    }
                }
            }
        }
        let d = (0..n).map(|i| self.get(i, i)).collect();
        let e = (0..n).map(|i| if i + 1 < n { self.get(i + 1, i) } else { 0.0 }).collect();
        (d, e)
    }
}

/// Band matrix of `op` restricted to `order` (new index `k` is old
/// `order[k]`).
fn permuted_band(op: &SymmetricOperator, order: &[usize]) -> Band {
    let mut pos = vec![usize::MAX; op.dim()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut bandwidth = 0;
    for &v in order {
        for (u, _) in op.row(v) {
            bandwidth = bandwidth.max(pos[u].abs_diff(pos[v]));
        }
    }
    let mut band = Band::new(order.len(), bandwidth);
    for &v in order {
        for (u, val) in op.row(v) {
            if pos[u] <= pos[v] {
                band.set(pos[v], pos[u], val);
            }
        }
    }
    band
}

fn diagonalize(op: &SymmetricOperator, order: &[usize], sink: &mut impl RotationSink) -> Result<Vec<f64>> {
    let (mut d, mut e) = permuted_band(op, order).tridiagonalize();
    tql(&mut d, &mut e, sink).map_err(|iterations| Error::SolverFailure {
        iterations,
        hash: op.content_hash(),
    })?;
    Ok(d)
}

/// `⟨δ_site, E_H(·) δ_site⟩`. Eigenvalues outside the connected component
/// of `site` carry no weight and are omitted.
pub fn local_measure_banded(op: &SymmetricOperator, site: usize) -> Result<WeightedSpectrum> {
    if site >= op.dim() {
        return Err(Error::invalid(format!("site {site} out of range for dimension {}", op.dim())));
    }
    let (order, _) = bfs_order(op, site);
    let mut z = vec![0.0; order.len()];
    z[0] = 1.0;
    let values = diagonalize(op, &order, &mut SingleRow(&mut z))?;
    let mut pairs: Vec<(f64, f64)> = values.into_iter().zip(z.into_iter().map(|x| x * x)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (points, weights) = pairs.into_iter().unzip();
    WeightedSpectrum::from_real(points, weights)
}

/// All eigenvalues, ascending, one connected component at a time.
pub fn eigenvalues_banded(op: &SymmetricOperator) -> Result<Vec<f64>> {
    let n = op.dim();
    let mut seen = vec![false; n];
    let mut all = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let (order, _) = bfs_order(op, root);
        for &v in &order {
            seen[v] = true;
        }
        all.extend(diagonalize(op, &order, &mut NoVectors)?);
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{build_continuum, build_lattice, Boundary, ContinuumBoxSpec, LatticeBoxSpec};
    use crate::measures::CauchyKernel;
    use crate::spectra::{eig_sym, local_spectral_measure};

    fn assert_same_measure(a: &WeightedSpectrum, b: &WeightedSpectrum) {
        // Degenerate eigenvalues may split their weight differently, so
        // compare moments and smeared values instead of raw atoms.
        let k = CauchyKernel::new(0.05).unwrap();
        for e in [-3.0, -1.1, 0.0, 0.4, 2.2, 5.0] {
            let x = a.smeared_at(&k, e).re;
            let y = b.smeared_at(&k, e).re;
            assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "E={e}: {x} vs {y}");
        }
        for p in 0..4 {
            let m = |s: &WeightedSpectrum| -> f64 {
                s.points().iter().zip(s.weights()).map(|(x, w)| w.re * x.powi(p)).sum()
            };
            assert!((m(a) - m(b)).abs() < 1e-9 * (1.0 + m(a).abs()));
        }
    }

    #[test]
    fn ring_matches_dense() {
        let k = CauchyKernel::new(1.0).unwrap();
        let spec = LatticeBoxSpec::new(1, 37, Boundary::Periodic).unwrap();
        let s = crate::ensemble::draw_sample(&k, 37, 11, 2).unwrap();
        let h = build_lattice(&spec, &s).unwrap();
        let dense = local_spectral_measure(&eig_sym(&h).unwrap(), 0, 0).unwrap();
        for site in [0, 5, 36] {
            let dense = local_spectral_measure(&eig_sym(&h).unwrap(), site, site).unwrap();
            let band = local_measure_banded(&h, site).unwrap();
            assert_same_measure(&dense, &band);
        }
        let band = local_measure_banded(&h, 0).unwrap();
        for (a, b) in dense.points().iter().zip(band.points()) {
            assert!((a - b).abs() < 1e-11);
        }
        let all = eigenvalues_banded(&h).unwrap();
        for (a, b) in eig_sym(&h).unwrap().values().iter().zip(&all) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn wide_band_matches_dense() {
        // 2D torus: breadth-first bandwidth grows with the side.
        let k = CauchyKernel::new(0.7).unwrap();
        let spec = LatticeBoxSpec::new(2, 9, Boundary::Periodic).unwrap();
        let s = crate::ensemble::draw_sample(&k, 81, 3, 0).unwrap();
        let h = build_lattice(&spec, &s).unwrap();
        let eig = eig_sym(&h).unwrap();
        assert_same_measure(&local_spectral_measure(&eig, 40, 40).unwrap(), &local_measure_banded(&h, 40).unwrap());
        for (a, b) in eig.values().iter().zip(eigenvalues_banded(&h).unwrap()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn continuum_and_disconnected() {
        let spec = ContinuumBoxSpec::new(5, 0.25).unwrap();
        let k = CauchyKernel::new(0.2).unwrap();
        let s = crate::ensemble::draw_sample(&k, 5, 1, 1).unwrap();
        let h = build_continuum(&spec, &s).unwrap();
        let eig = eig_sym(&h).unwrap();
        for (a, b) in eig.values().iter().zip(eigenvalues_banded(&h).unwrap()) {
            assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
        }

        // Two components: site 0 only sees its own block.
        let h = SymmetricOperator::from_entries(4, [(0, 1, 1.0), (2, 3, 2.0), (2, 2, 1.0)]).unwrap();
        let mu = local_measure_banded(&h, 0).unwrap();
        assert_eq!(mu.len(), 2);
        assert!(mu.is_probability(1e-14));
        assert_eq!(eigenvalues_banded(&h).unwrap().len(), 4);
        assert!(local_measure_banded(&h, 4).is_err());
    }
}
