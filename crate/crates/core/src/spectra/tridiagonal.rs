//! Implicitly shifted QL iteration for symmetric tridiagonal matrices.

/// Receives the plane rotations of the QL sweep so callers can accumulate
/// as much of the eigenvector matrix as they need.
pub(crate) trait RotationSink {
    /// Columns `i` and `i + 1` of `Z` become `(c z_i - s z_{i+1}, s z_i + c z_{i+1})`.
    fn rotate(&mut self, i: usize, c: f64, s: f64);
}

/// Eigenvalues only.
pub(crate) struct NoVectors;

impl RotationSink for NoVectors {
    fn rotate(&mut self, _: usize, _: f64, _: f64) {}
}

/// One row of `Z`, e.g. the first components of all eigenvectors.
pub(crate) struct SingleRow<'a>(pub &'a mut [f64]);

impl RotationSink for SingleRow<'_> {
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        let z = &mut *self.0;
        let f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
    }
}

/// The full `Z`, stored transposed (`zt[k * n + row]` is column `k`), so a
/// rotation touches two contiguous rows.
pub(crate) struct Transposed<'a> {
    pub zt: &'a mut [f64],
    pub n: usize,
}

impl RotationSink for Transposed<'_> {
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        let n = self.n;
        let (lo, hi) = self.zt.split_at_mut((i + 1) * n);
        let zi = &mut lo[i * n..];
        let zj = &mut hi[..n];
        for (a, b) in zi.iter_mut().zip(zj.iter_mut()) {
            let f = *b;
            *b = s * *a + c * f;
            *a = c * *a - s * f;
        }
    }
}

pub(crate) const MAX_SWEEPS_PER_VALUE: usize = 60;

/// Diagonalises the tridiagonal matrix with diagonal `d` and off-diagonal
/// `e` (`e[i]` couples `i` and `i + 1`; `e.len() == d.len()`, last entry
/// ignored). On success `d` holds the eigenvalues in no particular order.
/// On failure returns the number of sweeps spent.
pub(crate) fn tql(d: &mut [f64], e: &mut [f64], sink: &mut impl RotationSink) -> Result<(), usize> {
    let n = d.len();
    debug_assert_eq!(e.len(), n);
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let mut total = 0usize;
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            total += 1;
            if iter > MAX_SWEEPS_PER_VALUE {
                return Err(total);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                sink.rotate(i, c, s);
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn toeplitz_path() {
        let n = 9;
        let mut d = vec![0.0; n];
        let mut e = vec![1.0; n];
        tql(&mut d, &mut e, &mut NoVectors).unwrap();
        d.sort_by(f64::total_cmp);
        for (k, v) in d.iter().enumerate() {
            let want = -2.0 * ((k + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((v - want).abs() < 1e-13, "{v} vs {want}");
        }
    }

    #[test]
    fn first_row_weights_sum_to_one() {
        let mut d = vec![0.3, -1.0, 2.5, 0.0, 7.0];
        let mut e = vec![1.0, 0.5, -2.0, 1.5, 0.0];
        let mut z = vec![1.0, 0.0, 0.0, 0.0, 0.0];
        tql(&mut d, &mut e, &mut SingleRow(&mut z)).unwrap();
        let total: f64 = z.iter().map(|x| x * x).sum();
        assert!((total - 1.0).abs() < 1e-14);
        // Σ w_k E_k = H_00.
        let mean: f64 = z.iter().zip(&d).map(|(x, v)| x * x * v).sum();
        assert!((mean - 0.3).abs() < 1e-13);
    }
}
