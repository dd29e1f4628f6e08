//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! with accumulated transformations, then implicit QL.

use super::tridiagonal::{tql, Transposed};
use super::DENSE_CAP;
use crate::ensemble::SymmetricOperator;
use crate::{Error, Result};

/// Eigenvalues in ascending order with orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    n: usize,
    values: Vec<f64>,
    // Row k is the eigenvector for values[k].
    vectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Component `site` of eigenvector `k`.
    pub fn component(&self, site: usize, k: usize) -> f64 {
        self.vectors[k * self.n + site]
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// Largest `‖A v_k - λ_k v_k‖` over all pairs.
    pub fn max_residual(&self, op: &SymmetricOperator) -> f64 {
        let mut av = vec![0.0; self.n];
        (0..self.n)
            .map(|k| {
                let v = self.vector(k);
                op.matvec(v, &mut av);
                av.iter()
                    .zip(v)
                    .map(|(a, x)| (a - self.values[k] * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|VᵀV - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                let dot: f64 = self.vector(i).iter().zip(self.vector(j)).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }
}

/// [`eig_sym_with_cap`] with the default cap.
pub fn eig_sym(op: &SymmetricOperator) -> Result<EigenDecomposition> {
    eig_sym_with_cap(op, DENSE_CAP)
}

pub fn eig_sym_with_cap(op: &SymmetricOperator, cap: usize) -> Result<EigenDecomposition> {
    let n = op.dim();
    if n > cap {
        return Err(Error::ResourceCap { n, cap });
    }
    let mut z = op.to_dense();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder(&mut z, n, &mut d, &mut e);

    // QL wants e[i] coupling i and i + 1.
    e.rotate_left(1);
    let mut zt = transpose(&z, n);
    tql(&mut d, &mut e, &mut Transposed { zt: &mut zt, n }).map_err(|iterations| Error::SolverFailure {
        iterations,
        hash: op.content_hash(),
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend_from_slice(&zt[k * n..(k + 1) * n]);
    }
    Ok(EigenDecomposition { n, values, vectors })
}

fn transpose(a: &[f64], n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = a[i * n + j];
        }
    }
    t
}

/// Householder tridiagonalisation of the row-major symmetric `z`, which is
/// overwritten by the orthogonal transform `Q` (`A = Q T Qᵀ`). On return
/// `d` is the diagonal of `T` and `e[i]` couples `i - 1` and `i`.
fn householder(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..i).map(|k| z[at(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = z[at(i, l)];
            } else {
                for k in 0..i {
                    z[at(i, k)] /= scale;
                    h += z[at(i, k)] * z[at(i, k)];
                }
                let f = z[at(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[at(i, l)] = f - g;
                let mut f = 0.0;
                for j in 0..i {
                    z[at(j, i)] = z[at(i, j)] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[at(j, k)] * z[at(i, k)];
                    }
                    for k in j + 1..i {
                        g += z[at(k, j)] * z[at(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * z[at(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..i {
                    let f = z[at(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[at(j, k)] -= f * e[k] + g * z[at(i, k)];
                    }
                }
            }
        } else {
            e[i] = z[at(i, l)];
        }
        d[i] = h;
    }
    if n > 0 {
        d[0] = 0.0;
        e[0] = 0.0;
    }
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let g: f64 = (0..i).map(|k| z[at(i, k)] * z[at(k, j)]).sum();
                for k in 0..i {
                    z[at(k, j)] -= g * z[at(k, i)];
                }
            }
        }
        d[i] = z[at(i, i)];
        z[at(i, i)] = 1.0;
        for j in 0..i {
            z[at(j, i)] = 0.0;
            z[at(i, j)] = 0.0;
        }
    }
}
