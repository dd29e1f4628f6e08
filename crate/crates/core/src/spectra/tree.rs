//! Exact root Green function of a tree-shaped operator.

use num_complex::Complex64;

use crate::ensemble::{bfs_order, SymmetricOperator};
use crate::{Error, Result};

/// `⟨δ_root, (H - z)^{-1} δ_root⟩` for operators whose off-diagonal pattern
/// is a tree, by eliminating leaves first: the branch function of a vertex
/// is `Γ_v = 1 / (H_vv - z - Σ_c H_vc² Γ_c)` over its children `c`.
#[derive(Clone, Debug)]
pub struct TreeResolvent {
    // Breadth-first order from the root.
    order: Vec<usize>,
    // Position of each vertex's parent in `order` (root: itself).
    parent_pos: Vec<usize>,
    diag: Vec<f64>,
    // Squared hopping to the parent.
    hop2: Vec<f64>,
    // Graph distance from the root.
    depth: Vec<usize>,
}

impl TreeResolvent {
    /// Fails if the component of `root` contains a cycle.
    pub fn new(op: &SymmetricOperator, root: usize) -> Result<Self> {
        if root >= op.dim() {
            return Err(Error::invalid(format!("root {root} out of range for dimension {}", op.dim())));
        }
        let (order, parent) = bfs_order(op, root);
        let mut pos = vec![usize::MAX; op.dim()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let mut edges = 0usize;
        for &v in &order {
            edges += op.row(v).filter(|&(u, val)| u != v && val != 0.0).count();
        }
        if edges / 2 + 1 != order.len() {
            return Err(Error::invalid("operator graph is not a tree"));
        }
        let parent_pos: Vec<usize> = order.iter().map(|&v| parent[v].map_or(0, |p| pos[p])).collect();
        let diag = order.iter().map(|&v| op.get(v, v)).collect();
        let hop2 = order
            .iter()
            .map(|&v| parent[v].map_or(0.0, |p| op.get(v, p).powi(2)))
            .collect();
        let mut depth = vec![0usize; order.len()];
        for k in 1..order.len() {
            depth[k] = depth[parent_pos[k]] + 1;
        }
        Ok(TreeResolvent {
            order,
            parent_pos,
            diag,
            hop2,
            depth,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Vertices in breadth-first order from the root.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Number of vertices within graph distance `radius` of the root.
    pub fn ball_len(&self, radius: usize) -> usize {
        self.depth.partition_point(|&d| d <= radius)
    }

    // Σ_c H_vc² Γ_c for every vertex (children only).
    fn branch_sums(&self, z: Complex64) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.order.len()];
        for k in (1..self.order.len()).rev() {
            let gamma = 1.0 / (self.diag[k] - z - acc[k]);
            acc[self.parent_pos[k]] += self.hop2[k] * gamma;
        }
        acc
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let acc = self.branch_sums(z);
        1.0 / (self.diag[0] - z - acc[0])
    }

    /// `G_vv(z)` for the first `count` vertices of [`order`](Self::order).
    ///
    /// Going down from the root, the Green function of the parent `p` with
    /// the branch of `v` removed is `B_v = 1 / (1/G_pp + H_pv² Γ_v)`, and
    /// `G_vv = 1 / (1/Γ_v - H_pv² B_v)`.
    pub fn diagonal_prefix(&self, z: Complex64, count: usize) -> Vec<Complex64> {
        let count = count.min(self.order.len());
        let acc = self.branch_sums(z);
        let mut inv_g = Vec::with_capacity(count);
        for k in 0..count {
            let inv_gamma = self.diag[k] - z - acc[k];
            if k == 0 {
                inv_g.push(inv_gamma);
                continue;
            }
            let inv_b = inv_g[self.parent_pos[k]] + self.hop2[k] / inv_gamma;
            inv_g.push(inv_gamma - self.hop2[k] / inv_b);
        }
        inv_g.into_iter().map(|x| 1.0 / x).collect()
    }

    /// `(1/π) Im G(E + iη)`: the root measure smoothed by `ψ_η`.
    pub fn smoothed_density(&self, e: f64, eta: f64) -> f64 {
        self.eval(Complex64::new(e, eta)).im / std::f64::consts::PI
    }
}
