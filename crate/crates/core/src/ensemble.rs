//! Disorder sampling and finite-volume Hamiltonians `H = H_0 + Σ ω_n P_n`.
//!
//! Uniform variates come from a ChaCha8 block stream keyed by the master
//! seed, with one stream per sample index and the site index as the block
//! counter, so any `(seed, sample, site)` triple can be regenerated on its own
//! and results do not depend on how samples are scheduled across threads.

use std::collections::{BTreeMap, VecDeque};
use std::io::Write;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::format::g12;
use crate::measures::CauchyKernel;
use crate::{Error, Result};

fn stream(master_seed: u64, sample_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(sample_index);
    rng
}

/// 53 random bits mapped to the open interval (0, 1).
fn open_unit(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// The uniform variate used for one site, computed without generating the
/// preceding sites.
pub fn site_uniform(master_seed: u64, sample_index: u64, site: u64) -> f64 {
    let mut rng = stream(master_seed, sample_index);
    rng.set_word_pos(2 * site as u128);
    open_unit(rng.next_u64())
}

/// One realisation of the i.i.d. couplings `ω_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSample {
    pub omegas: Vec<f64>,
    pub master_seed: u64,
    pub sample_index: u64,
}

impl DisorderSample {
    /// All couplings zero (the free operator).
    pub fn zeros(count: usize) -> Self {
        DisorderSample {
            omegas: vec![0.0; count],
            master_seed: 0,
            sample_index: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Same provenance, every coupling shifted by `c`.
    pub fn shifted(&self, c: f64) -> Self {
        DisorderSample {
            omegas: self.omegas.iter().map(|w| w + c).collect(),
            ..self.clone()
        }
    }
}

pub fn draw_sample(kernel: &CauchyKernel, count: usize, master_seed: u64, sample_index: u64) -> Result<DisorderSample> {
    if count == 0 {
        return Err(Error::invalid("sample needs at least one site"));
    }
    let mut rng = stream(master_seed, sample_index);
    let omegas = (0..count)
        .map(|_| kernel.sample(open_unit(rng.next_u64())))
        .collect::<Result<Vec<_>>>()?;
    Ok(DisorderSample {
        omegas,
        master_seed,
        sample_index,
    })
}

/// Finite real symmetric matrix, stored as its upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricOperator {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
    // Full (both triangles) row-compressed copy for products.
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SymmetricOperator {
    /// Entries may name either triangle; duplicates are summed and the
    /// result is kept with `row <= col`.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("operator dimension must be positive"));
        }
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (r, c, v) in entries {
            if r >= n || c >= n {
                return Err(Error::invalid(format!("entry ({r}, {c}) outside dimension {n}")));
            }
            if !v.is_finite() {
                return Err(Error::invalid(format!("entry ({r}, {c}) is not finite")));
            }
            *merged.entry((r.min(c), r.max(c))).or_insert(0.0) += v;
        }
        let entries: Vec<_> = merged.into_iter().map(|((r, c), v)| (r, c, v)).collect();

        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(r, c, v) in &entries {
            rows[r].push((c, v));
            if r != c {
                rows[c].push((r, v));
            }
        }
        let mut row_start = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_start.push(cols.len());
        }
        Ok(SymmetricOperator {
            n,
            entries,
            row_start,
            cols,
            vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Upper-triangle entries `(row, col, value)`, `row <= col`, sorted.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Stored neighbours of `row` (both triangles), sorted by column.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_start[row]..self.row_start[row + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for &(r, c, v) in &self.entries {
            if r == c {
                d[r] = v;
            }
        }
        d
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.row(r).find(|&(j, _)| j == c).map_or(0.0, |(_, v)| v)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let span = self.row_start[i]..self.row_start[i + 1];
            *yi = self.cols[span.clone()].iter().zip(&self.vals[span]).map(|(&j, &v)| v * x[j]).sum();
        }
    }

    pub fn matvec_complex(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let span = self.row_start[i]..self.row_start[i + 1];
            *yi = self.cols[span.clone()].iter().zip(&self.vals[span]).map(|(&j, &v)| x[j] * v).sum();
        }
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for &(r, c, v) in &self.entries {
            a[r * n + c] = v;
            a[c * n + r] = v;
        }
        a
    }

    /// Interval `[lo, hi]` containing the spectrum (Gershgorin discs).
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut centre = 0.0;
            let mut radius = 0.0;
            for (j, v) in self.row(i) {
                if j == i {
                    centre = v;
                } else {
                    radius += v.abs();
                }
            }
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        (lo, hi)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.abs()).fold(0.0, f64::max)
    }

    /// `H + c·I`.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        let extra = (0..self.n).map(|i| (i, i, c));
        Self::from_entries(self.n, self.entries.iter().copied().chain(extra))
    }

    /// FNV-1a over the dimension and entry bit patterns.
    pub fn content_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        eat(self.n as u64);
        for &(r, c, v) in &self.entries {
            eat(r as u64);
            eat(c as u64);
            eat(v.to_bits());
        }
        h
    }

    /// Coordinate triples, one `row col value` line per stored entry.
    pub fn write_triples(&self, mut w: impl Write) -> Result<()> {
        for &(r, c, v) in &self.entries {
            writeln!(w, "{r} {c} {}", g12(v))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Dirichlet,
}

/// Box `{0, ..., L-1}^d` of `Z^d`; site index `Σ_j x_j L^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBoxSpec {
    pub dim: u32,
    pub side: usize,
    pub boundary: Boundary,
}

impl LatticeBoxSpec {
    pub fn new(dim: u32, side: usize, boundary: Boundary) -> Result<Self> {
        if dim == 0 || side == 0 {
            return Err(Error::invalid("lattice box needs dimension >= 1 and side >= 1"));
        }
        side.checked_pow(dim)
            .ok_or_else(|| Error::invalid("lattice box site count overflows"))?;
        Ok(LatticeBoxSpec { dim, side, boundary })
    }

    pub fn site_count(&self) -> usize {
        self.side.pow(self.dim)
    }

    pub fn site_index(&self, coords: &[usize]) -> usize {
        coords.iter().rev().fold(0, |acc, &x| acc * self.side + x)
    }

    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        (0..self.dim)
            .map(|_| {
                let x = index % self.side;
                index /= self.side;
                x
            })
            .collect()
    }
}

/// Rooted tree truncated at `depth`: the root has `K + 1` children, every
/// other non-leaf vertex `K`. Vertices are numbered breadth-first, root 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub branching: u32,
    pub depth: u32,
}

impl TreeSpec {
    pub fn new(branching: u32, depth: u32) -> Result<Self> {
        if branching < 2 {
            return Err(Error::invalid("tree branching must be at least 2"));
        }
        let spec = TreeSpec { branching, depth };
        spec.checked_vertex_count()
            .ok_or_else(|| Error::invalid("tree vertex count overflows"))?;
        Ok(spec)
    }

    fn checked_vertex_count(&self) -> Option<usize> {
        let k = self.branching as usize;
        let mut total = 1usize;
        let mut level = 1usize;
        for d in 0..self.depth {
            level = level.checked_mul(if d == 0 { k + 1 } else { k })?;
            total = total.checked_add(level)?;
        }
        Some(total)
    }

    /// `1 + (K+1)(K^depth - 1)/(K - 1)`.
    pub fn vertex_count(&self) -> usize {
        self.checked_vertex_count().expect("validated at construction")
    }

    /// `(parent, child)` pairs in breadth-first order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.branching as usize;
        let mut edges = Vec::with_capacity(self.vertex_count().saturating_sub(1));
        let mut frontier = vec![0usize];
        let mut next_id = 1usize;
        for d in 0..self.depth {
            let fan = if d == 0 { k + 1 } else { k };
            let mut next = Vec::with_capacity(frontier.len() * fan);
            for &p in &frontier {
                for _ in 0..fan {
                    edges.push((p, next_id));
                    next.push(next_id);
                    next_id += 1;
                }
            }
            frontier = next;
        }
        edges
    }
}

/// Piecewise-linear hats `u_n(x) = max(0, 1 - |x - n|)` on a periodic box of
/// `count` unit cells, sampled on a mesh of `per_unit` points per unit length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BumpFamily {
    pub count: usize,
    pub per_unit: usize,
}

impl BumpFamily {
    pub fn new(count: usize, per_unit: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::invalid("bump family needs at least one bump"));
        }
        if per_unit < 4 {
            return Err(Error::invalid(format!(
                "mesh too coarse: {per_unit} points per unit, need at least 4"
            )));
        }
        Ok(BumpFamily { count, per_unit })
    }

    pub fn mesh_len(&self) -> usize {
        self.count * self.per_unit
    }

    /// The two bumps covering mesh point `j`, as `(bump, numerator)` with
    /// `u_bump(x_j) = numerator / per_unit`. Numerators sum to `per_unit`.
    pub fn weights_at(&self, j: usize) -> [(usize, usize); 2] {
        let cell = (j / self.per_unit) % self.count;
        let r = j % self.per_unit;
        [(cell, self.per_unit - r), ((cell + 1) % self.count, r)]
    }

    /// `u_n(x_j)`.
    pub fn value(&self, n: usize, j: usize) -> f64 {
        self.weights_at(j)
            .iter()
            .filter(|(b, _)| *b == n)
            .map(|(_, num)| *num as f64 / self.per_unit as f64)
            .sum()
    }
}

/// Periodic box of `length` unit cells for `-d²/dx² + Σ ω_n u_n(x)`, mesh `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuumBoxSpec {
    pub length: usize,
    pub mesh: f64,
}

impl ContinuumBoxSpec {
    pub fn new(length: usize, mesh: f64) -> Result<Self> {
        if length == 0 {
            return Err(Error::invalid("continuum box length must be positive"));
        }
        let spec = ContinuumBoxSpec { length, mesh };
        spec.bumps()?;
        Ok(spec)
    }

    pub fn bumps(&self) -> Result<BumpFamily> {
        if !(self.mesh > 0.0 && self.mesh.is_finite()) {
            return Err(Error::invalid(format!("mesh step must be positive, got {}", self.mesh)));
        }
        let per_unit = (1.0 / self.mesh).round();
        if ((1.0 / self.mesh) - per_unit).abs() > 1e-9 * per_unit {
            return Err(Error::invalid(format!("1/h must be an integer, got h = {}", self.mesh)));
        }
        BumpFamily::new(self.length, per_unit as usize)
    }

    pub fn mesh_len(&self) -> usize {
        self.bumps().map(|b| b.mesh_len()).unwrap_or(0)
    }
}

fn check_len(sample: &DisorderSample, want: usize) -> Result<()> {
    if sample.len() != want {
        return Err(Error::invalid(format!(
            "sample has {} couplings, model needs {want}",
            sample.len()
        )));
    }
    Ok(())
}

/// Nearest-neighbour adjacency (hopping 1) plus `ω` on the diagonal.
pub fn build_lattice(spec: &LatticeBoxSpec, sample: &DisorderSample) -> Result<SymmetricOperator> {
    let n = spec.site_count();
    check_len(sample, n)?;
    let mut entries: Vec<(usize, usize, f64)> = sample.omegas.iter().enumerate().map(|(i, &w)| (i, i, w)).collect();
    let mut stride = 1usize;
    for _ in 0..spec.dim {
        for i in 0..n {
            let x = (i / stride) % spec.side;
            if x + 1 < spec.side {
                entries.push((i, i + stride, 1.0));
            } else if spec.boundary == Boundary::Periodic {
                // Wrap to x = 0 along this axis. For side 1 or 2 this repeats
                // an existing bond, as in the circulant.
                let j = i - x * stride;
                // Side 1: S + S^T is twice the identity.
                entries.push((i, j, if j == i { 2.0 } else { 1.0 }));
            }
        }
        stride *= spec.side;
    }
    SymmetricOperator::from_entries(n, entries)
}

/// Adjacency of the truncated tree plus `ω` on the diagonal.
pub fn build_tree(spec: &TreeSpec, sample: &DisorderSample) -> Result<SymmetricOperator> {
    let n = spec.vertex_count();
    check_len(sample, n)?;
    let diag = sample.omegas.iter().enumerate().map(|(i, &w)| (i, i, w));
    let edges = spec.edges().into_iter().map(|(p, c)| (p, c, 1.0));
    SymmetricOperator::from_entries(n, diag.chain(edges))
}

/// Periodic second-difference Laplacian (`2/h²` diagonal, `-1/h²`
/// neighbours) plus `Σ_n ω_n u_n(x_j)` at each mesh point.
pub fn build_continuum(spec: &ContinuumBoxSpec, sample: &DisorderSample) -> Result<SymmetricOperator> {
    let bumps = spec.bumps()?;
    check_len(sample, bumps.count)?;
    let n = bumps.mesh_len();
    let m = bumps.per_unit as f64;
    let inv_h2 = m * m;
    let mut entries = Vec::with_capacity(2 * n);
    for j in 0..n {
        let [(a, na), (b, nb)] = bumps.weights_at(j);
        let v = (sample.omegas[a] * na as f64 + sample.omegas[b] * nb as f64) / m;
        entries.push((j, j, 2.0 * inv_h2 + v));
        entries.push((j, (j + 1) % n, -inv_h2));
    }
    SymmetricOperator::from_entries(n, entries)
}

/// The three finite-volume model families behind one interface.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    Lattice(LatticeBoxSpec),
    Tree(TreeSpec),
    Continuum(ContinuumBoxSpec),
}

impl ModelSpec {
    /// Number of i.i.d. couplings.
    pub fn coupling_count(&self) -> usize {
        match self {
            ModelSpec::Lattice(s) => s.site_count(),
            ModelSpec::Tree(s) => s.vertex_count(),
            ModelSpec::Continuum(s) => s.length,
        }
    }

    /// Dimension of the built matrix.
    pub fn operator_dim(&self) -> usize {
        match self {
            ModelSpec::Lattice(s) => s.site_count(),
            ModelSpec::Tree(s) => s.vertex_count(),
            ModelSpec::Continuum(s) => s.mesh_len(),
        }
    }

    /// Normalisation for eigenvalue counting: sites, vertices, or length.
    pub fn volume(&self) -> f64 {
        match self {
            ModelSpec::Continuum(s) => s.length as f64,
            other => other.operator_dim() as f64,
        }
    }

    pub fn build(&self, sample: &DisorderSample) -> Result<SymmetricOperator> {
        match self {
            ModelSpec::Lattice(s) => build_lattice(s, sample),
            ModelSpec::Tree(s) => build_tree(s, sample),
            ModelSpec::Continuum(s) => build_continuum(s, sample),
        }
    }

    pub fn free(&self) -> Result<SymmetricOperator> {
        self.build(&DisorderSample::zeros(self.coupling_count()))
    }

    pub fn draw(&self, kernel: &CauchyKernel, master_seed: u64, sample_index: u64) -> Result<DisorderSample> {
        draw_sample(kernel, self.coupling_count(), master_seed, sample_index)
    }
}

/// Breadth-first order of the vertices reachable from `root`, with a
/// parent for every vertex but the root.
pub(crate) fn bfs_order(op: &SymmetricOperator, root: usize) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = op.dim();
    let mut seen = vec![false; n];
    let mut parent = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for (u, val) in op.row(v) {
            if u != v && val != 0.0 && !seen[u] {
                seen[u] = true;
                parent[u] = Some(v);
                queue.push_back(u);
            }
        }
    }
    (order, parent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(l: f64) -> CauchyKernel {
        CauchyKernel::new(l).unwrap()
    }

    #[test]
    fn sampling_is_deterministic_and_counter_addressable() {
        let a = draw_sample(&k(1.0), 50, 42, 3).unwrap();
        let b = draw_sample(&k(1.0), 50, 42, 3).unwrap();
        assert_eq!(a, b);
        let c = draw_sample(&k(1.0), 50, 42, 4).unwrap();
        assert_ne!(a.omegas, c.omegas);
        let d = draw_sample(&k(1.0), 50, 43, 3).unwrap();
        assert_ne!(a.omegas, d.omegas);
        for site in [0u64, 1, 17, 49] {
            let u = site_uniform(42, 3, site);
            assert_eq!(k(1.0).sample(u).unwrap().to_bits(), a.omegas[site as usize].to_bits());
        }
        // A longer draw extends the shorter one.
        let long = draw_sample(&k(1.0), 80, 42, 3).unwrap();
        assert_eq!(&long.omegas[..50], &a.omegas[..]);
        assert!(draw_sample(&k(1.0), 0, 1, 1).is_err());
    }

    #[test]
    fn empirical_median_and_quartiles() {
        let s = draw_sample(&k(1.0), 100_000, 2024, 0).unwrap();
        let mut v = s.omegas.clone();
        v.sort_by(f64::total_cmp);
        let median = 0.5 * (v[49_999] + v[50_000]);
        assert!(median.abs() < 0.02, "median {median}");
        let inside = s.omegas.iter().filter(|w| w.abs() <= 1.0).count() as f64 / 1e5;
        assert!((inside - 0.5).abs() < 0.01, "fraction {inside}");
    }

    #[test]
    fn lattice_small_cases() {
        let spec = LatticeBoxSpec::new(1, 2, Boundary::Dirichlet).unwrap();
        let h = build_lattice(&spec, &DisorderSample::zeros(2)).unwrap();
        assert_eq!(h.to_dense(), vec![0.0, 1.0, 1.0, 0.0]);

        let spec = LatticeBoxSpec::new(2, 3, Boundary::Periodic).unwrap();
        let h = build_lattice(&spec, &DisorderSample::zeros(9)).unwrap();
        for i in 0..9 {
            let sum: f64 = h.row(i).filter(|(j, _)| *j != i).map(|(_, v)| v).sum();
            assert_eq!(sum, 4.0);
        }

        let spec = LatticeBoxSpec::new(1, 5, Boundary::Periodic).unwrap();
        let omega = DisorderSample {
            omegas: vec![0.5, -1.0, 2.0, 0.0, 3.0],
            master_seed: 0,
            sample_index: 0,
        };
        let h = build_lattice(&spec, &omega).unwrap();
        assert_eq!(h.diagonal(), omega.omegas);
        assert_eq!(h.get(0, 4), 1.0);
        assert!(build_lattice(&spec, &DisorderSample::zeros(4)).is_err());
    }

    #[test]
    fn lattice_coords_roundtrip() {
        let spec = LatticeBoxSpec::new(3, 4, Boundary::Periodic).unwrap();
        for i in [0, 1, 5, 17, 63] {
            assert_eq!(spec.site_index(&spec.coords(i)), i);
        }
        assert_eq!(spec.site_index(&[1, 0, 0]), 1);
        assert_eq!(spec.site_index(&[0, 1, 0]), 4);
    }

    #[test]
    fn tree_counts_and_shape() {
        assert_eq!(TreeSpec::new(2, 0).unwrap().vertex_count(), 1);
        assert_eq!(TreeSpec::new(2, 1).unwrap().vertex_count(), 4);
        assert_eq!(TreeSpec::new(2, 2).unwrap().vertex_count(), 10);
        assert_eq!(TreeSpec::new(2, 14).unwrap().vertex_count(), 1 + 3 * ((1 << 14) - 1));
        assert_eq!(TreeSpec::new(3, 4).unwrap().vertex_count(), 1 + 4 * (81 - 1) / 2);

        let spec = TreeSpec::new(2, 2).unwrap();
        let h = build_tree(&spec, &DisorderSample::zeros(10)).unwrap();
        let degrees: Vec<usize> = (0..10).map(|i| h.row(i).filter(|(j, _)| *j != i).count()).collect();
        assert_eq!(degrees, vec![3, 3, 3, 3, 1, 1, 1, 1, 1, 1]);
        let h0 = build_tree(&TreeSpec::new(2, 0).unwrap(), &DisorderSample::zeros(1)).unwrap();
        assert_eq!(h0.to_dense(), vec![0.0]);
        assert!(TreeSpec::new(1, 3).is_err());
    }

    #[test]
    fn bumps_partition_unity() {
        let b = BumpFamily::new(7, 20).unwrap();
        for j in 0..b.mesh_len() {
            let [(_, p), (_, q)] = b.weights_at(j);
            assert_eq!(p + q, b.per_unit);
            let total: f64 = (0..b.count).map(|n| b.value(n, j)).sum();
            assert!((total - 1.0).abs() <= f64::EPSILON);
            assert!((0..b.count).all(|n| b.value(n, j) >= 0.0));
        }
        // u_n peaks at its own integer point and vanishes two cells away.
        assert_eq!(b.value(3, 3 * 20), 1.0);
        assert_eq!(b.value(3, 5 * 20), 0.0);
        assert!(BumpFamily::new(7, 3).is_err());
        assert!(ContinuumBoxSpec::new(10, 0.3).is_err());
        assert!(ContinuumBoxSpec::new(10, 0.5).is_err());
        assert!(ContinuumBoxSpec::new(10, 0.25).is_ok());
    }

    #[test]
    fn continuum_constant_coupling_is_uniform_shift() {
        let spec = ContinuumBoxSpec::new(6, 0.125).unwrap();
        let c = 0.37;
        let h = build_continuum(&spec, &DisorderSample { omegas: vec![c; 6], master_seed: 0, sample_index: 0 }).unwrap();
        let free = build_continuum(&spec, &DisorderSample::zeros(6)).unwrap();
        for (a, b) in h.diagonal().iter().zip(free.diagonal()) {
            assert!((a - b - c).abs() < 1e-12);
        }
        assert_eq!(h.get(0, 47), -64.0);
        assert!(build_continuum(&spec, &DisorderSample::zeros(5)).is_err());
    }

    #[test]
    fn builders_are_symmetric_and_deterministic() {
        let spec = ModelSpec::Lattice(LatticeBoxSpec::new(2, 5, Boundary::Periodic).unwrap());
        let s = spec.draw(&k(1.0), 9, 1).unwrap();
        let a = spec.build(&s).unwrap();
        let b = spec.build(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.content_hash(), b.content_hash());
        let d = a.to_dense();
        let n = a.dim();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(d[i * n + j], d[j * n + i]);
            }
        }
    }

    #[test]
    fn triples_and_gershgorin() {
        let h = SymmetricOperator::from_entries(2, [(0, 1, 1.0), (1, 0, 1.0), (1, 1, 0.5)]).unwrap();
        let mut out = Vec::new();
        h.write_triples(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0 1 2\n1 1 0.5\n");
        assert_eq!(h.gershgorin(), (-2.0, 2.5));
        assert!(SymmetricOperator::from_entries(2, [(0, 2, 1.0)]).is_err());
        assert!(SymmetricOperator::from_entries(2, [(0, 1, f64::NAN)]).is_err());
    }
}
