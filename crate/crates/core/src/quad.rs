//! Gauss–Kronrod quadrature: adaptive (global bisection on the worst panel)
//! and fixed composite rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

// 15-point Kronrod abscissae on [-1, 1] (non-negative half), the odd-indexed
// ones being the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values a quadrature rule can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// One G7/K15 panel: returns (Kronrod estimate, |Kronrod - Gauss|).
pub fn gk15<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let pair = f(c - h * x) + f(c + h * x);
        kron = kron + pair * w;
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let k = kron * h;
    let g = gauss * h;
    (k, (k - g).magnitude())
}

/// Nodes and weights of the composite 15-point Kronrod rule with `panels`
/// equal panels on `[a, b]`.
pub fn composite_gk15(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let h = 0.5 * width;
    let mut nodes = Vec::with_capacity(15 * panels);
    let mut weights = Vec::with_capacity(15 * panels);
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * width;
        for j in 0..7 {
            nodes.push(c - h * XGK[j]);
            weights.push(h * WGK[j]);
            nodes.push(c + h * XGK[j]);
            weights.push(h * WGK[j]);
        }
        nodes.push(c);
        weights.push(h * WGK[7]);
    }
    (nodes, weights)
}

#[derive(Clone, Copy, Debug)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
}

/// Adaptive Gauss–Kronrod integration in the style of QUADPACK's QAG: the
/// panel with the largest error estimate is bisected until the summed error
/// drops below `max(abs_tol, rel_tol * |I|)` or the panel budget runs out.
#[derive(Clone, Copy, Debug)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

impl Adaptive {
    pub fn with_tol(abs_tol: f64) -> Self {
        Adaptive {
            abs_tol,
            ..Adaptive::default()
        }
    }

    pub fn integrate<T: QuadValue>(&self, f: impl Fn(f64) -> T, a: f64, b: f64) -> Estimate<T> {
        self.integrate_breaks(f, &[a, b])
    }

    /// Integrates over `[breaks[0], breaks[last]]` with the initial panels
    /// split at every break point (integrable singularities, kinks, peaks).
    pub fn integrate_breaks<T: QuadValue>(&self, f: impl Fn(f64) -> T, breaks: &[f64]) -> Estimate<T> {
        let mut heap = BinaryHeap::new();
        let mut total = T::zero();
        let mut error = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == b {
                continue;
            }
            let (value, err) = gk15(&f, a, b);
            total = total + value;
            error += err;
            heap.push(Panel { a, b, value, error: err });
        }
        while heap.len() < self.max_intervals && error > self.abs_tol.max(self.rel_tol * total.magnitude()) {
            let worst = match heap.pop() {
                Some(p) => p,
                None => break,
            };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Panel can no longer be split in floating point.
                heap.push(worst);
                break;
            }
            let (v1, e1) = gk15(&f, worst.a, mid);
            let (v2, e2) = gk15(&f, mid, worst.b);
            total = total - worst.value + v1 + v2;
            error += e1 + e2 - worst.error;
            heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
            heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        }
        // Re-sum to shed the drift of the running updates.
        let mut panels: Vec<_> = heap.into_vec();
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        let value = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
        let error = panels.iter().map(|p| p.error).sum();
        Estimate {
            value,
            error,
            intervals: panels.len(),
        }
    }
}
