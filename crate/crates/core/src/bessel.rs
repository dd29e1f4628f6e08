//! Bessel functions of the first kind, `J_n(x)` for integer order.
//!
//! Three regimes: the power series near the origin, Miller's backward
//! recurrence normalised by `J_0 + 2 Σ J_{2k} = 1` for moderate arguments, and
//! the Hankel asymptotic expansion once `|x|` dominates `n²`.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_MIN: f64 = 25.0;
const RESCALE: f64 = 1e250;

/// `J_n(x)`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let ax = x.abs();
    let value = if ax <= SERIES_LIMIT {
        series(n, ax)
    } else if ax >= ASYMPTOTIC_MIN && ax >= (n as f64) * (n as f64) {
        asymptotic(n, ax).unwrap_or_else(|| miller(n as usize, ax)[n as usize])
    } else {
        miller(n as usize, ax)[n as usize]
    };
    sign * value
}

/// `[J_0(x), J_1(x), ..., J_{n_max}(x)]` from a single backward recurrence.
pub fn bessel_j_sequence(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    let mut out = miller(n_max, x.abs());
    if x < 0.0 {
        for v in out.iter_mut().skip(1).step_by(2) {
            *v = -*v;
        }
    }
    out
}

fn series(n: u32, ax: f64) -> f64 {
    let half = 0.5 * ax;
    let mut lead = 1.0;
    for j in 1..=n {
        lead *= half / j as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200u32 {
        term *= -q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Hankel expansion; `None` when the smallest term is not negligible.
fn asymptotic(n: u32, ax: f64) -> Option<f64> {
    let mu = 4.0 * (n as f64) * (n as f64);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut converged = false;
    for k in 1..200u32 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (8.0 * k as f64 * ax);
        if next.abs() > term.abs() && k > 1 {
            break;
        }
        term = next;
        // a_k / x^k enters P (k even) or Q (k odd) with alternating signs.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    // chi = x - (n/2 + 1/4) pi with the phase reduced modulo 2 pi.
    let phase = ((n % 4) as f64 * 0.5 + 0.25) * PI;
    let (sx, cx) = ax.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    Some((2.0 / (PI * ax)).sqrt() * (p * cos_chi - q * sin_chi))
}

/// Miller's algorithm for `ax > 0`, returning `J_0..=J_{n_max}`.
fn miller(n_max: usize, ax: f64) -> Vec<f64> {
    let top = (n_max as f64).max(ax.ceil());
    let mut start = (top + 30.0 + (40.0 * top).sqrt()).ceil() as usize;
    start += start % 2;

    let mut out = vec![0.0; n_max + 1];
    // Rescalings applied before each entry was stored; entries are brought
    // to the final scale once at the end instead of at every rescaling.
    let mut rescales_at = vec![0i32; n_max + 1];
    let mut rescales = 0i32;
    let two_over_x = 2.0 / ax;
    let mut above = 0.0; // J_{k+1}
    let mut here = 1e-30; // J_k, arbitrary scale
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        if k <= n_max {
            out[k] = here;
            rescales_at[k] = rescales;
        }
        if k % 2 == 0 {
            norm += 2.0 * here;
        }
        let below = k as f64 * two_over_x * here - above;
        above = here;
        here = below;
        if here.abs() > RESCALE {
            here /= RESCALE;
            above /= RESCALE;
            norm /= RESCALE;
            rescales += 1;
        }
    }
    out[0] = here;
    rescales_at[0] = rescales;
    norm += here;
    for (v, &r) in out.iter_mut().zip(&rescales_at) {
        let behind = rescales - r;
        *v = if behind > 1 { 0.0 } else { *v / RESCALE.powi(behind) / norm };
    }
    out
}
