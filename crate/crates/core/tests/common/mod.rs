//! Shared oracles for the integration suites. These stay independent of the
//! library's evaluation paths: convolution and Fourier integrals are done by
//! breakpoint-aware Gauss–Legendre quadrature on the factor level, and
//! operator norms by power iteration on dense sections.

// Each integration target compiles this module separately and uses a
// different subset of the helpers.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use tpgabor::quad;
use tpgabor::tp_linalg::BandedMatrix;
use tpgabor::TpWindow;

/// One normalized one-sided exponential factor: `δ > 0` gives
/// `(1/δ)e^{−t/δ}` on `t ≥ 0`, `δ < 0` the mirror on `t < 0`.
pub fn factor_eval(delta: f64, t: f64) -> f64 {
    if delta > 0.0 {
        if t >= 0.0 {
            (-t / delta).exp() / delta
        } else {
            0.0
        }
    } else if t < 0.0 {
        (-t / delta).exp() / (-delta)
    } else {
        0.0
    }
}

/// Numeric support `[lo, hi]` of the convolution of the given factors, at
/// tail level `e^{-45}` per factor.
fn conv_support(deltas: &[f64]) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for &d in deltas {
        if d > 0.0 {
            hi += 45.0 * d;
        } else {
            lo += 45.0 * d;
        }
    }
    (lo, hi)
}

/// M-fold convolution of the factors, evaluated at `t` by recursive
/// quadrature with panels split at the factor kinks.
pub fn conv_eval(deltas: &[f64], t: f64) -> f64 {
    if deltas.len() == 1 {
        return factor_eval(deltas[0], t);
    }
    let d1 = deltas[0];
    let rest = &deltas[1..];
    let (rest_lo, rest_hi) = conv_support(rest);
    // tau domain: factor support intersected with t - rest support.
    let (f_lo, f_hi) = if d1 > 0.0 { (0.0, 45.0 * d1) } else { (45.0 * d1, 0.0) };
    let lo = f_lo.max(t - rest_hi);
    let hi = f_hi.min(t - rest_lo);
    if hi <= lo {
        return 0.0;
    }
    let breaks = quad::breakpoints(lo, hi, &[0.0, t], 1.5);
    quad::integrate(&breaks, 32, |tau| factor_eval(d1, tau) * conv_eval(rest, t - tau))
}

/// Oracle for a full window: `(1/C)` times the factor convolution, shifted.
pub fn window_oracle(scale_c: f64, shift: f64, deltas: &[f64], t: f64) -> f64 {
    conv_eval(deltas, t - shift) / scale_c
}

/// Fourier integral `∫ g(t) e^{−2πiξt} dt` by quadrature over the window's
/// effective support.
pub fn fourier_quadrature(g: &TpWindow, xi: f64) -> Complex64 {
    let (lo, hi) = g.support_radius(1e-14);
    let breaks = quad::breakpoints(lo, hi, &[g.shift()], 0.5);
    let pts = quad::panel_nodes(&breaks, 32);
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, w) in pts {
        acc += Complex64::from_polar(
            w * g.evaluate(t),
            -2.0 * std::f64::consts::PI * xi * t,
        );
    }
    acc
}

/// Power-iteration estimate of the spectral norm of a dense section
/// (monotone from below, so it never overshoots the true norm).
pub fn power_iteration_norm(a: &DMatrix<f64>, iters: usize) -> f64 {
    let n = a.ncols();
    if n == 0 {
        return 0.0;
    }
    let mut v = nalgebra::DVector::from_fn(n, |i, _| 1.0 + 0.01 * (i as f64 + 1.0));
    v /= v.norm();
    for _ in 0..iters {
        let w = a.transpose() * (a * &v);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / norm;
    }
    (a * v).norm()
}

/// Dense copy of a banded matrix over its full windows.
pub fn full_dense(b: &BandedMatrix) -> DMatrix<f64> {
    b.dense_block(b.row_window(), b.col_window())
}

/// Minimal Schoenberg–Whitney slack of `(xs, ys)` for type `(m, n)`;
/// negative when the conditions fail.
pub fn sw_slack(xs: &[f64], ys: &[f64], m: usize, n: usize) -> f64 {
    let nn = xs.len();
    let mut slack = f64::INFINITY;
    for j in 1..=nn {
        if j > m {
            slack = slack.min(ys[j - 1] - xs[j - m - 1]);
        }
        if j + n <= nn {
            slack = slack.min(xs[j + n - 1] - ys[j - 1]);
        }
    }
    slack
}

/// Strictly increasing points in `[0, range]` with pairwise separation at
/// least `min_sep`.
pub fn sorted_points(rng: &mut impl Rng, n: usize, range: f64, min_sep: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..range)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if n < 2 || v.windows(2).all(|w| w[1] - w[0] >= min_sep) {
            return v;
        }
    }
}

/// A random test case with a clear margin: either both sequences are close
/// (usually satisfying the interlacing) or independent (often violating
/// it); cases within `0.04` of the SW boundary are re-drawn so the
/// determinant classification is never borderline.
pub fn clear_margin_case(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    max_n: usize,
) -> (Vec<f64>, Vec<f64>) {
    loop {
        let size = rng.random_range(1..=max_n);
        let xs = sorted_points(rng, size, 4.0, 0.08);
        let ys = if rng.random_bool(0.5) {
            let mut ys: Vec<f64> = xs
                .iter()
                .map(|x| x + rng.random_range(-0.35..0.35))
                .collect();
            ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if size >= 2 && ys.windows(2).any(|w| w[1] - w[0] < 0.08) {
                continue;
            }
            ys
        } else {
            sorted_points(rng, size, 4.0, 0.08)
        };
        if sw_slack(&xs, &ys, m, n).abs() >= 0.04 {
            return (xs, ys);
        }
    }
}
