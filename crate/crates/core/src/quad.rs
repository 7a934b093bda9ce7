//! Gauss–Legendre quadrature on breakpoint-aligned panels.
//!
//! Nodes and weights come from the Golub–Welsch eigendecomposition of the
//! Jacobi matrix; integration splits the domain at the supplied breakpoints
//! so that integrands that are smooth between kinks converge at spectral
//! rate.

use nalgebra::{DMatrix, SymmetricEigen};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, sorted ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = i as f64 / ((4 * i * i - 1) as f64).sqrt();
        jac[(i, i - 1)] = b;
        jac[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// Scaled node/weight pairs covering every panel `[b_i, b_{i+1}]` of a
/// sorted breakpoint list, `n` Gauss–Legendre nodes per panel. Zero-width
/// panels are skipped.
pub fn panel_nodes(breakpoints: &[f64], n: usize) -> Vec<(f64, f64)> {
    let (xs, ws) = gauss_legendre(n);
    let mut out = Vec::new();
    for pair in breakpoints.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a <= 0.0 {
            continue;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in xs.iter().zip(&ws) {
            out.push((mid + half * x, half * w));
        }
    }
    out
}

/// Integrates `f` over the panels defined by `breakpoints`.
pub fn integrate(breakpoints: &[f64], n: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    panel_nodes(breakpoints, n)
        .into_iter()
        .map(|(t, w)| w * f(t))
        .sum()
}

/// Sorted breakpoint list for `[lo, hi]`: endpoints, the supplied interior
/// kinks, and subdivision so no panel exceeds `max_width`.
pub fn breakpoints(lo: f64, hi: f64, kinks: &[f64], max_width: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    for &k in kinks {
        if k > lo && k < hi {
            pts.push(k);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let mut out = Vec::new();
    for pair in pts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        out.push(a);
        if b - a > max_width {
            let parts = ((b - a) / max_width).ceil() as usize;
            for i in 1..parts {
                out.push(a + (b - a) * i as f64 / parts as f64);
            }
        }
    }
    out.push(hi);
    out
}
