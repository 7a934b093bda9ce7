//! Gabor-frame verdicts and compactly supported dual windows.
//!
//! For a window `g` and lattice `(α, β)` the pre-Gramian is
//! `P(x)_{jk} = g(x + jα − k/β)` and the Ron–Shen matrix is
//! `G(x) = P(x)ᵀP(x)`. With `g` totally positive of finite type `M ≥ 2`
//! the system is a frame exactly when `αβ < 1`; the dual window is read off
//! row `0` of a banded left-inverse `Γ(x)` of `P(x)`:
//! `γ(x + αj) = β·Γ(x)_{0,j}` for `x ∈ [0, α)`, compactly supported in
//! `[−rm/β − α, rn/β + α]` with `r = ⌊1/(1−αβ)⌋`.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::tp_kernel::TpWindow;
use crate::tp_linalg::{
    assemble_kernel_matrix, det_with_tolerance, select_submatrix_eps, BandedMatrix, IndexWindow,
    PointSequence, SubmatrixSelection,
};

/// Default number of initial grid cells on `[0, α)`.
pub const DEFAULT_GRID_CELLS: usize = 256;

/// Oversampling order `r = ⌊1/(1 − αβ)⌋`, defined only below critical
/// density.
pub fn oversampling_order(alpha: f64, beta: f64) -> Result<usize> {
    let product = alpha * beta;
    if !product.is_finite() || product >= 1.0 {
        return Err(Error::DensityViolation { product });
    }
    Ok((1.0 / (1.0 - product)).floor() as usize)
}

/// Lattice parameters `(α, β)`, both positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    alpha: f64,
    beta: f64,
}

impl LatticeParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::NonFiniteParam(alpha));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::NonFiniteParam(beta));
        }
        Ok(LatticeParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn density(&self) -> f64 {
        self.alpha * self.beta
    }

    pub fn oversampling_order(&self) -> Result<usize> {
        oversampling_order(self.alpha, self.beta)
    }

    /// Time-side sample sequence `x + αℤ` over `window`.
    pub fn time_sequence(&self, x: f64, window: IndexWindow) -> PointSequence {
        PointSequence::uniform(x, self.alpha, window).expect("alpha > 0")
    }

    /// Node sequence `β^{-1}ℤ` over `window`.
    pub fn node_sequence(&self, window: IndexWindow) -> PointSequence {
        PointSequence::uniform(0.0, 1.0 / self.beta, window).expect("beta > 0")
    }
}

/// Pre-Gramian `P(x)_{jk} = g(x + jα − k/β)` over the declared windows.
pub fn pregramian(
    g: &TpWindow,
    lat: &LatticeParams,
    x: f64,
    j_window: IndexWindow,
    k_window: IndexWindow,
) -> Result<BandedMatrix> {
    assemble_kernel_matrix(g, &lat.time_sequence(x, j_window), &lat.node_sequence(k_window))
}

/// Node window of a size-`size` Ron–Shen section, centered at 0.
pub fn ronshen_col_window(size: usize) -> IndexWindow {
    let lo = -(size as i64) / 2;
    IndexWindow::new(lo, lo + size as i64 - 1)
}

/// Absolute tail tolerance for the `j`-sum truncation of Ron–Shen sections.
const RONSHEN_TAIL_TOL: f64 = 1e-18;

/// Finite section of `G(x) = P(x)ᵀP(x)` over the centered node window, the
/// `j`-sum truncated where the window has decayed below [`RONSHEN_TAIL_TOL`].
pub fn ronshen_section(g: &TpWindow, lat: &LatticeParams, x: f64, size: usize) -> DMatrix<f64> {
    let cols = ronshen_col_window(size);
    let (supp_lo, supp_hi) = g.support_radius(RONSHEN_TAIL_TOL);
    let y_lo = cols.lo as f64 / lat.beta;
    let y_hi = cols.hi as f64 / lat.beta;
    // x + j alpha must reach [y_lo + supp_lo, y_hi + supp_hi].
    let j_lo = ((y_lo + supp_lo - x) / lat.alpha).floor() as i64;
    let j_hi = ((y_hi + supp_hi - x) / lat.alpha).ceil() as i64;
    let rows = (j_hi - j_lo + 1) as usize;
    let v = DMatrix::from_fn(rows, size, |i, a| {
        let t = x + (j_lo + i as i64) as f64 * lat.alpha;
        g.evaluate(t - (cols.lo + a as i64) as f64 / lat.beta)
    });
    v.transpose() * v
}

/// One grid cell of a dual window: the selection indices are constant for
/// `x ∈ [x_lo, x_hi)`, so the coefficient row is continuous there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualWindowCell {
    pub x_lo: f64,
    pub x_hi: f64,
    pub xi_indices: Vec<i64>,
    pub k1: i64,
    pub pivot: usize,
}

/// A piecewise-continuous compactly supported dual window, stored as the
/// per-cell coefficient rows `γ_{0,j}(x)` (scaled by `β`) over a
/// breakpoint-aware grid on `[0, α)`.
#[derive(Debug, Clone)]
pub struct DualWindow {
    g: TpWindow,
    lat: LatticeParams,
    r: usize,
    m: usize,
    n: usize,
    cells: Vec<DualWindowCell>,
    support: (f64, f64),
    sup_entry: f64,
    min_det: f64,
}

impl DualWindow {
    pub fn lattice(&self) -> &LatticeParams {
        &self.lat
    }

    pub fn window(&self) -> &TpWindow {
        &self.g
    }

    pub fn oversampling_order(&self) -> usize {
        self.r
    }

    /// `(m, n)` of the analysis window.
    pub fn type_counts(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn cells(&self) -> &[DualWindowCell] {
        &self.cells
    }

    /// Structural support interval of `γ`.
    pub fn support_interval(&self) -> (f64, f64) {
        self.support
    }

    /// Largest per-`x` support cardinality over the grid.
    pub fn max_support_cardinality(&self) -> usize {
        self.cells
            .iter()
            .map(|c| c.xi_indices.len())
            .max()
            .unwrap_or(0)
    }

    /// Sup over sampled grid points of the largest coefficient magnitude.
    pub fn sup_entry(&self) -> f64 {
        self.sup_entry
    }

    /// Smallest selected-submatrix determinant seen while sampling the grid.
    pub fn min_det(&self) -> f64 {
        self.min_det
    }

    fn cell_for(&self, x: f64) -> &DualWindowCell {
        let idx = self
            .cells
            .partition_point(|c| c.x_lo <= x)
            .saturating_sub(1);
        &self.cells[idx]
    }

    /// Coefficient row at `x ∈ [0, α)`: index support `j` and values
    /// `γ(x + αj) = β·γ_{0,j}(x)`.
    pub fn coeff_row(&self, x: f64) -> Result<(Vec<i64>, Vec<f64>)> {
        let cell = self.cell_for(x);
        let values = solve_cell_row(&self.g, &self.lat, cell, x)?;
        Ok((cell.xi_indices.clone(), values))
    }

    /// Point evaluation `γ(t)`; exactly zero outside the support interval
    /// and outside the per-cell index support.
    pub fn eval_at(&self, t: f64) -> Result<f64> {
        if t < self.support.0 || t > self.support.1 {
            return Ok(0.0);
        }
        let alpha = self.lat.alpha();
        let mut j = (t / alpha).floor() as i64;
        let mut x = t - alpha * j as f64;
        while x >= alpha {
            x -= alpha;
            j += 1;
        }
        while x < 0.0 {
            x += alpha;
            j -= 1;
        }
        let cell = self.cell_for(x);
        let Some(pos) = cell.xi_indices.iter().position(|&jj| jj == j) else {
            return Ok(0.0);
        };
        let values = solve_cell_row(&self.g, &self.lat, cell, x)?;
        Ok(values[pos])
    }

    /// CSV export `(x, j, t = x + αj, gamma_value)` with `samples` sample
    /// points per grid cell.
    pub fn write_csv<W: Write>(&self, mut w: W, samples: usize) -> std::io::Result<()> {
        writeln!(w, "x,j,t,gamma_value")?;
        for cell in &self.cells {
            for s in 0..samples {
                let x = cell.x_lo + (cell.x_hi - cell.x_lo) * (s as f64 + 0.5) / samples as f64;
                let values = solve_cell_row(&self.g, &self.lat, cell, x)
                    .map_err(|e| std::io::Error::other(e.to_string()))?;
                for (idx, &j) in cell.xi_indices.iter().enumerate() {
                    writeln!(
                        w,
                        "{:.16e},{},{:.16e},{:.16e}",
                        x,
                        j,
                        x + self.lat.alpha() * j as f64,
                        values[idx]
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Solves the cell's fixed-index selection at position `x`, returning the
/// `β`-scaled coefficient row.
fn solve_cell_row(
    g: &TpWindow,
    lat: &LatticeParams,
    cell: &DualWindowCell,
    x: f64,
) -> Result<Vec<f64>> {
    let nn = cell.xi_indices.len();
    let beta = lat.beta();
    let p = DMatrix::from_fn(nn, nn, |i, l| {
        let xi = x + lat.alpha() * cell.xi_indices[i] as f64;
        g.evaluate(xi - (cell.k1 + l as i64) as f64 / beta)
    });
    let (det, tol) = det_with_tolerance(&p);
    if det <= tol {
        return Err(Error::SingularSubmatrix { det, size: nn });
    }
    let mut rhs = nalgebra::DVector::zeros(nn);
    rhs[cell.pivot] = 1.0;
    let c = p
        .transpose()
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularSubmatrix { det, size: nn })?;
    Ok(c.iter().map(|v| beta * v).collect())
}

/// Builds the dual window by running the row-0 selection on an adaptive
/// grid over `[0, α)`; cells split until the selection indices are constant
/// per cell.
pub fn dual_window(g: &TpWindow, lat: &LatticeParams, grid_cells: usize) -> Result<DualWindow> {
    let r = lat.oversampling_order()?;
    let (m, n) = g.type_counts();
    if m + n < 2 {
        return Err(Error::TypeTooSmall { m, n });
    }
    let alpha = lat.alpha();
    let beta = lat.beta();

    let k_extent = ((r + 1) * (m + n) + 2) as i64;
    let y = lat.node_sequence(IndexWindow::new(-k_extent, k_extent));
    let j_extent = (k_extent as f64 / (alpha * beta)).ceil() as i64 + 3;
    let j_window = IndexWindow::new(-j_extent, j_extent);

    let signature = |x: f64| -> Result<SubmatrixSelection> {
        let xs = lat.time_sequence(x, j_window);
        select_submatrix_eps(g, &xs, &y, 0, r, 0.0, None)
    };

    let cells_init: Vec<(f64, f64)> = (0..grid_cells.max(1))
        .map(|i| {
            (
                alpha * i as f64 / grid_cells.max(1) as f64,
                alpha * (i + 1) as f64 / grid_cells.max(1) as f64,
            )
        })
        .collect();

    let refined: Vec<Vec<DualWindowCell>> = cells_init
        .into_par_iter()
        .map(|(lo, hi)| refine_cell(&signature, lo, hi, alpha * 1e-12, 0))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<DualWindowCell> = refined.into_iter().flatten().collect();

    // Sample each cell for the reported sup of |gamma| and the minimum
    // selected determinant.
    let mut sup_entry = 0.0f64;
    let mut min_det = f64::INFINITY;
    for cell in &cells {
        for s in 0..5 {
            let x = cell.x_lo + (cell.x_hi - cell.x_lo) * (s as f64 + 0.5) / 5.0;
            let nn = cell.xi_indices.len();
            let p = DMatrix::from_fn(nn, nn, |i, l| {
                let xi = x + alpha * cell.xi_indices[i] as f64;
                g.evaluate(xi - (cell.k1 + l as i64) as f64 / beta)
            });
            let (det, _) = det_with_tolerance(&p);
            min_det = min_det.min(det);
            let values = solve_cell_row(g, lat, cell, x)?;
            for v in values {
                sup_entry = sup_entry.max(v.abs());
            }
        }
    }

    let support_lo = if m >= 1 {
        -((r * m) as f64) / beta - alpha
    } else {
        // One-sided windows keep one sample point in (y_{-1}, y_0).
        -1.0 / beta
    };
    let support_hi = if n >= 1 {
        (r * n) as f64 / beta + alpha
    } else {
        1.0 / beta
    };

    Ok(DualWindow {
        g: g.clone(),
        lat: *lat,
        r,
        m,
        n,
        cells,
        support: (support_lo, support_hi),
        sup_entry,
        min_det,
    })
}

fn refine_cell(
    signature: &(impl Fn(f64) -> Result<SubmatrixSelection> + Sync),
    lo: f64,
    hi: f64,
    min_width: f64,
    depth: usize,
) -> Result<Vec<DualWindowCell>> {
    let probes = [
        lo,
        lo + 0.25 * (hi - lo),
        lo + 0.5 * (hi - lo),
        lo + 0.75 * (hi - lo),
        lo + (hi - lo) * (1.0 - 1e-9),
    ];
    let sels: Vec<SubmatrixSelection> =
        probes.iter().map(|&x| signature(x)).collect::<Result<_>>()?;
    let all_equal = sels
        .iter()
        .all(|s| s.xi_indices == sels[0].xi_indices && s.k1 == sels[0].k1);
    if all_equal || hi - lo < min_width || depth > 48 {
        return Ok(vec![DualWindowCell {
            x_lo: lo,
            x_hi: hi,
            xi_indices: sels[0].xi_indices.clone(),
            k1: sels[0].k1,
            pivot: sels[0].pivot,
        }]);
    }
    let mid = 0.5 * (lo + hi);
    let mut out = refine_cell(signature, lo, mid, min_width, depth + 1)?;
    out.extend(refine_cell(signature, mid, hi, min_width, depth + 1)?);
    Ok(out)
}

/// Max deviation of `⟨γ, M_{l/α}T_{k/β} g⟩` from `αβ·δ_{k,0}δ_{l,0}` over
/// `|k| ≤ kmax`, `|l| ≤ lmax`, via Gauss–Legendre panels aligned to the
/// dual window's grid-cell breakpoints and the window's kink.
pub fn verify_biorthogonality(
    g: &TpWindow,
    dw: &DualWindow,
    kmax: i64,
    lmax: i64,
    nodes_per_panel: usize,
) -> Result<f64> {
    let alpha = dw.lat.alpha();
    let beta = dw.lat.beta();
    let (lo, hi) = dw.support_interval();

    let mut breaks: Vec<f64> = vec![lo, hi];
    let j_lo = (lo / alpha).floor() as i64 - 1;
    let j_hi = (hi / alpha).ceil() as i64 + 1;
    for cell in &dw.cells {
        for j in j_lo..=j_hi {
            let t = cell.x_lo + alpha * j as f64;
            if t > lo && t < hi {
                breaks.push(t);
            }
        }
    }
    for k in -kmax..=kmax {
        let t = k as f64 / beta + g.shift();
        if t > lo && t < hi {
            breaks.push(t);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();

    let pts = quad::panel_nodes(&breaks, nodes_per_panel);
    let gamma: Vec<f64> = pts
        .iter()
        .map(|&(t, _)| dw.eval_at(t))
        .collect::<Result<_>>()?;

    let mut worst = 0.0f64;
    for k in -kmax..=kmax {
        let shift = k as f64 / beta;
        let gk: Vec<f64> = pts.iter().map(|&(t, _)| g.evaluate(t - shift)).collect();
        for l in -lmax..=lmax {
            let mut acc = Complex64::new(0.0, 0.0);
            let omega = -2.0 * std::f64::consts::PI * l as f64 / alpha;
            for (i, &(t, w)) in pts.iter().enumerate() {
                acc += Complex64::from_polar(w * gamma[i] * gk[i], omega * t);
            }
            let target = if k == 0 && l == 0 {
                alpha * beta
            } else {
                0.0
            };
            worst = worst.max((acc - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// `Σ_j sup_x |γ(x + αj)|` over the compact support (sampled sup per grid
/// cell); finiteness certifies the amalgam-space Bessel condition.
pub fn bessel_check(dw: &DualWindow) -> Result<f64> {
    let mut sup_per_j: std::collections::BTreeMap<i64, f64> = std::collections::BTreeMap::new();
    for cell in &dw.cells {
        for s in 0..8 {
            let x = cell.x_lo + (cell.x_hi - cell.x_lo) * (s as f64 + 0.5) / 8.0;
            let values = solve_cell_row(&dw.g, &dw.lat, cell, x)?;
            for (idx, &j) in cell.xi_indices.iter().enumerate() {
                let e = sup_per_j.entry(j).or_insert(0.0);
                *e = e.max(values[idx].abs());
            }
        }
    }
    Ok(sup_per_j.values().sum())
}

/// Frame verdict for the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameVerdict {
    Frame,
    NotFrame,
}

/// One spectral sample of a Ron–Shen section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub x: f64,
    pub size: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Frame-bound estimates from Ron–Shen finite sections over a truncation
/// ladder and a grid of `x` samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub a_est: f64,
    pub b_est: f64,
    pub sizes: Vec<usize>,
    pub x_samples: Vec<f64>,
    /// Per-size min over `x` of `λ_min`.
    pub a_ladder: Vec<f64>,
    /// Per-size max over `x` of `λ_max`.
    pub b_ladder: Vec<f64>,
    pub table: Vec<SpectrumSample>,
}

/// Frame verdict (theory-backed: frame iff `αβ < 1` for `M ≥ 2`) plus
/// spectral estimates of the frame bounds.
pub fn frame_check(
    g: &TpWindow,
    lat: &LatticeParams,
    sizes: &[usize],
    x_samples: &[f64],
) -> Result<(FrameVerdict, FrameBounds)> {
    let (m, n) = g.type_counts();
    if m + n < 2 {
        return Err(Error::TypeTooSmall { m, n });
    }
    let verdict = if lat.density() < 1.0 {
        FrameVerdict::Frame
    } else {
        FrameVerdict::NotFrame
    };

    let entries: Vec<SpectrumSample> = x_samples
        .iter()
        .flat_map(|&x| sizes.iter().map(move |&s| (x, s)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(x, size)| {
            let section = ronshen_section(g, lat, x, size);
            let eig = SymmetricEigen::new(section);
            let lambda_min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            let lambda_max = eig.eigenvalues.iter().copied().fold(0.0f64, f64::max);
            SpectrumSample {
                x,
                size,
                lambda_min,
                lambda_max,
            }
        })
        .collect();

    let mut a_ladder = Vec::with_capacity(sizes.len());
    let mut b_ladder = Vec::with_capacity(sizes.len());
    for &s in sizes {
        let a = entries
            .iter()
            .filter(|e| e.size == s)
            .map(|e| e.lambda_min)
            .fold(f64::INFINITY, f64::min);
        let b = entries
            .iter()
            .filter(|e| e.size == s)
            .map(|e| e.lambda_max)
            .fold(0.0f64, f64::max);
        a_ladder.push(a);
        b_ladder.push(b);
    }
    let a_est = a_ladder.last().copied().unwrap_or(0.0);
    let b_est = b_ladder.last().copied().unwrap_or(0.0);
    Ok((
        verdict,
        FrameBounds {
            a_est,
            b_est,
            sizes: sizes.to_vec(),
            x_samples: x_samples.to_vec(),
            a_ladder,
            b_ladder,
            table: entries,
        },
    ))
}

/// Default `x` grid: `count` equispaced points in `[0, α)`.
pub fn default_x_samples(alpha: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| alpha * i as f64 / count as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_sided() -> TpWindow {
        TpWindow::new(0.5, 0.0, &[1.0, -1.0]).unwrap()
    }

    fn lat_half() -> LatticeParams {
        LatticeParams::new(0.5, 1.0).unwrap()
    }

    #[test]
    fn oversampling_order_values() {
        assert_eq!(oversampling_order(0.5, 1.0).unwrap(), 2);
        assert_eq!(oversampling_order(0.9, 1.0).unwrap(), 10);
        assert!(matches!(
            oversampling_order(1.0, 1.0),
            Err(Error::DensityViolation { .. })
        ));
    }

    #[test]
    fn pregramian_entries_and_row_shift() {
        let g = two_sided();
        let lat = lat_half();
        let w = IndexWindow::new(-6, 6);
        let p0 = pregramian(&g, &lat, 0.0, w, w).unwrap();
        assert_relative_eq!(p0.get(0, 0), 1.0);
        // P(x + alpha)_{j,k} = P(x)_{j+1,k}.
        let x = 0.2;
        let pa = pregramian(&g, &lat, x + 0.5, w, w).unwrap();
        let pb = pregramian(&g, &lat, x, w, w).unwrap();
        for j in -3..=3 {
            for k in -3..=3 {
                assert_relative_eq!(pa.get(j, k), pb.get(j + 1, k), max_relative = 1e-13, epsilon = 1e-300);
            }
        }
    }

    #[test]
    fn ronshen_section_is_gram() {
        let g = two_sided();
        let lat = lat_half();
        let s = ronshen_section(&g, &lat, 0.2, 8);
        // Symmetric with positive diagonal.
        for a in 0..8 {
            assert!(s[(a, a)] > 0.0);
            for b in 0..8 {
                assert_relative_eq!(s[(a, b)], s[(b, a)], max_relative = 1e-12);
            }
        }
        // PSD: Rayleigh quotients nonnegative.
        let eig = SymmetricEigen::new(s);
        assert!(eig.eigenvalues.iter().all(|&l| l > -1e-12));
    }

    #[test]
    fn ronshen_matches_pregramian_product() {
        let g = two_sided();
        let lat = lat_half();
        let size = 8;
        let cols = ronshen_col_window(size);
        let section = ronshen_section(&g, &lat, 0.3, size);
        // Direct multiplication over a generous j window.
        let jw = IndexWindow::new(-120, 120);
        let p = pregramian(&g, &lat, 0.3, jw, cols).unwrap();
        let dense = p.dense_block(jw, cols);
        let gram = dense.transpose() * dense;
        for a in 0..size {
            for b in 0..size {
                assert_relative_eq!(section[(a, b)], gram[(a, b)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn dual_window_support_and_cardinality() {
        let g = two_sided();
        let lat = lat_half();
        let dw = dual_window(&g, &lat, 64).unwrap();
        // r = 2, m = n = 1: support [-2.5, 2.5], card <= (r+1)M = 6.
        assert_eq!(dw.oversampling_order(), 2);
        assert_eq!(dw.support_interval(), (-2.5, 2.5));
        assert!(dw.max_support_cardinality() <= 6);
        assert!(dw.sup_entry().is_finite());
        assert!(dw.min_det() > 0.0);
        // Structural zero outside support.
        assert_eq!(dw.eval_at(-3.0).unwrap(), 0.0);
        assert_eq!(dw.eval_at(7.1).unwrap(), 0.0);
    }

    #[test]
    fn dual_window_one_sided_windows() {
        // m = 2, n = 0 goes through the reflection path; the construction
        // keeps one sample point in (y_0, y_1), so the support reaches 1/beta.
        let lat = lat_half();
        let g = TpWindow::new(1.0, 0.0, &[1.0, 0.5]).unwrap();
        let dw = dual_window(&g, &lat, 64).unwrap();
        let r = dw.oversampling_order();
        assert_eq!(dw.support_interval(), (-((r * 2) as f64) - 0.5, 1.0));
        let dev = verify_biorthogonality(&g, &dw, 4, 4, 32).unwrap();
        assert!(dev <= 1e-6, "deviation {dev:.3e}");
        // Mirrored window (m = 0, n = 2): support reaches -1/beta.
        let gm = g.reflect();
        let dwm = dual_window(&gm, &lat, 64).unwrap();
        assert_eq!(dwm.support_interval(), (-1.0, (r * 2) as f64 + 0.5));
        let devm = verify_biorthogonality(&gm, &dwm, 4, 4, 32).unwrap();
        assert!(devm <= 1e-6, "deviation {devm:.3e}");
    }

    #[test]
    fn dual_window_rejects_bad_inputs() {
        let g = two_sided();
        assert!(matches!(
            dual_window(&g, &LatticeParams::new(1.0, 1.0).unwrap(), 16),
            Err(Error::DensityViolation { .. })
        ));
        let m1 = TpWindow::new(1.0, 0.0, &[1.0]).unwrap();
        assert!(matches!(
            dual_window(&m1, &lat_half(), 16),
            Err(Error::TypeTooSmall { .. })
        ));
    }

    #[test]
    fn frame_check_verdicts() {
        let g = two_sided();
        let sizes = [16, 32];
        let xs = default_x_samples(0.5, 5);
        let (v, b) = frame_check(&g, &lat_half(), &sizes, &xs).unwrap();
        assert_eq!(v, FrameVerdict::Frame);
        assert!(b.a_est > 0.0);
        assert!(b.a_est <= b.b_est);
        let lat1 = LatticeParams::new(1.0, 1.0).unwrap();
        let xs1 = default_x_samples(1.0, 5);
        let (v1, _) = frame_check(&g, &lat1, &sizes, &xs1).unwrap();
        assert_eq!(v1, FrameVerdict::NotFrame);
    }

    #[test]
    fn bessel_sum_dominates_single_entry() {
        let g = two_sided();
        let dw = dual_window(&g, &lat_half(), 32).unwrap();
        let total = bessel_check(&dw).unwrap();
        assert!(total.is_finite());
        assert!(total >= dw.sup_entry() * 0.999);
    }
}
