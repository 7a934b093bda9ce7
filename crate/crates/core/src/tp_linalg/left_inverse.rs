//! Schoenberg–Whitney tests and banded left-inverses of totally positive
//! kernel matrices `P = [g(x_j − y_k)]`.
//!
//! Row `k` of the left-inverse comes from one invertible `N×N` submatrix
//! `P_k = [g(ξ_i − η_l)]`: the columns are the `N` consecutive nodes
//! starting at `k1` (`k1 = k − (r+1)m + 1` when `m ≥ 1`, `k1 = k` when
//! `m = 0`), and the sample points `ξ` are chosen with one point in each
//! node interval plus `m + n − 1` extra points, which makes the
//! Schoenberg–Whitney conditions hold and `det P_k > 0`. The row of
//! `P_k^{-1}` matching the node `y_k`, padded with zeros, annihilates every
//! other column of `P`, so `ΓP = I` with the band law
//! `γ_{k,j} = 0` for `x_j < y_{k−rm}` or `x_j > y_{k+rn}` (one node wider on
//! the affected side for one-sided windows, whose construction must keep a
//! point just beyond `y_k`).
//!
//! Sample sets that must additionally stay `ε` clear of the nodes (the
//! strengthened sampling conditions) use the same selection with shrunk
//! intervals.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tp_kernel::TpWindow;

use super::banded::{BandedMatrix, BandRow};
use super::points::{IndexWindow, PointSequence};

/// Relative determinant tolerance: `|det| ≤ DET_ZERO_RTOL · Π_i max_l |P_il|`
/// classifies as zero.
pub const DET_ZERO_RTOL: f64 = 1e-10;

/// Kernel matrix `[g(x_j − y_k)]` over the sequences' windows, rows banded
/// by the evaluation cutoff of the window.
pub fn assemble_kernel_matrix(
    g: &TpWindow,
    x: &PointSequence,
    y: &PointSequence,
) -> Result<BandedMatrix> {
    let (supp_lo, supp_hi) = g.support_radius(crate::tp_kernel::EVAL_CUTOFF);
    let mut rows = Vec::with_capacity(x.window().len());
    for j in x.window().iter() {
        let xj = x.position(j);
        // g(xj - yk) != 0 needs yk in [xj - supp_hi, xj - supp_lo].
        let klo = y.min_above(xj - supp_hi, true);
        let khi = y.max_below(xj - supp_lo, true);
        match (klo, khi) {
            (Some(klo), Some(khi)) if klo <= khi => {
                let values: Vec<f64> = (klo..=khi)
                    .map(|k| g.evaluate(xj - y.position(k)))
                    .collect();
                rows.push(BandRow {
                    first_col: klo,
                    values,
                });
            }
            _ => rows.push(BandRow {
                first_col: y.window().lo,
                values: Vec::new(),
            }),
        }
    }
    BandedMatrix::from_rows(x.window(), y.window(), rows)
}

/// Schoenberg–Whitney conditions `x_{j−m} < y_j < x_{j+n}` for `1 ≤ j ≤ N`,
/// with out-of-range `x` read as `∓∞`.
pub fn sw_check(xs: &[f64], ys: &[f64], m: usize, n: usize) -> Result<bool> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if m + n < 2 {
        return Err(Error::TypeTooSmall { m, n });
    }
    ensure_increasing(xs)?;
    ensure_increasing(ys)?;
    let nn = xs.len() as i64;
    for j in 1..=nn {
        let lower = j - m as i64;
        if lower >= 1 && xs[(lower - 1) as usize] >= ys[(j - 1) as usize] {
            return Ok(false);
        }
        let upper = j + n as i64;
        if upper <= nn && ys[(j - 1) as usize] >= xs[(upper - 1) as usize] {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ensure_increasing(v: &[f64]) -> Result<()> {
    for (i, w) in v.windows(2).enumerate() {
        if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::NonIncreasingSequence {
                index: i as i64 + 1,
            });
        }
    }
    Ok(())
}

/// Sign classification of the kernel determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetClass {
    Positive,
    Zero,
}

/// Determinant of the dense kernel matrix `[g(x_j − y_k)]`, classified
/// against the row-scaled zero tolerance. A determinant below `−tol`
/// signals a total-positivity violation and is an error.
pub fn det_sign_oracle(g: &TpWindow, xs: &[f64], ys: &[f64]) -> Result<DetClass> {
    det_sign_oracle_with_margin(g, xs, ys).map(|(class, _, _)| class)
}

/// [`det_sign_oracle`] plus the raw determinant and the tolerance it was
/// classified against.
pub fn det_sign_oracle_with_margin(
    g: &TpWindow,
    xs: &[f64],
    ys: &[f64],
) -> Result<(DetClass, f64, f64)> {
    let (m, n) = g.type_counts();
    if m + n < 2 {
        return Err(Error::TypeTooSmall { m, n });
    }
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    ensure_increasing(xs)?;
    ensure_increasing(ys)?;
    let size = xs.len();
    let mat = DMatrix::from_fn(size, size, |i, l| g.evaluate(xs[i] - ys[l]));
    let (det, tol) = det_with_tolerance(&mat);
    if det > tol {
        Ok((DetClass::Positive, det, tol))
    } else if det.abs() <= tol {
        Ok((DetClass::Zero, det, tol))
    } else {
        Err(Error::NegativeDeterminant { det })
    }
}

/// `(det, row-scaled zero tolerance)` of a square matrix.
pub fn det_with_tolerance(mat: &DMatrix<f64>) -> (f64, f64) {
    let det = mat.clone().lu().determinant();
    let mut scale = 1.0f64;
    for i in 0..mat.nrows() {
        let row_max = (0..mat.ncols()).fold(0.0f64, |acc, l| acc.max(mat[(i, l)].abs()));
        scale *= row_max;
    }
    (det, DET_ZERO_RTOL * scale)
}

/// Condition `(C_r)` over the declared windows: every node interval
/// `(y_k, y_{k+1})` holds a point of `X`, and every `(y_k, y_{k+r})` holds
/// at least `r + 1`. Intervals are counted literally against `X`'s window,
/// so `X` must span `Y`'s range.
pub fn condition_cr(x: &PointSequence, y: &PointSequence, r: usize) -> bool {
    if r == 0 {
        return false;
    }
    let win = y.window();
    for k in win.lo..win.hi {
        if x.count_in_open(y.position(k), y.position(k + 1)) < 1 {
            return false;
        }
    }
    for k in win.lo..=(win.hi - r as i64) {
        if x.count_in_open(y.position(k), y.position(k + r as i64)) < r + 1 {
            return false;
        }
    }
    true
}

/// One selected invertible submatrix `P_k` of the kernel matrix: column
/// range `[k1, k2]`, admissible row range `[j1, j2]`, the `N` chosen sample
/// points `ξ` (by index and value), the nodes `η = y_{k1}..y_{k2}`, and the
/// 0-based pivot position of the node `y_k` within `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmatrixSelection {
    pub row_index_k: i64,
    pub size_n: usize,
    pub k1: i64,
    pub k2: i64,
    pub j1: i64,
    pub j2: i64,
    pub xi_indices: Vec<i64>,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub pivot: usize,
}

/// Submatrix selection for row `k` with oversampling order `r` (margin
/// `ε = 0`, all points admissible).
pub fn select_submatrix(
    g: &TpWindow,
    x: &PointSequence,
    y: &PointSequence,
    k: i64,
    r: usize,
) -> Result<SubmatrixSelection> {
    select_submatrix_eps(g, x, y, k, r, 0.0, None)
}

/// Submatrix selection with an `ε` clearance from the nodes and an optional
/// sorted list of admissible sample indices (the quasi-uniform subsequence
/// of the sampling conditions).
pub fn select_submatrix_eps(
    g: &TpWindow,
    x: &PointSequence,
    y: &PointSequence,
    k: i64,
    r: usize,
    eps: f64,
    allowed: Option<&[i64]>,
) -> Result<SubmatrixSelection> {
    if r == 0 {
        return Err(Error::ConditionCrViolated("oversampling order r must be >= 1".into()));
    }
    let (m, n) = g.type_counts();
    if n == 0 {
        // Reflection x -> -x swaps the roles of m and n.
        let g2 = g.reflect();
        let x2 = x.reflect();
        let y2 = y.reflect();
        let allowed2: Option<Vec<i64>> =
            allowed.map(|a| a.iter().rev().map(|j| -j).collect());
        let sel = select_submatrix_eps(&g2, &x2, &y2, -k, r, eps, allowed2.as_deref())?;
        let nn = sel.size_n;
        return Ok(SubmatrixSelection {
            row_index_k: k,
            size_n: nn,
            k1: -sel.k2,
            k2: -sel.k1,
            j1: -sel.j2,
            j2: -sel.j1,
            xi_indices: sel.xi_indices.iter().rev().map(|j| -j).collect(),
            xi: sel.xi.iter().rev().map(|v| -v).collect(),
            eta: sel.eta.iter().rev().map(|v| -v).collect(),
            pivot: nn - 1 - sel.pivot,
        });
    }
    if m == 0 && n == 1 {
        return select_two_by_two(x, y, k, eps, allowed);
    }

    let (k1, pivot) = if m >= 1 {
        (k - ((r + 1) * m) as i64 + 1, (r + 1) * m - 1)
    } else {
        (k, 0)
    };
    let size_n = if m == 0 {
        (n - 1) * (r + 1)
    } else if n == 1 {
        m * (r + 1) + 1
    } else {
        (m + n - 1) * (r + 1)
    };
    let k2 = k1 + size_n as i64 - 1;
    let lo_node = k1 + m as i64 - 1;
    let hi_node = k2 - n as i64 + 1;

    let ywin = y.window();
    if lo_node.min(k1) < ywin.lo || hi_node.max(k2) > ywin.hi {
        return Err(Error::EmptyWindow(format!(
            "row {k} needs nodes [{}, {}] but Y window is [{}, {}]",
            lo_node.min(k1),
            hi_node.max(k2),
            ywin.lo,
            ywin.hi
        )));
    }

    let j1 = bound_above(x, y.position(lo_node), eps)
        .ok_or_else(|| Error::EmptyWindow(format!("no sample point above node {lo_node}")))?;
    let j2 = bound_below(x, y.position(hi_node), eps)
        .ok_or_else(|| Error::EmptyWindow(format!("no sample point below node {hi_node}")))?;
    if j1 > j2 {
        return Err(Error::ConditionCrViolated(format!(
            "no sample points between nodes {lo_node} and {hi_node}"
        )));
    }

    let candidates: Vec<i64> = (j1..=j2)
        .filter(|j| allowed.is_none_or(|a| a.binary_search(j).is_ok()))
        .collect();
    if candidates.len() < size_n {
        return Err(Error::ConditionCrViolated(format!(
            "interval (y_{lo_node}, y_{hi_node}) holds {} admissible points, need {}",
            candidates.len(),
            size_n
        )));
    }

    // One mandatory point per node interval: closest to the midpoint, ties
    // to the smaller index.
    let mut selected: Vec<i64> = Vec::with_capacity(size_n);
    for l in lo_node..hi_node {
        let (a, b) = (y.position(l) + eps, y.position(l + 1) - eps);
        let mid = 0.5 * (a + b);
        let mut best: Option<(f64, i64)> = None;
        for &j in &candidates {
            let xj = x.position(j);
            if xj > a && xj < b {
                let d = (xj - mid).abs();
                if best.is_none_or(|(bd, bj)| d < bd || (d == bd && j < bj)) {
                    best = Some((d, j));
                }
            }
        }
        match best {
            Some((_, j)) => selected.push(j),
            None => {
                return Err(Error::ConditionCrViolated(format!(
                    "interval (y_{l}, y_{}) contains no admissible sample point",
                    l + 1
                )))
            }
        }
    }
    selected.sort_unstable();

    // Greedy extras: maximize the conservative interlacing slack.
    let eta: Vec<f64> = (k1..=k2).map(|l| y.position(l)).collect();
    let mut pool: Vec<i64> = candidates
        .iter()
        .copied()
        .filter(|j| selected.binary_search(j).is_err())
        .collect();
    let extras = m + n - 1;
    for _ in 0..extras {
        let mut best: Option<(f64, i64)> = None;
        for &c in &pool {
            let mut trial = selected.clone();
            let pos = trial.partition_point(|&j| j < c);
            trial.insert(pos, c);
            let slack = partial_slack(x, &trial, &eta, size_n, m, n);
            if best.is_none_or(|(bs, bc)| slack > bs || (slack == bs && c < bc)) {
                best = Some((slack, c));
            }
        }
        let (_, c) = best.ok_or_else(|| {
            Error::ConditionCrViolated("ran out of extra sample points".into())
        })?;
        let pos = selected.partition_point(|&j| j < c);
        selected.insert(pos, c);
        pool.retain(|&j| j != c);
    }

    let xi: Vec<f64> = selected.iter().map(|&j| x.position(j)).collect();
    debug_assert_eq!(xi.len(), size_n);
    if !sw_check(&xi, &eta, m, n)? {
        return Err(Error::ConditionCrViolated(
            "selected points fail the Schoenberg-Whitney conditions".into(),
        ));
    }
    debug_assert_eq!(eta[pivot], y.position(k));
    Ok(SubmatrixSelection {
        row_index_k: k,
        size_n,
        k1,
        k2,
        j1,
        j2,
        xi_indices: selected,
        xi,
        eta,
        pivot,
    })
}

/// The 2×2 case `m = 0, n = 1`: one point on each side of the node `y_k`.
fn select_two_by_two(
    x: &PointSequence,
    y: &PointSequence,
    k: i64,
    eps: f64,
    allowed: Option<&[i64]>,
) -> Result<SubmatrixSelection> {
    let ywin = y.window();
    if k - 1 < ywin.lo || k + 1 > ywin.hi {
        return Err(Error::EmptyWindow(format!(
            "row {k} needs nodes [{}, {}] but Y window is [{}, {}]",
            k - 1,
            k + 1,
            ywin.lo,
            ywin.hi
        )));
    }
    let yk = y.position(k);
    let admissible = |j: i64| allowed.is_none_or(|a| a.binary_search(&j).is_ok());
    let mut j1 = bound_below(x, yk, eps)
        .ok_or_else(|| Error::EmptyWindow(format!("no sample point below node {k}")))?;
    while !admissible(j1) {
        if j1 == x.window().lo {
            return Err(Error::ConditionCrViolated(format!(
                "no admissible sample point below node {k}"
            )));
        }
        j1 -= 1;
    }
    let mut j2 = bound_above(x, yk, eps)
        .ok_or_else(|| Error::EmptyWindow(format!("no sample point above node {k}")))?;
    while !admissible(j2) {
        if j2 == x.window().hi {
            return Err(Error::ConditionCrViolated(format!(
                "no admissible sample point above node {k}"
            )));
        }
        j2 += 1;
    }
    if x.position(j1) <= y.position(k - 1) + eps {
        return Err(Error::ConditionCrViolated(format!(
            "interval (y_{}, y_{k}) contains no admissible sample point",
            k - 1
        )));
    }
    if x.position(j2) >= y.position(k + 1) - eps {
        return Err(Error::ConditionCrViolated(format!(
            "interval (y_{k}, y_{}) contains no admissible sample point",
            k + 1
        )));
    }
    Ok(SubmatrixSelection {
        row_index_k: k,
        size_n: 2,
        k1: k,
        k2: k + 1,
        j1,
        j2,
        xi_indices: vec![j1, j2],
        xi: vec![x.position(j1), x.position(j2)],
        eta: vec![yk, y.position(k + 1)],
        pivot: 0,
    })
}

fn bound_above(x: &PointSequence, t: f64, eps: f64) -> Option<i64> {
    if eps > 0.0 {
        x.min_above(t + eps, true)
    } else {
        x.min_above(t, false)
    }
}

fn bound_below(x: &PointSequence, t: f64, eps: f64) -> Option<i64> {
    if eps > 0.0 {
        x.max_below(t - eps, true)
    } else {
        x.max_below(t, false)
    }
}

/// Worst-case interlacing slack of a partial selection against the node
/// ladder `η`, minimized over the final positions the chosen points can
/// still occupy (`h = N − |T|` slots remain). Equals the exact
/// Schoenberg–Whitney slack once the selection is complete.
fn partial_slack(
    x: &PointSequence,
    trial: &[i64],
    eta: &[f64],
    size_n: usize,
    m: usize,
    n: usize,
) -> f64 {
    let h = size_n - trial.len();
    let mut slack = f64::INFINITY;
    for (i0, &j) in trial.iter().enumerate() {
        let i = i0 + 1; // 1-based position
        let t = x.position(j);
        if i + m <= size_n {
            slack = slack.min(eta[i + m - 1] - t);
        }
        let lower = i as i64 + h as i64 - n as i64;
        if lower >= 1 {
            slack = slack.min(t - eta[(lower - 1) as usize]);
        }
    }
    slack
}

/// One row of a banded left-inverse: sparse entries over the sample index
/// window.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftInverseRow {
    pub k: i64,
    pub entries: Vec<(i64, f64)>,
}

/// Solves for the row of `P_k^{-1}` matching the node `y_k` and pads it
/// with zeros. Fails with `SingularSubmatrix` when the determinant falls
/// below the row-scaled tolerance despite the selection.
pub fn left_inverse_row(
    g: &TpWindow,
    sel: &SubmatrixSelection,
    _x: &PointSequence,
    _y: &PointSequence,
) -> Result<LeftInverseRow> {
    let nn = sel.size_n;
    let p = DMatrix::from_fn(nn, nn, |i, l| g.evaluate(sel.xi[i] - sel.eta[l]));
    let (det, tol) = det_with_tolerance(&p);
    if det <= tol {
        return Err(Error::SingularSubmatrix { det, size: nn });
    }
    let mut rhs = nalgebra::DVector::zeros(nn);
    rhs[sel.pivot] = 1.0;
    let coeffs = p
        .transpose()
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularSubmatrix { det, size: nn })?;
    let entries: Vec<(i64, f64)> = sel
        .xi_indices
        .iter()
        .zip(coeffs.iter())
        .map(|(&j, &c)| (j, c))
        .collect();
    Ok(LeftInverseRow {
        k: sel.row_index_k,
        entries,
    })
}

/// Selection plus solve for a single row.
pub fn build_left_inverse_row(
    g: &TpWindow,
    x: &PointSequence,
    y: &PointSequence,
    k: i64,
    r: usize,
    eps: f64,
    allowed: Option<&[i64]>,
) -> Result<LeftInverseRow> {
    let sel = select_submatrix_eps(g, x, y, k, r, eps, allowed)?;
    left_inverse_row(g, &sel, x, y)
}

/// Banded left-inverse with one row per index in `rows`; rows are
/// independent and built in parallel.
pub fn build_left_inverse(
    g: &TpWindow,
    x: &PointSequence,
    y: &PointSequence,
    r: usize,
    rows: IndexWindow,
) -> Result<BandedMatrix> {
    let built: Vec<LeftInverseRow> = rows
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| build_left_inverse_row(g, x, y, k, r, 0.0, None))
        .collect::<Result<Vec<_>>>()?;
    rows_to_banded(built, rows, x.window())
}

/// Packs sparse rows into contiguous band storage (interior gaps stored as
/// explicit zeros).
pub fn rows_to_banded(
    built: Vec<LeftInverseRow>,
    rows: IndexWindow,
    col_window: IndexWindow,
) -> Result<BandedMatrix> {
    let mut band_rows = Vec::with_capacity(built.len());
    for row in built {
        if row.entries.is_empty() {
            band_rows.push(BandRow {
                first_col: col_window.lo,
                values: Vec::new(),
            });
            continue;
        }
        let first = row.entries.first().unwrap().0;
        let last = row.entries.last().unwrap().0;
        let mut values = vec![0.0; (last - first + 1) as usize];
        for (j, v) in row.entries {
            values[(j - first) as usize] = v;
        }
        band_rows.push(BandRow {
            first_col: first,
            values,
        });
    }
    BandedMatrix::from_rows(rows, col_window, band_rows)
}

/// Max deviation of `Σ_j γ_{k,j} g(x_j − y_l)` from `δ_{k,l}` over the full
/// node window.
pub fn verify_row_identity(
    g: &TpWindow,
    row: &LeftInverseRow,
    x: &PointSequence,
    y: &PointSequence,
) -> f64 {
    let mut worst = 0.0f64;
    for l in y.window().iter() {
        let yl = y.position(l);
        let acc: f64 = row
            .entries
            .iter()
            .map(|&(j, c)| c * g.evaluate(x.position(j) - yl))
            .sum();
        let target = if l == row.k { 1.0 } else { 0.0 };
        worst = worst.max((acc - target).abs());
    }
    worst
}
