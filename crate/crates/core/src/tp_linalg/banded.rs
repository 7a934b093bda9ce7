//! Banded matrices over integer index windows, with per-row band offsets.

use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::points::IndexWindow;

/// One stored row: contiguous values starting at column `first_col`.
/// Entries outside the stored span are exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub first_col: i64,
    pub values: Vec<f64>,
}

/// A real matrix with integer row/column indices over declared windows and
/// one contiguous band per row. Immutable after assembly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandedMatrix {
    row_window: IndexWindow,
    col_window: IndexWindow,
    rows: Vec<BandRow>,
}

impl BandedMatrix {
    /// Assembles from per-row bands; `rows[i]` belongs to row index
    /// `row_window.lo + i`. Leading/trailing zeros are trimmed so the stored
    /// band is the structural support.
    pub fn from_rows(
        row_window: IndexWindow,
        col_window: IndexWindow,
        rows: Vec<BandRow>,
    ) -> Result<Self> {
        if rows.len() != row_window.len() {
            return Err(Error::EmptyWindow(format!(
                "expected {} rows, got {}",
                row_window.len(),
                rows.len()
            )));
        }
        let mut trimmed = Vec::with_capacity(rows.len());
        for row in rows {
            let lead = row.values.iter().take_while(|v| **v == 0.0).count();
            let trail = row.values[lead..]
                .iter()
                .rev()
                .take_while(|v| **v == 0.0)
                .count();
            let values: Vec<f64> = row.values[lead..row.values.len() - trail].to_vec();
            let first_col = row.first_col + lead as i64;
            if !values.is_empty()
                && (first_col < col_window.lo
                    || first_col + values.len() as i64 - 1 > col_window.hi)
            {
                return Err(Error::OutOfWindow {
                    index: first_col,
                    lo: col_window.lo,
                    hi: col_window.hi,
                });
            }
            trimmed.push(BandRow { first_col, values });
        }
        Ok(BandedMatrix {
            row_window,
            col_window,
            rows: trimmed,
        })
    }

    pub fn row_window(&self) -> IndexWindow {
        self.row_window
    }

    pub fn col_window(&self) -> IndexWindow {
        self.col_window
    }

    /// Entry `(j, k)`; zero outside bands or windows.
    pub fn get(&self, j: i64, k: i64) -> f64 {
        if !self.row_window.contains(j) {
            return 0.0;
        }
        let row = &self.rows[(j - self.row_window.lo) as usize];
        let off = k - row.first_col;
        if off < 0 || off as usize >= row.values.len() {
            0.0
        } else {
            row.values[off as usize]
        }
    }

    /// Stored band `[first_col, last_col]` of a row, `None` when the row is
    /// structurally zero.
    pub fn row_band(&self, j: i64) -> Option<(i64, i64)> {
        if !self.row_window.contains(j) {
            return None;
        }
        let row = &self.rows[(j - self.row_window.lo) as usize];
        if row.values.is_empty() {
            None
        } else {
            Some((row.first_col, row.first_col + row.values.len() as i64 - 1))
        }
    }

    pub fn row(&self, j: i64) -> &BandRow {
        &self.rows[(j - self.row_window.lo) as usize]
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.values.iter())
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Maximum number of nonzero entries in any row.
    pub fn max_row_nonzeros(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.values.iter().filter(|v| **v != 0.0).count())
            .max()
            .unwrap_or(0)
    }

    pub fn is_finite(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.values.iter().all(|v| v.is_finite()))
    }

    /// Dense copy of the sub-block `rows × cols`.
    pub fn dense_block(&self, rows: IndexWindow, cols: IndexWindow) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(rows.len(), cols.len());
        for (bi, j) in rows.iter().enumerate() {
            for (bk, k) in cols.iter().enumerate() {
                out[(bi, bk)] = self.get(j, k);
            }
        }
        out
    }

    /// `max |(self · other)_{k,l} − δ_{k,l}|` over `k ∈ check_rows`,
    /// `l ∈ check_cols`. The inner sum runs over the stored band of each row
    /// of `self`, so `other`'s row window must cover those columns.
    pub fn left_identity_defect(
        &self,
        other: &BandedMatrix,
        check_rows: IndexWindow,
        check_cols: IndexWindow,
    ) -> f64 {
        let mut worst = 0.0f64;
        for k in check_rows.iter() {
            let row = self.row(k);
            for l in check_cols.iter() {
                let mut acc = 0.0;
                for (off, v) in row.values.iter().enumerate() {
                    let j = row.first_col + off as i64;
                    acc += v * other.get(j, l);
                }
                let target = if k == l { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        worst
    }

    /// CSV triplet dump `(row, col, value)`, rows ascending.
    pub fn write_csv_triplets<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "row,col,value")?;
        for (i, row) in self.rows.iter().enumerate() {
            let j = self.row_window.lo + i as i64;
            for (off, v) in row.values.iter().enumerate() {
                writeln!(w, "{},{},{:.16e}", j, row.first_col + off as i64, v)?;
            }
        }
        Ok(())
    }
}

/// Schur-test operator norm bound `(2N − 1)·C` with `N` the maximum row
/// nonzero count and `C` the largest entry magnitude. Valid for banded
/// left-inverses whose per-row bands march with a strictly increasing
/// center sequence.
pub fn schur_bound(matrix: &BandedMatrix) -> Result<f64> {
    if !matrix.is_finite() {
        return Err(Error::UnboundedEntries);
    }
    let n = matrix.max_row_nonzeros();
    if n == 0 {
        return Ok(0.0);
    }
    Ok((2 * n - 1) as f64 * matrix.max_abs_entry())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BandedMatrix {
        BandedMatrix::from_rows(
            IndexWindow::new(-1, 1),
            IndexWindow::new(-2, 2),
            vec![
                BandRow {
                    first_col: -2,
                    values: vec![1.0, 2.0],
                },
                BandRow {
                    first_col: -1,
                    values: vec![0.0, 3.0, -1.0],
                },
                BandRow {
                    first_col: 1,
                    values: vec![0.5],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn get_and_bands() {
        let b = sample();
        assert_eq!(b.get(-1, -2), 1.0);
        assert_eq!(b.get(-1, 0), 0.0);
        // Leading zero trimmed from the middle row.
        assert_eq!(b.row_band(0), Some((0, 1)));
        assert_eq!(b.get(0, 0), 3.0);
        assert_eq!(b.get(5, 0), 0.0);
        assert_eq!(b.max_abs_entry(), 3.0);
        assert_eq!(b.max_row_nonzeros(), 2);
    }

    #[test]
    fn schur_bound_formula() {
        let b = sample();
        // N = 2, C = 3 -> (2*2-1)*3 = 9.
        assert_eq!(schur_bound(&b).unwrap(), 9.0);
    }

    #[test]
    fn schur_bound_three_wide_band() {
        // N = 3, C = 2 -> 10.
        let b = BandedMatrix::from_rows(
            IndexWindow::new(0, 0),
            IndexWindow::new(0, 2),
            vec![BandRow {
                first_col: 0,
                values: vec![2.0, -2.0, 2.0],
            }],
        )
        .unwrap();
        assert_eq!(schur_bound(&b).unwrap(), 10.0);
    }

    #[test]
    fn schur_bound_single_diagonal_is_sharp() {
        // One entry per row: N = 1, bound = c, and the true norm is c.
        let c = 1.75;
        let b = BandedMatrix::from_rows(
            IndexWindow::new(0, 3),
            IndexWindow::new(0, 3),
            (0..4)
                .map(|i| BandRow {
                    first_col: i,
                    values: vec![if i % 2 == 0 { c } else { -c }],
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(schur_bound(&b).unwrap(), c);
        let dense = b.dense_block(b.row_window(), b.col_window());
        let sv = dense.svd(false, false).singular_values;
        let norm = sv.iter().copied().fold(0.0f64, f64::max);
        assert!((norm - c).abs() < 1e-12);
    }

    #[test]
    fn identity_defect_detects_identity() {
        let id = BandedMatrix::from_rows(
            IndexWindow::new(0, 2),
            IndexWindow::new(0, 2),
            (0..3)
                .map(|i| BandRow {
                    first_col: i,
                    values: vec![1.0],
                })
                .collect(),
        )
        .unwrap();
        let w = IndexWindow::new(0, 2);
        assert_eq!(id.left_identity_defect(&id, w, w), 0.0);
    }

    #[test]
    fn json_round_trip() {
        let b = sample();
        let s = serde_json::to_string(&b).unwrap();
        let back: BandedMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn csv_triplets_format() {
        let b = sample();
        let mut buf = Vec::new();
        b.write_csv_triplets(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("row,col,value"));
        assert!(lines.next().unwrap().starts_with("-1,-2,"));
    }
}
