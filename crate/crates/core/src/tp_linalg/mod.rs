//! Finite and banded totally positive matrix algebra: point sequences,
//! banded kernel matrices, Schoenberg–Whitney tests, and the
//! submatrix-selection construction of banded left-inverses.

mod banded;
mod left_inverse;
mod points;

pub use banded::{schur_bound, BandedMatrix};
pub use left_inverse::{
    assemble_kernel_matrix, build_left_inverse, build_left_inverse_row, condition_cr,
    det_sign_oracle, det_sign_oracle_with_margin, det_with_tolerance, left_inverse_row,
    rows_to_banded, select_submatrix,
    select_submatrix_eps, sw_check, verify_row_identity, DetClass, LeftInverseRow,
    SubmatrixSelection, DET_ZERO_RTOL,
};
pub use points::{IndexWindow, PointSequence};
