//! Gabor frames with totally positive windows of finite type.
//!
//! The crate builds compactly supported dual windows for Gabor systems
//! `{e^{2πiβlt} g(t−αk)}` whose window `g` is a totally positive function of
//! finite type (reciprocal Laplace transform `C e^{δs} Π(1+δ_ν s)`), and
//! performs stable reconstruction from nonuniform samples in quasi
//! shift-invariant spaces `V_Y(g)`.
//!
//! Module map:
//! * [`tp_kernel`] — finite-type windows, closed-form evaluation and Fourier
//!   transforms from the factorization parameters;
//! * [`tp_linalg`] — point sequences, banded matrices, Schoenberg–Whitney
//!   tests and banded left-inverses of kernel matrices;
//! * [`gabor`] — pre-Gramians, Ron–Shen sections, frame verdicts and the
//!   dual-window synthesis;
//! * [`sampling`] — admissibility tests and reconstruction in `V_Y(g)`.

pub mod error;
pub mod gabor;
pub mod quad;
pub mod sampling;
pub mod tp_kernel;
pub mod tp_linalg;

pub use error::{Error, Result};
pub use tp_kernel::TpWindow;
