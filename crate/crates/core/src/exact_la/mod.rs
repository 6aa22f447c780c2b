//! Exact linear algebra over ℚ and ℚ(i), plus a tolerance-tagged float path.

mod matrix;
mod numeric;
mod poly;
mod scalar;

use thiserror::Error;

pub use matrix::{Matrix, Rref};
pub(crate) use matrix::require_exact;
pub use numeric::{eigenvalues_numeric, matrix_exp_numeric, numeric_rank, singular_values};
pub use poly::{
    charpoly, charpoly_exact_roots, cmp_gauss, gaussian_roots, poly_eval, ExactSpectrum,
    ROOT_CANDIDATE_BUDGET,
};
pub use scalar::{
    f64_to_rat_with_denominator, format_gauss, format_rat, gauss, int, parse_gauss, parse_rat,
    rat, rat_to_f64, Field, GaussRat, Mode, Rat, Scalar,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaError {
    #[error("mode error: {0}")]
    Mode(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    Shape {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Converts an exact rational matrix to the float path.
pub fn to_f64_matrix(m: &Matrix<Rat>) -> Matrix<f64> {
    m.map(rat_to_f64)
}
