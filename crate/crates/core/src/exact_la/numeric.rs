//! Floating-point path: eigenvalues, matrix exponential and numeric rank.

use nalgebra::{DMatrix, Schur, SVD};
use num_complex::Complex64;

use super::matrix::Matrix;
use super::{Field, LaError};

const SCHUR_MAX_ITER: usize = 10_000;

fn to_dmatrix<F: Field>(m: &Matrix<F>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_c64())
}

fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of the float cast of `m`.
///
/// Each eigenvalue `λ` is checked against the residual contract
/// `σ_min(m − λI) ≤ tol·max(‖m‖, 1)`; the output is sorted by real part,
/// then imaginary part.
pub fn eigenvalues_numeric<F: Field>(m: &Matrix<F>, tol: f64) -> Result<Vec<Complex64>, LaError> {
    if !m.is_square() {
        return Err(LaError::NotSquare(m.rows(), m.cols()));
    }
    if tol <= 0.0 {
        return Err(LaError::Numeric("tolerance must be positive".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = to_dmatrix(m);
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LaError::Numeric("non-finite matrix entry".into()));
    }
    let schur = Schur::try_new(a.clone(), 1e-15, SCHUR_MAX_ITER)
        .ok_or_else(|| LaError::Numeric("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut eig: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();

    let scale = frobenius(&a).max(1.0);
    for &lambda in &eig {
        let shifted = &a - DMatrix::<Complex64>::identity(n, n) * lambda;
        let sv = SVD::new(shifted, false, false).singular_values;
        let smallest = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if smallest > tol * scale {
            return Err(LaError::Numeric(format!(
                "eigenvalue {lambda} fails the residual check ({smallest:e})"
            )));
        }
    }
    eig.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(eig)
}

fn norm1(m: &Matrix<f64>) -> f64 {
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring.
///
/// Scales so that `‖m/2^s‖₁ < 1/2`, sums the Taylor series until a term
/// drops below `tol`, then squares `s` times.
pub fn matrix_exp_numeric(m: &Matrix<f64>, tol: f64) -> Result<Matrix<f64>, LaError> {
    if !m.is_square() {
        return Err(LaError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let norm = norm1(m);
    if !norm.is_finite() {
        return Err(LaError::Numeric("non-finite matrix entry".into()));
    }
    let mut s = 0u32;
    while norm / 2f64.powi(s as i32) >= 0.5 {
        s += 1;
        if s > 1000 {
            return Err(LaError::Numeric("matrix norm too large".into()));
        }
    }
    let scaled = m.scale(&(1.0 / 2f64.powi(s as i32)));
    let mut sum = Matrix::<f64>::identity(n);
    let mut term = Matrix::<f64>::identity(n);
    // the tail after a term of norm ε is at most ε·(1/2)/(1 − 1/2)
    let target = (tol * 0.25).max(f64::MIN_POSITIVE);
    for k in 1..200 {
        term = term.try_mul(&scaled)?.scale(&(1.0 / k as f64));
        sum = sum.try_add(&term)?;
        if norm1(&term) < target {
            break;
        }
    }
    for _ in 0..s {
        sum = sum.try_mul(&sum)?;
    }
    if sum.entries().iter().any(|v| !v.is_finite()) {
        return Err(LaError::Numeric("matrix exponential overflowed".into()));
    }
    Ok(sum)
}

/// Singular values of the float cast of `m`, largest first.
pub fn singular_values<F: Field>(m: &Matrix<F>) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = SVD::new(to_dmatrix(m), false, false)
        .singular_values
        .iter()
        .cloned()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numeric rank: singular values above `tol` relative to the largest.
pub fn numeric_rank<F: Field>(m: &Matrix<F>, tol: f64) -> usize {
    let sv = singular_values(m);
    let Some(&top) = sv.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn f(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn diagonal_eigenvalues() {
        let e = eigenvalues_numeric(&f(&[&[2.0, 0.0], &[0.0, 3.0]]), 1e-9).unwrap();
        assert!((e[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((e[1] - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        let one = eigenvalues_numeric(&f(&[&[5.0]]), 1e-9).unwrap();
        assert!((one[0] - Complex64::new(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn skew_block_spectrum() {
        let e = eigenvalues_numeric(&f(&[&[0.0, -PI], &[PI, 0.0]]), 1e-9).unwrap();
        assert!((e[0] - Complex64::new(0.0, -PI)).norm() < 1e-9);
        assert!((e[1] - Complex64::new(0.0, PI)).norm() < 1e-9);
    }

    #[test]
    fn exponential_examples() {
        let z = matrix_exp_numeric(&Matrix::zeros(3, 3), 1e-12).unwrap();
        assert_eq!(z, Matrix::identity(3));

        let r = matrix_exp_numeric(&f(&[&[0.0, -PI], &[PI, 0.0]]), 1e-12).unwrap();
        let expect = f(&[&[-1.0, 0.0], &[0.0, -1.0]]);
        for (a, b) in r.entries().iter().zip(expect.entries()) {
            assert!((a - b).abs() < 1e-9);
        }

        let n = matrix_exp_numeric(&f(&[&[0.0, 1.0], &[0.0, 0.0]]), 1e-12).unwrap();
        let expect = f(&[&[1.0, 1.0], &[0.0, 1.0]]);
        for (a, b) in n.entries().iter().zip(expect.entries()) {
            assert!((a - b).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn overflow_is_reported() {
        let big = f(&[&[800.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            matrix_exp_numeric(&big, 1e-9),
            Err(LaError::Numeric(_))
        ));
    }

    #[test]
    fn rank_by_singular_values() {
        assert_eq!(numeric_rank(&f(&[&[1.0, 2.0], &[2.0, 4.0]]), 1e-9), 1);
        assert_eq!(numeric_rank(&Matrix::<f64>::zeros(2, 2), 1e-9), 0);
    }
}
