use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::Serialize;

use super::scalar::{format_gauss, format_rat, GaussRat, Mode, Rat};
use super::{Field, LaError};

/// Dense row-major matrix over a [`Field`].
///
/// The exactness mode is carried by the element type: `Matrix<Rat>` and
/// `Matrix<GaussRat>` are exact, `Matrix<f64>` and `Matrix<Complex64>` are not.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Result of reducing a matrix to reduced row-echelon form.
#[derive(Debug, Clone)]
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Result<Self, LaError> {
        if data.len() != rows * cols {
            return Err(LaError::Dimension {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from row vectors; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, LaError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LaError::Dimension {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Result<Self, LaError> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(LaError::Dimension {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, v) in entries.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mode(&self) -> Mode {
        F::MODE
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Explicit switch to the float path.
    pub fn to_c64(&self) -> Matrix<Complex64> {
        self.map(Field::to_c64)
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|v| v.clone() * s)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaError> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaError> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaError> {
        if self.cols != other.rows {
            return Err(LaError::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b;
                    let slot = &mut out[(i, j)];
                    *slot = std::mem::replace(slot, F::zero()) + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn try_mul_vec(&self, v: &[F]) -> Result<Vec<F>, LaError> {
        if v.len() != self.cols {
            return Err(LaError::Dimension {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b)
            })
            .collect())
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, LaError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Vertical concatenation.
    pub fn stack(blocks: &[Matrix<F>]) -> Result<Self, LaError> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(LaError::Dimension {
                    expected: cols,
                    found: b.cols,
                });
            }
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        Ok(Matrix { rows, cols, data })
    }

    fn same_shape(&self, other: &Self) -> Result<(), LaError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LaError::Shape {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Reduced row-echelon form. Exact fields pivot on the first nonzero
    /// entry; float fields pivot on the largest entry and treat entries of
    /// modulus `<= tol` as zero.
    pub(crate) fn rref_with(&self, tol: f64) -> Rref<F> {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let pick = if F::EXACT {
                (r..a.rows).find(|&i| !a[(i, c)].is_zero())
            } else {
                (r..a.rows)
                    .map(|i| (i, a[(i, c)].modulus()))
                    .filter(|&(_, m)| m > tol)
                    .max_by(|x, y| x.1.total_cmp(&y.1))
                    .map(|(i, _)| i)
            };
            let Some(p) = pick else { continue };
            a.swap_rows(p, r);
            let inv = F::one() / &a[(r, c)];
            for j in c..a.cols {
                let v = std::mem::replace(&mut a[(r, j)], F::zero());
                a[(r, j)] = v * &inv;
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let factor = a[(i, c)].clone();
                for j in c..a.cols {
                    if a[(r, j)].is_zero() {
                        continue;
                    }
                    let sub = factor.clone() * &a[(r, j)];
                    let v = std::mem::replace(&mut a[(i, j)], F::zero());
                    a[(i, j)] = v - sub;
                }
                if !F::EXACT {
                    a[(i, c)] = F::zero();
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: a, pivots }
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Exact reduced row-echelon form.
    pub fn rref(&self) -> Result<Rref<F>, LaError> {
        require_exact::<F>()?;
        Ok(self.rref_with(0.0))
    }

    /// Rank and a kernel basis, both exact.
    ///
    /// The kernel vectors are the standard free-variable basis of the
    /// reduced row-echelon form, so they are independent by construction.
    pub fn rank_kernel(&self) -> Result<(usize, Vec<Vec<F>>), LaError> {
        require_exact::<F>()?;
        Ok(self.rank_kernel_with(0.0))
    }

    pub(crate) fn rank_kernel_with(&self, tol: f64) -> (usize, Vec<Vec<F>>) {
        let Rref { matrix, pivots } = self.rref_with(tol);
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut kernel = Vec::new();
        for free in (0..self.cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -matrix[(row, free)].clone();
            }
            kernel.push(v);
        }
        (pivots.len(), kernel)
    }

    pub fn rank(&self) -> Result<usize, LaError> {
        require_exact::<F>()?;
        Ok(self.rref_with(0.0).pivots.len())
    }

    /// Exact determinant by fraction-based elimination.
    pub fn det(&self) -> Result<F, LaError> {
        require_exact::<F>()?;
        if !self.is_square() {
            return Err(LaError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return Ok(F::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det = det * &pivot;
            for i in c + 1..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let factor = a[(i, c)].clone() / &pivot;
                for j in c..n {
                    let sub = factor.clone() * &a[(c, j)];
                    let v = std::mem::replace(&mut a[(i, j)], F::zero());
                    a[(i, j)] = v - sub;
                }
            }
        }
        Ok(det)
    }

    /// Solves `self · x = b` for one solution, if any exists.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>, LaError> {
        require_exact::<F>()?;
        if b.len() != self.rows {
            return Err(LaError::Dimension {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let Rref { matrix, pivots } = aug.rref_with(0.0);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }
}

pub(crate) fn require_exact<F: Field>() -> Result<(), LaError> {
    if F::EXACT {
        Ok(())
    } else {
        Err(LaError::Mode(
            "exact operation called on a float matrix; use the numeric rank instead",
        ))
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Matrix<Rat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rat).collect())
            .collect();
        rows.serialize(s)
    }
}

impl Serialize for Matrix<GaussRat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_gauss).collect())
            .collect();
        rows.serialize(s)
    }
}

impl Serialize for Matrix<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.row_vecs().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::scalar::int;

    fn q(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let (rank, ker) = Matrix::<Rat>::identity(3).rank_kernel().unwrap();
        assert_eq!(rank, 3);
        assert!(ker.is_empty());
    }

    #[test]
    fn heisenberg_form_kernel() {
        // row-reducing by hand: rows (0,1,0), (1,0,0) are pivots, column 3 free
        let m = q(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]);
        let (rank, ker) = m.rank_kernel().unwrap();
        assert_eq!(rank, 2);
        assert_eq!(ker, vec![vec![int(0), int(0), int(1)]]);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let (rank, ker) = Matrix::<Rat>::zeros(2, 2).rank_kernel().unwrap();
        assert_eq!(rank, 0);
        assert_eq!(ker.len(), 2);
    }

    #[test]
    fn float_input_is_a_mode_error() {
        let m = Matrix::<f64>::identity(2);
        assert!(matches!(m.rank_kernel(), Err(LaError::Mode(_))));
        assert!(matches!(m.det(), Err(LaError::Mode(_))));
    }

    #[test]
    fn determinant_and_solve() {
        let m = q(&[&[2, 1], &[1, 3]]);
        assert_eq!(m.det().unwrap(), int(5));
        let x = m.solve(&[int(3), int(4)]).unwrap().unwrap();
        assert_eq!(m.try_mul_vec(&x).unwrap(), vec![int(3), int(4)]);
        let singular = q(&[&[1, 1], &[1, 1]]);
        assert_eq!(singular.solve(&[int(0), int(1)]).unwrap(), None);
    }

    #[test]
    fn mode_names() {
        assert_eq!(Matrix::<Rat>::identity(1).mode(), Mode::Rational);
        assert_eq!(Matrix::<GaussRat>::identity(1).mode(), Mode::Gaussian);
        assert_eq!(Matrix::<f64>::identity(1).mode(), Mode::Float);
    }
}
