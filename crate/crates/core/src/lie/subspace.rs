use serde::Serialize;

use crate::exact_la::{format_rat, Field, LaError, Matrix, Rat};

/// A linear subspace of `F^n` stored by its reduced row-echelon basis.
///
/// The canonical form makes equality a plain comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let id = Matrix::<F>::identity(ambient);
        Subspace {
            ambient,
            basis: id.row_vecs(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors (dependent vectors are fine).
    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Result<Self, LaError> {
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let m = Matrix::from_rows(vectors.to_vec())?;
        if m.cols() != ambient {
            return Err(LaError::Dimension {
                expected: ambient,
                found: m.cols(),
            });
        }
        let r = m.rref()?;
        let basis = (0..r.pivots.len()).map(|i| r.matrix.row(i).to_vec()).collect();
        Ok(Subspace {
            ambient,
            basis,
            pivots: r.pivots,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Canonical basis vectors (rows of the reduced echelon form).
    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis as the columns of an `ambient × dim` matrix.
    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_columns(self.ambient, &self.basis).expect("basis vectors share the ambient length")
    }

    pub fn contains(&self, v: &[F]) -> bool {
        // reduce v against the echelon basis
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, b) in w.iter_mut().zip(row) {
                let sub = f.clone() * b;
                *x = std::mem::replace(x, F::zero()) - sub;
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LaError> {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &vs)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, LaError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        // solve Σ aᵢ uᵢ − Σ bⱼ wⱼ = 0
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| w.iter().map(|x| -x.clone()).collect()));
        let m = Matrix::from_columns(self.ambient, &cols)?;
        let (_, ker) = m.rank_kernel()?;
        let vectors: Vec<Vec<F>> = ker
            .iter()
            .map(|coeffs| {
                let mut v = vec![F::zero(); self.ambient];
                for (a, u) in coeffs.iter().zip(&self.basis) {
                    for (x, y) in v.iter_mut().zip(u) {
                        *x = std::mem::replace(x, F::zero()) + a.clone() * y;
                    }
                }
                v
            })
            .collect();
        Self::span(self.ambient, &vectors)
    }
}

impl Serialize for Subspace<Rat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .basis
            .iter()
            .map(|v| v.iter().map(format_rat).collect())
            .collect();
        rows.serialize(s)
    }
}
