//! Small named algebras and modules used throughout the crate and its tests.

use std::sync::Arc;

use crate::exact_la::{gauss, int, rat, Field, GaussRat, Matrix, Rat};

use super::{realify, semidirect_sum, Bracket, LieAlgebra, LieField, LieModule};

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

fn br<F: LieField>(i: usize, j: usize, coeffs: &[(usize, F)]) -> Bracket<F> {
    Bracket {
        i,
        j,
        coeffs: coeffs.to_vec(),
    }
}

fn one<F: Field>() -> F {
    F::one()
}

/// Heisenberg algebra: `[Y1, Y2] = Y3`.
pub fn heisenberg() -> LieAlgebra<Rat> {
    LieAlgebra::from_brackets(names(&["Y1", "Y2", "Y3"]), &[br(0, 1, &[(2, one())])])
        .expect("heisenberg is valid")
}

/// The `ax+b` algebra: `[Y1, Y2] = Y2`.
pub fn ax_plus_b() -> LieAlgebra<Rat> {
    LieAlgebra::from_brackets(names(&["Y1", "Y2"]), &[br(0, 1, &[(1, one())])])
        .expect("ax+b is valid")
}

/// Euclidean motions of the plane: `[A, X] = Y`, `[A, Y] = −X`.
pub fn e2() -> LieAlgebra<Rat> {
    LieAlgebra::from_brackets(
        names(&["A", "X", "Y"]),
        &[br(0, 1, &[(2, int(1))]), br(0, 2, &[(1, int(-1))])],
    )
    .expect("e(2) is valid")
}

/// Four-dimensional filiform algebra: `[Y1, Y2] = Y3`, `[Y1, Y3] = Y4`.
pub fn filiform4() -> LieAlgebra<Rat> {
    LieAlgebra::from_brackets(
        names(&["Y1", "Y2", "Y3", "Y4"]),
        &[br(0, 1, &[(2, int(1))]), br(0, 2, &[(3, int(1))])],
    )
    .expect("n4 is valid")
}

/// `sl(2)` in the basis `[Y1,Y2] = Y3`, `[Y1,Y3] = Y2`, `[Y2,Y3] = Y1`.
pub fn sl2_split() -> LieAlgebra<Rat> {
    LieAlgebra::from_brackets(
        names(&["Y1", "Y2", "Y3"]),
        &[
            br(0, 1, &[(2, int(1))]),
            br(0, 2, &[(1, int(1))]),
            br(1, 2, &[(0, int(1))]),
        ],
    )
    .expect("sl(2) is valid")
}

/// Complex Borel subalgebra of `sl(2, ℂ)`: `[H, E] = 2E`.
pub fn complex_borel() -> LieAlgebra<GaussRat> {
    complex_borel_named(&["H", "E"])
}

pub fn complex_borel_named(basis: &[&str]) -> LieAlgebra<GaussRat> {
    LieAlgebra::from_brackets(names(basis), &[br(0, 1, &[(1, gauss(int(2), int(0)))])])
        .expect("complex borel is valid")
}

/// Realification of [`complex_borel`], basis `H, E, iH, iE`.
pub fn realified_borel() -> LieAlgebra<Rat> {
    realify(&complex_borel()).expect("complex algebra realifies")
}

/// Complex Heisenberg algebra.
pub fn complex_heisenberg() -> LieAlgebra<GaussRat> {
    LieAlgebra::from_brackets(names(&["Y1", "Y2", "Y3"]), &[br(0, 1, &[(2, one())])])
        .expect("complex heisenberg is valid")
}

/// Tautological 2-dimensional module of `ax+b`:
/// `a(Y1) = diag(1/2, −1/2)`, `a(Y2) = E₁₂`.
///
/// The group element `[[a, b], [0, 1/a]]` sends `(x, y)` to
/// `(ax + by, y/a)`, so for `y ≠ 0` the orbit is the half-plane
/// `{(u, v) : vy > 0}`.
pub fn axb_tautological() -> LieModule<Rat> {
    let a1 = Matrix::diagonal(&[rat(1, 2), rat(-1, 2)]);
    let mut a2 = Matrix::zeros(2, 2);
    a2[(0, 1)] = int(1);
    LieModule::new(Arc::new(ax_plus_b()), vec![a1, a2]).expect("tautological action is a representation")
}

/// `ax+b ⋉ ℝ²` for the tautological module.
pub fn axb_semidirect() -> LieAlgebra<Rat> {
    semidirect_sum(&axb_tautological()).expect("semidirect sum validates")
}

/// Real algebras of the corpus under their file stems.
pub fn real_corpus() -> Vec<(&'static str, LieAlgebra<Rat>)> {
    vec![
        ("heisenberg", heisenberg()),
        ("axb", ax_plus_b()),
        ("e2", e2()),
        ("filiform4", filiform4()),
        ("realified_borel", realified_borel()),
        ("axb_semidirect", axb_semidirect()),
    ]
}
