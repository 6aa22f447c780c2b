#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;

use orbitfold::exact_la::{gauss, int, GaussRat, Matrix, Rat};
use orbitfold::lie::{matrix_lie_algebra, LieAlgebra, LieField, LieModule};

/// `(I + N)⁻¹` for nilpotent `N`.
fn unipotent_inverse<F: LieField>(u: &Matrix<F>) -> Matrix<F> {
    let n = u.rows();
    let nil = u.try_sub(&Matrix::identity(n)).unwrap();
    let minus = nil.scale(&F::from_i64(-1));
    let mut term = Matrix::identity(n);
    let mut sum = Matrix::identity(n);
    for _ in 1..n {
        term = term.try_mul(&minus).unwrap();
        sum = sum.try_add(&term).unwrap();
    }
    sum
}

/// A random unimodular change of basis and its inverse.
pub fn random_conjugator<F: LieField>(rng: &mut impl Rng, n: usize) -> (Matrix<F>, Matrix<F>) {
    let mut lower = Matrix::identity(n);
    let mut upper = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                lower[(i, j)] = F::from_i64(rng.gen_range(-2..=2));
            } else if i < j {
                upper[(i, j)] = F::from_i64(rng.gen_range(-2..=2));
            }
        }
    }
    let p = lower.try_mul(&upper).unwrap();
    let pinv = unipotent_inverse(&upper).try_mul(&unipotent_inverse(&lower)).unwrap();
    (p, pinv)
}

pub fn conjugate<F: LieField>(m: &Matrix<F>, p: &Matrix<F>, pinv: &Matrix<F>) -> Matrix<F> {
    p.try_mul(m).unwrap().try_mul(pinv).unwrap()
}

fn tautological<F: LieField>(gens: &[Matrix<F>]) -> (LieAlgebra<F>, LieModule<F>) {
    let (alg, basis) = matrix_lie_algebra(gens, "Y").unwrap();
    let alg = Arc::new(alg);
    let module = LieModule::new(alg.clone(), basis).unwrap();
    (alg.as_ref().clone(), module)
}

/// Complex upper-triangular matrices with Gaussian-integer entries,
/// conjugated by a random unimodular matrix, acting on `ℚ(i)^n`.
pub fn random_complex_pair(rng: &mut impl Rng, n: usize, gens: usize) -> (LieAlgebra<GaussRat>, LieModule<GaussRat>) {
    let (p, pinv) = random_conjugator::<GaussRat>(rng, n);
    let mats: Vec<Matrix<GaussRat>> = (0..gens)
        .map(|_| {
            let mut t = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    t[(i, j)] = gauss(int(rng.gen_range(-3..=3)), int(rng.gen_range(-3..=3)));
                }
            }
            conjugate(&t, &p, &pinv)
        })
        .collect();
    tautological(&mats)
}

/// Real block-upper-triangular matrices whose `2×2` diagonal blocks are
/// `[[a, −b], [b, a]]`, so the weights are `a ± ib`; conjugated by a random
/// unimodular matrix.
pub fn random_real_pair(rng: &mut impl Rng, blocks: usize, gens: usize) -> (LieAlgebra<Rat>, LieModule<Rat>) {
    let n = 2 * blocks;
    let (p, pinv) = random_conjugator::<Rat>(rng, n);
    let mats: Vec<Matrix<Rat>> = (0..gens)
        .map(|_| {
            let mut t = Matrix::zeros(n, n);
            for b in 0..blocks {
                let (a, c) = (int(rng.gen_range(-3..=3)), int(rng.gen_range(-3..=3)));
                let k = 2 * b;
                t[(k, k)] = a.clone();
                t[(k + 1, k + 1)] = a;
                t[(k, k + 1)] = -c.clone();
                t[(k + 1, k)] = c;
                for j in k + 2..n {
                    t[(k, j)] = int(rng.gen_range(-2..=2));
                    t[(k + 1, j)] = int(rng.gen_range(-2..=2));
                }
            }
            conjugate(&t, &p, &pinv)
        })
        .collect();
    tautological(&mats)
}

pub fn negate_all(ws: &[Vec<GaussRat>]) -> Vec<Vec<GaussRat>> {
    let mut out: Vec<Vec<GaussRat>> = ws.iter().map(|w| w.iter().map(|z| -z.clone()).collect()).collect();
    out.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| orbitfold::exact_la::cmp_gauss(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

pub fn integer_point(rng: &mut impl Rng, m: usize, r: i64) -> Vec<Rat> {
    (0..m).map(|_| int(rng.gen_range(-r..=r))).collect()
}

/// A random rational point with small numerators and denominators.
pub fn rational_point(rng: &mut impl Rng, m: usize) -> Vec<Rat> {
    (0..m)
        .map(|_| Rat::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
        .collect()
}

pub fn f64_point(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect()
}
