//! The skew form `B_ξ`, isotropy algebras, open orbits and the coadjoint
//! flow.
//!
//! Convention: `x ∈ g` acts on `ξ ∈ g*` by `(x·ξ)(y) = −ξ([x, y])`, so the
//! isotropy algebra of `ξ` is the kernel of `B_ξ`.

mod census;
mod flow;
mod sturm;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use num_traits::Zero;

use crate::exact_la::{format_rat, int, Matrix, Rat};
use crate::lie::{LieAlgebra, LieError, LieField, Subspace};

pub use census::{
    line_connected, minus_one_probe, open_component_census, ComponentCensus, MinusOneReport,
};
pub use flow::{coadjoint_flow, flow_generator, flow_rank_profile, FlowConfig, Trajectory};

/// `B_ξ` with `(j, k)` entry `ξ([Y_j, Y_k])`.
pub fn bform<F: LieField>(l: &LieAlgebra<F>, xi: &[F]) -> Result<Matrix<F>, LieError> {
    check(l, xi.len())?;
    let m = l.dim();
    let mut b = Matrix::zeros(m, m);
    for j in 0..m {
        for k in j + 1..m {
            let mut s = F::zero();
            for (t, x) in xi.iter().enumerate() {
                let c = l.c(j, k, t);
                if !c.is_zero() && !x.is_zero() {
                    s = s + c.clone() * x;
                }
            }
            b[(k, j)] = -s.clone();
            b[(j, k)] = s;
        }
    }
    Ok(b)
}

/// `B_ξ` for a float functional on a rational algebra.
pub fn bform_numeric(l: &LieAlgebra<Rat>, xi: &[f64]) -> Result<Matrix<f64>, LieError> {
    check(l, xi.len())?;
    let m = l.dim();
    let mut b = Matrix::zeros(m, m);
    for j in 0..m {
        for k in j + 1..m {
            let s: f64 = xi
                .iter()
                .enumerate()
                .filter(|(t, _)| !l.c(j, k, *t).is_zero())
                .map(|(t, x)| crate::exact_la::rat_to_f64(l.c(j, k, t)) * x)
                .sum();
            b[(j, k)] = s;
            b[(k, j)] = -s;
        }
    }
    Ok(b)
}

fn check<F: LieField>(l: &LieAlgebra<F>, n: usize) -> Result<(), LieError> {
    if n != l.dim() {
        return Err(LieError::La(crate::exact_la::LaError::Dimension {
            expected: l.dim(),
            found: n,
        }));
    }
    Ok(())
}

/// Isotropy algebra `g(ξ) = ker B_ξ`, checked to be closed under bracket.
pub fn isotropy_algebra<F: LieField>(l: &LieAlgebra<F>, xi: &[F]) -> Result<Subspace<F>, LieError> {
    crate::exact_la::require_exact::<F>()?;
    let (_, ker) = bform(l, xi)?.rank_kernel()?;
    let s = Subspace::span(l.dim(), &ker)?;
    if !l.is_subalgebra(&s) {
        return Err(LieError::Input("isotropy is not a subalgebra".into()));
    }
    Ok(s)
}

pub fn orbit_dimension<F: LieField>(l: &LieAlgebra<F>, xi: &[F]) -> Result<usize, LieError> {
    Ok(bform(l, xi)?.rank()?)
}

pub fn is_open_orbit<F: LieField>(l: &LieAlgebra<F>, xi: &[F]) -> Result<bool, LieError> {
    Ok(orbit_dimension(l, xi)? == l.dim())
}

/// Outcome of the randomized Frobenius test.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusReport {
    pub is_frobenius: bool,
    pub witness: Option<Vec<Rat>>,
    pub trials: usize,
    /// Upper bound on the probability that a Frobenius algebra is missed:
    /// `det B_ξ` has degree `m`, so each trial misses with probability at
    /// most `m / 21` on the grid `[−10, 10]^m`.
    pub false_negative_bound: f64,
}

#[derive(Serialize)]
struct FrobeniusJson {
    is_frobenius: bool,
    witness: Option<Vec<String>>,
    trials: usize,
    false_negative_bound: f64,
}

impl Serialize for FrobeniusReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FrobeniusJson {
            is_frobenius: self.is_frobenius,
            witness: self.witness.as_ref().map(|w| w.iter().map(format_rat).collect()),
            trials: self.trials,
            false_negative_bound: self.false_negative_bound,
        }
        .serialize(s)
    }
}

/// Random integer functional with coordinates in `[−r, r]`.
pub fn random_functional(rng: &mut impl Rng, m: usize, r: i64) -> Vec<Rat> {
    (0..m).map(|_| int(rng.gen_range(-r..=r))).collect()
}

pub fn frobenius_test(l: &LieAlgebra<Rat>, trials: usize, seed: u64) -> Result<FrobeniusReport, LieError> {
    let trials = trials.max(1);
    let m = l.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = if m % 2 == 1 {
        0.0
    } else {
        (m as f64 / 21.0).min(1.0).powi(trials as i32)
    };
    if m % 2 == 1 {
        // a skew form in odd dimension is always singular
        return Ok(FrobeniusReport {
            is_frobenius: false,
            witness: None,
            trials: 0,
            false_negative_bound: bound,
        });
    }
    for _ in 0..trials {
        let xi = random_functional(&mut rng, m, 10);
        if !bform(l, &xi)?.det()?.is_zero() {
            return Ok(FrobeniusReport {
                is_frobenius: true,
                witness: Some(xi),
                trials,
                false_negative_bound: 0.0,
            });
        }
    }
    Ok(FrobeniusReport {
        is_frobenius: false,
        witness: None,
        trials,
        false_negative_bound: bound,
    })
}
