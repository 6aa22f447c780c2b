//! Lie algebras by structure constants, their modules and the standard
//! constructions on them.

mod algebra;
pub mod corpus;
mod json;
mod module;
mod realify;
mod subspace;

use thiserror::Error;

use crate::exact_la::LaError;

pub use algebra::{
    matrix_lie_algebra, Bracket, GroundField, LieAlgebra, LieField, StructureSeries,
};
pub use json::{
    algebra_from_json, algebra_to_json, module_from_json, AlgebraJson, AnyLieAlgebra,
    AnyLieModule, BracketJson, ModuleJson,
};
pub use module::{semidirect_sum, LieModule};
pub use realify::{realify, realify_module};
pub use subspace::Subspace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("antisymmetry violated at c[{i}][{j}][{k}]")]
    Antisymmetry { i: usize, j: usize, k: usize },
    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    Jacobi { i: usize, j: usize, k: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("duplicate basis name {0:?}")]
    DuplicateBasisName(String),
    #[error("representation law fails for the pair ({i}, {j})")]
    RepresentationLaw { i: usize, j: usize },
    #[error("module has {found} action matrices, algebra has dimension {expected}")]
    ActionCount { expected: usize, found: usize },
    #[error("algebra is already real")]
    AlreadyReal,
    #[error("algebra is not solvable")]
    NotSolvable,
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("malformed input: {0}")]
    Input(String),
    #[error(transparent)]
    La(#[from] LaError),
}
