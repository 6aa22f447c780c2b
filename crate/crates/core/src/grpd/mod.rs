//! Finite groupoids: validation, reductions, pullbacks, the canonical
//! isomorphism onto a pulled-back isotropy bundle, equivalence bimodules
//! and the block structure of groupoid algebras.
//!
//! Composition is written `g∘h` and means "first `h`, then `g`"; it is
//! defined exactly when `d(g) = r(h)`.

pub mod corpus;
mod group;
mod groupoid;
mod json;
pub mod random;
mod structure;

use thiserror::Error;

pub use group::{FiniteGroup, FiniteGroupAction};
pub use groupoid::{transformation_groupoid, validate_groupoid, FiniteGroupoid, RawGroupoid, MAX_MORPHISMS};
pub use json::{
    action_from_json, filtration_from_json, groupoid_from_json, groupoid_to_json, load_groupoid,
    theta_from_json, GroupoidJson, LoadedGroupoid,
};
pub use structure::{
    algebra_profile, canonical_sections, classify, equivalence_bimodule_verify, morphism_count_identity,
    orbits_isotropy, piecewise_decompose, pullback, pullback_isomorphism_verify, reduce_invariant,
    regular_representation_faithful, AlgebraProfile, BimoduleCheck, BimoduleReport, Block, Classification,
    DecompositionLayer, DecompositionReport, EquivalenceBimodule, Filtration, IsotropyFibre, OrbitIsotropy,
    PhiChecks, Pullback, PullbackIsoReport, RegularRepresentation, Sections, SectionsReport, SparseMatrix,
};

/// A group bundle is a groupoid with `d = r`; this builds one from a list
/// of groups, one per base object.
pub fn group_bundle(fibres: &[(&str, FiniteGroup)]) -> Result<FiniteGroupoid, GrpdError> {
    let parts: Vec<FiniteGroupoid> = fibres
        .iter()
        .map(|(name, g)| FiniteGroupoid::from_group(g, name))
        .collect();
    FiniteGroupoid::disjoint_union(&parts)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrpdError {
    #[error("axiom violated: {0}")]
    Axiom(String),
    #[error("{count} morphisms exceeds the limit of {MAX_MORPHISMS}")]
    TooLarge { count: usize },
    #[error("subset is not invariant: {morphism} goes from {from} to {to}")]
    NotInvariant { morphism: String, from: String, to: String },
    #[error("θ is not surjective: nothing maps to {object}")]
    NotSurjective { object: String },
    #[error("bad filtration: {0}")]
    BadFiltration(String),
    #[error("malformed input: {0}")]
    Input(String),
}
