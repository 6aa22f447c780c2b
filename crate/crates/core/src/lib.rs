//! Coadjoint-orbit structure of solvable Lie algebras and finite groupoid
//! pullback decompositions.

pub mod exact_la;
pub mod lie;
pub mod roots_exp;
pub mod coadjoint;
pub mod stratify;
pub mod cascade;
pub mod grpd;
