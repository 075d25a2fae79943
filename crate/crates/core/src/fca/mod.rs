//! Formal contexts, derivation operators, concept enumeration and the
//! concept lattice.

mod concepts;
mod context;
pub mod cxt;
mod lattice;

pub use concepts::{concept_order, enumerate_concepts, Concept};
pub use context::FormalContext;
pub use lattice::{build_lattice, Lattice};

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FcaError {
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("expected {expected} columns or rows, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cxt line {line}: {message}")]
    Cxt { line: usize, message: String },
}

pub fn prime_props<S: AsRef<str>>(
    ctx: &FormalContext,
    objs: impl IntoIterator<Item = S>,
) -> Result<BTreeSet<String>, FcaError> {
    ctx.prime_props(objs)
}

pub fn prime_objects<S: AsRef<str>>(
    ctx: &FormalContext,
    props: impl IntoIterator<Item = S>,
) -> Result<BTreeSet<String>, FcaError> {
    ctx.prime_objects(props)
}

/// Enumerates and orders all concepts of `ctx`.
pub fn concept_lattice(ctx: &FormalContext) -> Lattice {
    build_lattice(enumerate_concepts(ctx))
}
