//! Analysis entities and the two elementary relations of a class.

mod accessors;
mod context;
mod merge;
mod relations;

pub use accessors::{detect_accessors, Accessor, AccessorMode};
pub use context::{build_context, ContextMode, ContextWarning};
pub use merge::merge_overrides;
pub use relations::{extract_raw_relations, extract_relations};

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("class `{0}` is not part of the input")]
    UnknownClass(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EntityKind {
    Attribute,
    Method,
    MergedMethod,
    TryCatchBlock,
    Constructor,
}

impl EntityKind {
    /// Everything except attributes can use attributes and take part in calls.
    pub fn is_method_kind(self) -> bool {
        self != EntityKind::Attribute
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Entity {
    pub id: String,
    pub kind: EntityKind,
    pub display: String,
    /// Merged signatures for a `MergedMethod`, owner-qualified, root class first.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<String>,
}

impl Entity {
    pub fn new(id: impl Into<String>, kind: EntityKind) -> Self {
        let id = id.into();
        Entity { display: id.clone(), id, kind, members: Vec::new() }
    }
}

/// Entities of one analysed class plus `uses(method, attribute)` and
/// `calls(caller, callee)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationSet {
    pub class: String,
    /// Sorted by id.
    pub entities: Vec<Entity>,
    pub uses: BTreeSet<(String, String)>,
    pub calls: BTreeSet<(String, String)>,
    /// Method-kind entities that take a parameter of, or construct, the class's own type.
    pub self_type_dependents: BTreeSet<String>,
}

impl RelationSet {
    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.binary_search_by(|e| e.id.as_str().cmp(id)).ok().map(|i| &self.entities[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entity(id).is_some()
    }

    pub fn attributes(&self) -> impl Iterator<Item = &str> {
        self.entities.iter().filter(|e| e.kind == EntityKind::Attribute).map(|e| e.id.as_str())
    }

    pub fn methods(&self) -> impl Iterator<Item = &str> {
        self.entities.iter().filter(|e| e.kind.is_method_kind()).map(|e| e.id.as_str())
    }

    pub fn is_attribute(&self, id: &str) -> bool {
        self.entity(id).is_some_and(|e| e.kind == EntityKind::Attribute)
    }

    pub fn is_method(&self, id: &str) -> bool {
        self.entity(id).is_some_and(|e| e.kind.is_method_kind())
    }

    /// Attributes used by `method`.
    pub fn uses_of(&self, method: &str) -> BTreeSet<&str> {
        self.uses.iter().filter(|(m, _)| m == method).map(|(_, a)| a.as_str()).collect()
    }

    /// Methods using `attribute`.
    pub fn users_of(&self, attribute: &str) -> BTreeSet<&str> {
        self.uses.iter().filter(|(_, a)| a == attribute).map(|(m, _)| m.as_str()).collect()
    }

    pub fn callees_of(&self, method: &str) -> BTreeSet<&str> {
        self.calls.iter().filter(|(c, _)| c == method).map(|(_, q)| q.as_str()).collect()
    }

    pub fn callers_of(&self, method: &str) -> BTreeSet<&str> {
        self.calls.iter().filter(|(_, q)| q == method).map(|(c, _)| c.as_str()).collect()
    }

    /// An attribute nobody uses.
    pub fn is_dead_attribute(&self, id: &str) -> bool {
        self.is_attribute(id) && !self.uses.iter().any(|(_, a)| a == id)
    }

    /// A method that uses no attribute and takes part in no call.
    pub fn is_dead_method(&self, id: &str) -> bool {
        self.is_method(id)
            && !self.uses.iter().any(|(m, _)| m == id)
            && !self.calls.iter().any(|(c, q)| c == id || q == id)
    }

    pub fn is_dead(&self, id: &str) -> bool {
        self.is_dead_attribute(id) || self.is_dead_method(id)
    }

    /// Checks the endpoint invariants; returns the first violation.
    pub fn validate(&self) -> Result<(), String> {
        for w in self.entities.windows(2) {
            if w[0].id >= w[1].id {
                return Err(format!("entities not sorted or duplicated at `{}`", w[1].id));
            }
        }
        for (m, a) in &self.uses {
            if !self.is_method(m) || !self.is_attribute(a) {
                return Err(format!("uses pair ({m}, {a}) has a bad endpoint"));
            }
        }
        for (p, q) in &self.calls {
            if p == q {
                return Err(format!("calls self-loop on `{p}`"));
            }
            if !self.is_method(p) || !self.is_method(q) {
                return Err(format!("calls pair ({p}, {q}) has a bad endpoint"));
            }
        }
        for e in &self.entities {
            if e.kind == EntityKind::MergedMethod && e.members.len() < 2 {
                return Err(format!("merged entity `{}` has fewer than two members", e.id));
            }
        }
        Ok(())
    }

    /// Restores id order and drops repeated ids, keeping the first.
    pub fn sort_entities(&mut self) {
        self.entities.sort_by(|a, b| a.id.cmp(&b.id));
        self.entities.dedup_by(|a, b| a.id == b.id);
    }
}
