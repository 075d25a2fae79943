use std::collections::{BTreeMap, BTreeSet};

use super::model::*;
use super::FrontendError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ResolveOptions {
    /// Treat superclasses missing from the input as external classes with no members.
    pub allow_external_super: bool,
}

/// A method in a subclass with the same erased signature as one in an ancestor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OverridePair {
    pub child: String,
    pub ancestor: String,
    pub signature: String,
}

#[derive(Debug, Clone, Copy)]
pub struct VisibleField<'h> {
    pub owner: &'h str,
    pub decl: &'h FieldDecl,
}

#[derive(Debug, Clone, Copy)]
pub struct VisibleMethod<'h> {
    pub owner: &'h str,
    pub decl: &'h MethodDecl,
}

/// Inheritance structure of every class in the input plus member lookup.
///
/// Class models held here are resolved copies: field events that do not name
/// a visible field, and self-calls that match no visible method, are demoted
/// to `LocalOp`; `super(...)` calls name the parent class.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    classes: BTreeMap<String, ClassModel>,
    parents: BTreeMap<String, String>,
    external: BTreeSet<String>,
    overrides: Vec<OverridePair>,
}

pub fn resolve_hierarchy<'a>(
    classes: impl IntoIterator<Item = &'a ClassModel>,
    options: ResolveOptions,
) -> Result<Hierarchy, FrontendError> {
    let mut by_name: BTreeMap<String, ClassModel> = BTreeMap::new();
    for class in classes {
        if by_name.insert(class.name.clone(), class.clone()).is_some() {
            return Err(FrontendError::DuplicateClass { name: class.name.clone(), span: class.span });
        }
    }

    let mut parents = BTreeMap::new();
    let mut external = BTreeSet::new();
    for class in by_name.values() {
        let Some(sup) = &class.superclass else { continue };
        if matches!(sup.as_str(), "Object" | "java.lang.Object") {
            continue;
        }
        if !by_name.contains_key(sup) {
            if !options.allow_external_super {
                return Err(FrontendError::UnknownSuperclass { class: class.name.clone(), superclass: sup.clone() });
            }
            external.insert(sup.clone());
        }
        parents.insert(class.name.clone(), sup.clone());
    }

    for start in by_name.keys() {
        let mut chain = vec![start.clone()];
        let mut cur = start;
        while let Some(p) = parents.get(cur) {
            if p == start {
                chain.push(p.clone());
                return Err(FrontendError::Cycle { classes: chain });
            }
            if chain.contains(p) {
                // the cycle does not pass through `start`; it is reported from its own members
                break;
            }
            chain.push(p.clone());
            cur = p;
        }
    }

    let mut h = Hierarchy { classes: by_name, parents, external, overrides: Vec::new() };
    h.overrides = h.compute_overrides();
    let resolved: BTreeMap<String, ClassModel> =
        h.classes.values().map(|c| (c.name.clone(), h.resolve_class(c))).collect();
    h.classes = resolved;
    Ok(h)
}

impl Hierarchy {
    pub fn class(&self, name: &str) -> Option<&ClassModel> {
        self.classes.get(name)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassModel> {
        self.classes.values()
    }

    /// Parent of `name` when the parent is part of the input.
    pub fn parent(&self, name: &str) -> Option<&str> {
        self.parents.get(name).map(String::as_str).filter(|p| self.classes.contains_key(*p))
    }

    pub fn is_external(&self, name: &str) -> bool {
        self.external.contains(name)
    }

    /// `name` followed by its ancestors, nearest first.
    pub fn ancestry(&self, name: &str) -> Vec<&ClassModel> {
        let mut out = Vec::new();
        let mut cur = self.classes.get(name);
        while let Some(c) = cur {
            out.push(c);
            cur = self.parent(&c.name).and_then(|p| self.classes.get(p));
        }
        out
    }

    pub fn is_ancestor(&self, ancestor: &str, of: &str) -> bool {
        self.ancestry(of).iter().skip(1).any(|c| c.name == ancestor)
    }

    /// Fields visible in `name`, own fields first, then each ancestor's.
    pub fn visible_fields(&self, name: &str) -> Vec<VisibleField<'_>> {
        self.ancestry(name)
            .into_iter()
            .flat_map(|c| c.fields.iter().map(move |f| VisibleField { owner: &c.name, decl: f }))
            .collect()
    }

    /// The most-derived definition of every non-constructor signature visible in `name`.
    pub fn visible_methods(&self, name: &str) -> Vec<VisibleMethod<'_>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in self.ancestry(name) {
            for m in c.plain_methods() {
                if seen.insert(m.signature()) {
                    out.push(VisibleMethod { owner: &c.name, decl: m });
                }
            }
        }
        out
    }

    pub fn lookup_field(&self, from: &str, field: &str) -> Option<VisibleField<'_>> {
        self.visible_fields(from).into_iter().find(|f| f.decl.name == field)
    }

    /// Visible methods named `name` that accept `args`, best matches only.
    pub fn lookup_methods(&self, from: &str, name: &str, args: &[Option<String>]) -> Vec<VisibleMethod<'_>> {
        let candidates: Vec<_> = self
            .visible_methods(from)
            .into_iter()
            .filter(|m| m.decl.name == name && m.decl.params.len() == args.len())
            .collect();
        select_overloads(candidates, args, |m| m.decl)
    }

    /// Constructors of `class` accepting `args`.
    pub fn lookup_constructors(&self, class: &str, args: &[Option<String>]) -> Vec<&MethodDecl> {
        let Some(c) = self.classes.get(class) else { return Vec::new() };
        let candidates: Vec<_> = c.constructors().filter(|m| m.params.len() == args.len()).collect();
        select_overloads(candidates, args, |m| m)
    }

    pub fn override_pairs(&self) -> &[OverridePair] {
        &self.overrides
    }

    /// Classes along `name`'s ancestry (root first) that define `signature`.
    pub fn override_group(&self, name: &str, signature: &str) -> Vec<&str> {
        let mut owners: Vec<&str> = self
            .ancestry(name)
            .into_iter()
            .filter(|c| c.plain_methods().any(|m| !m.is_static && m.signature() == signature))
            .map(|c| c.name.as_str())
            .collect();
        owners.reverse();
        owners
    }

    fn compute_overrides(&self) -> Vec<OverridePair> {
        let mut pairs = Vec::new();
        for class in self.classes.values() {
            for m in class.plain_methods().filter(|m| !m.is_static) {
                let sig = m.signature();
                let ancestor = self
                    .ancestry(&class.name)
                    .into_iter()
                    .skip(1)
                    .find(|a| a.plain_methods().any(|am| !am.is_static && am.signature() == sig));
                if let Some(a) = ancestor {
                    pairs.push(OverridePair { child: class.name.clone(), ancestor: a.name.clone(), signature: sig });
                }
            }
        }
        pairs.sort();
        pairs
    }

    fn resolve_class(&self, class: &ClassModel) -> ClassModel {
        let mut out = class.clone();
        let parent = self.parent(&class.name).map(str::to_string);
        for method in &mut out.methods {
            for ev in &mut method.body {
                let from = if ev.receiver == Receiver::Super { parent.as_deref() } else { Some(class.name.as_str()) };
                match ev.kind {
                    EventKind::FieldRead | EventKind::FieldWrite => {
                        if from.and_then(|f| self.lookup_field(f, &ev.target)).is_none() {
                            ev.kind = EventKind::LocalOp;
                        }
                    }
                    EventKind::SelfCall => {
                        if from.map_or(true, |f| self.lookup_methods(f, &ev.target, &ev.arg_types).is_empty()) {
                            ev.kind = EventKind::LocalOp;
                        }
                    }
                    EventKind::CtorCall if ev.receiver == Receiver::Super => match &parent {
                        Some(p) => ev.target = p.clone(),
                        None => ev.kind = EventKind::LocalOp,
                    },
                    _ => {}
                }
            }
        }
        out
    }
}

/// Narrows same-arity candidates by the statically known argument types.
fn select_overloads<'m, T: Copy>(
    candidates: Vec<T>,
    args: &[Option<String>],
    decl: impl Fn(T) -> &'m MethodDecl,
) -> Vec<T> {
    if candidates.len() <= 1 {
        return candidates;
    }
    let score = |c: T| -> Option<usize> {
        let mut exact = 0;
        for (param, arg) in decl(c).params.iter().zip(args) {
            match arg {
                None => {}
                Some(a) if *a == param.ty => exact += 1,
                Some(a) if widens(a, &param.ty) => {}
                Some(_) => return None,
            }
        }
        Some(exact)
    };
    let scored: Vec<(T, usize)> = candidates.into_iter().filter_map(|c| score(c).map(|s| (c, s))).collect();
    let best = scored.iter().map(|(_, s)| *s).max().unwrap_or(0);
    scored.into_iter().filter(|(_, s)| *s == best).map(|(c, _)| c).collect()
}

fn widens(from: &str, to: &str) -> bool {
    const ORDER: &[&str] = &["byte", "short", "char", "int", "long", "float", "double"];
    let rank = |t: &str| ORDER.iter().position(|o| *o == t);
    match (rank(from), rank(to)) {
        (Some(a), Some(b)) => a < b && !(from == "char" && matches!(to, "short")),
        _ => from == "null" || to == "Object",
    }
}
