//! X-Ray views: named groupings of entities built from concepts and
//! dependencies.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{image, transitive_image, DependencyEdge, Relation};
use crate::extract::{ContextMode, RelationSet};
use crate::fca::{FormalContext, Lattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ViewName {
    StateUsage,
    MethodClusters,
    BehaviourSkeleton,
}

impl fmt::Display for ViewName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Group {
    /// Unique within its view.
    pub label: String,
    pub role: String,
    pub members: Vec<String>,
}

impl Group {
    fn new<'a>(label: impl Into<String>, role: &str, members: impl IntoIterator<Item = &'a str>) -> Self {
        let mut members: Vec<String> = members.into_iter().map(str::to_string).collect();
        members.sort();
        members.dedup();
        Group { label: label.into(), role: role.to_string(), members }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XRayView {
    pub name: ViewName,
    pub groups: Vec<Group>,
    pub notes: Vec<String>,
}

impl XRayView {
    pub fn group(&self, label: &str) -> Option<&Group> {
        self.groups.iter().find(|g| g.label == label)
    }

    pub fn groups_with_role<'a>(&'a self, role: &'a str) -> impl Iterator<Item = &'a Group> + 'a {
        self.groups.iter().filter(move |g| g.role == role)
    }
}

fn set_label(items: &BTreeSet<String>) -> String {
    let inner: Vec<&str> = items.iter().map(String::as_str).collect();
    format!("{{{}}}", inner.join(", "))
}

/// Attributes reached by `method` directly or through calls.
fn reached_attributes(rel: &RelationSet, method: &str) -> BTreeSet<String> {
    let e = BTreeSet::from([method.to_string()]);
    let mut out = image(rel, Relation::Uses, &e).unwrap_or_default();
    out.extend(transitive_image(rel, Relation::Uses, &e).map(|t| t.targets).unwrap_or_default());
    out
}

/// How the attributes are used, together or not, and by which methods.
///
/// `lattice` is the uses-mode concept lattice of `rel`.
pub fn state_usage(rel: &RelationSet, lattice: &Lattice) -> XRayView {
    let mut groups = Vec::new();
    for a in rel.attributes() {
        let users = rel.users_of(a);
        if !users.is_empty() {
            groups.push(Group::new(format!("accessors-of:{a}"), "exclusive-accessors", users));
        }
    }
    for (_, c) in lattice.proper() {
        if c.intent.len() >= 2 {
            groups.push(Group::new(
                format!("collaborating:{}", set_label(&c.intent)),
                "collaborating-attributes",
                c.intent.iter().map(String::as_str),
            ));
        }
    }
    let stateless = rel.methods().filter(|m| rel.uses_of(m).is_empty());
    groups.push(Group::new("stateless", "stateless-methods", stateless));
    let dead = rel.attributes().filter(|a| rel.is_dead_attribute(a));
    groups.push(Group::new("dead-attributes", "dead-attributes", dead));

    let all: BTreeSet<String> = rel.attributes().map(str::to_string).collect();
    let all_state: Vec<&str> = rel.methods().filter(|m| !all.is_empty() && reached_attributes(rel, m) == all).collect();
    groups.push(Group::new("all-state", "all-state-methods", all_state));

    XRayView { name: ViewName::StateUsage, groups, notes: Vec::new() }
}

/// Methods grouped by shared attributes and callees: the proper concepts of
/// the combined context, each labeled by its intent.
pub fn method_clusters(rel: &RelationSet) -> XRayView {
    let (ctx, _) = crate::extract::build_context(rel, ContextMode::Combined);
    let lattice = crate::fca::concept_lattice(&ctx);
    let groups = lattice
        .proper()
        .map(|(_, c)| {
            Group::new(format!("cluster:{}", set_label(&c.intent)), "cluster", c.extent.iter().map(String::as_str))
        })
        .collect();
    XRayView { name: ViewName::MethodClusters, groups, notes: Vec::new() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkeletonOptions {
    /// Fraction of the attributes a method must reach to belong to the core.
    pub core_threshold: f64,
}

impl Default for SkeletonOptions {
    fn default() -> Self {
        SkeletonOptions { core_threshold: 1.0 }
    }
}

/// Interfaces, entry points, internal and isolated methods, and the core.
pub fn behaviour_skeleton(rel: &RelationSet, options: SkeletonOptions) -> XRayView {
    let called: BTreeSet<&str> = rel.calls.iter().map(|(_, q)| q.as_str()).collect();
    let calling: BTreeSet<&str> = rel.calls.iter().map(|(p, _)| p.as_str()).collect();
    let methods: Vec<&str> = rel.methods().collect();

    let interfaces = methods.iter().copied().filter(|m| !called.contains(m));
    let entry = methods.iter().copied().filter(|m| !called.contains(m) && calling.contains(m));
    let internal = methods.iter().copied().filter(|m| called.contains(m));
    let isolated = methods.iter().copied().filter(|m| !called.contains(m) && !calling.contains(m));

    let mut groups = vec![
        Group::new("interfaces", "interface-methods", interfaces),
        Group::new("entry-points", "entry-points", entry),
        Group::new("internal", "internal-methods", internal),
        Group::new("isolated", "isolated-methods", isolated),
    ];

    let total = rel.attributes().count();
    let mut core = Vec::new();
    let mut pairs = Vec::new();
    if total > 0 {
        for m in &methods {
            let reached = reached_attributes(rel, m);
            if reached.len() as f64 >= options.core_threshold * total as f64 && !reached.is_empty() {
                core.push(*m);
                let members = std::iter::once(*m).chain(reached.iter().map(String::as_str));
                pairs.push(Group::new(format!("core:{m}"), "core-pair", members));
            }
        }
    }
    groups.push(Group::new("core", "core-methods", core));
    groups.extend(pairs);

    let notes = vec![format!(
        "core methods reach at least {:.0}% of the attributes directly or through calls; \
         this threshold is a fixed reading of \"core\"",
        options.core_threshold * 100.0
    )];
    XRayView { name: ViewName::BehaviourSkeleton, groups, notes }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),
}

/// Everything known about one class.
#[derive(Debug, Clone, PartialEq)]
pub struct XRayReport {
    pub class: String,
    pub relations: RelationSet,
    pub context_mode: ContextMode,
    pub context: FormalContext,
    pub lattice: Lattice,
    pub dependencies: Vec<DependencyEdge>,
    pub views: Vec<XRayView>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub entity_count: usize,
    pub attribute_count: usize,
    pub method_count: usize,
    pub uses_count: usize,
    pub calls_count: usize,
    pub concept_count: usize,
    pub proper_concept_count: usize,
    pub dependency_count: usize,
    pub view_count: usize,
}

impl XRayReport {
    pub fn summary(&self) -> Summary {
        Summary {
            entity_count: self.relations.entities.len(),
            attribute_count: self.relations.attributes().count(),
            method_count: self.relations.methods().count(),
            uses_count: self.relations.uses.len(),
            calls_count: self.relations.calls.len(),
            concept_count: self.lattice.concepts.len(),
            proper_concept_count: self.lattice.proper_count(),
            dependency_count: self.dependencies.len(),
            view_count: self.views.len(),
        }
    }

    pub fn view(&self, name: ViewName) -> Option<&XRayView> {
        self.views.iter().find(|v| v.name == name)
    }
}

/// Assembles a report after checking that every part talks about the same entities.
pub fn compose_report(
    relations: RelationSet,
    context_mode: ContextMode,
    context: FormalContext,
    lattice: Lattice,
    dependencies: Vec<DependencyEdge>,
    views: Vec<XRayView>,
    mut notes: Vec<String>,
) -> Result<XRayReport, ReportError> {
    let bad = |what: String| Err(ReportError::InconsistentInputs(what));
    let methods: Vec<&str> = relations.methods().collect();
    if context.objects().iter().map(String::as_str).ne(methods.iter().copied()) {
        return bad("context objects differ from the method entities".into());
    }
    for p in context.properties() {
        if !relations.contains(p) {
            return bad(format!("context property `{p}` is not an entity"));
        }
    }
    for c in &lattice.concepts {
        if let Some(x) = c.extent.iter().chain(&c.intent).find(|x| !relations.contains(x)) {
            return bad(format!("concept member `{x}` is not an entity"));
        }
    }
    for d in &dependencies {
        if let Some(x) = d.sources.iter().chain(&d.targets).find(|x| !relations.contains(x)) {
            return bad(format!("dependency endpoint `{x}` is not an entity"));
        }
    }
    for v in &views {
        let mut labels = BTreeSet::new();
        for g in &v.groups {
            if !labels.insert(g.label.as_str()) {
                return bad(format!("view {} repeats group `{}`", v.name, g.label));
            }
            if let Some(x) = g.members.iter().find(|x| !relations.contains(x)) {
                return bad(format!("view {} references unknown entity `{x}`", v.name));
            }
        }
    }
    if let Err(e) = relations.validate() {
        return bad(e);
    }
    notes.sort();
    notes.dedup();
    Ok(XRayReport {
        class: relations.class.clone(),
        relations,
        context_mode,
        context,
        lattice,
        dependencies,
        views,
        notes,
    })
}
