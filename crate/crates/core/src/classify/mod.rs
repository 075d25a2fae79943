//! Dependencies between entity sets in the five forms: exclusive or shared,
//! direct or transitive, and none.

mod all;

pub use all::{classify_all, ClassifyOptions};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::extract::RelationSet;

/// The relation a dependency is read along. `UsedBy` and `CalledBy` are the
/// inverses of `Uses` and `Calls`; `Combined` is `Uses ∪ Calls`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Uses,
    UsedBy,
    Calls,
    CalledBy,
    Combined,
}

impl Relation {
    pub const ALL: [Relation; 5] =
        [Relation::Uses, Relation::UsedBy, Relation::Calls, Relation::CalledBy, Relation::Combined];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Uses => "uses",
            Relation::UsedBy => "used_by",
            Relation::Calls => "calls",
            Relation::CalledBy => "called_by",
            Relation::Combined => "combined",
        }
    }

    fn is_inverse(self) -> bool {
        matches!(self, Relation::UsedBy | Relation::CalledBy)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL.into_iter().find(|r| r.as_str() == s).ok_or_else(|| format!("unknown relation `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DependencyKind {
    ExclusiveDirect,
    SharedDirect,
    ExclusiveTransitive,
    SharedTransitive,
    None,
}

impl DependencyKind {
    pub fn is_transitive(self) -> bool {
        matches!(self, DependencyKind::ExclusiveTransitive | DependencyKind::SharedTransitive)
    }

    pub fn is_exclusive(self) -> bool {
        matches!(self, DependencyKind::ExclusiveDirect | DependencyKind::ExclusiveTransitive)
    }
}

impl fmt::Display for DependencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One path `source -> ... -> via -> target` behind a transitive dependency.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Witness {
    pub source: String,
    pub via: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependencyEdge {
    pub sources: BTreeSet<String>,
    pub targets: BTreeSet<String>,
    pub relation: Relation,
    pub kind: DependencyKind,
    /// Empty for direct kinds; only paths ending in `targets` for transitive ones.
    pub witnesses: Vec<Witness>,
}

impl DependencyEdge {
    /// The intermediate entities `{N1, ..., Nk}`.
    pub fn intermediates(&self) -> BTreeSet<&str> {
        self.witnesses.iter().map(|w| w.via.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("unknown entity `{0}`")]
    UnknownId(String),
    #[error("source and target sets must be nonempty")]
    EmptySet,
    #[error("source and target sets overlap on `{0}`")]
    Overlap(String),
    #[error("targets {targets:?} partly lie outside the {relation} image of {sources:?}")]
    NotComparable { sources: BTreeSet<String>, targets: BTreeSet<String>, relation: Relation },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransitiveImage {
    /// Reached only through at least one intermediate call; direct targets excluded.
    pub targets: BTreeSet<String>,
    pub witnesses: Vec<Witness>,
}

fn check_ids<'a>(rel: &RelationSet, ids: impl IntoIterator<Item = &'a String>) -> Result<(), ClassifyError> {
    for id in ids {
        if !rel.contains(id) {
            return Err(ClassifyError::UnknownId(id.clone()));
        }
    }
    Ok(())
}

/// Adjacency of a relation set under `relation`, as a map from entity to direct targets.
fn adjacency(rel: &RelationSet, relation: Relation) -> BTreeMap<&str, BTreeSet<&str>> {
    let mut adj: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let uses = rel.uses.iter().map(|(m, a)| (m.as_str(), a.as_str()));
    let calls = rel.calls.iter().map(|(p, q)| (p.as_str(), q.as_str()));
    let pairs: Vec<(&str, &str)> = match relation {
        Relation::Uses => uses.collect(),
        Relation::UsedBy => uses.map(|(m, a)| (a, m)).collect(),
        Relation::Calls => calls.collect(),
        Relation::CalledBy => calls.map(|(p, q)| (q, p)).collect(),
        Relation::Combined => uses.chain(calls).collect(),
    };
    for (a, b) in pairs {
        adj.entry(a).or_default().insert(b);
    }
    adj
}

/// Union over `e ∈ sources` of the direct `relation` targets of `e`.
pub fn image(
    rel: &RelationSet,
    relation: Relation,
    sources: &BTreeSet<String>,
) -> Result<BTreeSet<String>, ClassifyError> {
    check_ids(rel, sources)?;
    let adj = adjacency(rel, relation);
    Ok(sources.iter().filter_map(|e| adj.get(e.as_str())).flatten().map(|s| s.to_string()).collect())
}

/// Nodes reachable from `start` in one or more steps of `adj`.
fn reach<'a>(adj: &BTreeMap<&'a str, BTreeSet<&'a str>>, start: &str) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<&str> = adj.get(start).into_iter().flatten().copied().collect();
    while let Some(n) = queue.pop_front() {
        if seen.insert(n) {
            queue.extend(adj.get(n).into_iter().flatten().copied());
        }
    }
    seen
}

/// Targets related to `sources` only through an intermediate method.
///
/// Forward relations compose one or more calls with `relation`
/// (`e calls+ n`, `n relation m`); inverse relations compose `relation` with
/// one or more inverse calls (`e relation n`, `m calls+ n`). Each witness
/// names the method `n` adjacent to the relation step.
pub fn transitive_image(
    rel: &RelationSet,
    relation: Relation,
    sources: &BTreeSet<String>,
) -> Result<TransitiveImage, ClassifyError> {
    let direct = image(rel, relation, sources)?;
    let step = adjacency(rel, relation);
    let calls = adjacency(rel, Relation::Calls);
    let callers = adjacency(rel, Relation::CalledBy);

    let mut witnesses = BTreeSet::new();
    for e in sources {
        if relation.is_inverse() {
            for &n in step.get(e.as_str()).into_iter().flatten() {
                for m in reach(&callers, n) {
                    witnesses.insert((e.as_str(), n, m));
                }
            }
        } else {
            for n in reach(&calls, e) {
                for &m in step.get(n).into_iter().flatten() {
                    witnesses.insert((e.as_str(), n, m));
                }
            }
        }
    }
    witnesses.retain(|(_, _, m)| !direct.contains(*m));
    Ok(TransitiveImage {
        targets: witnesses.iter().map(|(_, _, m)| m.to_string()).collect(),
        witnesses: witnesses
            .into_iter()
            .map(|(s, v, t)| Witness { source: s.to_string(), via: v.to_string(), target: t.to_string() })
            .collect(),
    })
}

/// Classifies how `sources` depend on `targets` along `relation`.
pub fn classify(
    rel: &RelationSet,
    relation: Relation,
    sources: &BTreeSet<String>,
    targets: &BTreeSet<String>,
) -> Result<DependencyEdge, ClassifyError> {
    if sources.is_empty() || targets.is_empty() {
        return Err(ClassifyError::EmptySet);
    }
    check_ids(rel, targets)?;
    if let Some(shared) = sources.intersection(targets).next() {
        return Err(ClassifyError::Overlap(shared.clone()));
    }
    let d = image(rel, relation, sources)?;
    let t = transitive_image(rel, relation, sources)?;
    let reachable: BTreeSet<String> = d.union(&t.targets).cloned().collect();
    let hits_transitive = t.targets.iter().any(|x| targets.contains(x));

    let kind = if d == *targets {
        DependencyKind::ExclusiveDirect
    } else if targets.is_subset(&d) {
        DependencyKind::SharedDirect
    } else if reachable == *targets && hits_transitive {
        DependencyKind::ExclusiveTransitive
    } else if targets.is_subset(&reachable) && hits_transitive {
        DependencyKind::SharedTransitive
    } else if reachable.is_disjoint(targets) {
        DependencyKind::None
    } else {
        return Err(ClassifyError::NotComparable { sources: sources.clone(), targets: targets.clone(), relation });
    };
    let witnesses = if kind.is_transitive() {
        t.witnesses.into_iter().filter(|w| targets.contains(&w.target)).collect()
    } else {
        Vec::new()
    };
    Ok(DependencyEdge { sources: sources.clone(), targets: targets.clone(), relation, kind, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{Entity, EntityKind};

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    /// Methods are capitalized or carry a parameter list; everything else is an attribute.
    pub(crate) fn rel(uses: &[(&str, &str)], calls: &[(&str, &str)]) -> RelationSet {
        let mut r = RelationSet::default();
        for (a, b) in uses.iter().chain(calls) {
            for id in [a, b] {
                let kind = if id.starts_with(char::is_uppercase) || id.contains('(') {
                    EntityKind::Method
                } else {
                    EntityKind::Attribute
                };
                r.entities.push(Entity::new(*id, kind));
            }
        }
        r.uses = uses.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        r.calls = calls.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        r.sort_entities();
        r
    }

    fn overload() -> RelationSet {
        rel(&[("test(int)", "a"), ("test(int,int)", "a"), ("test(int,int)", "b")], &[])
    }

    #[test]
    fn images() {
        let r = overload();
        assert_eq!(image(&r, Relation::Uses, &set(&["test(int,int)"])).unwrap(), set(&["a", "b"]));
        assert_eq!(image(&r, Relation::Uses, &set(&[])).unwrap(), set(&[]));
        assert_eq!(image(&r, Relation::UsedBy, &set(&["a"])).unwrap(), set(&["test(int)", "test(int,int)"]));
        assert_eq!(image(&r, Relation::Uses, &set(&["nope"])), Err(ClassifyError::UnknownId("nope".into())));
    }

    #[test]
    fn overload_dependencies_are_exclusive() {
        let r = overload();
        let b = classify(&r, Relation::UsedBy, &set(&["b"]), &set(&["test(int,int)"])).unwrap();
        assert_eq!(b.kind, DependencyKind::ExclusiveDirect);
        let a = classify(&r, Relation::UsedBy, &set(&["a"]), &set(&["test(int)", "test(int,int)"])).unwrap();
        assert_eq!(a.kind, DependencyKind::ExclusiveDirect);
        assert!(a.witnesses.is_empty());
        let shared = classify(&r, Relation::UsedBy, &set(&["a"]), &set(&["test(int)"])).unwrap();
        assert_eq!(shared.kind, DependencyKind::SharedDirect);
    }

    #[test]
    fn transitive_through_one_call() {
        let r = rel(&[("Q", "b")], &[("P", "Q")]);
        let t = transitive_image(&r, Relation::Uses, &set(&["P"])).unwrap();
        assert_eq!(t.targets, set(&["b"]));
        assert_eq!(t.witnesses, [Witness { source: "P".into(), via: "Q".into(), target: "b".into() }]);

        let edge = classify(&r, Relation::Uses, &set(&["P"]), &set(&["b"])).unwrap();
        assert_eq!(edge.kind, DependencyKind::ExclusiveTransitive);
        assert_eq!(edge.intermediates(), BTreeSet::from(["Q"]));

        let inverse = classify(&r, Relation::UsedBy, &set(&["b"]), &set(&["P", "Q"])).unwrap();
        assert_eq!(inverse.kind, DependencyKind::ExclusiveTransitive);
        assert_eq!(inverse.witnesses, [Witness { source: "b".into(), via: "Q".into(), target: "P".into() }]);
    }

    #[test]
    fn no_calls_means_no_transitive_targets() {
        let r = rel(&[("P", "a")], &[]);
        assert_eq!(transitive_image(&r, Relation::Uses, &set(&["P"])).unwrap(), TransitiveImage::default());
    }

    #[test]
    fn shared_transitive_and_none() {
        let r = rel(&[("Q", "b"), ("Q", "c"), ("Z", "z")], &[("P", "Q")]);
        let edge = classify(&r, Relation::Uses, &set(&["P"]), &set(&["b"])).unwrap();
        assert_eq!(edge.kind, DependencyKind::SharedTransitive);
        let none = classify(&r, Relation::Uses, &set(&["P"]), &set(&["z"])).unwrap();
        assert_eq!(none.kind, DependencyKind::None);
        let mut idle = rel(&[("Z", "z")], &[]);
        idle.entities.push(Entity::new("M", EntityKind::Method));
        idle.sort_entities();
        assert_eq!(classify(&idle, Relation::Uses, &set(&["M"]), &set(&["z"])).unwrap().kind, DependencyKind::None);
    }

    #[test]
    fn partial_overlap_is_not_comparable() {
        let r = rel(&[("P", "a"), ("Z", "z")], &[]);
        let err = classify(&r, Relation::Uses, &set(&["P"]), &set(&["a", "z"])).unwrap_err();
        assert!(matches!(err, ClassifyError::NotComparable { .. }));
    }

    #[test]
    fn argument_checks() {
        let r = rel(&[("P", "a")], &[]);
        assert_eq!(classify(&r, Relation::Uses, &set(&[]), &set(&["a"])), Err(ClassifyError::EmptySet));
        assert_eq!(classify(&r, Relation::Uses, &set(&["P"]), &set(&["P"])), Err(ClassifyError::Overlap("P".into())));
        assert_eq!(classify(&r, Relation::Uses, &set(&["P"]), &set(&["q"])), Err(ClassifyError::UnknownId("q".into())));
    }

    #[test]
    fn combined_relation_reaches_through_calls() {
        let r = rel(&[("Q", "b")], &[("P", "Q"), ("Q", "R")]);
        let d = image(&r, Relation::Combined, &set(&["P"])).unwrap();
        assert_eq!(d, set(&["Q"]));
        let t = transitive_image(&r, Relation::Combined, &set(&["P"])).unwrap();
        assert_eq!(t.targets, set(&["R", "b"]));
    }

    #[test]
    fn relation_names_round_trip() {
        for r in Relation::ALL {
            assert_eq!(r.as_str().parse::<Relation>().unwrap(), r);
        }
    }
}
