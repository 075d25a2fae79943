use std::collections::{BTreeMap, BTreeSet};

use super::{classify, image, transitive_image, DependencyEdge, Relation};
use crate::extract::{EntityKind, RelationSet};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Keep unused attributes and idle methods in the target universes.
    pub include_dead: bool,
}

/// Every dependency worth reporting for a class, ordered by relation, then
/// sources, then targets.
///
/// * one `used_by` edge per attribute with its full image;
/// * one `used_by` edge per group of attributes sharing an identical image;
/// * one whole-class `used_by` aggregate when those images are pairwise
///   disjoint and together cover every method;
/// * a `uses` edge for each merged method and try-catch block, and for every
///   method that reaches attributes through calls;
/// * a `calls` edge for each method that calls others.
pub fn classify_all(rel: &RelationSet, options: ClassifyOptions) -> Vec<DependencyEdge> {
    let live = |id: &&str| options.include_dead || !rel.is_dead(id);
    let attributes: Vec<&str> = rel.attributes().filter(live).collect();
    let methods: BTreeSet<String> = rel.methods().filter(live).map(str::to_string).collect();
    let all_attributes: BTreeSet<String> = attributes.iter().map(|a| a.to_string()).collect();

    let mut edges = Vec::new();
    let mut push = |relation: Relation, sources: BTreeSet<String>, targets: BTreeSet<String>| {
        let targets: BTreeSet<String> = targets.difference(&sources).cloned().collect();
        if targets.is_empty() {
            return;
        }
        match classify(rel, relation, &sources, &targets) {
            Ok(edge) => edges.push(edge),
            Err(e) => debug_assert!(false, "full images are always comparable: {e}"),
        }
    };

    let mut groups: BTreeMap<BTreeSet<String>, BTreeSet<String>> = BTreeMap::new();
    for a in &attributes {
        let e = BTreeSet::from([a.to_string()]);
        let full = full_image(rel, Relation::UsedBy, &e);
        if full.is_empty() {
            push(Relation::UsedBy, e, methods.clone());
            continue;
        }
        groups.entry(full.clone()).or_default().insert(a.to_string());
        push(Relation::UsedBy, e, full);
    }
    for (image, members) in &groups {
        if members.len() >= 2 {
            push(Relation::UsedBy, members.clone(), image.clone());
        }
    }
    let images: Vec<&BTreeSet<String>> = groups.keys().collect();
    let disjoint = images.iter().enumerate().all(|(i, a)| images[i + 1..].iter().all(|b| a.is_disjoint(b)));
    let covered: BTreeSet<String> = images.iter().flat_map(|i| i.iter().cloned()).collect();
    if images.len() >= 2 && disjoint && covered == methods {
        let sources = groups.values().flatten().cloned().collect();
        push(Relation::UsedBy, sources, covered);
    }

    for m in &methods {
        let e = BTreeSet::from([m.clone()]);
        let kind = rel.entity(m).map(|x| x.kind);
        let uses_full = full_image(rel, Relation::Uses, &e);
        let has_transitive_uses =
            !transitive_image(rel, Relation::Uses, &e).map(|t| t.targets.is_empty()).unwrap_or(true);
        if matches!(kind, Some(EntityKind::MergedMethod | EntityKind::TryCatchBlock)) || has_transitive_uses {
            push(Relation::Uses, e.clone(), uses_full);
        } else if options.include_dead && rel.is_dead_method(m) {
            push(Relation::Uses, e.clone(), all_attributes.clone());
        }
        push(Relation::Calls, e.clone(), full_image(rel, Relation::Calls, &e));
    }

    edges.sort_by(|a, b| (a.relation, &a.sources, &a.targets).cmp(&(b.relation, &b.sources, &b.targets)));
    edges.dedup_by(|a, b| a.relation == b.relation && a.sources == b.sources && a.targets == b.targets);
    edges
}

/// Direct and transitive image together.
fn full_image(rel: &RelationSet, relation: Relation, sources: &BTreeSet<String>) -> BTreeSet<String> {
    let mut out = image(rel, relation, sources).unwrap_or_default();
    if let Ok(t) = transitive_image(rel, relation, sources) {
        out.extend(t.targets);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::tests::rel;
    use crate::classify::DependencyKind;

    fn summary(edges: &[DependencyEdge]) -> Vec<(Relation, Vec<&str>, Vec<&str>, DependencyKind)> {
        edges
            .iter()
            .map(|e| {
                (
                    e.relation,
                    e.sources.iter().map(String::as_str).collect(),
                    e.targets.iter().map(String::as_str).collect(),
                    e.kind,
                )
            })
            .collect()
    }

    #[test]
    fn overload_has_two_edges() {
        let r = rel(&[("test(int)", "a"), ("test(int,int)", "a"), ("test(int,int)", "b")], &[]);
        let edges = classify_all(&r, ClassifyOptions::default());
        assert_eq!(
            summary(&edges),
            [
                (Relation::UsedBy, vec!["a"], vec!["test(int)", "test(int,int)"], DependencyKind::ExclusiveDirect),
                (Relation::UsedBy, vec!["b"], vec!["test(int,int)"], DependencyKind::ExclusiveDirect),
            ]
        );
    }

    #[test]
    fn inheritance_aggregates() {
        let r = rel(&[("showxy()", "x"), ("showxy()", "y"), ("showz()", "z")], &[]);
        let edges = classify_all(&r, ClassifyOptions::default());
        let s = summary(&edges);
        assert!(s.contains(&(Relation::UsedBy, vec!["x", "y"], vec!["showxy()"], DependencyKind::ExclusiveDirect)));
        assert!(s.contains(&(Relation::UsedBy, vec!["z"], vec!["showz()"], DependencyKind::ExclusiveDirect)));
        assert!(s.contains(&(
            Relation::UsedBy,
            vec!["x", "y", "z"],
            vec!["showxy()", "showz()"],
            DependencyKind::ExclusiveDirect
        )));
        assert_eq!(edges.len(), 5);
    }

    #[test]
    fn empty_relations_have_no_edges() {
        assert!(classify_all(&RelationSet::default(), ClassifyOptions::default()).is_empty());
    }

    #[test]
    fn calls_and_transitive_uses() {
        let r = rel(&[("Q", "b")], &[("P", "Q")]);
        let s = classify_all(&r, ClassifyOptions::default());
        let s = summary(&s);
        assert!(s.contains(&(Relation::Calls, vec!["P"], vec!["Q"], DependencyKind::ExclusiveDirect)));
        assert!(s.contains(&(Relation::Uses, vec!["P"], vec!["b"], DependencyKind::ExclusiveTransitive)));
        assert!(s.contains(&(Relation::UsedBy, vec!["b"], vec!["P", "Q"], DependencyKind::ExclusiveTransitive)));
    }

    #[test]
    fn dead_entities_only_with_the_flag() {
        let mut r = rel(&[("P", "a")], &[]);
        r.entities.push(crate::extract::Entity::new("u", EntityKind::Attribute));
        r.entities.push(crate::extract::Entity::new("Idle", EntityKind::Method));
        r.sort_entities();
        let default = classify_all(&r, ClassifyOptions::default());
        assert_eq!(default.len(), 1);
        let all = classify_all(&r, ClassifyOptions { include_dead: true });
        let s = summary(&all);
        assert!(s.contains(&(Relation::Uses, vec!["Idle"], vec!["a", "u"], DependencyKind::None)));
        assert!(s.contains(&(Relation::UsedBy, vec!["u"], vec!["Idle", "P"], DependencyKind::None)));
    }
}
