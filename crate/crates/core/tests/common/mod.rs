//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the library's closure, lattice or classification
//! code; the oracles work from raw incidence and explicit path enumeration.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::Rng;
use xray_core::classify::{DependencyKind, Relation};
use xray_core::extract::{Entity, EntityKind, RelationSet};
use xray_core::fca::FormalContext;
use xray_core::SourceFile;

pub type Set = BTreeSet<String>;

pub fn set(items: &[&str]) -> Set {
    items.iter().map(|s| s.to_string()).collect()
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub const FIXTURES: [&str; 5] =
    ["Overload.java", "Override.java", "Inheritance.java", "MyException.java", "Binomial.java"];

pub fn fixture(name: &str) -> SourceFile {
    let text = std::fs::read_to_string(fixture_dir().join(name)).expect("fixture exists");
    SourceFile::new(name, text)
}

pub fn random_context(rng: &mut impl Rng, max_objects: usize, max_properties: usize, density: f64) -> FormalContext {
    let n = rng.gen_range(1..=max_objects);
    let m = rng.gen_range(1..=max_properties);
    let objects = (0..n).map(|i| format!("o{i}")).collect();
    let properties = (0..m).map(|j| format!("p{j}")).collect();
    let matrix: Vec<Vec<bool>> = (0..n).map(|_| (0..m).map(|_| rng.gen_bool(density)).collect()).collect();
    FormalContext::from_matrix(objects, properties, &matrix).unwrap()
}

/// Properties shared by every object in `objects`, read straight from the incidence.
pub fn common_properties(ctx: &FormalContext, objects: &BTreeSet<usize>) -> BTreeSet<usize> {
    (0..ctx.properties().len()).filter(|&p| objects.iter().all(|&o| ctx.incident(o, p))).collect()
}

pub fn common_objects(ctx: &FormalContext, properties: &BTreeSet<usize>) -> BTreeSet<usize> {
    (0..ctx.objects().len()).filter(|&o| properties.iter().all(|&p| ctx.incident(o, p))).collect()
}

fn names(all: &[String], idx: &BTreeSet<usize>) -> Set {
    idx.iter().map(|&i| all[i].clone()).collect()
}

/// Every concept, found by closing each subset of objects.
pub fn brute_force_concepts(ctx: &FormalContext) -> BTreeSet<(Set, Set)> {
    let n = ctx.objects().len();
    assert!(n <= 16, "brute force over 2^{n} subsets");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let a: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let intent = common_properties(ctx, &a);
        let extent = common_objects(ctx, &intent);
        out.insert((names(ctx.objects(), &extent), names(ctx.properties(), &intent)));
    }
    out
}

/// Cover pairs (parent, child) of a concept set: strict extent inclusion with nothing in between.
pub fn brute_force_covers(concepts: &[(Set, Set)]) -> BTreeSet<(usize, usize)> {
    let lt = |a: &Set, b: &Set| a.len() < b.len() && a.is_subset(b);
    let mut out = BTreeSet::new();
    for (p, (pe, _)) in concepts.iter().enumerate() {
        for (c, (ce, _)) in concepts.iter().enumerate() {
            if lt(ce, pe) && !concepts.iter().any(|(x, _)| lt(ce, x) && lt(x, pe)) {
                out.insert((p, c));
            }
        }
    }
    out
}

pub fn subsets<T: Clone + Ord>(items: &[T]) -> Vec<BTreeSet<T>> {
    (0u32..(1 << items.len()))
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// A class with methods `m0()`.. and attributes `a0`.. and random relations.
pub fn random_relation_set(
    rng: &mut impl Rng,
    methods: usize,
    attributes: usize,
    uses_density: f64,
    calls_density: f64,
) -> RelationSet {
    let mut rel = RelationSet { class: "R".into(), ..RelationSet::default() };
    let ms: Vec<String> = (0..methods).map(|i| format!("m{i}()")).collect();
    let attrs: Vec<String> = (0..attributes).map(|i| format!("a{i}")).collect();
    rel.entities.extend(ms.iter().map(|m| Entity::new(m.clone(), EntityKind::Method)));
    rel.entities.extend(attrs.iter().map(|a| Entity::new(a.clone(), EntityKind::Attribute)));
    rel.sort_entities();
    for m in &ms {
        for a in &attrs {
            if rng.gen_bool(uses_density) {
                rel.uses.insert((m.clone(), a.clone()));
            }
        }
        for q in &ms {
            if m != q && rng.gen_bool(calls_density) {
                rel.calls.insert((m.clone(), q.clone()));
            }
        }
    }
    rel
}

/// Direct image and transitive-only part of `sources`, by explicit path enumeration.
pub struct OracleImage {
    pub direct: Set,
    pub transitive: Set,
}

fn successors(pairs: &BTreeSet<(String, String)>, reverse: bool) -> BTreeMap<String, Vec<String>> {
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (a, b) in pairs {
        let (from, to) = if reverse { (b, a) } else { (a, b) };
        out.entry(from.clone()).or_default().push(to.clone());
    }
    out
}

/// End points of all call paths of length ≥ 1 from `start`. A path may not
/// revisit a node, except that it may end where it started.
fn path_ends(graph: &BTreeMap<String, Vec<String>>, start: &str) -> Set {
    let mut ends = Set::new();
    let mut stack: Vec<Vec<String>> = vec![vec![start.to_string()]];
    while let Some(path) = stack.pop() {
        let last = path.last().unwrap();
        for next in graph.get(last).into_iter().flatten() {
            ends.insert(next.clone());
            if !path.contains(next) {
                let mut longer = path.clone();
                longer.push(next.clone());
                stack.push(longer);
            }
        }
    }
    ends
}

pub fn oracle_image(rel: &RelationSet, relation: Relation, sources: &Set) -> OracleImage {
    let step_pairs: BTreeSet<(String, String)> = match relation {
        Relation::Uses | Relation::UsedBy => rel.uses.clone(),
        Relation::Calls | Relation::CalledBy => rel.calls.clone(),
        Relation::Combined => rel.uses.union(&rel.calls).cloned().collect(),
    };
    let inverse = matches!(relation, Relation::UsedBy | Relation::CalledBy);
    let step = successors(&step_pairs, inverse);
    let calls = successors(&rel.calls, false);
    let callers = successors(&rel.calls, true);
    let step_of = |n: &str| step.get(n).cloned().unwrap_or_default();

    let mut direct = Set::new();
    let mut reach = Set::new();
    for e in sources {
        direct.extend(step_of(e));
        if inverse {
            for n in step_of(e) {
                reach.extend(path_ends(&callers, &n));
            }
        } else {
            for n in path_ends(&calls, e) {
                reach.extend(step_of(&n));
            }
        }
    }
    let transitive = reach.difference(&direct).cloned().collect();
    OracleImage { direct, transitive }
}

/// Kind of `(sources, targets)` from the case definitions; `None` means not comparable.
pub fn oracle_kind(rel: &RelationSet, relation: Relation, sources: &Set, targets: &Set) -> Option<DependencyKind> {
    kind_of(&oracle_image(rel, relation, sources), targets)
}

/// Kind of `targets` against a precomputed image.
pub fn kind_of(image: &OracleImage, targets: &Set) -> Option<DependencyKind> {
    let (d, t, m) = (&image.direct, &image.transitive, targets);
    let reach: Set = d.union(t).cloned().collect();
    let hits_t = !t.is_disjoint(m);
    let strict_subset = |a: &Set, b: &Set| a.is_subset(b) && a != b;
    let cases = [
        (DependencyKind::ExclusiveDirect, d == m && !d.is_empty()),
        (DependencyKind::SharedDirect, !m.is_empty() && strict_subset(m, d)),
        (DependencyKind::ExclusiveTransitive, reach == *m && hits_t),
        (DependencyKind::SharedTransitive, strict_subset(m, &reach) && hits_t),
        (DependencyKind::None, reach.is_disjoint(m)),
    ];
    let holding: Vec<DependencyKind> = cases.iter().filter(|(_, ok)| *ok).map(|(k, _)| *k).collect();
    assert!(holding.len() <= 1, "cases overlap: {holding:?} for targets {targets:?}");
    holding.first().copied()
}

/// Source and target universes of a relation over a relation set.
pub fn universes(rel: &RelationSet, relation: Relation) -> (Vec<String>, Vec<String>) {
    let methods: Vec<String> = rel.methods().map(str::to_string).collect();
    let attributes: Vec<String> = rel.attributes().map(str::to_string).collect();
    match relation {
        Relation::Uses => (methods, attributes),
        Relation::UsedBy => (attributes, methods),
        Relation::Calls | Relation::CalledBy => (methods.clone(), methods),
        Relation::Combined => (methods.clone(), attributes.into_iter().chain(methods).collect()),
    }
}
