use std::collections::{BTreeMap, BTreeSet};

use super::{Entity, EntityKind, RelationSet};
use crate::java::Hierarchy;

/// Replaces each override group `{A.m, B.m, ...}` along the class's ancestry
/// by one `m#merged` entity whose images are the unions of the members'.
pub fn merge_overrides(mut rel: RelationSet, hierarchy: &Hierarchy) -> RelationSet {
    let mut signatures = BTreeSet::new();
    for class in hierarchy.ancestry(&rel.class) {
        signatures.extend(class.plain_methods().filter(|m| !m.is_static).map(|m| m.signature()));
    }

    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    let mut merged = Vec::new();
    for sig in signatures {
        let members: Vec<String> = hierarchy
            .override_group(&rel.class, &sig)
            .into_iter()
            .map(|owner| format!("{owner}.{sig}"))
            .filter(|id| rel.contains(id))
            .collect();
        if members.len() < 2 {
            continue;
        }
        let id = format!("{sig}#merged");
        for m in &members {
            rename.insert(m.clone(), id.clone());
        }
        merged.push(Entity { display: id.clone(), id, kind: EntityKind::MergedMethod, members });
    }
    if rename.is_empty() {
        return rel;
    }

    let map = |id: &String| rename.get(id).unwrap_or(id).clone();
    rel.entities.retain(|e| !rename.contains_key(&e.id));
    rel.entities.extend(merged);
    rel.sort_entities();
    rel.uses = rel.uses.iter().map(|(m, a)| (map(m), a.clone())).collect();
    rel.calls = rel.calls.iter().map(|(p, q)| (map(p), map(q))).filter(|(p, q)| p != q).collect();
    rel.self_type_dependents = rel.self_type_dependents.iter().map(map).collect();
    rel
}
