use std::cmp::Ordering;
use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::FormalContext;

/// A closed (extent, intent) pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Concept {
    pub extent: BTreeSet<String>,
    pub intent: BTreeSet<String>,
}

impl Concept {
    /// Nonempty extent and nonempty intent.
    pub fn is_proper(&self) -> bool {
        !self.extent.is_empty() && !self.intent.is_empty()
    }
}

/// Descending extent size, then extents compared lexicographically.
pub fn concept_order(a: &Concept, b: &Concept) -> Ordering {
    b.extent.len().cmp(&a.extent.len()).then_with(|| a.extent.cmp(&b.extent)).then_with(|| a.intent.cmp(&b.intent))
}

/// Every formal concept of `ctx`, in lattice order.
///
/// Intents are generated in lectic order by Ganter's NextClosure; the result
/// is then sorted by [`concept_order`].
pub fn enumerate_concepts(ctx: &FormalContext) -> Vec<Concept> {
    let mut intents = Vec::new();
    let mut current = close(ctx, &FixedBitSet::with_capacity(ctx.properties().len()));
    loop {
        intents.push(current.clone());
        match next_closure(ctx, &current) {
            Some(next) => current = next,
            None => break,
        }
    }
    let mut concepts: Vec<Concept> = intents
        .iter()
        .map(|intent| Concept { extent: ctx.object_names(&ctx.extent_of(intent)), intent: ctx.property_names(intent) })
        .collect();
    concepts.sort_by(concept_order);
    concepts
}

fn close(ctx: &FormalContext, props: &FixedBitSet) -> FixedBitSet {
    ctx.intent_of(&ctx.extent_of(props))
}

/// The lectically next closed property set after `current`, if any.
fn next_closure(ctx: &FormalContext, current: &FixedBitSet) -> Option<FixedBitSet> {
    let mut a = current.clone();
    for i in (0..ctx.properties().len()).rev() {
        if a.contains(i) {
            a.set(i, false);
            continue;
        }
        a.insert(i);
        let b = close(ctx, &a);
        a.set(i, false);
        // accept when the closure adds nothing below i
        if b.ones().take_while(|&j| j < i).all(|j| a.contains(j)) {
            return Some(b);
        }
    }
    None
}
