use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use super::concepts::{concept_order, Concept};

/// Concepts in lattice order together with their Hasse diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub concepts: Vec<Concept>,
    /// `(parent, child)` index pairs; the parent's extent strictly contains the child's.
    pub covers: Vec<(usize, usize)>,
}

impl Lattice {
    /// Index of the concept with the largest extent.
    pub fn top(&self) -> Option<usize> {
        (!self.concepts.is_empty()).then_some(0)
    }

    /// Index of the concept with the smallest extent.
    pub fn bottom(&self) -> Option<usize> {
        self.concepts.len().checked_sub(1)
    }

    pub fn proper(&self) -> impl Iterator<Item = (usize, &Concept)> {
        self.concepts.iter().enumerate().filter(|(_, c)| c.is_proper())
    }

    pub fn proper_count(&self) -> usize {
        self.proper().count()
    }

    pub fn children(&self, parent: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |(p, _)| *p == parent).map(|(_, c)| *c)
    }

    pub fn parents(&self, child: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |(_, c)| *c == child).map(|(p, _)| *p)
    }

    /// Objects whose object concept is `index` (reduced labeling).
    pub fn own_objects(&self, index: usize) -> Vec<&str> {
        let c = &self.concepts[index];
        c.extent
            .iter()
            .filter(|o| self.children(index).all(|ch| !self.concepts[ch].extent.contains(*o)))
            .map(String::as_str)
            .collect()
    }

    /// Properties whose property concept is `index` (reduced labeling).
    pub fn own_properties(&self, index: usize) -> Vec<&str> {
        let c = &self.concepts[index];
        c.intent
            .iter()
            .filter(|p| self.parents(index).all(|pa| !self.concepts[pa].intent.contains(*p)))
            .map(String::as_str)
            .collect()
    }
}

/// Orders `concepts` and computes the cover relation of extent containment.
pub fn build_lattice(mut concepts: Vec<Concept>) -> Lattice {
    concepts.sort_by(concept_order);
    concepts.dedup();

    let mut universe: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &concepts {
        for o in &c.extent {
            let next = universe.len();
            universe.entry(o.as_str()).or_insert(next);
        }
    }
    let extents: Vec<FixedBitSet> = concepts
        .iter()
        .map(|c| {
            let mut bits = FixedBitSet::with_capacity(universe.len());
            for o in &c.extent {
                bits.insert(universe[o.as_str()]);
            }
            bits
        })
        .collect();

    let strictly_contains =
        |big: usize, small: usize| extents[big] != extents[small] && extents[small].is_subset(&extents[big]);

    let mut covers = Vec::new();
    for child in 0..concepts.len() {
        let uppers: Vec<usize> = (0..concepts.len()).filter(|&p| strictly_contains(p, child)).collect();
        for &p in &uppers {
            let is_cover = uppers.iter().all(|&q| q == p || !strictly_contains(p, q));
            if is_cover {
                covers.push((p, child));
            }
        }
    }
    covers.sort_unstable();
    Lattice { concepts, covers }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn concept(extent: &[&str], intent: &[&str]) -> Concept {
        Concept {
            extent: extent.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>(),
            intent: intent.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn two_chain() {
        let l = build_lattice(vec![concept(&["t2"], &["a", "b"]), concept(&["t1", "t2"], &["a"])]);
        assert_eq!(l.covers, [(0, 1)]);
        assert_eq!(l.top(), Some(0));
        assert_eq!(l.bottom(), Some(1));
        assert_eq!(l.own_objects(0), ["t1"]);
        assert_eq!(l.own_properties(1), ["b"]);
    }

    #[test]
    fn singleton_has_no_covers() {
        let l = build_lattice(vec![concept(&[], &[])]);
        assert!(l.covers.is_empty());
        assert_eq!(l.top(), l.bottom());
    }

    #[test]
    fn diamond() {
        let l = build_lattice(vec![
            concept(&["showxy", "showz"], &[]),
            concept(&["showxy"], &["x", "y"]),
            concept(&["showz"], &["z"]),
            concept(&[], &["x", "y", "z"]),
        ]);
        assert_eq!(l.covers, [(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn transitive_edges_are_removed() {
        let l = build_lattice(vec![
            concept(&["a", "b", "c"], &[]),
            concept(&["a", "b"], &["p"]),
            concept(&["a"], &["p", "q"]),
        ]);
        assert_eq!(l.covers, [(0, 1), (1, 2)]);
    }
}
