use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use super::FcaError;

/// Objects × properties incidence with bitset rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    properties: Vec<String>,
    object_index: HashMap<String, usize>,
    property_index: HashMap<String, usize>,
    /// One bitset over properties per object.
    rows: Vec<FixedBitSet>,
    /// One bitset over objects per property.
    cols: Vec<FixedBitSet>,
}

impl FormalContext {
    /// Builds a context from id orderings and incident (object, property) pairs.
    pub fn new<I, S, T>(objects: Vec<String>, properties: Vec<String>, incidence: I) -> Result<Self, FcaError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut ctx = Self::empty(objects, properties)?;
        for (o, p) in incidence {
            let oi = ctx.object_idx(o.as_ref())?;
            let pi = ctx.property_idx(p.as_ref())?;
            ctx.set(oi, pi);
        }
        Ok(ctx)
    }

    /// Builds a context from a dense `|objects| × |properties|` matrix.
    pub fn from_matrix(objects: Vec<String>, properties: Vec<String>, matrix: &[Vec<bool>]) -> Result<Self, FcaError> {
        let mut ctx = Self::empty(objects, properties)?;
        if matrix.len() != ctx.objects.len() {
            return Err(FcaError::DimensionMismatch { expected: ctx.objects.len(), found: matrix.len() });
        }
        for (oi, row) in matrix.iter().enumerate() {
            if row.len() != ctx.properties.len() {
                return Err(FcaError::DimensionMismatch { expected: ctx.properties.len(), found: row.len() });
            }
            for (pi, &hit) in row.iter().enumerate() {
                if hit {
                    ctx.set(oi, pi);
                }
            }
        }
        Ok(ctx)
    }

    fn empty(objects: Vec<String>, properties: Vec<String>) -> Result<Self, FcaError> {
        let object_index = index_of(&objects)?;
        let property_index = index_of(&properties)?;
        let rows = vec![FixedBitSet::with_capacity(properties.len()); objects.len()];
        let cols = vec![FixedBitSet::with_capacity(objects.len()); properties.len()];
        Ok(FormalContext { objects, properties, object_index, property_index, rows, cols })
    }

    fn set(&mut self, oi: usize, pi: usize) {
        self.rows[oi].insert(pi);
        self.cols[pi].insert(oi);
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn properties(&self) -> &[String] {
        &self.properties
    }

    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.incidence_count() == 0
    }

    pub fn incident(&self, object: usize, property: usize) -> bool {
        self.rows[object].contains(property)
    }

    pub fn object_idx(&self, id: &str) -> Result<usize, FcaError> {
        self.object_index.get(id).copied().ok_or_else(|| FcaError::UnknownId(id.to_string()))
    }

    pub fn property_idx(&self, id: &str) -> Result<usize, FcaError> {
        self.property_index.get(id).copied().ok_or_else(|| FcaError::UnknownId(id.to_string()))
    }

    /// Incident (object, property) pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(oi, row)| {
            row.ones().map(move |pi| (self.objects[oi].as_str(), self.properties[pi].as_str()))
        })
    }

    /// Properties shared by every object in `objs` (all properties for the empty set).
    pub fn intent_of(&self, objs: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.properties.len());
        out.insert_range(..);
        for oi in objs.ones() {
            out.intersect_with(&self.rows[oi]);
        }
        out
    }

    /// Objects having every property in `props` (all objects for the empty set).
    pub fn extent_of(&self, props: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.objects.len());
        out.insert_range(..);
        for pi in props.ones() {
            out.intersect_with(&self.cols[pi]);
        }
        out
    }

    pub fn object_bits<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<FixedBitSet, FcaError> {
        let mut bits = FixedBitSet::with_capacity(self.objects.len());
        for id in ids {
            bits.insert(self.object_idx(id.as_ref())?);
        }
        Ok(bits)
    }

    pub fn property_bits<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<FixedBitSet, FcaError> {
        let mut bits = FixedBitSet::with_capacity(self.properties.len());
        for id in ids {
            bits.insert(self.property_idx(id.as_ref())?);
        }
        Ok(bits)
    }

    pub fn object_names(&self, bits: &FixedBitSet) -> BTreeSet<String> {
        bits.ones().map(|i| self.objects[i].clone()).collect()
    }

    pub fn property_names(&self, bits: &FixedBitSet) -> BTreeSet<String> {
        bits.ones().map(|i| self.properties[i].clone()).collect()
    }

    /// Derivation of an object set: the properties common to all of them.
    pub fn prime_props<S: AsRef<str>>(&self, objs: impl IntoIterator<Item = S>) -> Result<BTreeSet<String>, FcaError> {
        let bits = self.object_bits(objs)?;
        Ok(self.property_names(&self.intent_of(&bits)))
    }

    /// Derivation of a property set: the objects having all of them.
    pub fn prime_objects<S: AsRef<str>>(
        &self,
        props: impl IntoIterator<Item = S>,
    ) -> Result<BTreeSet<String>, FcaError> {
        let bits = self.property_bits(props)?;
        Ok(self.object_names(&self.extent_of(&bits)))
    }
}

fn index_of(ids: &[String]) -> Result<HashMap<String, usize>, FcaError> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(FcaError::DuplicateId(id.clone()));
        }
    }
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn overload() -> FormalContext {
        FormalContext::new(
            vec!["test(int)".into(), "test(int,int)".into()],
            vec!["a".into(), "b".into()],
            [("test(int)", "a"), ("test(int,int)", "a"), ("test(int,int)", "b")],
        )
        .unwrap()
    }

    #[test]
    fn prime_props_examples() {
        let ctx = overload();
        assert_eq!(ctx.prime_props(["test(int)", "test(int,int)"]).unwrap(), set(&["a"]));
        assert_eq!(ctx.prime_props(Vec::<&str>::new()).unwrap(), set(&["a", "b"]));
        assert_eq!(ctx.prime_props(["test(int,int)"]).unwrap(), set(&["a", "b"]));
    }

    #[test]
    fn prime_objects_examples() {
        let ctx = overload();
        assert_eq!(ctx.prime_objects(["a"]).unwrap(), set(&["test(int)", "test(int,int)"]));
        assert_eq!(ctx.prime_objects(["a", "b"]).unwrap(), set(&["test(int,int)"]));
        assert_eq!(ctx.prime_objects(Vec::<&str>::new()).unwrap(), set(&["test(int)", "test(int,int)"]));
    }

    #[test]
    fn unknown_and_duplicate_ids() {
        let ctx = overload();
        assert_eq!(ctx.prime_props(["nope"]), Err(FcaError::UnknownId("nope".into())));
        assert_eq!(ctx.prime_objects(["a", "zz"]), Err(FcaError::UnknownId("zz".into())));
        let dup = FormalContext::new(vec!["x".into(), "x".into()], vec![], Vec::<(&str, &str)>::new());
        assert_eq!(dup, Err(FcaError::DuplicateId("x".into())));
    }

    #[test]
    fn matrix_dimensions_are_checked() {
        let err = FormalContext::from_matrix(vec!["o".into()], vec!["p".into()], &[vec![true, false]]);
        assert!(matches!(err, Err(FcaError::DimensionMismatch { .. })));
    }

    #[test]
    fn pairs_round_trip() {
        let ctx = overload();
        let pairs: Vec<_> = ctx.pairs().collect();
        assert_eq!(pairs, [("test(int)", "a"), ("test(int,int)", "a"), ("test(int,int)", "b")]);
        assert_eq!(ctx.incidence_count(), 3);
    }
}
