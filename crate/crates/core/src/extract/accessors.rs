use std::collections::BTreeMap;

use serde::Serialize;

use crate::java::{BodyShape, ClassModel, EventKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessorMode {
    Get,
    Set,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Accessor {
    pub field: String,
    pub mode: AccessorMode,
}

/// Getters (`return f;`) and setters (`f = p;`) of a resolved class, keyed by signature.
pub fn detect_accessors(model: &ClassModel) -> BTreeMap<String, Accessor> {
    let mut out = BTreeMap::new();
    for m in model.plain_methods() {
        let kinds: Vec<(EventKind, &str)> = m.body.iter().map(|e| (e.kind, e.target.as_str())).collect();
        let accessor = match &m.shape {
            BodyShape::ReturnsName(f) if kinds == [(EventKind::FieldRead, f.as_str())] => {
                Some(Accessor { field: f.clone(), mode: AccessorMode::Get })
            }
            BodyShape::AssignsParam { field, param } => {
                let writes = kinds.iter().filter(|k| **k == (EventKind::FieldWrite, field.as_str())).count();
                let rest_is_param = kinds.iter().all(|k| {
                    *k == (EventKind::FieldWrite, field.as_str()) || *k == (EventKind::ParamRead, param.as_str())
                });
                (writes == 1 && rest_is_param).then(|| Accessor { field: field.clone(), mode: AccessorMode::Set })
            }
            _ => None,
        };
        if let Some(a) = accessor {
            out.insert(m.signature(), a);
        }
    }
    out
}
