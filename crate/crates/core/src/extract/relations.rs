use std::collections::{BTreeMap, BTreeSet};

use super::{detect_accessors, merge_overrides, Entity, EntityKind, ExtractError, RelationSet};
use crate::java::{signature, ClassModel, Event, EventKind, Hierarchy, MethodDecl, Receiver};

/// Relations of `focus` with inheritance flattened, before override merging.
///
/// Methods whose signature is defined by more than one class along the
/// ancestry keep owner-qualified ids (`A.show()`); every other method is
/// keyed by its erased signature.
pub fn extract_raw_relations(hierarchy: &Hierarchy, focus: &str) -> Result<RelationSet, ExtractError> {
    if hierarchy.class(focus).is_none() {
        return Err(ExtractError::UnknownClass(focus.to_string()));
    }
    let mut x = Extractor::new(hierarchy, focus);
    x.declare_entities();
    x.collect_relations();
    let mut rel = x.out;
    rel.sort_entities();
    Ok(rel)
}

/// Flattened relations of `focus` with override groups merged.
pub fn extract_relations(hierarchy: &Hierarchy, focus: &str) -> Result<RelationSet, ExtractError> {
    let raw = extract_raw_relations(hierarchy, focus)?;
    Ok(merge_overrides(raw, hierarchy))
}

struct Extractor<'h> {
    h: &'h Hierarchy,
    focus: &'h str,
    ancestry: Vec<&'h ClassModel>,
    /// (declaring class, field name) -> attribute id
    attr_ids: BTreeMap<(&'h str, &'h str), String>,
    /// (declaring class, signature) -> method-kind entity id
    method_ids: BTreeMap<(String, String), String>,
    default_ctor: Option<String>,
    out: RelationSet,
}

impl<'h> Extractor<'h> {
    fn new(h: &'h Hierarchy, focus: &'h str) -> Self {
        Extractor {
            h,
            focus,
            ancestry: h.ancestry(focus),
            attr_ids: BTreeMap::new(),
            method_ids: BTreeMap::new(),
            default_ctor: None,
            out: RelationSet { class: focus.to_string(), ..RelationSet::default() },
        }
    }

    fn declare_entities(&mut self) {
        let mut taken = BTreeSet::new();
        for class in &self.ancestry {
            for f in &class.fields {
                let mut id = f.name.clone();
                while taken.contains(&id) {
                    id.push_str("#super");
                }
                taken.insert(id.clone());
                let mut e = Entity::new(&id, EntityKind::Attribute);
                if id != f.name {
                    e.display = format!("{}.{}", class.name, f.name);
                }
                self.out.entities.push(e);
                self.attr_ids.insert((class.name.as_str(), f.name.as_str()), id);
            }
        }

        let mut sig_owners: BTreeMap<String, usize> = BTreeMap::new();
        for class in &self.ancestry {
            for m in class.plain_methods() {
                *sig_owners.entry(m.signature()).or_default() += 1;
            }
        }
        for class in &self.ancestry {
            for m in &class.methods {
                let sig = m.signature();
                let (id, kind) = if m.is_constructor {
                    (sig.clone(), EntityKind::Constructor)
                } else if sig_owners[&sig] > 1 {
                    (format!("{}.{}", class.name, sig), EntityKind::Method)
                } else {
                    (sig.clone(), EntityKind::Method)
                };
                self.out.entities.push(Entity::new(&id, kind));
                self.method_ids.insert((class.name.clone(), sig), id);
            }
        }

        let mut tries = Vec::new();
        for class in &self.ancestry {
            for m in &class.methods {
                let id = self.method_id(&class.name, m);
                for t in 0..m.try_blocks.len() {
                    tries.push(Entity::new(self.try_id(id, &class.name, m, t), EntityKind::TryCatchBlock));
                }
            }
        }
        self.out.entities.extend(tries);
    }

    fn method_id(&self, owner: &str, m: &MethodDecl) -> &str {
        &self.method_ids[&(owner.to_string(), m.signature())]
    }

    /// `name.tryN`; the signature replaces the name when it is overloaded.
    fn try_id(&self, method_id: &str, owner: &str, m: &MethodDecl, t: usize) -> String {
        let label = if self.ancestry.iter().flat_map(|c| &c.methods).filter(|o| o.name == m.name).count() > 1 {
            m.signature()
        } else {
            m.name.clone()
        };
        let qualified = method_id.starts_with(&format!("{owner}.")) && !m.is_constructor;
        let base = if qualified { format!("{owner}.{label}") } else { label };
        format!("{base}.{}", m.try_blocks[t].id)
    }

    fn collect_relations(&mut self) {
        let ancestry = self.ancestry.clone();
        let accessors_by_owner = self.accessor_table();
        for class in ancestry {
            for m in &class.methods {
                let mid = self.method_id(&class.name, m).to_string();
                if m.params.iter().any(|p| p.ty == self.focus) {
                    self.depend_on_own_type(&mid, None);
                }
                for (idx, ev) in m.body.iter().enumerate() {
                    let source = match m.owning_try(idx) {
                        Some(t) => self.try_id(&mid, &class.name, m, t),
                        None => mid.clone(),
                    };
                    self.event(&class.name, &source, ev, &accessors_by_owner);
                }
            }
        }
        self.out.calls.retain(|(p, q)| p != q);
    }

    fn accessor_table(&self) -> BTreeMap<(String, String), (String, String)> {
        // (owner, signature) -> (owner of the field, field name)
        let mut table = BTreeMap::new();
        for class in &self.ancestry {
            for (sig, acc) in detect_accessors(class) {
                if let Some(f) = self.h.lookup_field(&class.name, &acc.field) {
                    table.insert((class.name.clone(), sig), (f.owner.to_string(), f.decl.name.clone()));
                }
            }
        }
        table
    }

    fn event(
        &mut self,
        class: &str,
        source: &str,
        ev: &Event,
        accessors: &BTreeMap<(String, String), (String, String)>,
    ) {
        let from = if ev.receiver == Receiver::Super { self.h.parent(class) } else { Some(class) };
        match ev.kind {
            EventKind::FieldRead | EventKind::FieldWrite => {
                let Some(field) = from.and_then(|f| self.h.lookup_field(f, &ev.target)) else { return };
                if let Some(attr) = self.attr_ids.get(&(field.owner, field.decl.name.as_str())) {
                    self.out.uses.insert((source.to_string(), attr.clone()));
                }
            }
            EventKind::SelfCall => {
                let Some(from) = from else { return };
                for callee in self.h.lookup_methods(from, &ev.target, &ev.arg_types) {
                    let key = (callee.owner.to_string(), callee.decl.signature());
                    if let Some(target) = self.method_ids.get(&key) {
                        self.out.calls.insert((source.to_string(), target.clone()));
                    }
                    if let Some((owner, field)) = accessors.get(&key) {
                        if let Some(attr) = self.attr_ids.get(&(owner.as_str(), field.as_str())) {
                            self.out.uses.insert((source.to_string(), attr.clone()));
                        }
                    }
                }
            }
            EventKind::CtorCall => match ev.receiver {
                Receiver::Implicit if ev.target == self.focus => {
                    self.depend_on_own_type(source, Some(&ev.arg_types));
                }
                Receiver::Implicit => {}
                Receiver::This | Receiver::Super => {
                    let target_class = if ev.receiver == Receiver::This { Some(class) } else { self.h.parent(class) };
                    let Some(target_class) = target_class else { return };
                    for c in self.h.lookup_constructors(target_class, &ev.arg_types) {
                        if let Some(target) = self.method_ids.get(&(target_class.to_string(), c.signature())) {
                            self.out.calls.insert((source.to_string(), target.clone()));
                        }
                    }
                }
            },
            EventKind::ParamRead | EventKind::LocalOp => {}
        }
    }

    /// Calls edges from `source` to the focus constructors matching `args`
    /// (all of them for a parameter of the focus type).
    fn depend_on_own_type(&mut self, source: &str, args: Option<&[Option<String>]>) {
        let h = self.h;
        let focus = self.focus;
        let class = h.class(focus).expect("focus class checked on entry");
        let mut targets: Vec<String> = match args {
            Some(args) => h.lookup_constructors(focus, args).iter().map(|c| c.signature()).collect(),
            None => Vec::new(),
        };
        if targets.is_empty() {
            targets = class.constructors().map(|c| c.signature()).collect();
        }
        if targets.is_empty() {
            targets.push(self.default_constructor());
        }
        for t in targets {
            let id = self.method_ids.get(&(focus.to_string(), t.clone())).cloned().unwrap_or(t);
            self.out.calls.insert((source.to_string(), id));
        }
        self.out.self_type_dependents.insert(source.to_string());
    }

    fn default_constructor(&mut self) -> String {
        if let Some(id) = &self.default_ctor {
            return id.clone();
        }
        let id = signature(self.focus, []);
        self.out.entities.push(Entity::new(&id, EntityKind::Constructor));
        self.default_ctor = Some(id.clone());
        id
    }
}
