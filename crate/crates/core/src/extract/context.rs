use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::RelationSet;
use crate::fca::FormalContext;

/// Which relation becomes the incidence of a formal context.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextMode {
    /// Methods × attributes.
    #[default]
    Uses,
    /// Methods × methods.
    Calls,
    /// Methods × (attributes ∪ methods).
    Combined,
}

impl ContextMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ContextMode::Uses => "uses",
            ContextMode::Calls => "calls",
            ContextMode::Combined => "combined",
        }
    }
}

impl fmt::Display for ContextMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ContextMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uses" => Ok(ContextMode::Uses),
            "calls" => Ok(ContextMode::Calls),
            "combined" => Ok(ContextMode::Combined),
            other => Err(format!("unknown context mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextWarning {
    EmptyContext(ContextMode),
}

impl fmt::Display for ContextWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextWarning::EmptyContext(mode) => write!(f, "the {mode} context has no incidences"),
        }
    }
}

/// Formal context over `rel`; ids are ordered lexicographically.
pub fn build_context(rel: &RelationSet, mode: ContextMode) -> (FormalContext, Option<ContextWarning>) {
    let methods: Vec<String> = rel.methods().map(str::to_string).collect();
    let mut properties: Vec<String> = match mode {
        ContextMode::Uses => rel.attributes().map(str::to_string).collect(),
        ContextMode::Calls => methods.clone(),
        ContextMode::Combined => rel.attributes().chain(rel.methods()).map(str::to_string).collect(),
    };
    properties.sort();
    let uses = rel.uses.iter().filter(|_| mode != ContextMode::Calls);
    let calls = rel.calls.iter().filter(|_| mode != ContextMode::Uses);
    let ctx = FormalContext::new(methods, properties, uses.chain(calls).map(|(o, p)| (o.as_str(), p.as_str())))
        .expect("relation endpoints are entities of the set");
    let warning = ctx.is_empty().then_some(ContextWarning::EmptyContext(mode));
    (ctx, warning)
}
