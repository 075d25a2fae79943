//! Report serialization: JSON, Graphviz DOT and plain text.

mod dot;
mod json;
mod text;

pub use dot::{emit_dot, DotOptions};
pub use json::{emit_json, report_value};
pub use text::{emit_text, TextOptions};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Output sections a caller can ask for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Section {
    State,
    Clusters,
    Skeleton,
    Deps,
    Concepts,
}

impl Section {
    pub const ALL: [Section; 5] =
        [Section::State, Section::Clusters, Section::Skeleton, Section::Deps, Section::Concepts];

    pub fn as_str(self) -> &'static str {
        match self {
            Section::State => "state",
            Section::Clusters => "clusters",
            Section::Skeleton => "skeleton",
            Section::Deps => "deps",
            Section::Concepts => "concepts",
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Section {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Section::ALL.into_iter().find(|x| x.as_str() == s).ok_or_else(|| format!("unknown view `{s}`"))
    }
}

/// Expands an empty selection to every section.
pub fn sections(selected: &[Section]) -> BTreeSet<Section> {
    if selected.is_empty() {
        Section::ALL.into_iter().collect()
    } else {
        selected.iter().copied().collect()
    }
}
