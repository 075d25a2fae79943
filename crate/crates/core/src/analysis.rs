//! The whole pipeline: sources in, report out.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::classify::{classify_all, ClassifyOptions};
use crate::extract::{build_context, extract_relations, ContextMode, ExtractError};
use crate::fca::concept_lattice;
use crate::java::{parse_source, resolve_hierarchy, ClassModel, FrontendError, ResolveOptions, SourceUnit};
use crate::views::{
    behaviour_skeleton, compose_report, method_clusters, state_usage, ReportError, SkeletonOptions, XRayReport,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Self {
        SourceFile { path: path.into(), text: text.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    /// Class to analyse; defaults to the single most-derived non-driver class.
    pub focus: Option<String>,
    pub mode: ContextMode,
    pub include_dead: bool,
    pub allow_external_super: bool,
    pub core_threshold: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            focus: None,
            mode: ContextMode::Uses,
            include_dead: false,
            allow_external_super: false,
            core_threshold: SkeletonOptions::default().core_threshold,
        }
    }
}

/// A source position, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub path: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.path, self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("{}{error}", location.as_ref().map(|l| format!("{l}: ")).unwrap_or_default())]
    Frontend { location: Option<Location>, error: FrontendError },
    #[error("no class to analyse")]
    NoFocus,
    #[error("several classes could be analysed ({}); pick one with --class", .0.join(", "))]
    AmbiguousFocus(Vec<String>),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

impl AnalysisError {
    /// Errors caused by how the tool was invoked rather than by the sources.
    pub fn is_usage_error(&self) -> bool {
        matches!(self, AnalysisError::NoFocus | AnalysisError::AmbiguousFocus(_) | AnalysisError::Extract(_))
    }
}

fn located(unit_path: &str, text: &str, error: FrontendError) -> AnalysisError {
    let location = error.offset().map(|o| {
        let (line, column) = crate::java::line_col(text, o);
        Location { path: unit_path.to_string(), line, column }
    });
    AnalysisError::Frontend { location, error }
}

/// Points hierarchy errors at the declaration of the class they name.
fn locate_resolve_error(units: &[SourceUnit], error: FrontendError) -> AnalysisError {
    let class = match &error {
        FrontendError::Cycle { classes } => classes.first(),
        FrontendError::UnknownSuperclass { class, .. } => Some(class),
        _ => None,
    };
    let location = class.and_then(|name| {
        units.iter().find_map(|u| {
            u.class(name).map(|c| {
                let (line, column) = u.line_col(c.span.start);
                Location { path: u.path.clone(), line, column }
            })
        })
    });
    AnalysisError::Frontend { location, error }
}

pub fn parse_sources(sources: &[SourceFile]) -> Result<Vec<SourceUnit>, AnalysisError> {
    let mut units = Vec::with_capacity(sources.len());
    let mut seen = BTreeSet::new();
    for src in sources {
        let unit = parse_source(&src.path, &src.text).map_err(|e| located(&src.path, &src.text, e))?;
        for c in &unit.classes {
            if !seen.insert(c.name.clone()) {
                let e = FrontendError::DuplicateClass { name: c.name.clone(), span: c.span };
                return Err(located(&src.path, &src.text, e));
            }
        }
        units.push(unit);
    }
    Ok(units)
}

/// The class to analyse when none is named: the only non-driver class that
/// no other non-driver class extends.
pub fn default_focus<'a>(classes: impl IntoIterator<Item = &'a ClassModel>) -> Result<String, AnalysisError> {
    let candidates: Vec<&ClassModel> = classes.into_iter().filter(|c| !c.is_driver()).collect();
    let extended: BTreeSet<&str> = candidates.iter().filter_map(|c| c.superclass.as_deref()).collect();
    let leaves: Vec<&str> = candidates.iter().map(|c| c.name.as_str()).filter(|n| !extended.contains(n)).collect();
    match leaves.as_slice() {
        [] => Err(AnalysisError::NoFocus),
        [one] => Ok(one.to_string()),
        many => Err(AnalysisError::AmbiguousFocus(many.iter().map(|s| s.to_string()).collect())),
    }
}

pub fn analyze(sources: &[SourceFile], options: &AnalysisOptions) -> Result<XRayReport, AnalysisError> {
    let units = parse_sources(sources)?;
    let classes: Vec<&ClassModel> = units.iter().flat_map(|u| &u.classes).collect();
    let resolve = ResolveOptions { allow_external_super: options.allow_external_super };
    let hierarchy = resolve_hierarchy(classes.iter().copied(), resolve).map_err(|e| locate_resolve_error(&units, e))?;
    let focus = match &options.focus {
        Some(f) => f.clone(),
        None => default_focus(classes.iter().copied())?,
    };

    let relations = extract_relations(&hierarchy, &focus)?;
    let mut notes = Vec::new();

    let (context, warning) = build_context(&relations, options.mode);
    notes.extend(warning.map(|w| w.to_string()));
    let lattice = concept_lattice(&context);
    let uses_lattice = if options.mode == ContextMode::Uses {
        lattice.clone()
    } else {
        concept_lattice(&build_context(&relations, ContextMode::Uses).0)
    };

    let dependencies = classify_all(&relations, ClassifyOptions { include_dead: options.include_dead });
    let views = vec![
        state_usage(&relations, &uses_lattice),
        method_clusters(&relations),
        behaviour_skeleton(&relations, SkeletonOptions { core_threshold: options.core_threshold }),
    ];

    if !relations.self_type_dependents.is_empty() {
        let who: Vec<&str> = relations.self_type_dependents.iter().map(String::as_str).collect();
        notes.push(format!(
            "{{{}}} depend on class {focus} as a whole: they take or build {focus} values, \
             so each gets a calls edge to the {focus} constructors",
            who.join(", ")
        ));
    }
    for ext in
        hierarchy.ancestry(&focus).iter().filter_map(|c| c.superclass.as_deref()).filter(|s| hierarchy.is_external(s))
    {
        notes.push(format!("superclass {ext} is outside the input and treated as having no members"));
    }

    Ok(compose_report(relations, options.mode, context, lattice, dependencies, views, notes)?)
}
