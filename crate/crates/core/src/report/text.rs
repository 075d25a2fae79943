use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::Section;
use crate::views::{ViewName, XRayReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextOptions {
    pub color: bool,
    pub sections: BTreeSet<Section>,
}

impl Default for TextOptions {
    fn default() -> Self {
        TextOptions { color: false, sections: super::sections(&[]) }
    }
}

struct Painter {
    color: bool,
}

impl Painter {
    fn heading(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[1m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn kind(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[36m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }
}

fn braces<'a>(items: impl IntoIterator<Item = &'a String>) -> String {
    let items: Vec<&str> = items.into_iter().map(String::as_str).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn emit_text(report: &XRayReport, options: &TextOptions) -> String {
    let p = Painter { color: options.color };
    let rel = &report.relations;
    let s = report.summary();
    let mut out = String::new();

    let _ = writeln!(out, "{}", p.heading(&format!("X-Ray of class {}", report.class)));
    let _ = writeln!(
        out,
        "{} attributes, {} methods, {} uses, {} calls; {} context",
        s.attribute_count, s.method_count, s.uses_count, s.calls_count, report.context_mode
    );

    out.push('\n');
    let _ = writeln!(out, "{}", p.heading("Entities"));
    let width = rel.entities.iter().map(|e| e.id.len()).max().unwrap_or(0);
    for e in &rel.entities {
        let _ = write!(out, "  {:width$}  {}", e.id, p.kind(&format!("{:?}", e.kind)));
        if !e.members.is_empty() {
            let _ = write!(out, "  [{}]", e.members.join(", "));
        } else if e.display != e.id {
            let _ = write!(out, "  ({})", e.display);
        }
        out.push('\n');
    }

    if options.sections.contains(&Section::Concepts) {
        out.push('\n');
        let _ = writeln!(
            out,
            "{}",
            p.heading(&format!("Concepts ({} proper of {})", s.proper_concept_count, s.concept_count))
        );
        for (i, c) in report.lattice.concepts.iter().enumerate() {
            let mut tags = Vec::new();
            if report.lattice.top() == Some(i) {
                tags.push("top");
            }
            if report.lattice.bottom() == Some(i) {
                tags.push("bottom");
            }
            if !c.is_proper() {
                tags.push("improper");
            }
            let tags = if tags.is_empty() { String::new() } else { format!("  [{}]", tags.join(", ")) };
            let _ = writeln!(out, "  #{i} {} x {}{tags}", braces(&c.extent), braces(&c.intent));
        }
    }

    if options.sections.contains(&Section::Deps) {
        out.push('\n');
        let _ = writeln!(out, "{}", p.heading(&format!("Dependencies ({})", report.dependencies.len())));
        for d in &report.dependencies {
            let _ = writeln!(
                out,
                "  {} {} {}: {}",
                braces(&d.sources),
                d.relation,
                braces(&d.targets),
                p.kind(&d.kind.to_string())
            );
            for w in &d.witnesses {
                let _ = writeln!(out, "      {} -> {} -> {}", w.source, w.via, w.target);
            }
        }
    }

    for (section, name) in [
        (Section::State, ViewName::StateUsage),
        (Section::Clusters, ViewName::MethodClusters),
        (Section::Skeleton, ViewName::BehaviourSkeleton),
    ] {
        let Some(view) = report.view(name).filter(|_| options.sections.contains(&section)) else { continue };
        out.push('\n');
        let _ = writeln!(out, "{}", p.heading(&name.to_string()));
        for g in &view.groups {
            let members = if g.members.is_empty() { "-".to_string() } else { g.members.join(", ") };
            let _ = writeln!(out, "  {}: {members}", g.label);
        }
        for n in &view.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }

    if !report.notes.is_empty() {
        out.push('\n');
        let _ = writeln!(out, "{}", p.heading("Notes"));
        for n in &report.notes {
            let _ = writeln!(out, "  {n}");
        }
    }
    out
}
