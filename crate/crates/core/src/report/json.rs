use serde_json::{json, Value};

use crate::views::XRayReport;

pub const TOOL: &str = "xray";

/// The report as a JSON value; object keys are sorted.
pub fn report_value(report: &XRayReport) -> Value {
    let rel = &report.relations;
    let lattice = &report.lattice;
    let concepts: Vec<Value> = lattice
        .concepts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "index": i,
                "extent": c.extent,
                "intent": c.intent,
                "proper": c.is_proper(),
                "top": lattice.top() == Some(i),
                "bottom": lattice.bottom() == Some(i),
                "children": lattice.children(i).collect::<Vec<_>>(),
            })
        })
        .collect();
    let uses: Vec<[&str; 2]> = rel.uses.iter().map(|(m, a)| [m.as_str(), a.as_str()]).collect();
    let calls: Vec<[&str; 2]> = rel.calls.iter().map(|(p, q)| [p.as_str(), q.as_str()]).collect();

    json!({
        "class": report.class,
        "entities": rel.entities,
        "relations": { "uses": uses, "calls": calls },
        "concepts": concepts,
        "dependencies": report.dependencies,
        "views": report.views,
        "meta": {
            "tool": TOOL,
            "version": env!("CARGO_PKG_VERSION"),
            "context_mode": report.context_mode,
            "notes": report.notes,
            "summary": report.summary(),
        },
    })
}

/// Pretty-printed JSON followed by a newline.
pub fn emit_json(report: &XRayReport) -> String {
    let mut out = serde_json::to_string_pretty(&report_value(report)).expect("report values serialize");
    out.push('\n');
    out
}
