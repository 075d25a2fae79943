use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::fca::Lattice;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DotOptions {
    /// Label each node only with the objects and properties it introduces.
    pub reduced_labels: bool,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn braces<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    let items: Vec<&str> = items.into_iter().collect();
    format!("{{{}}}", items.join(", "))
}

/// The lattice's Hasse diagram as a Graphviz digraph, top concept first.
pub fn emit_dot(lattice: &Lattice, class: &str, options: DotOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(&format!("{class} concept lattice")));
    out.push_str("  rankdir=TB;\n  node [shape=box, fontname=\"Helvetica\"];\n");
    for (i, c) in lattice.concepts.iter().enumerate() {
        let (extent, intent) = if options.reduced_labels {
            (braces(lattice.own_objects(i)), braces(lattice.own_properties(i)))
        } else {
            (braces(c.extent.iter().map(String::as_str)), braces(c.intent.iter().map(String::as_str)))
        };
        let style = if c.is_proper() { "" } else { ", style=dashed" };
        let _ = writeln!(out, "  c{i} [label=\"{}\\n{}\"{style}];", escape(&extent), escape(&intent));
    }
    for (p, c) in &lattice.covers {
        let _ = writeln!(out, "  c{p} -> c{c};");
    }
    let mut ranks: BTreeMap<std::cmp::Reverse<usize>, Vec<usize>> = BTreeMap::new();
    for (i, c) in lattice.concepts.iter().enumerate() {
        ranks.entry(std::cmp::Reverse(c.extent.len())).or_default().push(i);
    }
    for nodes in ranks.values().filter(|n| n.len() > 1) {
        let names: Vec<String> = nodes.iter().map(|i| format!("c{i}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", names.join("; "));
    }
    out.push_str("}\n");
    out
}
