//! Graphviz DOT rendering of a circuit.
//!
//! Gates are boxes labeled with their kind and stalk dimension, internal
//! wires are solid arrows, external connections are dashed stubs, and edges
//! supporting a degree-1 certificate are highlighted.

use crate::netlist::{Endpoint, Netlist};

/// Emits a DOT digraph. `highlight` lists edge ids to draw in red (the
/// feedback support, typically).
pub fn emit_dot(nl: &Netlist, highlight: &[String]) -> String {
    let mut out = String::from("digraph circuit {\n");
    if !nl.gates.is_empty() {
        out.push_str("  rankdir=LR;\n  node [shape=box];\n");
    }
    for g in &nl.gates {
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\\n{} dim={}\"];\n",
            g.id,
            g.id,
            g.kind,
            g.stalk_dim()
        ));
    }
    for e in &nl.edges {
        let hot = highlight.contains(&e.id);
        let style = |base: &str| {
            if hot {
                format!("{base}, color=red, penwidth=2.0")
            } else {
                base.to_string()
            }
        };
        match (e.source, e.sink) {
            (Endpoint::Pin { gate: s, .. }, Endpoint::Pin { gate: d, .. }) => {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\", {}];\n",
                    nl.gates[s].id,
                    nl.gates[d].id,
                    e.id,
                    style("style=solid")
                ));
            }
            (Endpoint::External, Endpoint::Pin { gate: d, .. }) => {
                out.push_str(&format!("  \"__ext_{}\" [shape=plaintext, label=\"{}\"];\n", e.id, e.id));
                out.push_str(&format!(
                    "  \"__ext_{}\" -> \"{}\" [{}];\n",
                    e.id,
                    nl.gates[d].id,
                    style("style=dashed")
                ));
            }
            (Endpoint::Pin { gate: s, .. }, Endpoint::External) => {
                out.push_str(&format!("  \"__ext_{}\" [shape=plaintext, label=\"{}\"];\n", e.id, e.id));
                out.push_str(&format!(
                    "  \"{}\" -> \"__ext_{}\" [{}];\n",
                    nl.gates[s].id,
                    e.id,
                    style("style=dashed")
                ));
            }
            (Endpoint::External, Endpoint::External) => unreachable!("validated netlists have no such edge"),
        }
    }
    out.push_str("}\n");
    out
}
