// SPDX-License-Identifier: Apache-2.0

//! Graphviz export with a stable node order.

use super::{BoxKind, Diagram, Port};

fn node(p: Port) -> String {
    match p {
        Port::Input(k) => format!("in{k}"),
        Port::Output(k) => format!("out{k}"),
        Port::BoxIn(b, _) | Port::BoxOut(b, _) => format!("b{b}"),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders `d` as a DOT digraph, top to bottom. `title` names the graph.
pub fn to_dot(d: &Diagram, title: &str) -> String {
    let mut out = format!("digraph \"{}\" {{\n  rankdir=TB;\n", escape(title));
    for (k, l) in d.dom().iter().enumerate() {
        out.push_str(&format!(
            "  in{k} [shape=plaintext, label=\"{}\"];\n",
            escape(&l.0)
        ));
    }
    for (i, b) in d.boxes().iter().enumerate() {
        let (shape, label) = match b.kind {
            BoxKind::Generic => (
                "box",
                if b.dagger {
                    format!("{}†", b.name)
                } else {
                    b.name.clone()
                },
            ),
            BoxKind::Spider => ("circle", String::new()),
            BoxKind::Cap => ("point", String::new()),
            BoxKind::Cup => ("point", String::new()),
            BoxKind::Swap => ("diamond", "×".to_string()),
            BoxKind::Discard => ("invtriangle", "⏚".to_string()),
            BoxKind::Negation => ("box", "¬".to_string()),
        };
        let style = if b.kind == BoxKind::Spider {
            ", style=filled, fillcolor=black, width=0.15"
        } else {
            ""
        };
        out.push_str(&format!(
            "  b{i} [shape={shape}, label=\"{}\"{style}];\n",
            escape(&label)
        ));
    }
    for (k, l) in d.cod().iter().enumerate() {
        out.push_str(&format!(
            "  out{k} [shape=plaintext, label=\"{}\"];\n",
            escape(&l.0)
        ));
    }
    for w in d.wires() {
        let label = d.port_label(w.src).map(|l| l.0.clone()).unwrap_or_default();
        out.push_str(&format!(
            "  {} -> {} [label=\"{}\", arrowhead=none];\n",
            node(w.src),
            node(w.tgt),
            escape(&label)
        ));
    }
    out.push_str("}\n");
    out
}
