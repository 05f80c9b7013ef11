//! Graphviz export of a completed (or step-limited) table.
//!
//! One cluster per table entry with the entry goal as its label; the root
//! node is drawn bold, solution nodes filled. Parent-child resolution edges
//! stay inside their cluster. Table tags become inter-cluster edges to the
//! target entry's root: solid when the tag created the entry, dashed when
//! it found an existing entry by subsumption. Node ids follow creation
//! order, so repeated runs export identical text.

use std::fmt::Write;

use crate::engine::{Engine, Tag};
use crate::pretty;

pub fn export_dot(engine: &Engine) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph lemma_table {{");
    let _ = writeln!(out, "  rankdir=TB;");
    let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
    for entry in engine.entries() {
        let _ = writeln!(out, "  subgraph cluster_{} {{", entry.id.0);
        let _ = writeln!(
            out,
            "    label=\"entry {}: {}\";",
            entry.id.0,
            escape(&pretty::goal(&entry.goal))
        );
        for node in engine.nodes().iter().filter(|n| n.entry == entry.id) {
            let mut attrs = String::new();
            if node.id == entry.root {
                attrs.push_str(", penwidth=2");
            }
            if matches!(node.tag, Some(Tag::Solution)) {
                attrs.push_str(", style=filled, fillcolor=lightgrey");
            }
            let _ = writeln!(
                out,
                "    n{} [label=\"{}\\n{}\"{}];",
                node.id.0,
                escape(&pretty::clause(&node.clause)),
                escape(&tag_text(node.tag.as_ref())),
                attrs
            );
        }
        for node in engine.nodes().iter().filter(|n| n.entry == entry.id) {
            for child in &node.children {
                let _ = writeln!(out, "    n{} -> n{};", node.id.0, child.0);
            }
        }
        let _ = writeln!(out, "  }}");
    }
    for node in engine.nodes() {
        if let Some(Tag::Table { entry, created, .. }) = &node.tag {
            let target = engine.entries()[entry.0].root;
            let style = if *created { "solid" } else { "dashed" };
            let _ = writeln!(
                out,
                "  n{} -> n{} [style={}, constraint=false];",
                node.id.0, target.0, style
            );
        }
    }
    let _ = writeln!(out, "}}");
    out
}

fn tag_text(tag: Option<&Tag>) -> String {
    match tag {
        None => "unprocessed".to_string(),
        Some(Tag::Solution) => "solution".to_string(),
        Some(Tag::Program { selected }) => format!("program(#{selected})"),
        Some(Tag::Table {
            entry,
            cursor,
            created,
            ..
        }) => format!(
            "table(entry {}, {} consumed{})",
            entry.0,
            cursor,
            if *created { ", new" } else { "" }
        ),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
