//! Exchange formats for external automorphism tools.
//!
//! `dot` renders colors as labels and draws `E2` edges dashed. The colored
//! edge list is DIMACS-like: a `p edge N M` header, one `n <node> <color>`
//! line per node, one `e <u> <v>` line per edge, 1-based. Tools with a
//! single edge sort still see the two-sorted structure because every `E2`
//! edge is split through a subdivision node of a reserved color (one above
//! the largest color in use). Output is byte-deterministic for canonical
//! input formulas.

use std::fmt::Write as _;

use super::{DetectionGraph, NodeLabel};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphFormat {
    Dot,
    ColoredEdgeList,
}

pub fn export_graph(dg: &DetectionGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Dot => to_dot(dg),
        GraphFormat::ColoredEdgeList => to_edge_list(dg),
    }
}

fn node_label(label: &NodeLabel) -> String {
    match label {
        NodeLabel::Literal { literal, depth: None } => literal.to_string(),
        NodeLabel::Literal { literal, depth: Some(d) } => format!("{literal}@{d}"),
        NodeLabel::Clause { id } => format!("C({},{},{})", id.depth, id.color, id.index),
    }
}

fn to_dot(dg: &DetectionGraph) -> String {
    let mut out = String::from("graph G {\n");
    for (v, label) in dg.labels.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{v} [label=\"{}\", color={}];",
            node_label(label),
            dg.graph.colors[v]
        );
    }
    for (a, b) in &dg.graph.e1 {
        let _ = writeln!(out, "  n{a} -- n{b};");
    }
    for (a, b) in &dg.graph.e2 {
        let _ = writeln!(out, "  n{a} -- n{b} [style=dashed];");
    }
    out.push_str("}\n");
    out
}

fn to_edge_list(dg: &DetectionGraph) -> String {
    let g = &dg.graph;
    let real = g.node_count();
    let nodes = real + g.e2.len();
    let edges = g.e1.len() + 2 * g.e2.len();
    let reserved = g.colors.iter().max().map(|c| c + 1).unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "p edge {nodes} {edges}");
    for (v, c) in g.colors.iter().enumerate() {
        let _ = writeln!(out, "n {} {}", v + 1, c);
    }
    for i in 0..g.e2.len() {
        let _ = writeln!(out, "n {} {}", real + i + 1, reserved);
    }
    for (a, b) in &g.e1 {
        let _ = writeln!(out, "e {} {}", a + 1, b + 1);
    }
    for (i, (a, b)) in g.e2.iter().enumerate() {
        let mid = real + i + 1;
        let _ = writeln!(out, "e {} {mid}", a + 1);
        let _ = writeln!(out, "e {mid} {}", b + 1);
    }
    out
}
