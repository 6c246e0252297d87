//! Text renderings of triples, lattices and rules. Every function is a pure
//! function of its inputs, so identical inputs give byte-identical output.

use serde::Serialize;

use crate::bitset::IndexSet;
use crate::concepts::{AgroTriple, TripleSet};
use crate::cube::{Axis, AxisLabels};
use crate::io::csv_line;
use crate::lattice::SpatioTemporalLattice;
use crate::rules::{Fraction, RuleSet};

pub fn member_names(labels: &AxisLabels, axis: Axis, set: &IndexSet) -> Vec<String> {
    set.iter().map(|i| labels.axis(axis)[i].clone()).collect()
}

fn joined(labels: &AxisLabels, axis: Axis, set: &IndexSet, sep: &str) -> String {
    member_names(labels, axis, set).join(sep)
}

/// `extent;intent;times` with `|`-joined member names.
pub fn triple_row(labels: &AxisLabels, t: &AgroTriple) -> String {
    format!(
        "{};{};{}",
        joined(labels, Axis::Location, &t.extent, "|"),
        joined(labels, Axis::Dimension, &t.intent, "|"),
        joined(labels, Axis::Timestamp, &t.times, "|"),
    )
}

/// One line per triple, canonical order.
pub fn triples_file(labels: &AxisLabels, triples: &TripleSet) -> String {
    let mut out = String::new();
    for t in triples {
        out.push_str(&triple_row(labels, t));
        out.push('\n');
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn braced(labels: &AxisLabels, axis: Axis, set: &IndexSet) -> String {
    format!("{{{}}}", joined(labels, axis, set, ","))
}

/// Graphviz digraph: one node per triple, one `child -> parent` edge per
/// covering pair.
pub fn lattice_dot(labels: &AxisLabels, lattice: &SpatioTemporalLattice<AgroTriple>) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, t) in lattice.nodes().iter().enumerate() {
        let label = format!(
            "{} | {} | {}",
            braced(labels, Axis::Location, &t.extent),
            braced(labels, Axis::Dimension, &t.intent),
            braced(labels, Axis::Timestamp, &t.times),
        );
        let style = if Some(i) == lattice.artificial_top() || Some(i) == lattice.artificial_bottom()
        {
            ", style=dashed"
        } else {
            ""
        };
        out.push_str(&format!(
            "  n{i} [label=\"{}\"{style}];\n",
            dot_escape(&label)
        ));
    }
    for &(c, p) in lattice.hasse_edges() {
        out.push_str(&format!("  n{c} -> n{p};\n"));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct JsonNode {
    id: usize,
    extent: Vec<String>,
    intent: Vec<String>,
    times: Vec<String>,
    artificial: bool,
}

#[derive(Serialize)]
struct JsonEdge {
    child: usize,
    parent: usize,
}

#[derive(Serialize)]
struct JsonLattice {
    nodes: Vec<JsonNode>,
    hasse_edges: Vec<JsonEdge>,
}

pub fn lattice_json(labels: &AxisLabels, lattice: &SpatioTemporalLattice<AgroTriple>) -> String {
    let doc = JsonLattice {
        nodes: lattice
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, t)| JsonNode {
                id,
                extent: member_names(labels, Axis::Location, &t.extent),
                intent: member_names(labels, Axis::Dimension, &t.intent),
                times: member_names(labels, Axis::Timestamp, &t.times),
                artificial: Some(id) == lattice.artificial_top()
                    || Some(id) == lattice.artificial_bottom(),
            })
            .collect(),
        hasse_edges: lattice
            .hasse_edges()
            .iter()
            .map(|&(child, parent)| JsonEdge { child, parent })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("lattice json serializes");
    s.push('\n');
    s
}

/// `p/q (d.dddddd)`.
pub fn ratio_field(f: &Fraction) -> String {
    format!("{} ({})", f, f.to_decimal(6))
}

/// Header `antecedent,consequent,timestamps,support,confidence`.
pub fn rules_csv(labels: &AxisLabels, rules: &RuleSet) -> String {
    let mut out = String::from("antecedent,consequent,timestamps,support,confidence\n");
    for r in rules {
        out.push_str(&csv_line(&[
            &joined(labels, Axis::Dimension, &r.items.antecedent, "|"),
            &joined(labels, Axis::Dimension, &r.items.consequent, "|"),
            &joined(labels, Axis::Timestamp, &r.items.times, "|"),
            &ratio_field(&r.support),
            &ratio_field(&r.confidence),
        ]));
    }
    out
}
