//! Graphviz rendering with exact curvature labels on edges. The layout is
//! circo with vertices emitted in outer-walk order, so outerplanar graphs
//! come out with their boundary on the circle and chords inside it.

use crate::curvature::kappa_adjacent;
use crate::graph::{encode_graph6, Graph};
use crate::outerplanar::embed_outerplanar;
use crate::Result;
use std::fmt::Write as _;

/// Graph name safe for a DOT identifier: alphanumerics and underscores.
fn sanitize(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if out.is_empty() || out.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        out.insert(0, 'g');
    }
    out
}

/// File name for the index-th member of order n in a batch: "n06_001.dot".
pub fn dot_filename(n: usize, index: usize) -> String {
    format!("n{n:02}_{index:03}.dot")
}

/// Renders a connected graph as a DOT document. Every edge is labeled with
/// its exact curvature; the graph6 code rides along in a comment.
pub fn to_dot(g: &Graph, name: &str) -> Result<String> {
    let mut order: Vec<usize> = Vec::with_capacity(g.n());
    if let Ok(emb) = embed_outerplanar(g) {
        for &v in &emb.outer_walk {
            if !order.contains(&v) {
                order.push(v);
            }
        }
    }
    for v in 0..g.n() {
        if !order.contains(&v) {
            order.push(v);
        }
    }
    let mut out = String::new();
    writeln!(out, "// graph6: {}", encode_graph6(g)?).unwrap();
    writeln!(out, "graph {} {{", sanitize(name)).unwrap();
    writeln!(out, "  layout=circo;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in &order {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v) in g.edges() {
        let kappa = kappa_adjacent(g, u, v)?;
        writeln!(out, "  {u} -- {v} [label=\"{kappa}\"];").unwrap();
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}
