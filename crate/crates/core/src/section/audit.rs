//! Skew-crossing audits and the first return edge table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FirstReturn, SectionError, SectionGraph, VertexKind};
use crate::graphcore::{GraphMap, SpanningTree};
use crate::torus::{CellKind, TrapComplex};
use crate::traintrack::{illegal_turns, is_expanding, is_irreducible, is_train_track};

/// Counts relating skew crossings to illegal turns of the first return.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionAudit {
    pub skew_crossings: usize,
    pub per_skew: Vec<(String, usize)>,
    /// Skew crossings of valence 3 carrying an illegal turn.
    pub skew_valence3_illegal: usize,
    pub illegal_turns: usize,
    /// Illegal turns at valence-3 vertices.
    pub illegal_turns_valence3: usize,
    /// Valence to number of vertices.
    pub valence_profile: BTreeMap<usize, usize>,
    pub vertices: usize,
    pub edges: usize,
    pub rank: usize,
    pub components: usize,
    pub train_track: bool,
    pub irreducible: bool,
    pub expanding: bool,
}

/// Audit a section and its first return.
pub fn section_audit(x: &TrapComplex, s: &SectionGraph, fr: &FirstReturn) -> SectionAudit {
    let g = &s.graph;
    let per_skew: Vec<(String, usize)> = x
        .one_cells
        .iter()
        .zip(&s.crossings)
        .filter(|(c, _)| c.kind == CellKind::Skew)
        .map(|(c, &n)| (c.name.clone(), n))
        .collect();
    let turns = illegal_turns(&fr.map);
    let at = |v: usize| turns.iter().filter(|t| g.init(t.a) == v).count();
    let mut profile = BTreeMap::new();
    for v in 0..g.num_vertices() {
        *profile.entry(g.valence(v)).or_insert(0) += 1;
    }
    let skew_valence3_illegal = (0..g.num_vertices())
        .filter(|&v| s.vertices[v].kind == VertexKind::Skew && g.valence(v) == 3 && at(v) > 0)
        .count();
    SectionAudit {
        skew_crossings: per_skew.iter().map(|(_, n)| n).sum(),
        per_skew,
        skew_valence3_illegal,
        illegal_turns: turns.len(),
        illegal_turns_valence3: turns.iter().filter(|t| g.valence(g.init(t.a)) == 3).count(),
        valence_profile: profile,
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        rank: s.rank(),
        components: s.num_components(),
        train_track: is_train_track(&fr.map).is_ok(),
        irreducible: is_irreducible(&fr.map),
        expanding: is_expanding(&fr.map),
    }
}

/// One row of the first return table: `e`, `f(e)` and the image with the
/// tree collapsed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub edge: String,
    pub image: String,
    pub collapsed: String,
}

/// The edge table of a map with a tree collapsed.
pub fn first_return_table(f: &GraphMap, tree: &SpanningTree) -> Result<Vec<TableRow>, SectionError> {
    let g = f.domain();
    let names = tree.basis_names(g);
    Ok((0..g.num_edges())
        .map(|e| {
            let img = f.edge_image(e);
            let collapsed = tree.collapse(g, img).render(&names);
            TableRow { edge: g.edge_name(e).to_string(), image: g.path_string(img), collapsed }
        })
        .collect())
}
