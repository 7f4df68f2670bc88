//! Finite graphs with an orientation-reversing involution on edges.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GraphError;

/// An oriented edge: an unoriented edge index together with a reversal bit.
///
/// The same type doubles as a free-group letter, where `edge` is the
/// generator index and `rev` marks the inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OEdge {
    pub edge: usize,
    pub rev: bool,
}

impl OEdge {
    /// The forward orientation of edge `edge`.
    pub fn fwd(edge: usize) -> Self {
        OEdge { edge, rev: false }
    }

    /// The reverse orientation of edge `edge`.
    pub fn bwd(edge: usize) -> Self {
        OEdge { edge, rev: true }
    }

    /// The reversal involution `e ↦ ē`.
    pub fn inv(self) -> Self {
        OEdge { edge: self.edge, rev: !self.rev }
    }

    /// Dense index in `0..2n`, forward edges even and reversed edges odd.
    pub fn index(self) -> usize {
        2 * self.edge + usize::from(self.rev)
    }

    /// Inverse of [`OEdge::index`].
    pub fn from_index(i: usize) -> Self {
        OEdge { edge: i / 2, rev: i % 2 == 1 }
    }
}

/// Render an oriented edge name: lowercase single letters become uppercase
/// when reversed, longer names take a trailing apostrophe.
pub fn oriented_name(name: &str, rev: bool) -> String {
    if !rev {
        return name.to_string();
    }
    if name.chars().count() == 1 {
        name.to_uppercase()
    } else {
        format!("{name}'")
    }
}

/// A finite graph. Vertices and edges are dense indices with names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    ends: Vec<(usize, usize)>,
}

impl Graph {
    /// Build a graph from vertex names and `(name, init, term)` edge triples.
    ///
    /// Names must be unique. Standing assumptions (connected, no valence-one
    /// vertices) are checked separately by [`Graph::check_standing`] because
    /// intermediate graphs of a fold sequence need not satisfy them.
    pub fn new(vertex_names: Vec<String>, edges: Vec<(String, usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = BTreeMap::new();
        for (i, v) in vertex_names.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateName(v.clone()));
            }
        }
        let mut seen_e = BTreeMap::new();
        let mut edge_names = Vec::with_capacity(edges.len());
        let mut ends = Vec::with_capacity(edges.len());
        for (name, a, b) in edges {
            if a >= vertex_names.len() || b >= vertex_names.len() {
                return Err(GraphError::UnknownVertex(format!("endpoint of edge {name}")));
            }
            if seen_e.insert(name.clone(), ()).is_some() {
                return Err(GraphError::DuplicateName(name));
            }
            edge_names.push(name);
            ends.push((a, b));
        }
        Ok(Graph { vertex_names, edge_names, ends })
    }

    /// The rose with one vertex `*` and one loop per generator name.
    pub fn rose(gens: &[String]) -> Self {
        let edges = gens.iter().map(|g| (g.clone(), 0, 0)).collect();
        Graph::new(vec!["*".to_string()], edges).expect("rose generator names must be distinct")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    /// Display name of an oriented edge.
    pub fn oedge_name(&self, e: OEdge) -> String {
        oriented_name(&self.edge_names[e.edge], e.rev)
    }

    pub fn find_vertex(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|v| v == name)
    }

    pub fn find_edge(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|v| v == name)
    }

    /// Initial vertex of an oriented edge.
    pub fn init(&self, e: OEdge) -> usize {
        let (a, b) = self.ends[e.edge];
        if e.rev {
            b
        } else {
            a
        }
    }

    /// Terminal vertex of an oriented edge.
    pub fn term(&self, e: OEdge) -> usize {
        self.init(e.inv())
    }

    /// All oriented edges, forward before reverse for each edge.
    pub fn oedges(&self) -> impl Iterator<Item = OEdge> + '_ {
        (0..2 * self.num_edges()).map(OEdge::from_index)
    }

    /// Oriented edges starting at `v` (directions at `v`), ordered by edge
    /// name and then orientation.
    pub fn directions_at(&self, v: usize) -> Vec<OEdge> {
        let mut out: Vec<OEdge> = self.oedges().filter(|&e| self.init(e) == v).collect();
        out.sort_by(|a, b| (&self.edge_names[a.edge], a.rev).cmp(&(&self.edge_names[b.edge], b.rev)));
        out
    }

    /// Number of directions at `v`; loops count twice.
    pub fn valence(&self, v: usize) -> usize {
        self.ends.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    /// Connected components as lists of vertices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.ends {
            adj[a].push(b);
            adj[b].push(a);
        }
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices() > 0 && self.components().len() == 1
    }

    /// Rank of the fundamental group, `|E| − |V| + 1`.
    pub fn rank(&self) -> Result<usize, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.num_edges() + 1 - self.num_vertices())
    }

    /// Check the standing assumptions: connected and no valence-one vertex.
    pub fn check_standing(&self) -> Result<(), GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        for v in 0..self.num_vertices() {
            if self.valence(v) <= 1 {
                return Err(GraphError::LowValence(self.vertex_names[v].clone()));
            }
        }
        Ok(())
    }

    /// Index of the lexicographically least vertex name.
    pub fn least_vertex(&self) -> usize {
        (0..self.num_vertices())
            .min_by(|&a, &b| self.vertex_names[a].cmp(&self.vertex_names[b]))
            .expect("graph has a vertex")
    }

    /// Render a path or word as a string of oriented edge names.
    pub fn path_string(&self, path: &[OEdge]) -> String {
        let names: Vec<String> = path.iter().map(|&e| self.oedge_name(e)).collect();
        let single = names.iter().all(|n| n.chars().count() == 1);
        if single {
            names.concat()
        } else {
            names.join(" ")
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(V={}, E={})", self.num_vertices(), self.num_edges())
    }
}
