//! Spanning trees, markings, and the automorphism induced by a graph map.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::free::{FreeGroupMap, FreeWord, Invertibility};
use super::path::reverse;
use super::{EdgePath, Graph, GraphError, GraphMap, OEdge};

/// A rooted spanning tree, stored as the tree path from the root to every
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub root: usize,
    pub tree_edges: Vec<usize>,
    paths: Vec<Vec<OEdge>>,
}

impl SpanningTree {
    /// Breadth-first tree from the lexicographically least vertex, exploring
    /// directions in edge-name order.
    pub fn bfs(g: &Graph) -> Result<Self, GraphError> {
        Self::bfs_from(g, g.least_vertex())
    }

    /// Breadth-first tree from `root`.
    pub fn bfs_from(g: &Graph, root: usize) -> Result<Self, GraphError> {
        let n = g.num_vertices();
        let mut paths: Vec<Option<Vec<OEdge>>> = vec![None; n];
        paths[root] = Some(Vec::new());
        let mut tree_edges = Vec::new();
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for d in g.directions_at(v) {
                let w = g.term(d);
                if paths[w].is_none() {
                    let mut p = paths[v].clone().expect("visited");
                    p.push(d);
                    paths[w] = Some(p);
                    tree_edges.push(d.edge);
                    queue.push_back(w);
                }
            }
        }
        let paths: Option<Vec<Vec<OEdge>>> = paths.into_iter().collect();
        let paths = paths.ok_or(GraphError::Disconnected)?;
        tree_edges.sort_unstable();
        Ok(SpanningTree { root, tree_edges, paths })
    }

    /// A tree given by an explicit edge set; fails unless it spans without
    /// cycles.
    pub fn from_edges(g: &Graph, root: usize, edges: &[usize]) -> Result<Self, GraphError> {
        let n = g.num_vertices();
        let mut paths: Vec<Option<Vec<OEdge>>> = vec![None; n];
        paths[root] = Some(Vec::new());
        let mut queue = VecDeque::from([root]);
        let mut used = 0;
        while let Some(v) = queue.pop_front() {
            for d in g.directions_at(v) {
                if !edges.contains(&d.edge) {
                    continue;
                }
                let w = g.term(d);
                if paths[w].is_none() {
                    let mut p = paths[v].clone().expect("visited");
                    p.push(d);
                    paths[w] = Some(p);
                    used += 1;
                    queue.push_back(w);
                }
            }
        }
        let paths: Option<Vec<Vec<OEdge>>> = paths.into_iter().collect();
        let paths = paths.ok_or(GraphError::NotATree)?;
        if used != edges.len() || edges.len() + 1 != n {
            return Err(GraphError::NotATree);
        }
        let mut tree_edges = edges.to_vec();
        tree_edges.sort_unstable();
        Ok(SpanningTree { root, tree_edges, paths })
    }

    /// Tree path from the root to `v`.
    pub fn path_to(&self, v: usize) -> &[OEdge] {
        &self.paths[v]
    }

    pub fn contains(&self, e: usize) -> bool {
        self.tree_edges.binary_search(&e).is_ok()
    }

    /// Edges outside the tree, in index order; these index the free basis.
    pub fn non_tree_edges(&self, g: &Graph) -> Vec<usize> {
        (0..g.num_edges()).filter(|&e| !self.contains(e)).collect()
    }

    /// Collapse the tree: map an edge sequence to a word in the non-tree
    /// edges.
    pub fn collapse(&self, g: &Graph, path: &[OEdge]) -> FreeWord {
        let basis = self.non_tree_edges(g);
        let letters: Vec<OEdge> = path
            .iter()
            .filter(|e| !self.contains(e.edge))
            .map(|e| OEdge { edge: basis.binary_search(&e.edge).expect("non-tree edge"), rev: e.rev })
            .collect();
        FreeWord::new(&letters)
    }

    /// Generator names of the collapsed graph.
    pub fn basis_names(&self, g: &Graph) -> Vec<String> {
        self.non_tree_edges(g).iter().map(|&e| g.edge_name(e).to_string()).collect()
    }

    /// The loop `p_init · e · p̄_term` based at the root.
    pub fn basis_loop(&self, g: &Graph, e: usize) -> Vec<OEdge> {
        let fe = OEdge::fwd(e);
        let mut out = self.path_to(g.init(fe)).to_vec();
        out.push(fe);
        out.extend(reverse(self.path_to(g.term(fe))));
        out
    }
}

/// A graph with a marking `ι: R_N → Γ` given as closed paths at a basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedGraph {
    pub graph: Graph,
    pub basepoint: usize,
    pub gens: Vec<String>,
    pub words: Vec<Vec<OEdge>>,
}

impl MarkedGraph {
    /// Validate that every marking word is a closed path at the basepoint.
    pub fn new(graph: Graph, basepoint: usize, gens: Vec<String>, words: Vec<Vec<OEdge>>) -> Result<Self, GraphError> {
        if gens.len() != words.len() {
            return Err(GraphError::ShapeMismatch);
        }
        for (g, w) in gens.iter().zip(&words) {
            if w.is_empty() {
                return Err(GraphError::BadMarking(g.clone()));
            }
            let p = EdgePath::new(&graph, basepoint, w.clone()).map_err(|_| GraphError::BadMarking(g.clone()))?;
            if p.end() != basepoint {
                return Err(GraphError::BadMarking(g.clone()));
            }
        }
        Ok(MarkedGraph { graph, basepoint, gens, words })
    }

    /// The marking whose generators are the non-tree edges of `tree`, each
    /// sent to its basis loop at the tree root.
    pub fn from_tree(graph: &Graph, tree: &SpanningTree) -> Self {
        let gens = tree.basis_names(graph);
        let words = tree.non_tree_edges(graph).iter().map(|&e| tree.basis_loop(graph, e)).collect();
        MarkedGraph { graph: graph.clone(), basepoint: tree.root, gens, words }
    }

    /// The marking as a graph map from the rose.
    pub fn as_graph_map(&self) -> GraphMap {
        let rose = Graph::rose(&self.gens);
        GraphMap::new(rose, self.graph.clone(), vec![self.basepoint], self.words.clone()).expect("validated marking")
    }
}

/// The outer automorphism class representative induced by `f` under a
/// marking, together with the choices that fix it within its class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedAutomorphism {
    pub map: FreeGroupMap,
    pub tree_root: String,
    pub tree_edges: Vec<String>,
    pub invertibility_verified: bool,
}

/// `ι⁻¹_* ∘ κ ∘ f ∘ ι` with `κ` collapsing the breadth-first tree.
pub fn map_to_automorphism(m: &MarkedGraph, f: &GraphMap) -> Result<InducedAutomorphism, GraphError> {
    let tree = SpanningTree::bfs(&m.graph)?;
    map_to_automorphism_with_tree(m, f, &tree)
}

/// As [`map_to_automorphism`] with a caller-chosen tree.
pub fn map_to_automorphism_with_tree(
    m: &MarkedGraph,
    f: &GraphMap,
    tree: &SpanningTree,
) -> Result<InducedAutomorphism, GraphError> {
    if f.domain() != &m.graph || f.codomain() != &m.graph {
        return Err(GraphError::DomainMismatch);
    }
    let g = &m.graph;
    let basis = tree.basis_names(g);
    if basis.len() != m.gens.len() {
        return Err(GraphError::BadMarking("marking rank differs from graph rank".into()));
    }
    let psi_images: Vec<FreeWord> = m.words.iter().map(|w| tree.collapse(g, w)).collect();
    let psi = FreeGroupMap::new(m.gens.clone(), basis.clone(), psi_images);
    let psi_inv = match psi.invert() {
        Invertibility::Verified(inv) => inv,
        Invertibility::Unverified => {
            return Err(GraphError::BadMarking("collapsing the tree does not invert the marking".into()))
        }
    };
    let theta_images: Vec<FreeWord> = m.words.iter().map(|w| tree.collapse(g, &f.image_of(w))).collect();
    let theta = FreeGroupMap::new(m.gens.clone(), basis, theta_images);
    let map = psi_inv.compose(&theta);
    let verified = matches!(map.invert(), Invertibility::Verified(_));
    Ok(InducedAutomorphism {
        map,
        tree_root: g.vertex_name(tree.root).to_string(),
        tree_edges: tree.tree_edges.iter().map(|&e| g.edge_name(e).to_string()).collect(),
        invertibility_verified: verified,
    })
}
