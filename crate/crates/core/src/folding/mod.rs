//! Stallings fold decompositions `f = h ∘ q_K ∘ ⋯ ∘ q₁ ∘ π` and the auxiliary
//! graph `G(f)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphcore::{compose, subdivide_at_preimages, Graph, GraphMap, OEdge, Subdivision};
use crate::traintrack::transition_matrix;

/// Errors from [`decompose`].
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FoldError {
    #[error("no fold available but the labeled graph is not homeomorphic to the target: {0}")]
    Stuck(String),
    #[error(
        "fold at '{vertex}' would identify two edges with a common far end, so the map is not a homotopy equivalence"
    )]
    RankReducing { vertex: String },
}

/// Which available fold to perform next.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FoldPolicy {
    /// Least `(vertex name, label, edge names)`.
    #[default]
    LexLeast,
    /// Greatest `(vertex name, label, edge names)`.
    LexGreatest,
}

/// One level of the folding sequence: a graph whose edges and vertices
/// carry labels in the target graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub graph: Graph,
    /// Oriented target edge carried by each forward edge.
    pub edge_labels: Vec<OEdge>,
    /// Target vertex of each vertex.
    pub vertex_labels: Vec<usize>,
}

impl LabeledGraph {
    /// Oriented label of an oriented edge.
    pub fn label(&self, e: OEdge) -> OEdge {
        let l = self.edge_labels[e.edge];
        if e.rev {
            l.inv()
        } else {
            l
        }
    }

    fn available_folds(&self) -> Vec<(usize, OEdge, OEdge)> {
        let g = &self.graph;
        let mut out = Vec::new();
        for v in 0..g.num_vertices() {
            let ds = g.directions_at(v);
            for i in 0..ds.len() {
                for j in i + 1..ds.len() {
                    if self.label(ds[i]) == self.label(ds[j]) {
                        out.push((v, ds[i], ds[j]));
                    }
                }
            }
        }
        out
    }
}

/// A single fold identifying `alpha` and `beta`, both leaving `vertex` with
/// equal oriented labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    /// Fold vertex in the source level.
    pub vertex: usize,
    /// Surviving oriented edge in the source level.
    pub alpha: OEdge,
    /// Oriented edge identified with `alpha`.
    pub beta: OEdge,
    /// Common oriented label in the target.
    pub label: OEdge,
    /// Name of the target edge carried by both.
    pub label_name: String,
    /// Far end of `beta` that is merged into the far end of `alpha`.
    pub merged_vertex: usize,
    /// The quotient map from the source level to the next.
    pub quotient: GraphMap,
}

/// A full decomposition `h ∘ q_K ∘ ⋯ ∘ q₁ ∘ π`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoldSequence {
    pub policy: FoldPolicy,
    pub subdivision: Subdivision,
    /// Levels `G_0 = Γ₀, …, G_K`.
    pub levels: Vec<LabeledGraph>,
    /// `folds[l]` maps level `l` to level `l + 1`.
    pub folds: Vec<Fold>,
    /// Terminal homeomorphism `G_K → Γ`, each edge to one oriented edge.
    pub h: GraphMap,
}

impl FoldSequence {
    pub fn num_folds(&self) -> usize {
        self.folds.len()
    }

    /// Target edge names carried by the folds, in order.
    pub fn labels(&self) -> Vec<String> {
        self.folds.iter().map(|f| f.label_name.clone()).collect()
    }

    /// Human-readable fold list: `(vertex, alpha, beta, label)` names.
    pub fn describe(&self) -> Vec<(String, String, String, String)> {
        self.folds
            .iter()
            .enumerate()
            .map(|(l, f)| {
                let g = &self.levels[l].graph;
                (g.vertex_name(f.vertex).to_string(), g.oedge_name(f.alpha), g.oedge_name(f.beta), f.label_name.clone())
            })
            .collect()
    }

    /// The composite `h ∘ q_K ∘ ⋯ ∘ q₁ ∘ π`, without tightening.
    pub fn recompose(&self) -> GraphMap {
        let mut acc = self.subdivision.pi.clone();
        for f in &self.folds {
            acc = compose(&f.quotient, &acc).expect("consecutive levels");
        }
        compose(&self.h, &acc).expect("terminal level")
    }
}

fn fold_once(level: &LabeledGraph, v: usize, x: OEdge, y: OEdge) -> Result<(Fold, LabeledGraph), FoldError> {
    let g = &level.graph;
    let (alpha, beta) = if g.edge_name(x.edge) <= g.edge_name(y.edge) { (x, y) } else { (y, x) };
    let (ta, tb) = (g.term(alpha), g.term(beta));
    if ta == tb {
        return Err(FoldError::RankReducing { vertex: g.vertex_name(v).to_string() });
    }
    let (keep, drop) = if g.vertex_name(ta) <= g.vertex_name(tb) { (ta, tb) } else { (tb, ta) };
    let mut vnew = vec![0usize; g.num_vertices()];
    let mut names = Vec::new();
    let mut vlabels = Vec::new();
    for u in 0..g.num_vertices() {
        if u != drop {
            vnew[u] = names.len();
            names.push(g.vertex_name(u).to_string());
            vlabels.push(level.vertex_labels[u]);
        }
    }
    vnew[drop] = vnew[keep];
    let mut enew = vec![0usize; g.num_edges()];
    let mut edges = Vec::new();
    let mut elabels = Vec::new();
    for e in 0..g.num_edges() {
        if e != beta.edge {
            enew[e] = edges.len();
            let fe = OEdge::fwd(e);
            edges.push((g.edge_name(e).to_string(), vnew[g.init(fe)], vnew[g.term(fe)]));
            elabels.push(level.edge_labels[e]);
        }
    }
    let graph = Graph::new(names, edges).expect("quotient names are unique");
    let moved = |e: OEdge| OEdge { edge: enew[e.edge], rev: e.rev };
    let emap = (0..g.num_edges())
        .map(|e| {
            if e == beta.edge {
                let a = moved(alpha);
                vec![if beta.rev { a.inv() } else { a }]
            } else {
                vec![OEdge::fwd(enew[e])]
            }
        })
        .collect();
    let quotient = GraphMap::new(g.clone(), graph.clone(), vnew, emap).expect("fold is a graph map");
    let label = level.label(alpha);
    let fold = Fold { vertex: v, alpha, beta, label, label_name: String::new(), merged_vertex: drop, quotient };
    Ok((fold, LabeledGraph { graph, edge_labels: elabels, vertex_labels: vlabels }))
}

fn terminal_map(level: &LabeledGraph, target: &Graph) -> Result<GraphMap, FoldError> {
    let stuck = || {
        let g = &level.graph;
        let parts: Vec<String> = (0..g.num_edges())
            .map(|e| {
                let fe = OEdge::fwd(e);
                format!(
                    "{}:{}->{}={}",
                    g.edge_name(e),
                    g.vertex_name(g.init(fe)),
                    g.vertex_name(g.term(fe)),
                    target.oedge_name(level.edge_labels[e])
                )
            })
            .collect();
        FoldError::Stuck(parts.join(" "))
    };
    let g = &level.graph;
    if g.num_edges() != target.num_edges() || g.num_vertices() != target.num_vertices() {
        return Err(stuck());
    }
    let mut seen_e = vec![false; target.num_edges()];
    for l in &level.edge_labels {
        if std::mem::replace(&mut seen_e[l.edge], true) {
            return Err(stuck());
        }
    }
    let mut seen_v = vec![false; target.num_vertices()];
    for &l in &level.vertex_labels {
        if std::mem::replace(&mut seen_v[l], true) {
            return Err(stuck());
        }
    }
    GraphMap::new(
        g.clone(),
        target.clone(),
        level.vertex_labels.clone(),
        level.edge_labels.iter().map(|&l| vec![l]).collect(),
    )
    .map_err(|_| stuck())
}

/// Decompose a self-map (or any map whose target is reached by folding) into
/// subdivision, single folds and a terminal relabeling.
pub fn decompose(f: &GraphMap) -> Result<FoldSequence, FoldError> {
    decompose_with(f, FoldPolicy::default())
}

/// As [`decompose`] with an explicit fold-choice policy.
pub fn decompose_with(f: &GraphMap, policy: FoldPolicy) -> Result<FoldSequence, FoldError> {
    let subdivision = subdivide_at_preimages(f);
    let target = f.codomain();
    let start = LabeledGraph {
        graph: subdivision.graph.clone(),
        edge_labels: (0..subdivision.graph.num_edges()).map(|p| subdivision.label(p)).collect(),
        vertex_labels: subdivision.labels.vmap().to_vec(),
    };
    let mut levels = vec![start];
    let mut folds = Vec::new();
    loop {
        let level = levels.last().expect("nonempty");
        let g = &level.graph;
        let key = |&(v, x, y): &(usize, OEdge, OEdge)| {
            let (mut n1, mut n2) = (g.edge_name(x.edge), g.edge_name(y.edge));
            if n2 < n1 {
                std::mem::swap(&mut n1, &mut n2);
            }
            (g.vertex_name(v), target.oedge_name(level.label(x)), n1, n2)
        };
        let avail = level.available_folds();
        let choice = match policy {
            FoldPolicy::LexLeast => avail.iter().min_by_key(|c| key(c)),
            FoldPolicy::LexGreatest => avail.iter().max_by_key(|c| key(c)),
        };
        let Some(&(v, x, y)) = choice else { break };
        let (mut fold, next) = fold_once(level, v, x, y)?;
        fold.label_name = target.edge_name(fold.label.edge).to_string();
        folds.push(fold);
        levels.push(next);
    }
    let h = terminal_map(levels.last().expect("nonempty"), target)?;
    Ok(FoldSequence { policy, subdivision, levels, folds, h })
}

/// Recompose the sequence edge by edge and compare with `f` verbatim.
pub fn verify(seq: &FoldSequence, f: &GraphMap) -> bool {
    let chain_ok = seq.folds.iter().enumerate().all(|(l, fd)| {
        fd.quotient.domain() == &seq.levels[l].graph && fd.quotient.codomain() == &seq.levels[l + 1].graph
    });
    chain_ok
        && seq.subdivision.pi.codomain() == &seq.levels[0].graph
        && seq.h.domain() == &seq.levels[seq.levels.len() - 1].graph
        && seq.folds.iter().all(|fd| fd.quotient.edge_image(fd.beta.edge).len() == 1)
        && &seq.recompose() == f
}

/// The auxiliary digraph `G(f)` on unoriented edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxGraph {
    pub edges: Vec<String>,
    /// Arcs `i → j`: `f(e_i)` crosses `e_j` exactly once and no other image
    /// crosses `e_j`.
    pub arcs: Vec<(usize, usize)>,
}

/// Outcome of [`check_acyclic`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Acyclicity {
    /// A topological order of the edges.
    Acyclic(Vec<String>),
    /// A directed cycle, first vertex repeated at the end.
    Cycle(Vec<String>),
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic(_))
    }
}

/// Build `G(f)` from the transition matrix.
pub fn aux_graph(f: &GraphMap) -> AuxGraph {
    let a = transition_matrix(f);
    let n = a.len();
    let mut arcs = Vec::new();
    for j in 0..n {
        let col: u64 = (0..n).map(|i| a[i][j]).sum();
        if col == 1 {
            let i = (0..n).find(|&i| a[i][j] == 1).expect("column sum is one");
            arcs.push((i, j));
        }
    }
    arcs.sort_unstable();
    AuxGraph { edges: f.domain().edge_names().to_vec(), arcs }
}

/// Topological order or a cycle witness.
pub fn check_acyclic(g: &AuxGraph) -> Acyclicity {
    let n = g.edges.len();
    let mut succ: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(i, j) in &g.arcs {
        succ.entry(i).or_default().push(j);
    }
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; n];
    let mut order = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    fn dfs(
        v: usize,
        succ: &BTreeMap<usize, Vec<usize>>,
        state: &mut [u8],
        order: &mut Vec<usize>,
        path: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        state[v] = 1;
        path.push(v);
        for &w in succ.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if state[w] == 1 {
                let at = path.iter().position(|&x| x == w).expect("on stack");
                let mut cyc = path[at..].to_vec();
                cyc.push(w);
                return Some(cyc);
            }
            if state[w] == 0 {
                if let Some(c) = dfs(w, succ, state, order, path) {
                    return Some(c);
                }
            }
        }
        path.pop();
        state[v] = 2;
        order.push(v);
        None
    }
    for v in 0..n {
        if state[v] == 0 {
            if let Some(c) = dfs(v, &succ, &mut state, &mut order, &mut path) {
                return Acyclicity::Cycle(c.into_iter().map(|i| g.edges[i].clone()).collect());
            }
        }
    }
    order.reverse();
    Acyclicity::Acyclic(order.into_iter().map(|i| g.edges[i].clone()).collect())
}
