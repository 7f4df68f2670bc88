//! Monodromy of a section, and relabeling a computed first return map to a
//! reference edge table.

use serde::{Deserialize, Serialize};

use super::{FirstReturn, SectionError, SectionGraph};
use crate::graphcore::text::MapFile;
use crate::graphcore::{
    map_to_automorphism_with_tree, FreeGroupMap, Graph, GraphMap, MarkedGraph, OEdge, SpanningTree,
};

/// A graph self-map given only by edge names and edge images, with an
/// optional marking, spanning tree and basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reference {
    pub edges: Vec<String>,
    pub images: Vec<Vec<OEdge>>,
    pub gens: Vec<String>,
    /// Marking words over the reference edges.
    pub marking: Vec<Vec<OEdge>>,
    /// Tree edges; `None` selects a breadth-first tree.
    pub tree: Option<Vec<usize>>,
    /// The basepoint is the initial vertex of this oriented edge.
    pub base: OEdge,
}

impl Reference {
    fn find(&self, name: &str) -> usize {
        self.edges.iter().position(|e| e == name).expect("reference edge exists")
    }
}

/// The first return table and marking of the section `Θ_k` for the class
/// `k b* + (k+1) r*`, `k ≥ 1`.
pub fn theta_k_reference(k: usize) -> Reference {
    let n = k + 1;
    let mut edges = vec!["e1".to_string()];
    for j in 2..=4 {
        for i in 1..=n {
            edges.push(format!("e{j}_{i}"));
        }
    }
    edges.extend(["s1".to_string(), "s2".to_string()]);
    edges.extend((1..=n).map(|i| format!("t{i}")));
    let mut r =
        Reference { edges, images: Vec::new(), gens: Vec::new(), marking: Vec::new(), tree: None, base: OEdge::fwd(0) };
    let f = |r: &Reference, name: &str| OEdge::fwd(r.find(name));
    let b = |r: &Reference, name: &str| OEdge::bwd(r.find(name));
    let e = |j: usize, i: usize| format!("e{j}_{i}");
    let mut images = Vec::new();
    for name in r.edges.clone() {
        let img = if name == "e1" {
            vec![f(&r, &e(3, 1))]
        } else if let Some(rest) = name.strip_prefix('e') {
            let (j, i) = rest.split_once('_').expect("e{j}_{i}");
            let (j, i): (usize, usize) = (j.parse().expect("digit"), i.parse().expect("digit"));
            if i <= k {
                vec![f(&r, &e(j, i + 1))]
            } else {
                match j {
                    2 => vec![b(&r, &e(4, 1))],
                    3 => vec![f(&r, "t1"), f(&r, &e(3, 1)), f(&r, &e(2, 1))],
                    _ => vec![f(&r, "s2"), f(&r, "e1")],
                }
            }
        } else if name == "s1" {
            vec![f(&r, &e(2, 1)), f(&r, "t1")]
        } else if name == "s2" {
            vec![f(&r, "t1")]
        } else {
            let i: usize = name[1..].parse().expect("t{i}");
            if i <= k {
                vec![f(&r, &format!("t{}", i + 1))]
            } else {
                vec![f(&r, "s1"), f(&r, "e1"), f(&r, &e(4, 1))]
            }
        };
        images.push(img);
    }
    // Tree paths from the basepoint up the vertical cell.
    let mut p = vec![vec![f(&r, "e1"), f(&r, &e(4, 1))]];
    for i in 2..=n {
        let mut next = p[i - 2].clone();
        next.push(b(&r, &e(2, i - 1)));
        next.push(f(&r, &e(4, i)));
        p.push(next);
    }
    let rev = |w: &[OEdge]| w.iter().rev().map(|l| l.inv()).collect::<Vec<_>>();
    let mut gens = vec!["s1".to_string(), "s2".to_string()];
    let mut marking = vec![vec![f(&r, "e1"), f(&r, "s1")], {
        let mut w = p[n - 1].clone();
        w.push(b(&r, &e(2, n)));
        w.push(f(&r, "s2"));
        w
    }];
    for i in 1..=n {
        gens.push(format!("t{i}"));
        let mut w = p[i - 1].clone();
        w.push(f(&r, &format!("t{i}")));
        w.push(f(&r, &e(3, i)));
        w.push(f(&r, &e(2, i)));
        w.extend(rev(&p[i - 1]));
        marking.push(w);
    }
    r.tree = Some((0..r.edges.len()).filter(|&i| r.edges[i].starts_with('e')).collect());
    r.images = images;
    r.gens = gens;
    r.marking = marking;
    r
}

/// A reference from a map file with a marking; the basepoint is the
/// marking's.
pub fn reference_from_map(mf: &MapFile) -> Option<Reference> {
    let m = mf.marking.as_ref()?;
    let g = mf.map.domain();
    let base = g.oedges().find(|&e| g.init(e) == m.basepoint)?;
    Some(Reference {
        edges: g.edge_names().to_vec(),
        images: (0..g.num_edges()).map(|e| mf.map.edge_image(e).to_vec()).collect(),
        gens: m.gens.clone(),
        marking: m.words.clone(),
        tree: None,
        base,
    })
}

/// A computed first return relabeled to reference names.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReferenceMatch {
    /// For each section edge, its reference edge and whether it is reversed.
    pub sigma: Vec<(usize, bool)>,
    /// The section graph with reference edge names and orientations.
    pub graph: Graph,
    pub map: GraphMap,
    pub marking: MarkedGraph,
}

struct Search<'a> {
    f: &'a GraphMap,
    r: &'a Reference,
    g: &'a Graph,
}

type State = (Vec<Option<(usize, bool)>>, Vec<Option<usize>>);

impl Search<'_> {
    fn propagate(&self, st: &mut State, mut stack: Vec<(usize, usize, bool)>) -> bool {
        while let Some((e, r, flip)) = stack.pop() {
            match st.0[e] {
                Some(a) if a != (r, flip) => return false,
                Some(_) => continue,
                None => {}
            }
            if st.1[r].is_some() {
                return false;
            }
            st.0[e] = Some((r, flip));
            st.1[r] = Some(e);
            let ours = self.f.edge_image(e);
            let theirs = &self.r.images[r];
            if ours.len() != theirs.len() {
                return false;
            }
            let n = ours.len();
            for i in 0..n {
                let t = if flip { theirs[n - 1 - i].inv() } else { theirs[i] };
                let o = ours[i];
                stack.push((o.edge, t.edge, o.rev != t.rev));
            }
        }
        true
    }

    fn finish(&self, st: &State) -> Option<ReferenceMatch> {
        let sigma: Vec<(usize, bool)> = st.0.iter().map(|a| a.expect("complete")).collect();
        let m = self.r.edges.len();
        let mut ends = vec![(0, 0); m];
        for (e, &(r, flip)) in sigma.iter().enumerate() {
            let (a, b) = (self.g.init(OEdge::fwd(e)), self.g.term(OEdge::fwd(e)));
            ends[r] = if flip { (b, a) } else { (a, b) };
        }
        let graph = Graph::new(
            self.g.vertex_names().to_vec(),
            (0..m).map(|r| (self.r.edges[r].clone(), ends[r].0, ends[r].1)).collect(),
        )
        .ok()?;
        let to_ref = |l: OEdge| {
            let (r, flip) = sigma[l.edge];
            OEdge { edge: r, rev: l.rev != flip }
        };
        let emap: Vec<Vec<OEdge>> = (0..m)
            .map(|r| {
                let e = st.1[r].expect("bijection");
                let img: Vec<OEdge> = self.f.edge_image(e).iter().map(|&l| to_ref(l)).collect();
                if sigma[e].1 {
                    img.iter().rev().map(|l| l.inv()).collect()
                } else {
                    img
                }
            })
            .collect();
        let map = GraphMap::new(graph.clone(), graph.clone(), self.f.vmap().to_vec(), emap).ok()?;
        let base = graph.init(self.r.base);
        let marking = MarkedGraph::new(graph.clone(), base, self.r.gens.clone(), self.r.marking.clone()).ok()?;
        Some(ReferenceMatch { sigma, graph, map, marking })
    }

    fn search(&self, st: State) -> Option<ReferenceMatch> {
        let Some(e) = st.0.iter().position(|a| a.is_none()) else { return self.finish(&st) };
        for r in 0..self.r.edges.len() {
            if st.1[r].is_some() {
                continue;
            }
            for flip in [false, true] {
                let mut next = st.clone();
                if self.propagate(&mut next, vec![(e, r, flip)]) {
                    if let Some(m) = self.search(next) {
                        return Some(m);
                    }
                }
            }
        }
        None
    }
}

/// Find edge names and orientations under which the first return equals the
/// reference table letter for letter and the reference marking is a valid
/// marking of the section.
pub fn match_reference(s: &SectionGraph, fr: &FirstReturn, r: &Reference) -> Result<ReferenceMatch, SectionError> {
    let g = &s.graph;
    if g.num_edges() != r.edges.len() {
        return Err(SectionError::Reference(format!(
            "section has {} edges, reference has {}",
            g.num_edges(),
            r.edges.len()
        )));
    }
    let search = Search { f: &fr.map, r, g };
    let st = (vec![None; g.num_edges()], vec![None; r.edges.len()]);
    search.search(st).ok_or_else(|| SectionError::Reference("no consistent relabeling".into()))
}

/// The automorphism induced by a first return, with the tree and marking used.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Monodromy {
    pub automorphism: FreeGroupMap,
    pub basepoint: String,
    pub tree_edges: Vec<String>,
    pub verified_invertible: bool,
}

/// Collapse a breadth-first tree rooted at the section basepoint.
pub fn monodromy(s: &SectionGraph, fr: &FirstReturn) -> Result<Monodromy, SectionError> {
    let n = s.num_components();
    if n != 1 {
        return Err(SectionError::Disconnected(n));
    }
    let tree = SpanningTree::bfs_from(&s.graph, s.basepoint).map_err(|e| SectionError::Graph(e.to_string()))?;
    let marking = MarkedGraph::from_tree(&s.graph, &tree);
    induced(&marking, &fr.map, &tree)
}

/// Monodromy under a reference relabeling, its marking and its tree.
pub fn monodromy_with(m: &ReferenceMatch, r: &Reference) -> Result<Monodromy, SectionError> {
    let g = &m.graph;
    let tree = match &r.tree {
        Some(edges) => SpanningTree::from_edges(g, m.marking.basepoint, edges),
        None => SpanningTree::bfs_from(g, m.marking.basepoint),
    }
    .map_err(|e| SectionError::Graph(e.to_string()))?;
    induced(&m.marking, &m.map, &tree)
}

fn induced(marking: &MarkedGraph, f: &GraphMap, tree: &SpanningTree) -> Result<Monodromy, SectionError> {
    let ind = map_to_automorphism_with_tree(marking, f, tree).map_err(|e| SectionError::Graph(e.to_string()))?;
    Ok(Monodromy {
        automorphism: ind.map,
        basepoint: ind.tree_root,
        tree_edges: ind.tree_edges,
        verified_invertible: ind.invertibility_verified,
    })
}
