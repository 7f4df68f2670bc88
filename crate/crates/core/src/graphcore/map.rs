//! Graph maps: vertices to vertices, edges to nonempty edge paths.

use serde::{Deserialize, Serialize};

use super::path::reverse;
use super::{EdgePath, Graph, GraphError, OEdge};

/// A graph map `domain → codomain`. Images are stored for forward edges;
/// the image of a reversed edge is the reversed image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMap {
    domain: Graph,
    codomain: Graph,
    vmap: Vec<usize>,
    emap: Vec<Vec<OEdge>>,
}

impl GraphMap {
    /// Build and validate a graph map.
    pub fn new(domain: Graph, codomain: Graph, vmap: Vec<usize>, emap: Vec<Vec<OEdge>>) -> Result<Self, GraphError> {
        if vmap.len() != domain.num_vertices() || emap.len() != domain.num_edges() {
            return Err(GraphError::ShapeMismatch);
        }
        if vmap.iter().any(|&v| v >= codomain.num_vertices()) {
            return Err(GraphError::UnknownVertex("vertex image".into()));
        }
        for (i, img) in emap.iter().enumerate() {
            let name = domain.edge_name(i).to_string();
            if img.is_empty() {
                return Err(GraphError::CollapsedEdge(name));
            }
            let e = OEdge::fwd(i);
            let p = EdgePath::new(&codomain, vmap[domain.init(e)], img.clone())
                .map_err(|_| GraphError::BadImage(name.clone()))?;
            if p.end() != vmap[domain.term(e)] {
                return Err(GraphError::BadImage(name));
            }
        }
        Ok(GraphMap { domain, codomain, vmap, emap })
    }

    /// The identity map of `g`.
    pub fn identity(g: &Graph) -> Self {
        GraphMap {
            domain: g.clone(),
            codomain: g.clone(),
            vmap: (0..g.num_vertices()).collect(),
            emap: (0..g.num_edges()).map(|i| vec![OEdge::fwd(i)]).collect(),
        }
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.codomain
    }

    pub fn is_self_map(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vmap[v]
    }

    pub fn vmap(&self) -> &[usize] {
        &self.vmap
    }

    /// Image word of a forward edge.
    pub fn edge_image(&self, e: usize) -> &[OEdge] {
        &self.emap[e]
    }

    /// Image word of an oriented edge.
    pub fn image(&self, e: OEdge) -> Vec<OEdge> {
        if e.rev {
            reverse(&self.emap[e.edge])
        } else {
            self.emap[e.edge].clone()
        }
    }

    /// First edge of the image of `e` (the direction map).
    pub fn first_edge(&self, e: OEdge) -> OEdge {
        if e.rev {
            self.emap[e.edge].last().expect("nonempty image").inv()
        } else {
            self.emap[e.edge][0]
        }
    }

    /// Image of an edge sequence, concatenated without tightening.
    pub fn image_of(&self, path: &[OEdge]) -> Vec<OEdge> {
        let mut out = Vec::new();
        for &e in path {
            out.extend(self.image(e));
        }
        out
    }

    /// Image of an edge path, untightened.
    pub fn image_path(&self, p: &EdgePath) -> EdgePath {
        let edges = self.image_of(p.edges());
        EdgePath::new(&self.codomain, self.vmap[p.start()], edges).expect("graph map images compose")
    }

    /// Total length of all edge images.
    pub fn total_image_length(&self) -> usize {
        self.emap.iter().map(Vec::len).sum()
    }

    /// Render the map as `name ↦ word` lines.
    pub fn describe(&self) -> Vec<(String, String)> {
        (0..self.domain.num_edges())
            .map(|i| (self.domain.edge_name(i).to_string(), self.codomain.path_string(&self.emap[i])))
            .collect()
    }

    /// Replace the graphs by relabeled copies with identical structure.
    pub fn with_graphs(&self, domain: Graph, codomain: Graph) -> Result<Self, GraphError> {
        GraphMap::new(domain, codomain, self.vmap.clone(), self.emap.clone())
    }
}

/// `f ∘ g`: first `g`, then `f`. Edge images are concatenated without
/// tightening.
pub fn compose(f: &GraphMap, g: &GraphMap) -> Result<GraphMap, GraphError> {
    if g.codomain != f.domain {
        return Err(GraphError::DomainMismatch);
    }
    let vmap = g.vmap.iter().map(|&v| f.vmap[v]).collect();
    let emap = g.emap.iter().map(|img| f.image_of(img)).collect();
    Ok(GraphMap { domain: g.domain.clone(), codomain: f.codomain.clone(), vmap, emap })
}

/// Result of subdividing the domain of a graph map at the preimages of the
/// codomain vertices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Subdivision {
    /// The subdivided graph `Γ₀`.
    pub graph: Graph,
    /// The subdivision `π: Γ → Γ₀`, each edge to its pieces.
    pub pi: GraphMap,
    /// The labeling `Γ₀ → codomain`, each piece to a single oriented edge.
    pub labels: GraphMap,
    /// Piece indices of each original edge, in order.
    pub pieces: Vec<Vec<usize>>,
}

impl Subdivision {
    /// The oriented label of a piece.
    pub fn label(&self, piece: usize) -> OEdge {
        self.labels.edge_image(piece)[0]
    }
}

/// Subdivide each edge `e` into `|f(e)|` pieces, each labeled by the edge of
/// `f(e)` it maps over. Edges with one-letter images keep their names.
pub fn subdivide_at_preimages(f: &GraphMap) -> Subdivision {
    let dom = f.domain();
    let mut vnames: Vec<String> = dom.vertex_names().to_vec();
    let mut vlabel: Vec<usize> = (0..dom.num_vertices()).map(|v| f.vertex_image(v)).collect();
    let mut edges = Vec::new();
    let mut elabel = Vec::new();
    let mut pieces = Vec::new();
    let mut pi_emap = Vec::new();
    for e in 0..dom.num_edges() {
        let img = f.edge_image(e);
        let name = dom.edge_name(e);
        let fe = OEdge::fwd(e);
        let mut at = dom.init(fe);
        let mut mine = Vec::new();
        for (i, &letter) in img.iter().enumerate() {
            let next = if i + 1 == img.len() {
                dom.term(fe)
            } else {
                vnames.push(format!("{name}.{}", i + 1));
                vlabel.push(f.codomain().term(letter));
                vnames.len() - 1
            };
            let pname = if img.len() == 1 { name.to_string() } else { format!("{name}_{}", i + 1) };
            mine.push(edges.len());
            edges.push((pname, at, next));
            elabel.push(vec![letter]);
            at = next;
        }
        pi_emap.push(mine.iter().map(|&p| OEdge::fwd(p)).collect());
        pieces.push(mine);
    }
    let graph = Graph::new(vnames, edges).expect("subdivision names are unique");
    let pi = GraphMap::new(dom.clone(), graph.clone(), (0..dom.num_vertices()).collect(), pi_emap)
        .expect("subdivision is a graph map");
    let labels = GraphMap::new(graph.clone(), f.codomain().clone(), vlabel, elabel).expect("labeling is a graph map");
    Subdivision { graph, pi, labels, pieces }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rose2() -> Graph {
        Graph::rose(&["a".to_string(), "b".to_string()])
    }

    fn fib() -> GraphMap {
        let g = rose2();
        GraphMap::new(g.clone(), g, vec![0], vec![vec![OEdge::fwd(0), OEdge::fwd(1)], vec![OEdge::fwd(0)]]).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let f = fib();
        let id = GraphMap::identity(f.domain());
        assert_eq!(compose(&id, &f).unwrap(), f);
        assert_eq!(compose(&f, &id).unwrap(), f);
    }

    #[test]
    fn collapsed_edge_rejected() {
        let g = rose2();
        assert!(GraphMap::new(g.clone(), g, vec![0], vec![vec![], vec![OEdge::fwd(0)]]).is_err());
    }

    #[test]
    fn subdivision_of_identity_is_trivial() {
        let g = rose2();
        let s = subdivide_at_preimages(&GraphMap::identity(&g));
        assert_eq!(s.graph, g);
        assert_eq!(s.label(0), OEdge::fwd(0));
        assert_eq!(s.label(1), OEdge::fwd(1));
    }

    #[test]
    fn subdivision_piece_count_matches_image_length() {
        let s = subdivide_at_preimages(&fib());
        assert_eq!(s.graph.num_edges(), 3);
        assert_eq!(s.pieces[0].len(), 2);
        assert_eq!(s.graph.rank().unwrap(), 2);
        let back = compose(&s.labels, &s.pi).unwrap();
        assert_eq!(back, fib());
    }
}
