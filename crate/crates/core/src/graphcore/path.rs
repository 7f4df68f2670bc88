//! Edge paths and free reduction.

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, OEdge};

/// Freely reduce a sequence of oriented edges (cancel every `e·ē`).
pub fn reduce(letters: &[OEdge]) -> Vec<OEdge> {
    let mut out: Vec<OEdge> = Vec::with_capacity(letters.len());
    for &e in letters {
        if out.last() == Some(&e.inv()) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

/// Reverse a path: reverse the order and reverse each edge.
pub fn reverse(letters: &[OEdge]) -> Vec<OEdge> {
    letters.iter().rev().map(|e| e.inv()).collect()
}

/// A composable sequence of oriented edges with an explicit start vertex so
/// that the empty path still knows where it lives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgePath {
    start: usize,
    end: usize,
    edges: Vec<OEdge>,
}

impl EdgePath {
    /// Build a path, checking that consecutive edges are composable.
    pub fn new(g: &Graph, start: usize, edges: Vec<OEdge>) -> Result<Self, GraphError> {
        let mut at = start;
        for (i, &e) in edges.iter().enumerate() {
            if e.edge >= g.num_edges() {
                return Err(GraphError::UnknownEdge(format!("index {}", e.edge)));
            }
            if g.init(e) != at {
                return Err(GraphError::NotComposable { position: i });
            }
            at = g.term(e);
        }
        Ok(EdgePath { start, end: at, edges })
    }

    /// The trivial path at `v`.
    pub fn trivial(v: usize) -> Self {
        EdgePath { start: v, end: v, edges: Vec::new() }
    }

    /// Path from a nonempty edge list, taking its endpoints from `g`.
    pub fn from_edges(g: &Graph, edges: Vec<OEdge>) -> Result<Self, GraphError> {
        let start = match edges.first() {
            Some(&e) => g.init(e),
            None => return Err(GraphError::EmptyPath),
        };
        EdgePath::new(g, start, edges)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn edges(&self) -> &[OEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Remove all backtracking; the result is homotopic rel endpoints.
    pub fn tighten(&self) -> EdgePath {
        EdgePath { start: self.start, end: self.end, edges: reduce(&self.edges) }
    }

    pub fn is_tight(&self) -> bool {
        self.edges.windows(2).all(|w| w[1] != w[0].inv())
    }

    /// The reversed path.
    pub fn reversed(&self) -> EdgePath {
        EdgePath { start: self.end, end: self.start, edges: reverse(&self.edges) }
    }

    /// Concatenation; fails unless `self` ends where `other` starts.
    pub fn concat(&self, other: &EdgePath) -> Result<EdgePath, GraphError> {
        if self.end != other.start {
            return Err(GraphError::NotComposable { position: self.edges.len() });
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(EdgePath { start: self.start, end: other.end, edges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> Graph {
        Graph::new(vec!["u".into(), "v".into(), "w".into()], vec![("a".into(), 0, 1), ("b".into(), 1, 2)]).unwrap()
    }

    #[test]
    fn cancellation_to_empty() {
        let g = line();
        let a = OEdge::fwd(0);
        let p = EdgePath::new(&g, 0, vec![a, a.inv()]).unwrap().tighten();
        assert!(p.is_empty());
        assert_eq!(p.start(), 0);
        assert_eq!(p.end(), 0);
    }

    #[test]
    fn tight_path_unchanged() {
        let g = line();
        let p = EdgePath::new(&g, 0, vec![OEdge::fwd(0), OEdge::fwd(1)]).unwrap();
        assert_eq!(p.tighten(), p);
    }

    #[test]
    fn nested_cancellation() {
        let g = line();
        let (a, b) = (OEdge::fwd(0), OEdge::fwd(1));
        let p = EdgePath::new(&g, 0, vec![a, b, b.inv(), a.inv()]).unwrap();
        assert!(p.tighten().is_empty());
    }

    #[test]
    fn non_composable_rejected() {
        let g = line();
        assert!(EdgePath::new(&g, 0, vec![OEdge::fwd(1)]).is_err());
    }
}
