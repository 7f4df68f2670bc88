//! Directions, turns, the derivative map and train track certification.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graphcore::{GraphMap, OEdge};

/// An unordered pair of directions at one vertex, stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Turn {
    pub a: OEdge,
    pub b: OEdge,
}

impl Turn {
    pub fn new(x: OEdge, y: OEdge) -> Self {
        if x <= y {
            Turn { a: x, b: y }
        } else {
            Turn { a: y, b: x }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// The image turn `{Df(a), Df(b)}`.
    pub fn image(&self, df: &DirectionMap) -> Turn {
        Turn::new(df.apply(self.a), df.apply(self.b))
    }
}

/// The induced map on directions, `Df(d) =` first edge of `f(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionMap {
    table: Vec<OEdge>,
}

impl DirectionMap {
    pub fn apply(&self, d: OEdge) -> OEdge {
        self.table[d.index()]
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Directions not in the image of the map.
    pub fn missed(&self) -> Vec<OEdge> {
        let hit: BTreeSet<OEdge> = self.table.iter().copied().collect();
        (0..self.table.len()).map(OEdge::from_index).filter(|d| !hit.contains(d)).collect()
    }
}

/// The direction map of a self-map.
pub fn direction_map(f: &GraphMap) -> DirectionMap {
    let n = f.domain().num_edges();
    DirectionMap { table: (0..2 * n).map(|i| f.first_edge(OEdge::from_index(i))).collect() }
}

/// Directions lying on cycles of the direction map.
pub fn periodic_directions(f: &GraphMap) -> BTreeSet<OEdge> {
    let df = direction_map(f);
    let n = df.len();
    (0..n)
        .map(OEdge::from_index)
        .filter(|&d| {
            let mut x = df.apply(d);
            for _ in 0..n {
                if x == d {
                    return true;
                }
                x = df.apply(x);
            }
            false
        })
        .collect()
}

/// All nondegenerate turns of the domain graph.
pub fn all_turns(f: &GraphMap) -> Vec<Turn> {
    let g = f.domain();
    let mut out = Vec::new();
    for v in 0..g.num_vertices() {
        let ds = g.directions_at(v);
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                out.push(Turn::new(ds[i], ds[j]));
            }
        }
    }
    out.sort();
    out
}

/// Turns that become degenerate under some iterate of the direction map,
/// found by iterating the pair map until a degenerate pair or a repeat.
pub fn illegal_turns(f: &GraphMap) -> BTreeSet<Turn> {
    let df = direction_map(f);
    let bound = df.len() * df.len() + 1;
    all_turns(f)
        .into_iter()
        .filter(|t| {
            let mut seen = BTreeSet::new();
            let mut x = *t;
            for _ in 0..bound {
                if x.is_degenerate() {
                    return true;
                }
                if !seen.insert(x) {
                    return false;
                }
                x = x.image(&df);
            }
            false
        })
        .collect()
}

/// Turns crossed by a path: `{ē_i, e_{i+1}}` for consecutive edges.
pub fn turns_of_path(path: &[OEdge]) -> impl Iterator<Item = (usize, Turn)> + '_ {
    path.windows(2).enumerate().map(|(i, w)| (i, Turn::new(w[0].inv(), w[1])))
}

/// Where an edge image crosses an illegal or degenerate turn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainTrackWitness {
    pub edge: String,
    pub position: usize,
    pub turn: (String, String),
}

/// Check that no edge image crosses an illegal turn. On failure the first
/// offending edge and position are returned.
pub fn is_train_track(f: &GraphMap) -> Result<(), TrainTrackWitness> {
    let illegal = illegal_turns(f);
    let g = f.domain();
    for e in 0..g.num_edges() {
        for (pos, t) in turns_of_path(f.edge_image(e)) {
            if t.is_degenerate() || illegal.contains(&t) {
                return Err(TrainTrackWitness {
                    edge: g.edge_name(e).to_string(),
                    position: pos,
                    turn: (g.oedge_name(t.a), g.oedge_name(t.b)),
                });
            }
        }
    }
    Ok(())
}

/// Least set of nondegenerate turns containing the turns crossed by edge
/// images and closed under the direction map.
pub fn taken_turns(f: &GraphMap) -> BTreeSet<Turn> {
    let df = direction_map(f);
    let mut set: BTreeSet<Turn> = BTreeSet::new();
    let mut stack = Vec::new();
    for e in 0..f.domain().num_edges() {
        for (_, t) in turns_of_path(f.edge_image(e)) {
            if !t.is_degenerate() && set.insert(t) {
                stack.push(t);
            }
        }
    }
    while let Some(t) = stack.pop() {
        let u = t.image(&df);
        if !u.is_degenerate() && set.insert(u) {
            stack.push(u);
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::Graph;

    fn rose_map(images: Vec<Vec<OEdge>>) -> GraphMap {
        let gens: Vec<String> = (0..images.len()).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let g = Graph::rose(&gens);
        GraphMap::new(g.clone(), g, vec![0], images).unwrap()
    }

    #[test]
    fn identity_has_no_illegal_turns() {
        let f = rose_map(vec![vec![OEdge::fwd(0)], vec![OEdge::fwd(1)]]);
        assert!(illegal_turns(&f).is_empty());
        assert_eq!(periodic_directions(&f).len(), 4);
        assert!(taken_turns(&f).is_empty());
        assert!(is_train_track(&f).is_ok());
    }

    #[test]
    fn non_train_track_rose_map_has_witness() {
        let (a, b) = (OEdge::fwd(0), OEdge::fwd(1));
        let f = rose_map(vec![vec![a, b], vec![a.inv()]]);
        let w = is_train_track(&f).unwrap_err();
        assert_eq!(w.edge, "a");
        assert_eq!(w.position, 0);
    }

    #[test]
    fn illegal_set_is_closed_under_df() {
        let (a, b) = (OEdge::fwd(0), OEdge::fwd(1));
        let f = rose_map(vec![vec![a, b, a], vec![b, a]]);
        let df = direction_map(&f);
        let ill = illegal_turns(&f);
        for t in &ill {
            let u = t.image(&df);
            assert!(u.is_degenerate() || ill.contains(&u));
        }
    }
}
