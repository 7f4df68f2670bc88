//! Periodic Nielsen path search, ideal Whitehead graphs, the rotationless
//! index and the lone-axis decision.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::matrix::{is_expanding, is_irreducible};
use super::turns::{illegal_turns, is_train_track, periodic_directions, taken_turns, Turn};
use super::TrainTrackError;
use crate::graphcore::{reduce, GraphMap, OEdge};

/// A periodic Nielsen path found by the bounded search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NielsenPath {
    pub path: String,
    pub period: usize,
}

/// Result of [`nielsen_search`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NielsenReport {
    Found(Vec<NielsenPath>),
    NoneUpTo { max_len: usize, max_period: usize },
}

impl NielsenReport {
    pub fn none_found(&self) -> bool {
        matches!(self, NielsenReport::NoneUpTo { .. })
    }
}

/// Default bounds for [`nielsen_search`].
pub const NIELSEN_DEFAULT_LEN: usize = 10;
pub const NIELSEN_DEFAULT_PERIOD: usize = 6;

/// Append `w` to the tight path `acc`, cancelling at the junction.
fn push_tight(acc: &mut Vec<OEdge>, w: &[OEdge]) {
    for &e in w {
        if acc.last() == Some(&e.inv()) {
            acc.pop();
        } else {
            acc.push(e);
        }
    }
}

struct NielsenDfs<'a> {
    f: &'a GraphMap,
    /// `powers[p-1][d]` is the tightened `f^p` of oriented edge `d`.
    powers: Vec<Vec<Vec<OEdge>>>,
    /// `vpow[p-1][v]` is `f^p(v)`.
    vpow: Vec<Vec<usize>>,
    max_len: usize,
    found: Vec<NielsenPath>,
}

impl NielsenDfs<'_> {
    const LIMIT: usize = 64;

    fn visit(&mut self, rho: &mut Vec<OEdge>, images: &mut [Vec<OEdge>]) {
        let g = self.f.domain();
        let s = g.init(rho[0]);
        let t = g.term(*rho.last().expect("nonempty"));
        for (p, img) in images.iter().enumerate() {
            if self.vpow[p][s] == s && self.vpow[p][t] == t && img == rho {
                self.found.push(NielsenPath { path: g.path_string(rho), period: p + 1 });
                break;
            }
        }
        if rho.len() >= self.max_len || self.found.len() >= Self::LIMIT {
            return;
        }
        let last = *rho.last().expect("nonempty");
        for d in g.directions_at(t) {
            if d == last.inv() {
                continue;
            }
            let saved: Vec<Vec<OEdge>> = images.to_vec();
            for (p, img) in images.iter_mut().enumerate() {
                push_tight(img, &self.powers[p][d.index()]);
            }
            rho.push(d);
            self.visit(rho, images);
            rho.pop();
            images.clone_from_slice(&saved);
            if self.found.len() >= Self::LIMIT {
                return;
            }
        }
    }
}

/// Enumerate tight vertex-to-vertex paths `ρ` with `|ρ| ≤ max_len` and test
/// whether the tightened `f^p(ρ)` equals `ρ` for some `p ≤ max_period`.
/// Images are maintained incrementally along the depth-first search.
pub fn nielsen_search(f: &GraphMap, max_len: usize, max_period: usize) -> NielsenReport {
    let g = f.domain();
    let n = 2 * g.num_edges();
    let mut powers: Vec<Vec<Vec<OEdge>>> = Vec::new();
    let mut vpow: Vec<Vec<usize>> = Vec::new();
    for p in 0..max_period {
        let (row, vrow) = if p == 0 {
            ((0..n).map(|i| f.image(OEdge::from_index(i))).collect(), f.vmap().to_vec())
        } else {
            let prev = &powers[p - 1];
            let row: Vec<Vec<OEdge>> = prev.iter().map(|w| reduce(&f.image_of(w))).collect();
            (row, vpow[p - 1].iter().map(|&v| f.vertex_image(v)).collect())
        };
        powers.push(row);
        vpow.push(vrow);
    }
    let mut dfs = NielsenDfs { f, powers, vpow, max_len, found: Vec::new() };
    for d in g.oedges() {
        let mut images: Vec<Vec<OEdge>> = (0..max_period).map(|p| dfs.powers[p][d.index()].clone()).collect();
        dfs.visit(&mut vec![d], &mut images);
        if dfs.found.len() >= NielsenDfs::LIMIT {
            break;
        }
    }
    if dfs.found.is_empty() {
        NielsenReport::NoneUpTo { max_len, max_period }
    } else {
        NielsenReport::Found(dfs.found)
    }
}

/// One component of the ideal Whitehead graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwComponent {
    pub vertex: String,
    pub directions: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(skip)]
    pub(crate) raw_vertices: Vec<OEdge>,
    #[serde(skip)]
    pub(crate) raw_edges: Vec<Turn>,
}

impl IwComponent {
    pub fn size(&self) -> usize {
        self.directions.len()
    }

    /// A vertex whose removal disconnects the component, if any.
    pub fn cut_vertex(&self) -> Option<String> {
        if self.raw_vertices.len() < 3 {
            return None;
        }
        for (k, &x) in self.raw_vertices.iter().enumerate() {
            let rest: Vec<OEdge> = self.raw_vertices.iter().copied().filter(|&y| y != x).collect();
            let mut seen = BTreeSet::from([rest[0]]);
            let mut stack = vec![rest[0]];
            while let Some(v) = stack.pop() {
                for t in &self.raw_edges {
                    let other = if t.a == v {
                        t.b
                    } else if t.b == v {
                        t.a
                    } else {
                        continue;
                    };
                    if other != x && seen.insert(other) {
                        stack.push(other);
                    }
                }
            }
            if seen.len() < rest.len() {
                return Some(self.directions[k].clone());
            }
        }
        None
    }

    /// Whether the component is a complete graph on three vertices.
    pub fn is_triangle(&self) -> bool {
        self.raw_vertices.len() == 3 && self.raw_edges.len() == 3
    }
}

/// The ideal Whitehead graph in the no-periodic-Nielsen-path regime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealWhiteheadGraph {
    pub components: Vec<IwComponent>,
}

impl IdealWhiteheadGraph {
    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(IwComponent::size).collect()
    }

    pub fn all_triangles(&self) -> bool {
        self.components.iter().all(IwComponent::is_triangle)
    }

    /// DOT rendering with one cluster per component.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph iw {\n");
        for (i, c) in self.components.iter().enumerate() {
            out.push_str(&format!("  subgraph cluster_{i} {{\n    label=\"{}\";\n", c.vertex));
            for d in &c.directions {
                out.push_str(&format!("    \"{i}:{d}\" [label=\"{d}\"];\n"));
            }
            for (a, b) in &c.edges {
                out.push_str(&format!("    \"{i}:{a}\" -- \"{i}:{b}\";\n"));
            }
            out.push_str("  }\n");
        }
        out.push_str("}\n");
        out
    }
}

/// Principal vertices are those with at least three periodic directions;
/// each contributes its periodic directions joined by taken turns. The
/// result is split into connected components.
pub fn ideal_whitehead(f: &GraphMap, no_pnp: bool) -> Result<IdealWhiteheadGraph, TrainTrackError> {
    if !no_pnp {
        return Err(TrainTrackError::NielsenPathsPresent);
    }
    let g = f.domain();
    let periodic = periodic_directions(f);
    let taken = taken_turns(f);
    let mut components = Vec::new();
    for v in 0..g.num_vertices() {
        let dirs: Vec<OEdge> = g.directions_at(v).into_iter().filter(|d| periodic.contains(d)).collect();
        if dirs.len() < 3 {
            continue;
        }
        let edges: Vec<Turn> = taken.iter().copied().filter(|t| dirs.contains(&t.a) && dirs.contains(&t.b)).collect();
        let mut comp_of: BTreeMap<OEdge, usize> = dirs.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for t in &edges {
                let (x, y) = (comp_of[&t.a], comp_of[&t.b]);
                if x != y {
                    let m = x.min(y);
                    for c in comp_of.values_mut() {
                        if *c == x || *c == y {
                            *c = m;
                        }
                    }
                    changed = true;
                }
            }
        }
        let labels: BTreeSet<usize> = comp_of.values().copied().collect();
        for l in labels {
            let raw_vertices: Vec<OEdge> = dirs.iter().copied().filter(|d| comp_of[d] == l).collect();
            let raw_edges: Vec<Turn> = edges.iter().copied().filter(|t| comp_of[&t.a] == l).collect();
            components.push(IwComponent {
                vertex: g.vertex_name(v).to_string(),
                directions: raw_vertices.iter().map(|&d| g.oedge_name(d)).collect(),
                edges: raw_edges.iter().map(|t| (g.oedge_name(t.a), g.oedge_name(t.b))).collect(),
                raw_vertices,
                raw_edges,
            });
        }
    }
    Ok(IdealWhiteheadGraph { components })
}

/// `Σ (1 − m_i/2)` over components with `m_i` vertices.
pub fn rotationless_index(iw: &IdealWhiteheadGraph) -> Rational64 {
    iw.components.iter().map(|c| Rational64::new(2 - c.size() as i64, 2)).sum()
}

/// Lone-axis verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No(String),
    Inconclusive(String),
}

/// Knobs for [`lone_axis_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoneAxisOptions {
    pub nielsen_len: usize,
    pub nielsen_period: usize,
    /// User assertion of no periodic Nielsen paths, overriding the search.
    pub assert_no_pnp: bool,
    /// Assumption that the outer class is ageometric and fully irreducible.
    pub assume_ageometric_fully_irreducible: bool,
}

impl Default for LoneAxisOptions {
    fn default() -> Self {
        LoneAxisOptions {
            nielsen_len: NIELSEN_DEFAULT_LEN,
            nielsen_period: NIELSEN_DEFAULT_PERIOD,
            assert_no_pnp: false,
            assume_ageometric_fully_irreducible: true,
        }
    }
}

/// Full lone-axis report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoneAxisReport {
    pub verdict: Verdict,
    pub rank: usize,
    pub illegal_turns: Vec<(String, String)>,
    pub iw_sizes: Vec<usize>,
    pub index: Option<String>,
    pub target_index: String,
    pub cut_vertex: Option<String>,
    pub nielsen: NielsenReport,
    pub assumptions: Vec<String>,
}

/// Decide the lone-axis criteria: index `3/2 − N` and no cut vertex in any
/// ideal Whitehead graph component, with the two-illegal-turn shortcut.
pub fn lone_axis_check(f: &GraphMap, opts: &LoneAxisOptions) -> Result<LoneAxisReport, TrainTrackError> {
    if let Err(w) = is_train_track(f) {
        return Err(TrainTrackError::NotTrainTrack(w));
    }
    if !is_irreducible(f) {
        return Err(TrainTrackError::NotIrreducible);
    }
    if !is_expanding(f) {
        return Err(TrainTrackError::NotExpanding);
    }
    let g = f.domain();
    let rank = g.rank().map_err(|e| TrainTrackError::Graph(e.to_string()))?;
    let target = Rational64::new(3, 2) - Rational64::from_integer(rank as i64);
    let ill: Vec<Turn> = illegal_turns(f).into_iter().collect();
    let ill_names = ill.iter().map(|t| (g.oedge_name(t.a), g.oedge_name(t.b))).collect();
    let mut report = LoneAxisReport {
        verdict: Verdict::Inconclusive(String::new()),
        rank,
        illegal_turns: ill_names,
        iw_sizes: Vec::new(),
        index: None,
        target_index: target.to_string(),
        cut_vertex: None,
        nielsen: NielsenReport::NoneUpTo { max_len: 0, max_period: 0 },
        assumptions: Vec::new(),
    };
    if ill.len() >= 2 {
        report.verdict = Verdict::No("at least two illegal turns, so the axis bundle is not a single line".into());
        return Ok(report);
    }
    report.nielsen = if opts.assert_no_pnp {
        report.assumptions.push("no periodic Nielsen paths (asserted by caller)".into());
        NielsenReport::NoneUpTo { max_len: 0, max_period: 0 }
    } else {
        let r = nielsen_search(f, opts.nielsen_len, opts.nielsen_period);
        if r.none_found() {
            report.assumptions.push(format!(
                "no periodic Nielsen paths (none up to length {} and period {})",
                opts.nielsen_len, opts.nielsen_period
            ));
        }
        r
    };
    if !report.nielsen.none_found() {
        report.verdict =
            Verdict::Inconclusive("periodic Nielsen paths present; identifications not implemented".into());
        return Ok(report);
    }
    let iw = ideal_whitehead(f, true)?;
    let index = rotationless_index(&iw);
    report.iw_sizes = iw.sizes();
    report.index = Some(index.to_string());
    report.cut_vertex = iw.components.iter().find_map(IwComponent::cut_vertex);
    if !opts.assume_ageometric_fully_irreducible {
        report.verdict = Verdict::Inconclusive("ageometric and fully irreducible not asserted".into());
        return Ok(report);
    }
    report.assumptions.push("ageometric and fully irreducible (assumed, not computed)".into());
    report.verdict = if index != target {
        Verdict::No(format!("index {index} differs from {target}"))
    } else if let Some(v) = &report.cut_vertex {
        Verdict::No(format!("ideal Whitehead graph component has cut vertex {v}"))
    } else {
        Verdict::Yes
    };
    Ok(report)
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
    fn identity_edges_are_nielsen_paths() {
        let f = rose_map(vec![vec![OEdge::fwd(0)], vec![OEdge::fwd(1)]]);
        match nielsen_search(&f, 2, 1) {
            NielsenReport::Found(v) => assert!(v.iter().any(|p| p.path == "a" && p.period == 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn doubling_map_has_no_principal_vertex() {
        let a = OEdge::fwd(0);
        let iw = ideal_whitehead(&rose_map(vec![vec![a, a]]), true).unwrap();
        assert!(iw.components.is_empty());
        assert_eq!(rotationless_index(&iw), Rational64::from_integer(0));
    }

    #[test]
    fn index_of_two_vertex_component_is_zero() {
        let c = IwComponent {
            vertex: "v".into(),
            directions: vec!["a".into(), "b".into()],
            edges: vec![("a".into(), "b".into())],
            raw_vertices: vec![OEdge::fwd(0), OEdge::fwd(1)],
            raw_edges: vec![Turn::new(OEdge::fwd(0), OEdge::fwd(1))],
        };
        assert_eq!(rotationless_index(&IdealWhiteheadGraph { components: vec![c] }), Rational64::from_integer(0));
    }

    #[test]
    fn refuses_without_no_pnp_flag() {
        let a = OEdge::fwd(0);
        assert_eq!(ideal_whitehead(&rose_map(vec![vec![a, a]]), false), Err(TrainTrackError::NielsenPathsPresent));
    }

    #[test]
    fn path_graph_has_cut_vertex() {
        let v: Vec<OEdge> = (0..3).map(OEdge::fwd).collect();
        let c = IwComponent {
            vertex: "v".into(),
            directions: vec!["a".into(), "b".into(), "c".into()],
            edges: vec![],
            raw_vertices: v.clone(),
            raw_edges: vec![Turn::new(v[0], v[1]), Turn::new(v[1], v[2])],
        };
        assert_eq!(c.cut_vertex(), Some("b".into()));
    }
}
