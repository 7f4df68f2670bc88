//! Folded mapping tori with their trapezoidal cell structure.
//!
//! Levels `G_0, …, G_K` of a fold sequence are stacked with unit time steps;
//! level `K` is glued to level `0` through `h` and the subdivision. Fold `l`
//! contributes the skew 1-cell `d_l` from its fold vertex at time `l − 1` to
//! the merged far end at time `l`. Vertical 1-cells are forward flow lines of
//! skew endpoints, cut at skew endpoints and at points of the base level.
//! Each 2-cell is the basin of a skew cell: everything flowing up from it
//! before reaching another skew cell.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{q, qi, render, Q};
use crate::folding::{aux_graph, check_acyclic, Acyclicity, FoldSequence};
use crate::graphcore::OEdge;

/// Errors from [`build_torus`].
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorusError {
    #[error("fold sequence has no folds, so there are no skew 1-cells")]
    NoFolds,
    #[error("auxiliary graph has a cycle {0:?}; the map is not expanding irreducible")]
    CyclicAuxGraph(Vec<String>),
    #[error("flow from the skew cell {0} did not reach a skew cell within the budget")]
    NoSkewCell(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Vertical or skew.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Vertical,
    Skew,
}

/// A point of the complex lying over a vertex of some level graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCell {
    pub name: String,
    pub level: usize,
    pub vertex: usize,
    pub vertex_name: String,
    /// Whether this 0-cell is a skew-cell endpoint.
    pub skew_endpoint: bool,
}

/// A vertical or skew 1-cell, oriented upward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneCell {
    pub name: String,
    pub kind: CellKind,
    pub from: usize,
    pub to: usize,
    /// Number of unit time steps spanned.
    pub steps: usize,
    /// For skew cells, the index of the fold.
    pub fold: Option<usize>,
    /// Vertex name at the start (vertical cells) or the fold vertex (skew).
    pub host: String,
}

/// A skew cell on the top of a 2-cell, with the bottom parameters flowing
/// into it and the vertical cells leading to the next one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopItem {
    pub cell: usize,
    /// `+1` when the skew cell rises with the bottom parameter, else `−1`.
    pub sign: i8,
    pub s0: Q,
    pub s1: Q,
    /// Vertical cells from this item to the next, in bottom-parameter order,
    /// each with the sign it is traversed with.
    pub jump: Vec<(usize, i8)>,
    /// Time of the lower end, counted from the base level of the complex.
    pub time: usize,
}

/// A trapezoidal 2-cell: bottom skew cell, vertical sides, top staircase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCell {
    pub name: String,
    pub bottom: usize,
    /// Vertical cells above the lower end of the bottom, upward.
    pub left: Vec<usize>,
    /// Vertical cells above the upper end of the bottom, upward.
    pub right: Vec<usize>,
    pub top: Vec<TopItem>,
}

impl TwoCell {
    /// Oriented boundary loop: bottom, right side up, top backward, left
    /// side down.
    pub fn boundary(&self) -> Vec<(usize, i8)> {
        let mut out = vec![(self.bottom, 1)];
        out.extend(self.right.iter().map(|&c| (c, 1)));
        for (i, item) in self.top.iter().enumerate().rev() {
            if i + 1 < self.top.len() {
                out.extend(item.jump.iter().rev().map(|&(c, s)| (c, -s)));
            }
            out.push((item.cell, -item.sign));
        }
        out.extend(self.left.iter().rev().map(|&c| (c, -1)));
        out
    }

    /// Whether every top item rises and every jump goes up.
    pub fn is_monotone(&self) -> bool {
        self.top.iter().all(|t| t.sign > 0 && t.jump.iter().all(|&(_, s)| s > 0))
    }
}

/// The folded mapping torus.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrapComplex {
    /// The fold sequence this complex was built from.
    pub folds: FoldSequence,
    pub zero_cells: Vec<ZeroCell>,
    pub one_cells: Vec<OneCell>,
    pub two_cells: Vec<TwoCell>,
    /// For each edge of the subdivided base graph, the 2-cell it lies in.
    pub base_overlay: Vec<usize>,
}

type Node = (usize, usize);

struct Flow<'a> {
    seq: &'a FoldSequence,
    k: usize,
}

impl Flow<'_> {
    fn norm(&self, t: usize, u: usize) -> Node {
        if t == self.k {
            (0, self.seq.h.vertex_image(u))
        } else {
            (t, u)
        }
    }

    fn succ(&self, (t, u): Node) -> Node {
        self.norm(t + 1, self.seq.folds[t].quotient.vertex_image(u))
    }

    fn skew_start(&self, l: usize) -> Node {
        (l, self.seq.folds[l].vertex)
    }

    fn skew_end(&self, l: usize) -> Node {
        let f = &self.seq.folds[l];
        let g = &self.seq.levels[l].graph;
        self.norm(l + 1, f.quotient.vertex_image(g.term(f.alpha)))
    }

    fn vertex_name(&self, (t, u): Node) -> &str {
        self.seq.levels[t].graph.vertex_name(u)
    }
}

struct Piece {
    edge: OEdge,
    s0: Q,
    s1: Q,
}

enum Front {
    Alive(Piece),
    Top { fold: usize, sign: i8, s0: Q, s1: Q, time: usize },
}

impl TrapComplex {
    pub fn num_folds(&self) -> usize {
        self.folds.num_folds()
    }

    pub fn skew_cells(&self) -> Vec<usize> {
        (0..self.one_cells.len()).filter(|&c| self.one_cells[c].kind == CellKind::Skew).collect()
    }

    pub fn vertical_cells(&self) -> Vec<usize> {
        (0..self.one_cells.len()).filter(|&c| self.one_cells[c].kind == CellKind::Vertical).collect()
    }

    /// The skew cell of fold `l` (zero-based).
    pub fn skew_of_fold(&self, l: usize) -> usize {
        self.one_cells.iter().position(|c| c.fold == Some(l)).expect("one skew cell per fold")
    }

    /// The 2-cell whose bottom is the given skew cell.
    pub fn basin_of(&self, skew: usize) -> usize {
        self.two_cells.iter().position(|c| c.bottom == skew).expect("every skew cell is a bottom")
    }

    /// The vertical cell leaving a 0-cell.
    pub fn vertical_from(&self, zero: usize) -> usize {
        self.one_cells
            .iter()
            .position(|c| c.kind == CellKind::Vertical && c.from == zero)
            .expect("every 0-cell has an upward vertical cell")
    }

    pub fn find_cell(&self, name: &str) -> Option<usize> {
        self.one_cells.iter().position(|c| c.name == name)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.zero_cells.len() as i64 - self.one_cells.len() as i64 + self.two_cells.len() as i64
    }

    /// A 1-chain from named cells with integer coefficients.
    pub fn chain(&self, terms: &[(&str, i64)]) -> Option<Vec<i64>> {
        let mut c = vec![0; self.one_cells.len()];
        for (name, k) in terms {
            c[self.find_cell(name)?] += k;
        }
        Some(c)
    }

    /// DOT rendering of the 1-skeleton; skew cells dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph torus {\n  rankdir=BT;\n");
        for z in &self.zero_cells {
            out.push_str(&format!("  \"{}\" [label=\"{}\"];\n", z.name, z.name));
        }
        for c in &self.one_cells {
            let style = match c.kind {
                CellKind::Vertical => "solid",
                CellKind::Skew => "dashed",
            };
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\", style={style}, kind={:?}];\n",
                self.zero_cells[c.from].name,
                self.zero_cells[c.to].name,
                c.name,
                format!("{:?}", c.kind).to_lowercase()
            ));
        }
        out.push_str("}\n");
        out
    }

    /// TikZ picture with each 2-cell drawn in its own unit-width chart, time
    /// on the vertical axis.
    pub fn to_tikz(&self) -> String {
        let mut out = String::from("\\begin{tikzpicture}[yscale=0.5]\n");
        for (i, t) in self.two_cells.iter().enumerate() {
            let x0 = 2 * i;
            let l = self.one_cells[t.bottom].fold.expect("skew");
            let f = |s: &Q| format!("{}", x0 as f64 + crate::exact::to_f64(s));
            out.push_str(&format!(
                "  \\draw ({x0},{l}) -- ({},{}) node[midway,below]{{{}}};\n",
                x0 + 1,
                l + 1,
                self.one_cells[t.bottom].name
            ));
            let steps = |cells: &[usize]| cells.iter().map(|&c| self.one_cells[c].steps).sum::<usize>();
            out.push_str(&format!("  \\draw ({x0},{l}) -- ({x0},{});\n", l + steps(&t.left)));
            out.push_str(&format!("  \\draw ({},{}) -- ({},{});\n", x0 + 1, l + 1, x0 + 1, l + 1 + steps(&t.right)));
            for item in &t.top {
                let (y0, y1) = if item.sign > 0 { (item.time, item.time + 1) } else { (item.time + 1, item.time) };
                out.push_str(&format!(
                    "  \\draw ({},{y0}) -- ({},{y1}) node[midway,above]{{{}}};\n",
                    f(&item.s0),
                    f(&item.s1),
                    self.one_cells[item.cell].name
                ));
            }
        }
        out.push_str("\\end{tikzpicture}\n");
        out
    }
}

/// Build the folded mapping torus of a fold sequence.
pub fn build_torus(seq: &FoldSequence) -> Result<TrapComplex, TorusError> {
    let k = seq.num_folds();
    if k == 0 {
        return Err(TorusError::NoFolds);
    }
    let target_map = seq.recompose();
    if let Acyclicity::Cycle(c) = check_acyclic(&aux_graph(&target_map)) {
        return Err(TorusError::CyclicAuxGraph(c));
    }
    let flow = Flow { seq, k };

    // 0-cells.
    let mut endpoints: BTreeSet<Node> = BTreeSet::new();
    for l in 0..k {
        endpoints.insert(flow.skew_start(l));
        endpoints.insert(flow.skew_end(l));
    }
    let mut skeleton: BTreeSet<Node> = endpoints.clone();
    let mut stack: Vec<Node> = endpoints.iter().copied().collect();
    while let Some(n) = stack.pop() {
        let m = flow.succ(n);
        if skeleton.insert(m) {
            stack.push(m);
        }
    }
    let zero_nodes: Vec<Node> = skeleton.iter().copied().filter(|n| endpoints.contains(n) || n.0 == 0).collect();
    let zero_index: BTreeMap<Node, usize> = zero_nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let zero_cells: Vec<ZeroCell> = zero_nodes
        .iter()
        .map(|&n| ZeroCell {
            name: format!("{}@{}", flow.vertex_name(n), n.0),
            level: n.0,
            vertex: n.1,
            vertex_name: flow.vertex_name(n).to_string(),
            skew_endpoint: endpoints.contains(&n),
        })
        .collect();

    // Vertical cells, one leaving each 0-cell.
    let mut one_cells: Vec<OneCell> = Vec::new();
    let mut per_host: BTreeMap<String, usize> = BTreeMap::new();
    for (i, &n) in zero_nodes.iter().enumerate() {
        let mut cur = flow.succ(n);
        let mut steps = 1;
        while !zero_index.contains_key(&cur) {
            cur = flow.succ(cur);
            steps += 1;
            if steps > k * (skeleton.len() + 1) {
                return Err(TorusError::Inconsistent("vertical flow line never meets a 0-cell".into()));
            }
        }
        let host = flow.vertex_name(n).to_string();
        let count = per_host.entry(host.clone()).or_insert(0);
        *count += 1;
        one_cells.push(OneCell {
            name: format!("{host}_{count}"),
            kind: CellKind::Vertical,
            from: i,
            to: zero_index[&cur],
            steps,
            fold: None,
            host,
        });
    }
    let vertical_from: Vec<usize> = (0..zero_nodes.len()).collect();
    let skew_base = one_cells.len();
    for l in 0..k {
        one_cells.push(OneCell {
            name: format!("d{}", l + 1),
            kind: CellKind::Skew,
            from: zero_index[&flow.skew_start(l)],
            to: zero_index[&flow.skew_end(l)],
            steps: 1,
            fold: Some(l),
            host: flow.vertex_name(flow.skew_start(l)).to_string(),
        });
    }

    // Upward chain of vertical cells from one 0-cell, `steps` time units.
    let chain = |from: Node, steps: usize, to: Node| -> Result<Vec<usize>, TorusError> {
        let mut cur = *zero_index
            .get(&from)
            .ok_or_else(|| TorusError::Inconsistent(format!("chain start {from:?} is not a 0-cell")))?;
        let mut left = steps;
        let mut out = Vec::new();
        while left > 0 {
            let c = vertical_from[cur];
            let cell = &one_cells[c];
            if cell.steps > left {
                return Err(TorusError::Inconsistent(format!("chain from {from:?} stops inside {}", cell.name)));
            }
            left -= cell.steps;
            out.push(c);
            cur = cell.to;
        }
        if zero_nodes[cur] != to {
            return Err(TorusError::Inconsistent(format!(
                "chain from {from:?} ends at {:?}, not {to:?}",
                zero_nodes[cur]
            )));
        }
        Ok(out)
    };

    // Basins.
    let budget = 64 * k * (seq.subdivision.graph.num_edges() + 2);
    let mut two_cells = Vec::new();
    let mut base_overlay: Vec<Option<usize>> = vec![None; seq.levels[0].graph.num_edges()];
    for l in 0..k {
        let fd = &seq.folds[l];
        let gamma = fd.quotient.image(fd.alpha)[0];
        let mut front = vec![Front::Alive(Piece { edge: gamma, s0: qi(0), s1: qi(1) })];
        let mut time = l + 1;
        let wrap = |front: Vec<Front>, overlay: &mut Vec<Option<usize>>| -> Result<Vec<Front>, TorusError> {
            let mut out = Vec::new();
            for item in front {
                match item {
                    Front::Alive(p) => {
                        let e = seq.h.image(p.edge)[0];
                        let pieces = seq.subdivision.pi.image(e);
                        let n = pieces.len() as i64;
                        let width = &p.s1 - &p.s0;
                        for (j, pc) in pieces.into_iter().enumerate() {
                            let a = &p.s0 + &width * q(j as i64, n);
                            let b = &p.s0 + &width * q(j as i64 + 1, n);
                            match overlay[pc.edge] {
                                None => overlay[pc.edge] = Some(l),
                                Some(o) if o != l => {
                                    return Err(TorusError::Inconsistent(format!(
                                        "base edge {} lies in two 2-cells",
                                        seq.levels[0].graph.edge_name(pc.edge)
                                    )))
                                }
                                _ => {}
                            }
                            out.push(Front::Alive(Piece { edge: pc, s0: a, s1: b }));
                        }
                    }
                    top => out.push(top),
                }
            }
            Ok(out)
        };
        if time == k {
            front = wrap(front, &mut base_overlay)?;
        }
        while front.iter().any(|x| matches!(x, Front::Alive(_))) {
            if time - l > budget {
                return Err(TorusError::NoSkewCell(format!("d{}", l + 1)));
            }
            let t = time % k;
            let fold = &seq.folds[t];
            front = front
                .into_iter()
                .map(|x| match x {
                    Front::Alive(p) if p.edge.edge == fold.alpha.edge || p.edge.edge == fold.beta.edge => {
                        let sign = if p.edge == fold.alpha || p.edge == fold.beta { 1 } else { -1 };
                        Front::Top { fold: t, sign, s0: p.s0, s1: p.s1, time }
                    }
                    Front::Alive(p) => {
                        let e = fold.quotient.image(p.edge)[0];
                        Front::Alive(Piece { edge: e, s0: p.s0, s1: p.s1 })
                    }
                    top => top,
                })
                .collect();
            time += 1;
            if time % k == 0 {
                front = wrap(front, &mut base_overlay)?;
            }
        }
        let mut top: Vec<TopItem> = front
            .into_iter()
            .map(|x| match x {
                Front::Top { fold, sign, s0, s1, time } => {
                    TopItem { cell: skew_base + fold, sign, s0, s1, jump: Vec::new(), time }
                }
                Front::Alive(_) => unreachable!("front fully stopped"),
            })
            .collect();
        // Nodes and times of each item's ends in bottom-parameter order.
        let ends = |item: &TopItem| -> ((Node, usize), (Node, usize)) {
            let fold = item.cell - skew_base;
            let lower = (flow.skew_start(fold), item.time);
            let upper = (flow.skew_end(fold), item.time + 1);
            if item.sign > 0 {
                (lower, upper)
            } else {
                (upper, lower)
            }
        };
        for i in 0..top.len().saturating_sub(1) {
            let (_, (a, ta)) = ends(&top[i]);
            let ((b, tb), _) = ends(&top[i + 1]);
            top[i].jump = if ta <= tb {
                chain(a, tb - ta, b)?.into_iter().map(|c| (c, 1)).collect()
            } else {
                chain(b, ta - tb, a)?.into_iter().rev().map(|c| (c, -1)).collect()
            };
        }
        let ((first, tf), _) = ends(&top[0]);
        let (_, (last, tl)) = ends(top.last().expect("nonempty top"));
        let left = chain(flow.skew_start(l), tf - l, first)?;
        let right = chain(flow.skew_end(l), tl - (l + 1), last)?;
        two_cells.push(TwoCell { name: format!("T{}", l + 1), bottom: skew_base + l, left, right, top });
    }
    let base_overlay = base_overlay
        .into_iter()
        .enumerate()
        .map(|(e, o)| {
            o.ok_or_else(|| {
                TorusError::Inconsistent(format!("base edge {} is in no 2-cell", seq.levels[0].graph.edge_name(e)))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let x = TrapComplex { folds: seq.clone(), zero_cells, one_cells, two_cells, base_overlay };
    let report = validate(&x);
    if !report.valid {
        return Err(TorusError::Inconsistent(report.problems.join("; ")));
    }
    Ok(x)
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// Check the cell-structure invariants, naming each offending cell.
pub fn validate(x: &TrapComplex) -> ValidationReport {
    let mut problems = Vec::new();
    let n1 = x.one_cells.len();
    let mut bottoms = vec![0usize; n1];
    let mut in_top = vec![0usize; n1];
    let mut incidences = vec![0usize; n1];
    for t in &x.two_cells {
        bottoms[t.bottom] += 1;
        for item in &t.top {
            in_top[item.cell] += 1;
        }
        let bd = t.boundary();
        for &(c, _) in &bd {
            incidences[c] += 1;
        }
        let mut net = vec![0i64; x.zero_cells.len()];
        for &(c, s) in &bd {
            net[x.one_cells[c].to] += s as i64;
            net[x.one_cells[c].from] -= s as i64;
        }
        let closed = {
            let mut ok = true;
            for w in bd.windows(2) {
                let end = |(c, s): (usize, i8)| if s > 0 { x.one_cells[c].to } else { x.one_cells[c].from };
                let start = |(c, s): (usize, i8)| if s > 0 { x.one_cells[c].from } else { x.one_cells[c].to };
                ok &= end(w[0]) == start(w[1]);
            }
            let end = |(c, s): (usize, i8)| if s > 0 { x.one_cells[c].to } else { x.one_cells[c].from };
            let start = |(c, s): (usize, i8)| if s > 0 { x.one_cells[c].from } else { x.one_cells[c].to };
            ok && end(*bd.last().expect("nonempty")) == start(bd[0])
        };
        if !closed {
            problems.push(format!("boundary of 2-cell {} is not a closed loop", t.name));
        }
    }
    for (c, cell) in x.one_cells.iter().enumerate() {
        match cell.kind {
            CellKind::Skew => {
                let degree = bottoms[c] + in_top[c];
                if bottoms[c] != 1 || degree != 3 {
                    problems.push(format!(
                        "skew 1-cell {} has degree {degree} (bottom of {} 2-cells)",
                        cell.name, bottoms[c]
                    ));
                }
            }
            CellKind::Vertical => {
                if bottoms[c] + in_top[c] != 0 {
                    problems.push(format!("vertical 1-cell {} used as a skew side", cell.name));
                }
                if incidences[c] < 2 {
                    problems.push(format!("vertical 1-cell {} is dangling", cell.name));
                }
            }
        }
    }
    // Backward extension of every vertical cell reaches a skew endpoint.
    let mut reached = vec![false; x.zero_cells.len()];
    let mut stack: Vec<usize> = (0..x.zero_cells.len()).filter(|&z| x.zero_cells[z].skew_endpoint).collect();
    for &z in &stack {
        reached[z] = true;
    }
    while let Some(z) = stack.pop() {
        for c in x.one_cells.iter().filter(|c| c.kind == CellKind::Vertical && c.from == z) {
            if !reached[c.to] {
                reached[c.to] = true;
                stack.push(c.to);
            }
        }
    }
    for c in x.one_cells.iter().filter(|c| c.kind == CellKind::Vertical) {
        if !reached[c.from] {
            problems.push(format!("vertical 1-cell {} does not flow back to a skew cell", c.name));
        }
    }
    if x.euler_characteristic() != 0 {
        problems.push(format!("Euler characteristic is {}", x.euler_characteristic()));
    }
    ValidationReport { valid: problems.is_empty(), problems }
}

/// Result of [`skew_loop`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkewLoop {
    /// The skew cells in cyclic order with the 1-chain they form.
    Loop { cells: Vec<String>, chain: Vec<i64> },
    /// Skew cells whose upper end is not the lower end of exactly one other.
    NotALoop { breaks: Vec<String> },
}

/// Concatenate the skew cells when they close up into a single loop.
pub fn skew_loop(x: &TrapComplex) -> SkewLoop {
    let skew = x.skew_cells();
    let mut breaks = Vec::new();
    let mut next = BTreeMap::new();
    for &c in &skew {
        let succ: Vec<usize> = skew.iter().copied().filter(|&d| x.one_cells[d].from == x.one_cells[c].to).collect();
        if succ.len() == 1 {
            next.insert(c, succ[0]);
        } else {
            breaks.push(format!(
                "{} ends at {} followed by {} skew cells",
                x.one_cells[c].name,
                x.zero_cells[x.one_cells[c].to].name,
                succ.len()
            ));
        }
    }
    if breaks.is_empty() {
        let mut cells = vec![skew[0]];
        let mut cur = next[&skew[0]];
        while cur != skew[0] && cells.len() <= skew.len() {
            cells.push(cur);
            cur = next[&cur];
        }
        if cells.len() == skew.len() {
            let mut chain = vec![0; x.one_cells.len()];
            for &c in &cells {
                chain[c] += 1;
            }
            return SkewLoop::Loop { cells: cells.iter().map(|&c| x.one_cells[c].name.clone()).collect(), chain };
        }
        breaks.push(format!("skew cells form a loop of length {} out of {}", cells.len(), skew.len()));
    }
    SkewLoop::NotALoop { breaks }
}

/// Human-readable boundary words of all 2-cells.
pub fn boundary_words(x: &TrapComplex) -> Vec<(String, String)> {
    x.two_cells
        .iter()
        .map(|t| {
            let w: Vec<String> = t
                .boundary()
                .iter()
                .map(|&(c, s)| if s > 0 { x.one_cells[c].name.clone() } else { format!("-{}", x.one_cells[c].name) })
                .collect();
            (t.name.clone(), w.join(" "))
        })
        .collect()
}

/// Top staircases in bottom-parameter order, e.g. `d2 d3 -d4`.
pub fn top_words(x: &TrapComplex) -> Vec<(String, String)> {
    x.two_cells
        .iter()
        .map(|t| {
            let w: Vec<String> = t
                .top
                .iter()
                .map(|i| {
                    let n = &x.one_cells[i.cell].name;
                    let s = if i.sign > 0 { n.clone() } else { format!("-{n}") };
                    format!("{s}[{},{}]", render(&i.s0), render(&i.s1))
                })
                .collect();
            (t.name.clone(), w.join(" "))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::decompose;
    use crate::graphcore::{Graph, GraphMap};

    fn fib() -> GraphMap {
        let g = Graph::rose(&["a".to_string(), "b".to_string()]);
        GraphMap::new(g.clone(), g, vec![0], vec![vec![OEdge::fwd(0), OEdge::fwd(1)], vec![OEdge::fwd(0)]]).unwrap()
    }

    #[test]
    fn fibonacci_torus_has_one_trapezoid() {
        let x = build_torus(&decompose(&fib()).unwrap()).unwrap();
        assert_eq!(x.skew_cells().len(), 1);
        assert_eq!(x.two_cells.len(), 1);
        assert_eq!(x.euler_characteristic(), 0);
        assert!(validate(&x).valid);
    }

    #[test]
    fn injected_problems_are_named() {
        let x = build_torus(&decompose(&fib()).unwrap()).unwrap();
        let mut bad = x.clone();
        let d = bad.skew_cells()[0];
        for t in &mut bad.two_cells {
            t.top.retain(|i| i.cell != d);
        }
        let r = validate(&bad);
        assert!(!r.valid);
        assert!(r.problems.iter().any(|p| p.contains("skew 1-cell d1")));

        let mut dangling = x.clone();
        let z = dangling.zero_cells.len();
        dangling.zero_cells.push(ZeroCell {
            name: "extra".into(),
            level: 0,
            vertex: 0,
            vertex_name: "extra".into(),
            skew_endpoint: false,
        });
        dangling.one_cells.push(OneCell {
            name: "dangle".into(),
            kind: CellKind::Vertical,
            from: z,
            to: 0,
            steps: 1,
            fold: None,
            host: "extra".into(),
        });
        let r = validate(&dangling);
        assert!(r.problems.iter().any(|p| p.contains("dangle")));
    }
}
