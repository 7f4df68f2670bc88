//! Cross sections dual to integral classes, their first return maps and
//! monodromy automorphisms.
//!
//! A positive cocycle `z` with integral periods integrates to a height `η`
//! that is linear along each 1-cell and along each flow line of a 2-cell
//! chart. The section at phase `y` is `η ≡ y (mod 1)`: one level arc per
//! height `c ≡ y` inside each 2-cell wherever the bottom lies below `c` and
//! the top above it. Vertices are the crossings with 1-cells together with
//! their forward orbits under the first return, so that vertices map to
//! vertices.

mod audit;
mod reference;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_traits::{One, Signed, Zero};

use crate::cohomology::{potential, Cocycle, CohomologyError};
use crate::exact::{frac, qi, render, Q};
use crate::graphcore::{Graph, GraphMap, OEdge};
use crate::torus::{CellKind, TrapComplex};

pub use audit::{first_return_table, section_audit, SectionAudit, TableRow};
pub use reference::{
    match_reference, monodromy, monodromy_with, reference_from_map, theta_k_reference, Monodromy, Reference,
    ReferenceMatch,
};

/// Errors from section extraction and tracing.
#[derive(Debug, Error, Clone, PartialEq, Serialize, Deserialize)]
pub enum SectionError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("cocycle is not positive on cell {0}")]
    NotPositive(String),
    #[error("height does not increase along the flow in 2-cell {0}")]
    NotFlowPositive(String),
    #[error("no generic phase found near {0}")]
    DegeneratePhase(String),
    #[error("tracing exceeded its budget: {0}")]
    Budget(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("section has {0} components")]
    Disconnected(usize),
    #[error("no relabeling matches the reference: {0}")]
    Reference(String),
    #[error("graph error: {0}")]
    Graph(String),
}

/// A point of the section: on a 1-cell at a height offset from its lower
/// end, or inside a 2-cell at chart level `level` and parameter `s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SectionPoint {
    OnCell { cell: usize, offset: Q },
    Interior { two_cell: usize, level: Q, s: Q },
}

/// Where a section vertex sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Vertical,
    Skew,
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionVertex {
    pub name: String,
    pub point: SectionPoint,
    pub kind: VertexKind,
    /// Host vertex name of the 1-cell (e.g. `R`), empty for interior points.
    pub host: String,
}

/// A level arc piece inside one 2-cell, oriented by increasing `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionEdge {
    pub name: String,
    pub two_cell: usize,
    pub level: Q,
    pub s0: Q,
    pub s1: Q,
    pub from: usize,
    pub to: usize,
}

/// Chart data of a top item: values of `η` at both ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemChart {
    pub cell: usize,
    pub sign: i8,
    pub s0: Q,
    pub s1: Q,
    pub v0: Q,
    pub v1: Q,
    /// Value at the lower end of the cell.
    pub lower: Q,
    /// 0-cells at `s0` and `s1`.
    pub zero0: usize,
    pub zero1: usize,
}

/// Heights along the boundary of one 2-cell in a consistent lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub bottom: usize,
    pub base: Q,
    pub zd: Q,
    /// `(cell, value at lower end)` up the left side, then the top value.
    pub left: Vec<(usize, Q)>,
    pub left_top: Q,
    pub right: Vec<(usize, Q)>,
    pub right_top: Q,
    pub items: Vec<ItemChart>,
    /// After each item, `(cell, value at lower end)` of the jump cells.
    pub jumps: Vec<Vec<(usize, Q)>>,
}

impl Chart {
    fn bottom_at(&self, s: &Q) -> Q {
        &self.base + s * &self.zd
    }

    fn top_at(&self, i: usize, s: &Q) -> Q {
        let it = &self.items[i];
        &it.v0 + (&it.v1 - &it.v0) * (s - &it.s0) / (&it.s1 - &it.s0)
    }

    fn max_top(&self) -> Q {
        self.items.iter().flat_map(|i| [i.v0.clone(), i.v1.clone()]).max().expect("nonempty top")
    }
}

/// The section graph with its embedding.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectionGraph {
    pub cocycle: Cocycle,
    pub phase: Q,
    /// Height of every 0-cell.
    pub potential: Vec<Q>,
    pub charts: Vec<Chart>,
    pub vertices: Vec<SectionVertex>,
    pub edges: Vec<SectionEdge>,
    pub graph: Graph,
    /// Crossings with each 1-cell.
    pub crossings: Vec<usize>,
    /// The crossing with the least skew cell that meets the section.
    pub basepoint: usize,
}

impl SectionGraph {
    pub fn num_components(&self) -> usize {
        self.graph.components().len()
    }

    pub fn rank(&self) -> usize {
        self.graph.num_edges() + self.num_components() - self.graph.num_vertices()
    }
}

/// The first return map of the semiflow on a section.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FirstReturn {
    pub map: GraphMap,
}

/// Positive parts of a linear function on `[s0, s1]` with end values
/// `a0, a1`, as an open interval.
fn positive_part(s0: &Q, s1: &Q, a0: &Q, a1: &Q) -> Option<(Q, Q)> {
    match (a0.is_positive(), a1.is_positive()) {
        (true, true) => Some((s0.clone(), s1.clone())),
        (false, false) => None,
        _ => {
            let r = s0 + (s1 - s0) * (-a0) / (a1 - a0);
            if a0.is_positive() {
                Some((s0.clone(), r))
            } else {
                Some((r, s1.clone()))
            }
        }
    }
}

fn intersect(a: Option<(Q, Q)>, b: Option<(Q, Q)>) -> Option<(Q, Q)> {
    let (a, b) = (a?, b?);
    let lo = a.0.max(b.0);
    let hi = a.1.min(b.1);
    (lo < hi).then_some((lo, hi))
}

/// A maximal level arc in one chart.
#[derive(Clone, Debug)]
struct Arc {
    lo: Q,
    hi: Q,
    start: SectionPoint,
    end: SectionPoint,
}

struct Builder<'a> {
    x: &'a TrapComplex,
    z: &'a Cocycle,
    phase: Q,
    eta: Vec<Q>,
    charts: Vec<Chart>,
    basins: Vec<usize>,
}

const TRACE_BUDGET: usize = 100_000;
/// Cap on section vertices when closing up under the first return.
const VERTEX_BUDGET: usize = 4_000;

impl<'a> Builder<'a> {
    fn new(x: &'a TrapComplex, z: &'a Cocycle, phase: Q) -> Result<Self, SectionError> {
        let eta = potential(x, z)?;
        let basins: Vec<usize> = (0..x.one_cells.len())
            .map(|c| if x.one_cells[c].kind == CellKind::Skew { x.basin_of(c) } else { usize::MAX })
            .collect();
        let mut charts = Vec::with_capacity(x.two_cells.len());
        for t in &x.two_cells {
            let zv = |c: usize| z.values[c].clone();
            let d = &x.one_cells[t.bottom];
            let base = eta[d.from].clone();
            let zd = zv(t.bottom);
            let walk = |start: Q, cells: &[usize]| {
                let mut cur = start;
                let mut out = Vec::new();
                for &c in cells {
                    out.push((c, cur.clone()));
                    cur += zv(c);
                }
                (out, cur)
            };
            let (left, left_top) = walk(base.clone(), &t.left);
            let (right, right_top) = walk(&base + &zd, &t.right);
            let mut cur = left_top.clone();
            let mut items = Vec::new();
            let mut jumps = Vec::new();
            for it in &t.top {
                let cell = &x.one_cells[it.cell];
                let v0 = cur.clone();
                let v1 = &cur + zv(it.cell) * qi(i64::from(it.sign));
                let (lower, zero0, zero1) =
                    if it.sign > 0 { (v0.clone(), cell.from, cell.to) } else { (v1.clone(), cell.to, cell.from) };
                cur = v1.clone();
                let mut jump = Vec::new();
                for &(c, sg) in &it.jump {
                    if sg > 0 {
                        jump.push((c, cur.clone()));
                        cur += zv(c);
                    } else {
                        cur -= zv(c);
                        jump.push((c, cur.clone()));
                    }
                }
                items.push(ItemChart {
                    cell: it.cell,
                    sign: it.sign,
                    s0: it.s0.clone(),
                    s1: it.s1.clone(),
                    v0,
                    v1,
                    lower,
                    zero0,
                    zero1,
                });
                jumps.push(jump);
            }
            if cur != right_top {
                return Err(SectionError::Inconsistent(format!("heights around {} do not close", t.name)));
            }
            let chart = Chart { bottom: t.bottom, base, zd, left, left_top, right, right_top, items, jumps };
            for i in 0..chart.items.len() {
                let it = &chart.items[i];
                let mid = (&it.s0 + &it.s1) / qi(2);
                let ok = it.v0 >= chart.bottom_at(&it.s0)
                    && it.v1 >= chart.bottom_at(&it.s1)
                    && chart.top_at(i, &mid) > chart.bottom_at(&mid);
                if !ok {
                    return Err(SectionError::NotFlowPositive(t.name.clone()));
                }
            }
            charts.push(chart);
        }
        Ok(Builder { x, z, phase, eta, charts, basins })
    }

    fn zv(&self, c: usize) -> &Q {
        &self.z.values[c]
    }

    fn degenerate(&self) -> SectionError {
        SectionError::DegeneratePhase(render(&self.phase))
    }

    /// Locate height `c` on a chain of `(cell, lower value)`.
    fn on_chain(&self, chain: &[(usize, Q)], c: &Q) -> Result<SectionPoint, SectionError> {
        for (cell, lower) in chain {
            let off = c - lower;
            if off.is_positive() && off < *self.zv(*cell) {
                return Ok(SectionPoint::OnCell { cell: *cell, offset: off });
            }
        }
        Err(SectionError::Inconsistent(format!("height {} not on chain", render(c))))
    }

    /// All crossings of the level set with 1-cells.
    fn crossings(&self) -> Result<Vec<Vec<Q>>, SectionError> {
        if self.eta.iter().any(|h| (h - &self.phase).is_integer()) {
            return Err(self.degenerate());
        }
        Ok(self
            .x
            .one_cells
            .iter()
            .enumerate()
            .map(|(e, c)| {
                let a = &self.eta[c.from];
                let mut n = (a - &self.phase).floor() + Q::one();
                let mut out = Vec::new();
                loop {
                    let off = &self.phase + &n - a;
                    if off >= *self.zv(e) {
                        break;
                    }
                    out.push(off);
                    n += Q::one();
                }
                out
            })
            .collect())
    }

    /// Chart levels `≡ phase` that meet the 2-cell.
    fn levels(&self, p: usize) -> Vec<Q> {
        let ch = &self.charts[p];
        let mut c = (&ch.base - &self.phase).floor() + &self.phase;
        let top = ch.max_top();
        let mut out = Vec::new();
        while c < top {
            if c > ch.base {
                out.push(c.clone());
            }
            c += Q::one();
        }
        out
    }

    fn arcs(&self, p: usize, c: &Q) -> Result<Vec<Arc>, SectionError> {
        let ch = &self.charts[p];
        let n = ch.items.len();
        let sb = (c - &ch.base) / &ch.zd;
        let mut pieces: Vec<(usize, Q, Q)> = Vec::new();
        for (i, it) in ch.items.iter().enumerate() {
            let below = positive_part(&it.s0, &it.s1, &(&it.v0 - c), &(&it.v1 - c));
            let above = positive_part(&it.s0, &it.s1, &(&sb - &it.s0), &(&sb - &it.s1));
            if let Some((lo, hi)) = intersect(below, above) {
                pieces.push((i, lo, hi));
            }
        }
        let mut arcs: Vec<(usize, Q, usize, Q)> = Vec::new();
        for (i, lo, hi) in pieces {
            if let Some(last) = arcs.last_mut() {
                if last.2 + 1 == i && last.3 == ch.items[last.2].s1 && lo == ch.items[i].s0 {
                    last.2 = i;
                    last.3 = hi;
                    continue;
                }
            }
            arcs.push((i, lo, i, hi));
        }
        arcs.into_iter()
            .map(|(i0, lo, i1, hi)| {
                let start = if lo.is_zero() {
                    self.side(&ch.left, c, &ch.base, &ch.left_top)?
                } else if lo == ch.items[i0].s0 {
                    self.on_chain(&ch.jumps[i0 - 1], c)?
                } else {
                    SectionPoint::OnCell { cell: ch.items[i0].cell, offset: c - &ch.items[i0].lower }
                };
                let end = if ch.bottom_at(&hi) == *c {
                    SectionPoint::OnCell { cell: ch.bottom, offset: c - &ch.base }
                } else if hi.is_one() {
                    self.side(&ch.right, c, &(&ch.base + &ch.zd), &ch.right_top)?
                } else if hi == ch.items[i1].s1 && i1 + 1 < n {
                    self.on_chain(&ch.jumps[i1], c)?
                } else {
                    SectionPoint::OnCell { cell: ch.items[i1].cell, offset: c - &ch.items[i1].lower }
                };
                Ok(Arc { lo, hi, start, end })
            })
            .collect()
    }

    fn side(&self, chain: &[(usize, Q)], c: &Q, bottom: &Q, top: &Q) -> Result<SectionPoint, SectionError> {
        if c <= bottom || c >= top {
            return Err(SectionError::Inconsistent(format!("side height {} outside its range", render(c))));
        }
        self.on_chain(chain, c)
    }

    /// Flow up from a 0-cell by `rise`.
    fn flow_from_zero(&self, zero: usize, rise: Q) -> Result<SectionPoint, SectionError> {
        if !rise.is_positive() {
            return Err(self.degenerate());
        }
        self.flow_vertical(self.x.vertical_from(zero), Q::zero(), rise)
    }

    fn flow_vertical(&self, mut cell: usize, mut offset: Q, mut rise: Q) -> Result<SectionPoint, SectionError> {
        for _ in 0..TRACE_BUDGET {
            let room = self.zv(cell) - &offset;
            if rise < room {
                return Ok(SectionPoint::OnCell { cell, offset: offset + rise });
            }
            if rise == room {
                return Err(self.degenerate());
            }
            rise -= room;
            cell = self.x.vertical_from(self.x.one_cells[cell].to);
            offset = Q::zero();
        }
        Err(SectionError::Budget("vertical flow".into()))
    }

    /// Where the flow line at `s` in chart `p` reaches height `target`.
    fn flow_point(&self, mut p: usize, mut s: Q, mut target: Q) -> Result<SectionPoint, SectionError> {
        for _ in 0..TRACE_BUDGET {
            let ch = &self.charts[p];
            let d = &self.x.one_cells[ch.bottom];
            if s.is_zero() {
                return self.flow_from_zero(d.from, &target - &ch.base);
            }
            if s.is_one() {
                return self.flow_from_zero(d.to, &target - &ch.base - &ch.zd);
            }
            let i = ch.items.iter().position(|it| s <= it.s1).expect("items cover [0, 1]");
            let it = &ch.items[i];
            if s == it.s1 {
                // A jump: the flow line runs up the lower of the two corners.
                let next = &ch.items[i + 1];
                let (m, zero) = if it.v1 <= next.v0 { (&it.v1, it.zero1) } else { (&next.v0, next.zero0) };
                if target < *m {
                    return Ok(SectionPoint::Interior { two_cell: p, level: target, s });
                }
                return self.flow_from_zero(zero, &target - m);
            }
            let top = ch.top_at(i, &s);
            if target < top {
                return Ok(SectionPoint::Interior { two_cell: p, level: target, s });
            }
            if target == top {
                return Ok(SectionPoint::OnCell { cell: it.cell, offset: &target - &it.lower });
            }
            let u = self.param(it, &s);
            let next = self.basins[it.cell];
            target = target + &self.charts[next].base - &it.lower;
            p = next;
            s = u;
        }
        Err(SectionError::Budget("flow through 2-cells".into()))
    }

    /// Parameter along the top cell of an item.
    fn param(&self, it: &ItemChart, s: &Q) -> Q {
        let u = (s - &it.s0) / (&it.s1 - &it.s0);
        if it.sign > 0 {
            u
        } else {
            Q::one() - u
        }
    }

    fn image_point(&self, pt: &SectionPoint) -> Result<SectionPoint, SectionError> {
        match pt {
            SectionPoint::OnCell { cell, offset } => match self.x.one_cells[*cell].kind {
                CellKind::Vertical => self.flow_vertical(*cell, offset.clone(), Q::one()),
                CellKind::Skew => {
                    let p = self.basins[*cell];
                    let s = offset / self.zv(*cell);
                    self.flow_point(p, s, &self.charts[p].base + offset + Q::one())
                }
            },
            SectionPoint::Interior { two_cell, level, s } => self.flow_point(*two_cell, s.clone(), level + Q::one()),
        }
    }

    /// Level pieces reached by flowing `[a, b]` (oriented) of chart `p` up
    /// to `target`; each piece is `(chart, level, from s, to s)`.
    fn flow_interval(
        &self,
        p: usize,
        target: &Q,
        a: &Q,
        b: &Q,
        depth: usize,
    ) -> Result<Vec<(usize, Q, Q, Q)>, SectionError> {
        if depth > TRACE_BUDGET {
            return Err(SectionError::Budget("interval flow".into()));
        }
        let ch = &self.charts[p];
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut out = Vec::new();
        for (i, it) in ch.items.iter().enumerate() {
            if it.s1 <= *lo || it.s0 >= *hi {
                continue;
            }
            let l = lo.max(&it.s0).clone();
            let h = hi.min(&it.s1).clone();
            let (tl, th) = (ch.top_at(i, &l), ch.top_at(i, &h));
            let mut cuts = vec![l.clone()];
            if (&tl - target) * (&th - target) < Q::zero() {
                cuts.push(&l + (&h - &l) * (target - &tl) / (&th - &tl));
            }
            cuts.push(h);
            for w in cuts.windows(2) {
                let mid = (&w[0] + &w[1]) / qi(2);
                if ch.top_at(i, &mid) > *target {
                    out.push((p, target.clone(), w[0].clone(), w[1].clone()));
                } else {
                    let (u0, u1) = (self.param(it, &w[0]), self.param(it, &w[1]));
                    let next = self.basins[it.cell];
                    let t2 = target + &self.charts[next].base - &it.lower;
                    out.extend(self.flow_interval(next, &t2, &u0, &u1, depth + 1)?);
                }
            }
        }
        if a > b {
            out.reverse();
            for piece in &mut out {
                std::mem::swap(&mut piece.2, &mut piece.3);
            }
        }
        Ok(out)
    }
}

/// Candidate phases: midpoints between consecutive 0-cell heights mod 1 and
/// midpoints of skew cells.
fn candidate_phases(x: &TrapComplex, z: &Cocycle) -> Result<Vec<Q>, SectionError> {
    let eta = potential(x, z)?;
    let levels: BTreeSet<Q> = eta.iter().map(frac).collect();
    let levels: Vec<Q> = levels.into_iter().collect();
    let mut out = BTreeSet::new();
    for (i, a) in levels.iter().enumerate() {
        let b = levels.get(i + 1).cloned().unwrap_or_else(|| &levels[0] + Q::one());
        out.insert(frac(&((a + &b) / qi(2))));
    }
    for c in x.skew_cells() {
        out.insert(midpoint_phase(x, z, c)?);
    }
    Ok(out.into_iter().collect())
}

/// Build the section of a positive cocycle with integral periods. With no
/// phase, every candidate phase is tried and the section with fewest edges
/// is kept.
pub fn build_section(x: &TrapComplex, z: &Cocycle, phase: Option<Q>) -> Result<SectionGraph, SectionError> {
    if let Some(e) = z.values.iter().position(|v| !v.is_positive()) {
        return Err(SectionError::NotPositive(x.one_cells[e].name.clone()));
    }
    if let Some(y) = phase {
        return build_at(x, z, y, true);
    }
    let mut best: Option<SectionGraph> = None;
    let mut last = None;
    for y in candidate_phases(x, z)? {
        match build_at(x, z, y, true) {
            Ok(s) => {
                if best.as_ref().is_none_or(|b| s.graph.num_edges() < b.graph.num_edges()) {
                    best = Some(s);
                }
            }
            Err(e @ (SectionError::DegeneratePhase(_) | SectionError::Budget(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| last.unwrap_or_else(|| SectionError::DegeneratePhase("none".into())))
}

/// Phase placing the section through the midpoint of a cell.
pub fn midpoint_phase(x: &TrapComplex, z: &Cocycle, cell: usize) -> Result<Q, SectionError> {
    let eta = potential(x, z)?;
    let c = &x.one_cells[cell];
    let y = &eta[c.from] + &z.values[cell] / qi(2);
    Ok(&y - y.floor())
}

fn build_at(x: &TrapComplex, z: &Cocycle, phase: Q, close: bool) -> Result<SectionGraph, SectionError> {
    let b = Builder::new(x, z, phase.clone())?;
    let crossings = b.crossings()?;

    // Vertices: crossings and their forward orbits.
    let mut index: BTreeMap<SectionPoint, usize> = BTreeMap::new();
    let mut points: Vec<SectionPoint> = Vec::new();
    for (cell, offs) in crossings.iter().enumerate() {
        for off in offs {
            index.insert(SectionPoint::OnCell { cell, offset: off.clone() }, points.len());
            points.push(SectionPoint::OnCell { cell, offset: off.clone() });
        }
    }
    let mut queue: VecDeque<usize> = if close { (0..points.len()).collect() } else { VecDeque::new() };
    while let Some(v) = queue.pop_front() {
        if points.len() > VERTEX_BUDGET {
            return Err(SectionError::Budget("vertex orbit closure".into()));
        }
        let img = b.image_point(&points[v])?;
        if !index.contains_key(&img) {
            if matches!(img, SectionPoint::OnCell { .. }) {
                return Err(SectionError::Inconsistent(format!("image of vertex {v} is an unlisted crossing")));
            }
            index.insert(img.clone(), points.len());
            points.push(img);
            queue.push_back(points.len() - 1);
        }
    }

    // Edges: arcs cut at interior vertices.
    let mut interior: BTreeMap<(usize, Q), BTreeSet<Q>> = BTreeMap::new();
    for p in &points {
        if let SectionPoint::Interior { two_cell, level, s } = p {
            interior.entry((*two_cell, level.clone())).or_default().insert(s.clone());
        }
    }
    let lookup = |pt: &SectionPoint| -> Result<usize, SectionError> {
        index.get(pt).copied().ok_or_else(|| SectionError::Inconsistent(format!("arc end {pt:?} is not a crossing")))
    };
    let mut edges: Vec<SectionEdge> = Vec::new();
    let mut used_interior = 0;
    for p in 0..x.two_cells.len() {
        for c in b.levels(p) {
            let cuts = interior.get(&(p, c.clone()));
            for arc in b.arcs(p, &c)? {
                let mut stops = vec![(arc.lo.clone(), lookup(&arc.start)?)];
                if let Some(cuts) = cuts {
                    for s in cuts.range(arc.lo.clone()..arc.hi.clone()) {
                        if *s > arc.lo {
                            used_interior += 1;
                            stops.push((
                                s.clone(),
                                index[&SectionPoint::Interior { two_cell: p, level: c.clone(), s: s.clone() }],
                            ));
                        }
                    }
                }
                stops.push((arc.hi.clone(), lookup(&arc.end)?));
                for w in stops.windows(2) {
                    edges.push(SectionEdge {
                        name: String::new(),
                        two_cell: p,
                        level: c.clone(),
                        s0: w[0].0.clone(),
                        s1: w[1].0.clone(),
                        from: w[0].1,
                        to: w[1].1,
                    });
                }
            }
        }
    }
    let n_interior = points.iter().filter(|p| matches!(p, SectionPoint::Interior { .. })).count();
    if used_interior != n_interior {
        return Err(SectionError::Inconsistent("an interior vertex lies on no arc".into()));
    }

    // Names.
    let mut per_cell: BTreeMap<usize, usize> = BTreeMap::new();
    let mut per_two: BTreeMap<usize, usize> = BTreeMap::new();
    let vertices: Vec<SectionVertex> = points
        .iter()
        .map(|pt| match pt {
            SectionPoint::OnCell { cell, .. } => {
                let c = &x.one_cells[*cell];
                let k = per_cell.entry(*cell).or_insert(0);
                *k += 1;
                let kind = if c.kind == CellKind::Skew { VertexKind::Skew } else { VertexKind::Vertical };
                let host = match c.kind {
                    CellKind::Vertical => c.host.clone(),
                    CellKind::Skew => String::new(),
                };
                SectionVertex { name: format!("{}.{}", c.name, k), point: pt.clone(), kind, host }
            }
            SectionPoint::Interior { two_cell, .. } => {
                let k = per_two.entry(*two_cell).or_insert(0);
                *k += 1;
                SectionVertex {
                    name: format!("{}.{}", x.two_cells[*two_cell].name, k),
                    point: pt.clone(),
                    kind: VertexKind::Interior,
                    host: String::new(),
                }
            }
        })
        .collect();
    for (i, e) in edges.iter_mut().enumerate() {
        e.name = format!("x{}", i + 1);
    }
    let graph = Graph::new(
        vertices.iter().map(|v| v.name.clone()).collect(),
        edges.iter().map(|e| (e.name.clone(), e.from, e.to)).collect(),
    )
    .map_err(|e| SectionError::Graph(e.to_string()))?;
    let skew_first = x.skew_cells().into_iter().find(|&c| !crossings[c].is_empty());
    let basepoint = match skew_first {
        Some(c) => index[&SectionPoint::OnCell { cell: c, offset: crossings[c][0].clone() }],
        None => 0,
    };
    Ok(SectionGraph {
        cocycle: z.clone(),
        phase,
        potential: b.eta.clone(),
        charts: b.charts.clone(),
        vertices,
        edges,
        graph,
        crossings: crossings.iter().map(Vec::len).collect(),
        basepoint,
    })
}

/// The section with vertices only at crossings with 1-cells. The first
/// return need not send these vertices to vertices, but the germs of edges
/// at each vertex can still be traced; see [`skew_germ_audit`]. With no
/// phase, the first generic candidate is used.
pub fn build_coarse_section(x: &TrapComplex, z: &Cocycle, phase: Option<Q>) -> Result<SectionGraph, SectionError> {
    if let Some(e) = z.values.iter().position(|v| !v.is_positive()) {
        return Err(SectionError::NotPositive(x.one_cells[e].name.clone()));
    }
    let tries = match phase {
        Some(y) => vec![y],
        None => candidate_phases(x, z)?,
    };
    let mut last = None;
    for y in tries {
        match build_at(x, z, y, false) {
            Err(e @ SectionError::DegeneratePhase(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or_else(|| SectionError::DegeneratePhase("none".into())))
}

/// What the flow does to the edges at one skew crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewGerm {
    pub vertex: String,
    pub valence: usize,
    /// Edges at the vertex lying below the skew cell.
    pub below: Vec<String>,
    /// Whether the flow sends the germs of the edges below to the same germ,
    /// making them an illegal turn.
    pub folded: bool,
}

/// Germ-level audit of skew crossings, valid without a vertex structure
/// closed under the first return.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermAudit {
    pub skew_crossings: usize,
    pub crossings: Vec<SkewGerm>,
    /// Skew crossings of valence 3 whose edges below are folded together.
    pub illegal_valence3: usize,
    /// `max(0, n − 2)` with `n` the number of skew crossings.
    pub bound: usize,
}

/// Trace the germ of every edge at every skew crossing up by height 1.
pub fn skew_germ_audit(x: &TrapComplex, s: &SectionGraph) -> Result<GermAudit, SectionError> {
    let b = Builder::new(x, &s.cocycle, s.phase.clone())?;
    let mut crossings = Vec::new();
    for (v, vx) in s.vertices.iter().enumerate() {
        let SectionPoint::OnCell { cell, .. } = vx.point else { continue };
        if x.one_cells[cell].kind != CellKind::Skew {
            continue;
        }
        let above = b.basins[cell];
        let mut germs = Vec::new();
        let mut below = Vec::new();
        let mut valence = 0;
        for e in &s.edges {
            for (end, toward) in [(e.from, &e.s1), (e.to, &e.s0)] {
                if end != v {
                    continue;
                }
                valence += 1;
                let at = if end == e.from { &e.s0 } else { &e.s1 };
                // The edge above starts on the bottom of the basin.
                if e.two_cell == above && b.charts[above].bottom_at(at) == e.level {
                    continue;
                }
                let pieces = b.flow_interval(e.two_cell, &(&e.level + Q::one()), at, toward, 0)?;
                let first = pieces.first().ok_or_else(|| SectionError::Inconsistent("empty germ image".into()))?;
                germs.push((first.0, first.1.clone(), first.2.clone(), first.3 > first.2));
                below.push(e.name.clone());
            }
        }
        let folded = germs.len() == 2 && germs[0] == germs[1];
        crossings.push(SkewGerm { vertex: vx.name.clone(), valence, below, folded });
    }
    let n = crossings.len();
    let illegal_valence3 = crossings.iter().filter(|c| c.valence == 3 && c.folded).count();
    Ok(GermAudit { skew_crossings: n, crossings, illegal_valence3, bound: n.saturating_sub(2) })
}

/// Trace every section edge up by height 1.
pub fn first_return(x: &TrapComplex, s: &SectionGraph) -> Result<FirstReturn, SectionError> {
    let b = Builder::new(x, &s.cocycle, s.phase.clone())?;
    let index: BTreeMap<&SectionPoint, usize> = s.vertices.iter().enumerate().map(|(i, v)| (&v.point, i)).collect();
    let mut by_level: BTreeMap<(usize, &Q), Vec<usize>> = BTreeMap::new();
    for (i, e) in s.edges.iter().enumerate() {
        by_level.entry((e.two_cell, &e.level)).or_default().push(i);
    }
    let mut vmap = Vec::with_capacity(s.vertices.len());
    for v in &s.vertices {
        let img = b.image_point(&v.point)?;
        vmap.push(
            *index
                .get(&img)
                .ok_or_else(|| SectionError::Inconsistent(format!("image of {} is not a vertex", v.name)))?,
        );
    }
    let mut emap = Vec::with_capacity(s.edges.len());
    for e in &s.edges {
        let mut pieces: Vec<(usize, Q, Q, Q)> = Vec::new();
        for piece in b.flow_interval(e.two_cell, &(&e.level + Q::one()), &e.s0, &e.s1, 0)? {
            match pieces.last_mut() {
                Some(last) if last.0 == piece.0 && last.1 == piece.1 && last.3 == piece.2 => last.3 = piece.3,
                _ => pieces.push(piece),
            }
        }
        let mut path = Vec::new();
        for (p, c, a, bb) in pieces {
            let (lo, hi) = if a < bb { (&a, &bb) } else { (&bb, &a) };
            let list = by_level
                .get(&(p, &c))
                .ok_or_else(|| SectionError::Inconsistent(format!("no arc at level {} of chart {p}", render(&c))))?;
            let covered: Vec<usize> =
                list.iter().copied().filter(|&i| s.edges[i].s0 >= *lo && s.edges[i].s1 <= *hi).collect();
            let mut cur = lo.clone();
            for &i in &covered {
                if s.edges[i].s0 != cur {
                    return Err(SectionError::Inconsistent(format!("image of {} has a gap", e.name)));
                }
                cur = s.edges[i].s1.clone();
            }
            if cur != *hi {
                return Err(SectionError::Inconsistent(format!("image of {} ends inside an edge", e.name)));
            }
            if a < bb {
                path.extend(covered.iter().map(|&i| OEdge::fwd(i)));
            } else {
                path.extend(covered.iter().rev().map(|&i| OEdge::bwd(i)));
            }
        }
        emap.push(path);
    }
    let map =
        GraphMap::new(s.graph.clone(), s.graph.clone(), vmap, emap).map_err(|e| SectionError::Graph(e.to_string()))?;
    Ok(FirstReturn { map })
}

/// DOT rendering of the section, colored by host 1-cell.
pub fn section_dot(x: &TrapComplex, s: &SectionGraph) -> String {
    const PALETTE: [&str; 6] = ["red", "blue", "black", "darkgreen", "orange", "purple"];
    let hosts: BTreeSet<&str> = x.zero_cells.iter().map(|z| z.vertex_name.as_str()).collect();
    let color = |h: &str| PALETTE[hosts.iter().position(|&k| k == h).unwrap_or(0) % PALETTE.len()];
    let mut out = String::from("digraph section {\n");
    for (i, v) in s.vertices.iter().enumerate() {
        let style = match v.kind {
            VertexKind::Skew => "shape=star,style=filled,fillcolor=violet".to_string(),
            VertexKind::Interior => "shape=circle,style=solid,color=black".to_string(),
            VertexKind::Vertical => format!("shape=circle,style=filled,fillcolor={}", color(&v.host)),
        };
        let star = if i == s.basepoint { ",penwidth=3" } else { "" };
        out.push_str(&format!("  \"{}\" [{style}{star}];\n", v.name));
    }
    for e in &s.edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            s.vertices[e.from].name, s.vertices[e.to].name, e.name
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests;
