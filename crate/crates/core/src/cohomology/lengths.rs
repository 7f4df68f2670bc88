//! Heights, level-set crossing counts and the fold-parameter length functions
//! used for axis-bundle dimension bounds.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use super::{Cocycle, CohomologyError};
use crate::exact::{render, Q};
use crate::graphcore::Graph;
use crate::torus::{CellKind, TrapComplex};
use crate::traintrack::Turn;

/// A height `η` on the 0-cells with `η(to) − η(from) ≡ z(e) (mod 1)` on every
/// 1-cell, built along a breadth-first tree from 0-cell 0.
pub fn potential(x: &TrapComplex, z: &Cocycle) -> Result<Vec<Q>, CohomologyError> {
    let n = x.zero_cells.len();
    let mut eta: Vec<Option<Q>> = vec![None; n];
    if n == 0 {
        return Ok(Vec::new());
    }
    eta[0] = Some(Q::zero());
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        let hv = eta[v].clone().expect("queued vertices are assigned");
        for (e, c) in x.one_cells.iter().enumerate() {
            let (w, h) = if c.from == v {
                (c.to, &hv + &z.values[e])
            } else if c.to == v {
                (c.from, &hv - &z.values[e])
            } else {
                continue;
            };
            if eta[w].is_none() {
                eta[w] = Some(h);
                queue.push_back(w);
            }
        }
    }
    let eta: Vec<Q> = eta.into_iter().map(|h| h.unwrap_or_else(Q::zero)).collect();
    for (e, c) in x.one_cells.iter().enumerate() {
        if !(&eta[c.to] - &eta[c.from] - &z.values[e]).is_integer() {
            return Err(CohomologyError::NonIntegralPeriods);
        }
    }
    Ok(eta)
}

/// Number of integers strictly between `a` and `b`.
fn integers_between(a: &Q, b: &Q) -> usize {
    if b <= a {
        return 0;
    }
    let lo = a.floor();
    let hi = b.ceil();
    let n = hi - lo - Q::from_integer(1.into());
    usize::try_from(n.to_integer()).unwrap_or(0)
}

/// How often the level set `η ≡ phase (mod 1)` crosses each 1-cell.
pub fn crossing_counts(x: &TrapComplex, z: &Cocycle, phase: &Q) -> Result<Vec<usize>, CohomologyError> {
    let eta = potential(x, z)?;
    if eta.iter().any(|h| (h - phase).is_integer()) {
        return Err(CohomologyError::DegeneratePhase { phase: render(phase) });
    }
    Ok(x.one_cells
        .iter()
        .enumerate()
        .map(|(e, c)| {
            let a = &eta[c.from] - phase;
            integers_between(&a, &(&a + &z.values[e]))
        })
        .collect())
}

/// Lower bound `max(0, n − 2)` on the local dimension of the axis bundle,
/// where `n` counts crossings of the section with skew cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisBound {
    pub n: usize,
    pub bound: usize,
    /// Crossings per skew cell.
    pub per_skew: Vec<(String, usize)>,
}

/// Count skew crossings of the section of a positive cocycle at a phase.
pub fn axis_dim_lower_bound(x: &TrapComplex, z: &Cocycle, phase: &Q) -> Result<AxisBound, CohomologyError> {
    if let Some(e) = z.values.iter().position(|v| !v.is_positive()) {
        return Err(CohomologyError::NotPositive { cell: x.one_cells[e].name.clone() });
    }
    let counts = crossing_counts(x, z, phase)?;
    let per_skew: Vec<(String, usize)> = x
        .one_cells
        .iter()
        .zip(&counts)
        .filter(|(c, _)| c.kind == CellKind::Skew)
        .map(|(c, &k)| (c.name.clone(), k))
        .collect();
    let n = per_skew.iter().map(|(_, k)| k).sum::<usize>();
    Ok(AxisBound { n, bound: n.saturating_sub(2), per_skew })
}

/// Edge lengths after folding each illegal turn `τ_i` by `t_i`, rescaled to
/// keep the total volume. Turn edges lose `t_i`, the third edge at the
/// vertex gains `t_i`, and loops are unchanged before rescaling.
pub fn delta_lengths(g: &Graph, lengths: &[f64], turns: &[Turn], t: &[f64]) -> Result<Vec<f64>, CohomologyError> {
    let total: f64 = t.iter().sum();
    if t.len() != turns.len() || t.iter().any(|&ti| ti < 0.0) || total >= 1.0 {
        return Err(CohomologyError::BadParameters);
    }
    let mut seen = BTreeSet::new();
    let mut out = lengths.to_vec();
    for (turn, &ti) in turns.iter().zip(t) {
        let v = g.init(turn.a);
        let vname = g.vertex_name(v).to_string();
        if turn.is_degenerate() || turn.a.edge == turn.b.edge {
            return Err(CohomologyError::DegenerateTurn {
                turn: format!("{{{}, {}}}", g.oedge_name(turn.a), g.oedge_name(turn.b)),
            });
        }
        if !seen.insert(v) {
            return Err(CohomologyError::RepeatedVertex { vertex: vname });
        }
        if g.valence(v) != 3 {
            return Err(CohomologyError::NotValenceThree { vertex: vname });
        }
        for d in g.directions_at(v) {
            let e = d.edge;
            if g.init(d) == g.term(d) {
                continue;
            }
            out[e] += if e == turn.a.edge || e == turn.b.edge { -ti } else { ti };
        }
    }
    Ok(out.into_iter().map(|l| l / (1.0 - total)).collect())
}
