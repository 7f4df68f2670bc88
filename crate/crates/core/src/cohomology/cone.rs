//! The positive cone and the discreteness cone around `r*`.
//!
//! A class is positive iff some representative `z` can be shifted by a
//! coboundary to be `≥ ε > 0` on every 1-cell. These are difference
//! constraints `φ(from) − φ(to) ≤ z(e) − ε` on the 1-skeleton, feasible iff
//! every directed cycle has mean `≥ ε`. The best `ε` is therefore the minimum
//! cycle mean, found exactly with Karp's algorithm; Bellman–Ford then yields
//! the shift, and a cycle of nonpositive mean certifies infeasibility.

use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use super::{Cocycle, CohomClass, CohomologyError, Homology};
use crate::exact::{qi, render, Q};
use crate::torus::{CellKind, TrapComplex};

/// Positive representative of a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeWitness {
    pub class: CohomClass,
    pub cocycle: Cocycle,
    /// Minimum value of the cocycle, the largest attainable.
    pub margin: Q,
}

/// A directed cycle of the 1-skeleton on which the class is `≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeCertificate {
    pub class: CohomClass,
    /// 1-cells in order, each traversed upward.
    pub cycle: Vec<usize>,
    pub cells: Vec<String>,
    /// Value of the class on the cycle.
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeResult {
    Inside(ConeWitness),
    Outside(ConeCertificate),
}

impl ConeResult {
    pub fn is_inside(&self) -> bool {
        matches!(self, ConeResult::Inside(_))
    }
}

/// Minimum mean of `z` over directed cycles of the 1-skeleton, with a cycle
/// attaining it. `None` when the 1-skeleton has no directed cycle.
pub fn min_cycle_mean(x: &TrapComplex, z: &Cocycle) -> Option<(Q, Vec<usize>)> {
    let n = x.zero_cells.len();
    let cells = &x.one_cells;
    let mut d: Vec<Vec<Option<Q>>> = vec![vec![Some(Q::zero()); n]];
    let mut pred: Vec<Vec<Option<usize>>> = vec![vec![None; n]];
    for k in 1..=n {
        let mut row: Vec<Option<Q>> = vec![None; n];
        let mut prow = vec![None; n];
        for (e, c) in cells.iter().enumerate() {
            if let Some(base) = &d[k - 1][c.from] {
                let cand = base + &z.values[e];
                if row[c.to].as_ref().is_none_or(|cur| cand < *cur) {
                    row[c.to] = Some(cand);
                    prow[c.to] = Some(e);
                }
            }
        }
        d.push(row);
        pred.push(prow);
    }
    let mut best: Option<(Q, usize)> = None;
    for v in 0..n {
        let Some(dn) = &d[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| d[k][v].as_ref().map(|dk| (dn - dk) / qi((n - k) as i64)))
            .max()
            .expect("d[0] is finite");
        if best.as_ref().is_none_or(|(b, _)| worst < *b) {
            best = Some((worst, v));
        }
    }
    let (_, v) = best?;
    // Walk of length n ending at v, then split off its simple cycles.
    let mut walk = Vec::with_capacity(n);
    let mut cur = v;
    for k in (1..=n).rev() {
        let e = pred[k][cur].expect("finite entries have predecessors");
        walk.push(e);
        cur = cells[e].from;
    }
    walk.reverse();
    let mut stack_v = vec![cells[walk[0]].from];
    let mut stack_e: Vec<usize> = Vec::new();
    let mut found: Option<(Q, Vec<usize>)> = None;
    for &e in &walk {
        let to = cells[e].to;
        stack_e.push(e);
        if let Some(p) = stack_v.iter().position(|&u| u == to) {
            let cyc: Vec<usize> = stack_e.split_off(p);
            stack_v.truncate(p + 1);
            let mean = cyc.iter().map(|&c| z.values[c].clone()).sum::<Q>() / qi(cyc.len() as i64);
            if found.as_ref().is_none_or(|(m, _)| mean < *m) {
                found = Some((mean, cyc));
            }
        } else {
            stack_v.push(to);
        }
    }
    let (mean, mut cyc) = found.expect("a walk of n edges repeats a vertex");
    // Start the cycle at its least cell for a canonical rendering.
    let start = (0..cyc.len()).min_by_key(|&i| cyc[i]).expect("nonempty cycle");
    cyc.rotate_left(start);
    Some((mean, cyc))
}

/// Decide membership in the positive cone, exactly.
pub fn cone_membership(x: &TrapComplex, h: &Homology, c: &CohomClass) -> Result<ConeResult, CohomologyError> {
    let z = h.representative(c)?;
    let (mu, cycle) = min_cycle_mean(x, &z).expect("a mapping torus has directed cycles");
    if mu.is_positive() {
        // Bellman–Ford on φ(from) ≤ φ(to) + z(e) − μ from a virtual source.
        let mut phi = vec![Q::zero(); x.zero_cells.len()];
        for _ in 0..=x.zero_cells.len() {
            let mut changed = false;
            for (e, cell) in x.one_cells.iter().enumerate() {
                let cand = &phi[cell.to] + &z.values[e] - &mu;
                if cand < phi[cell.from] {
                    phi[cell.from] = cand;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let cocycle = z.shift(x, &phi);
        debug_assert!(cocycle.values.iter().all(|v| *v >= mu));
        Ok(ConeResult::Inside(ConeWitness { class: c.clone(), cocycle, margin: mu }))
    } else {
        let value = cycle.iter().map(|&e| z.values[e].clone()).sum();
        Ok(ConeResult::Outside(ConeCertificate {
            class: c.clone(),
            cells: cycle.iter().map(|&e| x.one_cells[e].name.clone()).collect(),
            cycle,
            value,
        }))
    }
}

/// The open cone over `{M r* + Σ ε_i α_i : |ε_i| < 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretenessCone {
    pub k: usize,
    pub m: i64,
    /// Smallest `M` making `M z_r − Σ|z_i|` positive on every 1-cell.
    pub m0: i64,
    /// The skew cell `d` used for the `k + 2` bound.
    pub skew_cell: usize,
    pub skew_name: String,
    /// `M_d` for every skew cell.
    pub per_skew: Vec<(String, i64)>,
    /// Position of `r*` among the coordinates.
    pub r_index: usize,
    pub basis: Vec<Cocycle>,
}

impl DiscretenessCone {
    /// Whether the class lies in the open cone.
    pub fn contains(&self, c: &CohomClass) -> bool {
        let a = &c.coords[self.r_index];
        a.is_positive() && c.coords.iter().enumerate().all(|(i, ci)| i == self.r_index || ci.abs() * qi(self.m) < *a)
    }

    /// `Σ c_i z_i`, positive for classes in the cone.
    pub fn cocycle_for(&self, c: &CohomClass) -> Cocycle {
        let n = self.basis[0].values.len();
        c.coords.iter().zip(&self.basis).fold(Cocycle::zero(n), |acc, (ci, z)| acc.add(&z.scale(ci)))
    }

    /// Corner generators `M r* ± α_i` as coordinate vectors.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        let others: Vec<usize> = (0..self.basis.len()).filter(|&i| i != self.r_index).collect();
        (0..1usize << others.len())
            .map(|mask| {
                let mut g = vec![0; self.basis.len()];
                g[self.r_index] = self.m;
                for (b, &i) in others.iter().enumerate() {
                    g[i] = if mask >> b & 1 == 1 { -1 } else { 1 };
                }
                g
            })
            .collect()
    }

    /// Recheck both strict inequalities at every 1-cell; returns violations.
    pub fn verify(&self, x: &TrapComplex) -> Vec<String> {
        let mut bad = Vec::new();
        let m = qi(self.m);
        for (e, cell) in x.one_cells.iter().enumerate() {
            let v = &m * &self.basis[self.r_index].values[e] - spread(&self.basis, self.r_index, e);
            if !v.is_positive() {
                bad.push(format!("{}: M z_r - sum |z_i| = {}", cell.name, render(&v)));
            }
            if e == self.skew_cell && v <= qi(self.k as i64 + 2) {
                bad.push(format!("{}: M z_r - sum |z_i| = {} <= k + 2", cell.name, render(&v)));
            }
        }
        bad
    }
}

fn spread(basis: &[Cocycle], r_index: usize, e: usize) -> Q {
    basis.iter().enumerate().filter(|&(i, _)| i != r_index).map(|(_, z)| z.values[e].abs()).sum()
}

/// Least integer strictly above `x`.
fn above(x: &Q) -> i64 {
    i64::try_from(x.floor().to_integer()).expect("small bound") + 1
}

/// Smallest `M` with `M z_r(e) − Σ|z_i(e)| > 0` on every 1-cell and
/// `M z_r(d) − Σ|z_i(d)| > k + 2` at a skew cell `d`. With `skew = None` the
/// skew cell giving the smallest `M` is chosen.
pub fn discreteness_cone(
    x: &TrapComplex,
    k: usize,
    basis: &[Cocycle],
    r_index: usize,
    skew: Option<usize>,
) -> Result<DiscretenessCone, CohomologyError> {
    let zr = &basis[r_index];
    if let Some(e) = zr.values.iter().position(|v| !v.is_positive()) {
        return Err(CohomologyError::NotPositive { cell: x.one_cells[e].name.clone() });
    }
    let m0 =
        (0..x.one_cells.len()).map(|e| above(&(spread(basis, r_index, e) / &zr.values[e]))).max().unwrap_or(1).max(1);
    let bound = qi(k as i64 + 2);
    let per: Vec<(usize, i64)> = x
        .one_cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == CellKind::Skew)
        .map(|(d, _)| (d, above(&((&bound + spread(basis, r_index, d)) / &zr.values[d]))))
        .collect();
    let (skew_cell, md) = match skew {
        Some(d) => *per
            .iter()
            .find(|(c, _)| *c == d)
            .ok_or_else(|| CohomologyError::NotSkew { cell: x.one_cells[d].name.clone() })?,
        None => *per.iter().min_by_key(|(c, m)| (*m, *c)).expect("a torus has skew cells"),
    };
    Ok(DiscretenessCone {
        k,
        m: m0.max(md),
        m0,
        skew_cell,
        skew_name: x.one_cells[skew_cell].name.clone(),
        per_skew: per.iter().map(|&(d, m)| (x.one_cells[d].name.clone(), m)).collect(),
        r_index,
        basis: basis.to_vec(),
    })
}
