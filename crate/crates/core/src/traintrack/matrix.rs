//! Transition matrices and Perron–Frobenius data.

use serde::{Deserialize, Serialize};

use super::TrainTrackError;
use crate::graphcore::GraphMap;

/// Square nonnegative integer matrix indexed by unoriented edges.
pub type TransitionMatrix = Vec<Vec<u64>>;

/// `a_ij` = number of times `f(e_i)` crosses `e_j` in either direction.
pub fn transition_matrix(f: &GraphMap) -> TransitionMatrix {
    let n = f.domain().num_edges();
    let m = f.codomain().num_edges();
    let mut a = vec![vec![0u64; m]; n];
    for (i, row) in a.iter_mut().enumerate() {
        for e in f.edge_image(i) {
            row[e.edge] += 1;
        }
    }
    a
}

/// Integer matrix product.
pub fn mat_mul(a: &TransitionMatrix, b: &TransitionMatrix) -> TransitionMatrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0u64; m]; n];
    for i in 0..n {
        for (t, brow) in b.iter().enumerate().take(k) {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * brow[j];
            }
        }
    }
    out
}

/// Strongly connected components of the digraph `i → j` iff `a_ij > 0`,
/// by Tarjan's algorithm.
pub fn strong_components(a: &TransitionMatrix) -> Vec<Vec<usize>> {
    struct St<'a> {
        a: &'a TransitionMatrix,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut St, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on[v] = true;
        for w in 0..s.a.len() {
            if s.a[v][w] == 0 {
                continue;
            }
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            while let Some(w) = s.stack.pop() {
                s.on[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let n = a.len();
    let mut s = St {
        a,
        index: vec![None; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

/// Irreducible: the crossing digraph is strongly connected (and, for one
/// edge, the edge crosses itself).
pub fn is_irreducible(f: &GraphMap) -> bool {
    let a = transition_matrix(f);
    let comps = strong_components(&a);
    comps.len() == 1 && (a.len() > 1 || a[0][0] > 0)
}

/// Expanding: spectral radius greater than one. A strongly connected block
/// has spectral radius above one exactly when it is not a permutation
/// block, i.e. some row sum inside the block is at least two.
pub fn is_expanding(f: &GraphMap) -> bool {
    let a = transition_matrix(f);
    strong_components(&a).iter().any(|c| {
        let cyclic = c.len() > 1 || a[c[0]][c[0]] > 0;
        cyclic && c.iter().any(|&i| c.iter().map(|&j| a[i][j]).sum::<u64>() >= 2)
    })
}

/// Edge lengths from the left Perron–Frobenius eigenvector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenMetric {
    pub lengths: Vec<f64>,
    pub lambda: f64,
    /// `‖xᵀA − λxᵀ‖∞` after normalization.
    pub residual: f64,
    /// Collatz–Wielandt bracket `[min, max]` of `(xᵀA)_j / x_j`.
    pub lambda_bounds: (f64, f64),
}

/// Residual tolerance for [`eigen_metric`].
pub const EIGEN_TOLERANCE: f64 = 1e-10;

fn solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            if factor != 0.0 {
                for c in col..n {
                    m[r][c] -= factor * m[col][c];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / m[i][i];
    }
    Some(x)
}

fn left_product(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n).map(|j| (0..n).map(|i| x[i] * a[i][j]).sum()).collect()
}

fn normalize(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    for v in x.iter_mut() {
        *v /= s;
    }
}

/// Left PF eigenvector of the transition matrix, normalized to total length
/// one, computed by shifted power iteration followed by inverse iteration
/// and certified by its residual.
pub fn eigen_metric(f: &GraphMap) -> Result<EigenMetric, TrainTrackError> {
    if !is_irreducible(f) {
        return Err(TrainTrackError::NotIrreducible);
    }
    if !is_expanding(f) {
        return Err(TrainTrackError::NotExpanding);
    }
    let a: Vec<Vec<f64>> = transition_matrix(f).iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let n = a.len();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..500 {
        let y = left_product(&a, &x);
        let mut z: Vec<f64> = y.iter().zip(&x).map(|(p, q)| p + q).collect();
        normalize(&mut z);
        x = z;
    }
    let bounds = |x: &[f64]| {
        let y = left_product(&a, x);
        let ratios: Vec<f64> = y.iter().zip(x).map(|(p, q)| p / q).collect();
        (ratios.iter().cloned().fold(f64::INFINITY, f64::min), ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
    };
    let mut lam = {
        let (lo, hi) = bounds(&x);
        0.5 * (lo + hi)
    };
    for _ in 0..50 {
        let sigma = lam + 1e-9;
        let mt: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| a[j][i] - if i == j { sigma } else { 0.0 }).collect()).collect();
        let Some(mut y) = solve(mt, x.clone()) else { break };
        normalize(&mut y);
        if y.iter().any(|v| !v.is_finite()) {
            break;
        }
        let delta: f64 = y.iter().zip(&x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        x = y;
        lam = left_product(&a, &x).iter().sum::<f64>();
        if delta < 1e-15 {
            break;
        }
    }
    if x.iter().any(|&v| v <= 0.0) {
        return Err(TrainTrackError::EigenFailure("eigenvector not positive".into()));
    }
    normalize(&mut x);
    let y = left_product(&a, &x);
    let lambda: f64 = y.iter().sum();
    let residual = y.iter().zip(&x).map(|(p, q)| (p - lambda * q).abs()).fold(0.0, f64::max);
    if residual > EIGEN_TOLERANCE {
        return Err(TrainTrackError::EigenFailure(format!("residual {residual:e} above tolerance")));
    }
    Ok(EigenMetric { lengths: x.clone(), lambda, residual, lambda_bounds: bounds(&x) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{Graph, OEdge};

    fn rose_map(images: Vec<Vec<OEdge>>) -> GraphMap {
        let gens: Vec<String> = (0..images.len()).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let g = Graph::rose(&gens);
        GraphMap::new(g.clone(), g, vec![0], images).unwrap()
    }

    #[test]
    fn golden_ratio() {
        let (a, b) = (OEdge::fwd(0), OEdge::fwd(1));
        let f = rose_map(vec![vec![a, b], vec![a]]);
        let m = eigen_metric(&f).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((m.lambda - phi).abs() < 1e-12);
        assert!((m.lengths[0] / m.lengths[1] - phi).abs() < 1e-10);
        assert!((m.lengths.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn doubling_map() {
        let a = OEdge::fwd(0);
        let m = eigen_metric(&rose_map(vec![vec![a, a]])).unwrap();
        assert!((m.lambda - 2.0).abs() < 1e-12);
        assert_eq!(m.lengths, vec![1.0]);
    }

    #[test]
    fn permutation_is_irreducible_not_expanding() {
        let (a, b) = (OEdge::fwd(0), OEdge::fwd(1));
        let f = rose_map(vec![vec![b], vec![a]]);
        assert!(is_irreducible(&f));
        assert!(!is_expanding(&f));
        assert_eq!(eigen_metric(&f), Err(TrainTrackError::NotExpanding));
    }

    #[test]
    fn identity_is_reducible() {
        let (a, b) = (OEdge::fwd(0), OEdge::fwd(1));
        let f = rose_map(vec![vec![a], vec![b]]);
        assert!(!is_irreducible(&f));
        assert!(!is_expanding(&f));
    }
}
