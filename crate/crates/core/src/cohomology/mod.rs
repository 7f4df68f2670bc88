//! Chain complex of a folded mapping torus, integral homology and its dual
//! cohomology basis, the positive cone, the discreteness cone around `r*`,
//! and the length-function machinery for axis-bundle dimension bounds.

mod cone;
mod lengths;
pub mod snf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{qi, render, Q};
use crate::torus::{CellKind, TrapComplex};
use snf::{mat_mul, smith, IMat};

pub use cone::{
    cone_membership, discreteness_cone, min_cycle_mean, ConeCertificate, ConeResult, ConeWitness, DiscretenessCone,
};
pub use lengths::{axis_dim_lower_bound, crossing_counts, delta_lengths, potential, AxisBound};

/// Errors from the cohomology operations.
#[derive(Debug, Error, Clone, PartialEq, Serialize, Deserialize)]
pub enum CohomologyError {
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("supplied cycles do not form a basis of H_1 mod torsion (determinant {det})")]
    NotABasis { det: String },
    #[error("cocycle is not positive on cell {cell}")]
    NotPositive { cell: String },
    #[error("cell {cell} is not a skew cell")]
    NotSkew { cell: String },
    #[error("cocycle has a non-integral period")]
    NonIntegralPeriods,
    #[error("phase {phase} meets a 0-cell")]
    DegeneratePhase { phase: String },
    #[error("turn list repeats vertex {vertex}")]
    RepeatedVertex { vertex: String },
    #[error("turn at vertex {vertex} is not at a valence-3 vertex")]
    NotValenceThree { vertex: String },
    #[error("turn {turn} is degenerate")]
    DegenerateTurn { turn: String },
    #[error("fold parameters must be nonnegative with sum below 1")]
    BadParameters,
}

/// Integer boundary matrices of the trapezoidal cell structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    /// `∂₁`, rows 0-cells, columns 1-cells.
    pub d1: Vec<Vec<i64>>,
    /// `∂₂`, rows 1-cells, columns 2-cells.
    pub d2: Vec<Vec<i64>>,
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
}

impl ChainComplex {
    pub fn of(x: &TrapComplex) -> Self {
        let (n0, n1, n2) = (x.zero_cells.len(), x.one_cells.len(), x.two_cells.len());
        let mut d1 = vec![vec![0; n1]; n0];
        for (j, c) in x.one_cells.iter().enumerate() {
            d1[c.to][j] += 1;
            d1[c.from][j] -= 1;
        }
        let mut d2 = vec![vec![0; n2]; n1];
        for (j, t) in x.two_cells.iter().enumerate() {
            for (c, s) in t.boundary() {
                d2[c][j] += i64::from(s);
            }
        }
        ChainComplex { d1, d2, n0, n1, n2 }
    }

    /// `∂₁ ∂₂ = 0`.
    pub fn is_complex(&self) -> bool {
        (0..self.n0)
            .all(|i| (0..self.n2).all(|j| (0..self.n1).map(|k| self.d1[i][k] * self.d2[k][j]).sum::<i64>() == 0))
    }

    pub fn is_cycle(&self, chain: &[i64]) -> bool {
        chain.len() == self.n1 && self.d1.iter().all(|row| row.iter().zip(chain).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    /// `∂₂` of a 2-cell as a 1-chain.
    pub fn boundary_of(&self, two_cell: usize) -> Vec<i64> {
        self.d2.iter().map(|row| row[two_cell]).collect()
    }
}

/// A rational value on every 1-cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocycle {
    pub values: Vec<Q>,
}

impl Cocycle {
    pub fn new(values: Vec<Q>) -> Self {
        Cocycle { values }
    }

    pub fn zero(n: usize) -> Self {
        Cocycle { values: vec![Q::zero(); n] }
    }

    /// Pairing with an integral 1-chain.
    pub fn eval(&self, chain: &[i64]) -> Q {
        self.values.iter().zip(chain).filter(|(_, &c)| c != 0).map(|(v, &c)| v * qi(c)).sum()
    }

    /// Vanishes on every `∂₂` column.
    pub fn is_cocycle(&self, cc: &ChainComplex) -> bool {
        (0..cc.n2).all(|j| self.eval(&cc.boundary_of(j)).is_zero())
    }

    pub fn scale(&self, k: &Q) -> Cocycle {
        Cocycle { values: self.values.iter().map(|v| v * k).collect() }
    }

    pub fn add(&self, other: &Cocycle) -> Cocycle {
        Cocycle { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    /// `z + δφ` for a 0-cochain `φ`.
    pub fn shift(&self, x: &TrapComplex, phi: &[Q]) -> Cocycle {
        Cocycle { values: x.one_cells.iter().zip(&self.values).map(|(c, v)| v + &phi[c.to] - &phi[c.from]).collect() }
    }

    pub fn min_value(&self) -> Option<Q> {
        self.values.iter().min().cloned()
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|v| v.is_positive())
    }

    /// `(cell name, value)` pairs.
    pub fn named(&self, x: &TrapComplex) -> Vec<(String, String)> {
        x.one_cells.iter().zip(&self.values).map(|(c, v)| (c.name.clone(), render(v))).collect()
    }

    /// Build from `(cell name, value)` pairs, zero elsewhere.
    pub fn from_named(x: &TrapComplex, values: &[(&str, Q)]) -> Option<Cocycle> {
        let mut z = Cocycle::zero(x.one_cells.len());
        for (name, v) in values {
            z.values[x.find_cell(name)?] += v;
        }
        Some(z)
    }
}

/// The flow-time cocycle divided by the number of folds: a vertical cell of
/// `n` steps gets `n/K`, a skew cell `1/K`.
pub fn time_cocycle(x: &TrapComplex) -> Cocycle {
    let k = qi(x.num_folds() as i64);
    Cocycle {
        values: x
            .one_cells
            .iter()
            .map(|c| match c.kind {
                CellKind::Vertical => qi(c.steps as i64) / &k,
                CellKind::Skew => Q::one() / &k,
            })
            .collect(),
    }
}

/// A class in `H¹(X; ℚ)` in coordinates of a dual basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomClass {
    pub coords: Vec<Q>,
}

impl CohomClass {
    pub fn new(coords: Vec<Q>) -> Self {
        CohomClass { coords }
    }

    pub fn integral(coords: &[i64]) -> Self {
        CohomClass { coords: coords.iter().map(|&c| qi(c)).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integral with coprime coordinates.
    pub fn is_primitive(&self) -> bool {
        self.is_integral() && self.coords.iter().fold(BigInt::zero(), |g, c| g.gcd(&c.to_integer())).is_one()
    }

    pub fn scale(&self, k: &Q) -> CohomClass {
        CohomClass { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// E.g. `2b* + 3r*`.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (c, n) in self.coords.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let coef = if mag.is_one() { String::new() } else { render(&mag) };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&format!("{coef}{n}*"));
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// `H₁(X; ℤ)` with a free basis of cycles and the dual cocycle basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Homology {
    pub complex: ChainComplex,
    /// Free rank.
    pub rank: usize,
    /// Torsion coefficients greater than 1.
    pub torsion: Vec<i64>,
    /// Integral cycles whose classes form a basis mod torsion.
    pub cycles: Vec<Vec<i64>>,
    /// Integral cocycles with `cocycles[i](cycles[j]) = δ_ij`.
    pub cocycles: Vec<Cocycle>,
    /// Basis names; duals print with a trailing `*`.
    pub names: Vec<String>,
}

impl Homology {
    /// A cocycle representing the class.
    pub fn representative(&self, c: &CohomClass) -> Result<Cocycle, CohomologyError> {
        self.check_dim(c)?;
        let mut z = Cocycle::zero(self.complex.n1);
        for (k, zk) in c.coords.iter().zip(&self.cocycles) {
            if !k.is_zero() {
                z = z.add(&zk.scale(k));
            }
        }
        Ok(z)
    }

    /// The class of a cocycle, read off on the basis cycles.
    pub fn class_of(&self, z: &Cocycle) -> CohomClass {
        CohomClass { coords: self.cycles.iter().map(|g| z.eval(g)).collect() }
    }

    /// Coordinates of a cycle in the basis, modulo torsion and boundaries.
    pub fn coordinates(&self, chain: &[i64]) -> Result<Vec<Q>, CohomologyError> {
        if !self.complex.is_cycle(chain) {
            return Err(CohomologyError::NotACycle);
        }
        Ok(self.cocycles.iter().map(|z| z.eval(chain)).collect())
    }

    /// The dual class `e_i*` of basis element `i`.
    pub fn dual(&self, i: usize) -> CohomClass {
        CohomClass::integral(&(0..self.rank).map(|j| i64::from(i == j)).collect::<Vec<_>>())
    }

    /// Index of a basis element by name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn check_dim(&self, c: &CohomClass) -> Result<(), CohomologyError> {
        if c.coords.len() != self.rank {
            return Err(CohomologyError::Dimension { expected: self.rank, got: c.coords.len() });
        }
        Ok(())
    }

    /// [`Homology::with_basis`] from named 1-cell combinations.
    pub fn with_named_basis(
        &self,
        x: &TrapComplex,
        basis: &[(&str, &[(&str, i64)])],
    ) -> Result<Homology, CohomologyError> {
        let mut cycles = Vec::new();
        for (_, terms) in basis {
            cycles.push(x.chain(terms).ok_or(CohomologyError::NotACycle)?);
        }
        self.with_basis(cycles, basis.iter().map(|(n, _)| n.to_string()).collect())
    }

    /// Replace the basis by the given cycles, which must span `H₁` mod
    /// torsion.
    pub fn with_basis(&self, cycles: Vec<Vec<i64>>, names: Vec<String>) -> Result<Homology, CohomologyError> {
        if cycles.len() != self.rank || names.len() != self.rank {
            return Err(CohomologyError::Dimension { expected: self.rank, got: cycles.len() });
        }
        let mut m = Vec::with_capacity(self.rank);
        for c in &cycles {
            m.push(self.coordinates(c)?);
        }
        let inv = invert(&m).ok_or_else(|| CohomologyError::NotABasis { det: "0".into() })?;
        if !inv.iter().flatten().all(|x| x.is_integer()) {
            return Err(CohomologyError::NotABasis { det: render(&determinant(&m)) });
        }
        // With c_i = Σ_j m_ij g_j the dual cocycles are z'_i = Σ_j inv_ji z_j.
        let cocycles = (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .fold(Cocycle::zero(self.complex.n1), |acc, j| acc.add(&self.cocycles[j].scale(&inv[j][i])))
            })
            .collect();
        Ok(Homology {
            complex: self.complex.clone(),
            rank: self.rank,
            torsion: self.torsion.clone(),
            cycles,
            cocycles,
            names,
        })
    }
}

fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

/// Inverse of a square rational matrix.
fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().cloned().chain((0..n).map(|j| if i == j { Q::one() } else { Q::zero() })).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for x in &mut a[c] {
            *x /= &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn to_imat(m: &[Vec<i64>], rows: usize, cols: usize) -> IMat {
    (0..rows).map(|i| (0..cols).map(|j| i128::from(m[i][j])).collect()).collect()
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("homology entries fit in i64")
}

/// Integral homology of the complex with a free basis ordered so that the
/// time class `time/K` is dual to the last basis cycle.
pub fn h1(x: &TrapComplex) -> Homology {
    let cc = ChainComplex::of(x);
    let (n0, n1, n2) = (cc.n0, cc.n1, cc.n2);
    let s1 = smith(&to_imat(&cc.d1, n0, n1), n0, n1);
    let r1 = s1.rank;
    let k = n1 - r1;
    // Rows r1.. of V⁻¹∂₂ give boundaries in the kernel basis V[:, r1..].
    let vd2 = mat_mul(&s1.v_inv, &to_imat(&cc.d2, n1, n2), n1);
    debug_assert!(vd2[..r1].iter().flatten().all(|&e| e == 0));
    let c: IMat = vd2[r1..].to_vec();
    let s2 = smith(&c, k, n2);
    let r2 = s2.rank;
    // Cycle i = V[:, r1..] · U'⁻¹[:, i]; its dual functional is row i of
    // U' · V⁻¹[r1.., :].
    let kernel: IMat = (0..n1).map(|row| s1.v[row][r1..].to_vec()).collect();
    let gens = mat_mul(&kernel, &s2.u_inv, k);
    let duals = mat_mul(&s2.u, &s1.v_inv[r1..].to_vec(), k);
    let torsion = s2.diag[..r2].iter().filter(|&&d| d > 1).map(|&d| narrow(d)).collect();
    let free: Vec<usize> = (r2..k).collect();
    let mut cycles: Vec<Vec<i128>> = free.iter().map(|&i| (0..n1).map(|row| gens[row][i]).collect()).collect();
    let mut cocycles: Vec<Vec<i128>> = free.iter().map(|&i| duals[i].clone()).collect();

    normalize_time_last(x, &mut cycles, &mut cocycles);

    let rank = cycles.len();
    let mut names: Vec<String> = match rank {
        2 => vec!["a".into()],
        _ => (1..rank).map(|i| format!("a{i}")).collect(),
    };
    if rank > 0 {
        names.push("r".into());
    }
    Homology {
        complex: cc,
        rank,
        torsion,
        cycles: cycles.into_iter().map(|c| c.into_iter().map(narrow).collect()).collect(),
        cocycles: cocycles
            .into_iter()
            .map(|z| Cocycle::new(z.into_iter().map(|v| Q::from_integer(BigInt::from(v))).collect()))
            .collect(),
        names,
    }
}

/// Unimodular change of basis making the time class evaluate `(0, …, 0, 1)`.
fn normalize_time_last(x: &TrapComplex, cycles: &mut [Vec<i128>], cocycles: &mut [Vec<i128>]) {
    let n = cycles.len();
    if n == 0 {
        return;
    }
    // Integral values K·τ(g_i), reduced by their gcd.
    let tau = time_cocycle(x);
    let kq = qi(x.num_folds() as i64);
    let mut t: Vec<i128> = cycles
        .iter()
        .map(|g| {
            let v = tau.eval(&g.iter().map(|&e| narrow(e)).collect::<Vec<_>>()) * &kq;
            i128::try_from(v.to_integer()).expect("small period")
        })
        .collect();
    // Column operations on the row vector t act on cycles as g ← g·P and on
    // dual cocycles as z ← P⁻¹·z.
    let col_sub =
        |t: &mut Vec<i128>, cycles: &mut [Vec<i128>], cocycles: &mut [Vec<i128>], j: usize, i: usize, q: i128| {
            // g_j -= q g_i; z_i += q z_j.
            t[j] -= q * t[i];
            let gi = cycles[i].clone();
            for (a, b) in cycles[j].iter_mut().zip(gi) {
                *a -= q * b;
            }
            let zj = cocycles[j].clone();
            for (a, b) in cocycles[i].iter_mut().zip(zj) {
                *a += q * b;
            }
        };
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| t[i] != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let p = *nz.iter().min_by_key(|&&i| t[i].abs()).expect("nonempty");
        for &j in &nz {
            if j != p {
                let q = t[j].div_euclid(t[p]);
                col_sub(&mut t, cycles, cocycles, j, p, q);
            }
        }
    }
    if let Some(p) = (0..n).find(|&i| t[i] != 0) {
        if p != n - 1 {
            t.swap(p, n - 1);
            cycles.swap(p, n - 1);
            cocycles.swap(p, n - 1);
        }
        if t[n - 1] < 0 {
            t[n - 1] = -t[n - 1];
            for v in cycles[n - 1].iter_mut().chain(cocycles[n - 1].iter_mut()) {
                *v = -*v;
            }
        }
    }
}

/// Pairing of a class with a 1-cycle.
pub fn evaluate(h: &Homology, c: &CohomClass, chain: &[i64]) -> Result<Q, CohomologyError> {
    if !h.complex.is_cycle(chain) {
        return Err(CohomologyError::NotACycle);
    }
    Ok(h.representative(c)?.eval(chain))
}

#[cfg(test)]
mod tests;
