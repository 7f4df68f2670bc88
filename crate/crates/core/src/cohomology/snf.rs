//! Integer Smith normal form with tracked unimodular transforms.

/// Dense integer matrix, row major.
pub type IMat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat, inner: usize) -> IMat {
    let m = a.len();
    let n = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = vec![vec![0i128; n]; m];
    for i in 0..m {
        for t in 0..inner {
            let x = a[i][t];
            if x != 0 {
                for j in 0..n {
                    out[i][j] += x * b[t][j];
                }
            }
        }
    }
    out
}

/// `U · A · V = D` with `D` diagonal, `d_i | d_{i+1}`, `d_i > 0` for
/// `i < rank`. Inverses of `U` and `V` are kept alongside.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<i128>,
    pub rank: usize,
    pub u: IMat,
    pub u_inv: IMat,
    pub v: IMat,
    pub v_inv: IMat,
}

struct Work {
    a: IMat,
    u: IMat,
    u_inv: IMat,
    v: IMat,
    v_inv: IMat,
}

impl Work {
    /// `row_i -= q · row_t`.
    fn row_sub(&mut self, i: usize, t: usize, q: i128) {
        for j in 0..self.a[0].len() {
            self.a[i][j] -= q * self.a[t][j];
        }
        for j in 0..self.u[0].len() {
            self.u[i][j] -= q * self.u[t][j];
        }
        for r in 0..self.u_inv.len() {
            self.u_inv[r][t] += q * self.u_inv[r][i];
        }
    }

    /// `col_j -= q · col_t`.
    fn col_sub(&mut self, j: usize, t: usize, q: i128) {
        for r in 0..self.a.len() {
            self.a[r][j] -= q * self.a[r][t];
        }
        for r in 0..self.v.len() {
            self.v[r][j] -= q * self.v[r][t];
        }
        for c in 0..self.v_inv[0].len() {
            self.v_inv[t][c] += q * self.v_inv[j][c];
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
        for r in &mut self.u_inv {
            r.swap(i, j);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        for r in &mut self.a {
            r.swap(i, j);
        }
        for r in &mut self.v {
            r.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    fn row_neg(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -*x;
        }
        for x in &mut self.u[i] {
            *x = -*x;
        }
        for r in &mut self.u_inv {
            r[i] = -r[i];
        }
    }
}

/// Smith normal form of an `m × n` matrix.
pub fn smith(a: &IMat, m: usize, n: usize) -> Smith {
    let mut w = Work {
        a: if m == 0 { Vec::new() } else { a.clone() },
        u: identity(m),
        u_inv: identity(m),
        v: identity(n),
        v_inv: identity(n),
    };
    if n == 0 {
        return Smith { diag: Vec::new(), rank: 0, u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv };
    }
    let mut rank = 0;
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if w.a[i][j] != 0 && best.is_none_or(|(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            w.row_swap(t, bi);
            w.col_swap(t, bj);
            let p = w.a[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                let q = w.a[i][t].div_euclid(p);
                if q != 0 {
                    w.row_sub(i, t, q);
                }
                dirty |= w.a[i][t] != 0;
            }
            for j in t + 1..n {
                let q = w.a[t][j].div_euclid(p);
                if q != 0 {
                    w.col_sub(j, t, q);
                }
                dirty |= w.a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| w.a[i][j] % p != 0));
            match bad {
                Some(i) => w.row_sub(t, i, -1),
                None => break,
            }
        }
        if w.a.get(t).is_none_or(|r| r[t] == 0) {
            break;
        }
        if w.a[t][t] < 0 {
            w.row_neg(t);
        }
        rank += 1;
    }
    let diag = (0..m.min(n)).map(|i| w.a[i][i]).collect();
    Smith { diag, rank, u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IMat) -> Smith {
        let (m, n) = (a.len(), a[0].len());
        let s = smith(a, m, n);
        let d = mat_mul(&mat_mul(&s.u, a, m), &s.v, n);
        for i in 0..m {
            for j in 0..n {
                if i != j {
                    assert_eq!(d[i][j], 0);
                }
            }
        }
        assert_eq!(mat_mul(&s.u, &s.u_inv, m), identity(m));
        assert_eq!(mat_mul(&s.v, &s.v_inv, n), identity(n));
        for i in 1..s.rank {
            assert_eq!(s.diag[i] % s.diag[i - 1], 0);
        }
        s
    }

    #[test]
    fn small_examples() {
        let s = check(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(&s.diag[..s.rank], &[2, 6, 12]);
        let s = check(&vec![vec![1, -1, 0], vec![-1, 1, 0]]);
        assert_eq!(s.rank, 1);
        let s = check(&vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(&s.diag[..2], &[1, 6]);
    }
}
