use std::fmt;

use crate::number::{Padic, PadicError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Padic>>,
}

impl PadicMatrix {
    pub fn from_rows(data: Vec<Vec<Padic>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        PadicMatrix { rows, cols, data }
    }

    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        PadicMatrix { rows, cols, data: vec![vec![Padic::exact_zero(p); cols]; rows] }
    }

    pub fn identity(p: u64, n: usize, rel: u32) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i][i] = Padic::one(p, rel);
        }
        m
    }

    pub fn prime(&self) -> u64 {
        self.data[0][0].prime()
    }

    pub fn get(&self, i: usize, j: usize) -> &Padic {
        &self.data[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<Padic> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols).map(|j| self.column(j)).collect();
        PadicMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &PadicMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        let p = self.prime();
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Padic::exact_zero(p);
                for k in 0..self.cols {
                    acc = &acc + &(&self.data[i][k] * &other.data[k][j]);
                }
                out.data[i][j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Padic]) -> Vec<Padic> {
        assert_eq!(self.cols, v.len());
        let p = self.prime();
        self.data
            .iter()
            .map(|r| r.iter().zip(v).fold(Padic::exact_zero(p), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    pub fn sub(&self, other: &PadicMatrix) -> Self {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        PadicMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, e: u64) -> Self {
        let p = self.prime();
        let mut acc: Option<PadicMatrix> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap_or_else(|| Self::identity(p, self.rows, 64))
    }

    pub fn trace(&self) -> Padic {
        let p = self.prime();
        (0..self.rows).fold(Padic::exact_zero(p), |acc, i| &acc + &self.data[i][i])
    }

    /// Relative precision large enough to make an exact constant harmless.
    fn max_rel(&self) -> u32 {
        let r = self.data.iter().flatten().map(|x| x.rel_precision()).max().unwrap_or(1);
        (r.max(1) + 2) as u32
    }

    /// Smallest absolute precision among the entries.
    pub fn min_abs_precision(&self) -> i64 {
        self.data.iter().flatten().map(|x| x.abs_precision()).min().unwrap_or(crate::INF)
    }

    pub fn min_valuation(&self) -> i64 {
        self.data.iter().flatten().map(|x| x.val_lower()).min().unwrap_or(crate::INF)
    }

    /// Solve `self * x = b` for square `self` by elimination with
    /// minimal-valuation pivots.
    pub fn solve(&self, b: &[Padic]) -> Result<Vec<Padic>, PadicError> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(PadicError::Dimension(format!("{}x{} system with {} rhs", self.rows, self.cols, b.len())));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Padic>> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut row = r.clone();
                row.push(bi.clone());
                row
            })
            .collect();
        for c in 0..n {
            let piv = (c..n).min_by_key(|&r| pivot_key(&a[r][c])).unwrap();
            if a[piv][c].is_zero() {
                return Err(PadicError::Singular(a[piv][c].val_lower()));
            }
            a.swap(c, piv);
            let inv = a[c][c].checked_inv()?;
            for r in 0..n {
                if r == c || a[r][c].is_exact_zero() {
                    continue;
                }
                let fac = &a[r][c] * &inv;
                for k in c..=n {
                    let t = &fac * &a[c][k];
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
        (0..n).map(|i| a[i][n].checked_div(&a[i][i])).collect()
    }

    pub fn det(&self) -> Padic {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.prime();
        let mut a = self.data.clone();
        let mut det = Padic::one(p, self.max_rel());
        for c in 0..n {
            let piv = (c..n).min_by_key(|&r| pivot_key(&a[r][c])).unwrap();
            if a[piv][c].is_zero() {
                return &det * &a[piv][c];
            }
            if piv != c {
                a.swap(c, piv);
                det = -det;
            }
            det = &det * &a[c][c];
            let inv = a[c][c].checked_inv().unwrap();
            for r in c + 1..n {
                if a[r][c].is_exact_zero() {
                    continue;
                }
                let fac = &a[r][c] * &inv;
                for k in c..n {
                    let t = &fac * &a[c][k];
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
        det
    }

    /// Full-pivoting elimination on the augmented matrix `[self | rhs]`.
    /// Returns the pivot positions and the reduced rows.
    fn eliminate(&self, rhs: Option<&[Padic]>, max_rank: usize) -> (Vec<(usize, usize)>, Vec<Vec<Padic>>) {
        let m = self.rows;
        let n = self.cols;
        let mut a: Vec<Vec<Padic>> = self.data.clone();
        if let Some(b) = rhs {
            for (row, bi) in a.iter_mut().zip(b) {
                row.push(bi.clone());
            }
        }
        let width = a[0].len();
        let mut used_rows = vec![false; m];
        let mut used_cols = vec![false; n];
        let mut pivots = Vec::new();
        while pivots.len() < max_rank {
            let mut best: Option<(usize, usize)> = None;
            for r in (0..m).filter(|&r| !used_rows[r]) {
                for c in (0..n).filter(|&c| !used_cols[c]) {
                    if best.is_none_or(|(br, bc)| pivot_key(&a[r][c]) < pivot_key(&a[br][bc])) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else { break };
            if a[pr][pc].is_zero() {
                break;
            }
            used_rows[pr] = true;
            used_cols[pc] = true;
            let inv = a[pr][pc].checked_inv().unwrap();
            for r in 0..m {
                if r == pr || a[r][pc].is_exact_zero() {
                    continue;
                }
                let fac = &a[r][pc] * &inv;
                for k in 0..width {
                    let t = &fac * &a[pr][k];
                    a[r][k] = &a[r][k] - &t;
                }
            }
            pivots.push((pr, pc));
        }
        (pivots, a)
    }

    /// Solve a consistent system with at least as many equations as unknowns.
    /// Equations beyond the pivots must reduce to precision zero.
    pub fn solve_overdetermined(&self, b: &[Padic]) -> Result<Vec<Padic>, PadicError> {
        if b.len() != self.rows || self.rows < self.cols {
            return Err(PadicError::Dimension(format!("{}x{} overdetermined system", self.rows, self.cols)));
        }
        let n = self.cols;
        let (pivots, a) = self.eliminate(Some(b), n);
        if pivots.len() < n {
            let worst = pivots.len();
            return Err(PadicError::Singular(worst as i64));
        }
        let pivot_rows: Vec<usize> = pivots.iter().map(|&(r, _)| r).collect();
        for r in (0..self.rows).filter(|r| !pivot_rows.contains(r)) {
            if !a[r][n].is_zero() {
                return Err(PadicError::Inconsistent(a[r][n].val_lower()));
            }
        }
        let p = self.prime();
        let mut x = vec![Padic::exact_zero(p); n];
        for &(r, c) in &pivots {
            x[c] = a[r][n].checked_div(&a[r][c])?;
        }
        Ok(x)
    }

    /// Indices of `rank` columns chosen by full pivoting, in increasing order.
    pub fn pivot_columns(&self, rank: usize) -> Result<Vec<usize>, PadicError> {
        let (pivots, _) = self.eliminate(None, rank);
        if pivots.len() < rank {
            return Err(PadicError::Singular(pivots.len() as i64));
        }
        let mut cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        cols.sort_unstable();
        Ok(cols)
    }

    /// Basis of the right kernel, assuming the matrix has rank `rank`.
    pub fn kernel(&self, rank: usize) -> Result<Vec<Vec<Padic>>, PadicError> {
        let (pivots, a) = self.eliminate(None, rank);
        if pivots.len() < rank {
            return Err(PadicError::Singular(pivots.len() as i64));
        }
        let p = self.prime();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_cols.contains(c)) {
            let mut v = vec![Padic::exact_zero(p); self.cols];
            v[free] = Padic::one(p, self.max_rel());
            for &(r, c) in &pivots {
                v[c] = -(a[r][free].checked_div(&a[r][c])?);
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// Coefficients of det(xI - A), constant term first (Berkowitz, division free).
    pub fn charpoly(&self) -> Vec<Padic> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.prime();
        let one = Padic::one(p, self.max_rel());
        // high degree first while building
        let mut vect = vec![one.clone(), -&self.data[0][0]];
        for r in 1..n {
            let row: Vec<Padic> = (0..r).map(|j| self.data[r][j].clone()).collect();
            let mut t: Vec<Padic> = (0..r).map(|i| self.data[i][r].clone()).collect();
            let mut col = vec![one.clone(), -&self.data[r][r]];
            for _ in 0..r {
                let rt = row.iter().zip(&t).fold(Padic::exact_zero(p), |acc, (x, y)| &acc + &(x * y));
                col.push(-rt);
                t = (0..r)
                    .map(|i| (0..r).fold(Padic::exact_zero(p), |acc, k| &acc + &(&self.data[i][k] * &t[k])))
                    .collect();
            }
            let mut next = vec![Padic::exact_zero(p); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, v) in vect.iter().enumerate() {
                    if i >= j && i - j < col.len() {
                        *slot = &*slot + &(&col[i - j] * v);
                    }
                }
            }
            vect = next;
        }
        vect.reverse();
        vect
    }
}

/// Pivot preference: smallest valuation first, precision zeros last.
fn pivot_key(x: &Padic) -> (bool, i64) {
    (x.is_zero(), x.val_lower())
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
