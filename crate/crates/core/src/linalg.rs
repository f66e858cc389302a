//! Sparse exact linear algebra over the rationals.
//!
//! Everything here is exact: entries are arbitrary-precision rationals and
//! no rounding happens anywhere. Elimination pivots on sparsity, not
//! magnitude, and processes columns in their given order so that results
//! are reproducible bit for bit.

use crate::{Error, Result};
use num::{BigInt, BigRational, One, Zero};
use std::str::FromStr;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(u32, Rational)>;

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` into a rational. The denominator must be nonzero.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let make = |n: &str, d: &str| -> Result<Rational> {
        let n = BigInt::from_str(n).map_err(|e| Error::Parse(format!("bad numerator: {e}")))?;
        let d = BigInt::from_str(d).map_err(|e| Error::Parse(format!("bad denominator: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational::new(n, d))
    };
    match s.split_once('/') {
        Some((n, d)) => make(n, d),
        None => make(s, "1"),
    }
}

/// Sparse matrix over the rationals with column-major storage.
///
/// Invariants: no stored zero entries, indices within bounds, each column
/// sorted by row index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    /// Number of stored nonzero entries.
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Sets entry `(i, j)`; a zero value removes the entry.
    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let col = &mut self.columns[j];
        match col.binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(pos) => {
                if value.is_zero() {
                    col.remove(pos);
                } else {
                    col[pos].1 = value;
                }
            }
            Err(pos) => {
                if !value.is_zero() {
                    col.insert(pos, (i as u32, value));
                }
            }
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.columns[j].binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(pos) => self.columns[j][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Builds a matrix from whole columns (already sparse and sorted).
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        for col in &columns {
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(col.iter().all(|e| (e.0 as usize) < rows && !e.1.is_zero()));
        }
        SparseMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    /// Matrix-vector product `m * x` where `x` has one entry per column.
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut dense: Vec<Rational> = vec![Rational::zero(); self.rows];
        for (j, coeff) in x {
            for (i, a) in &self.columns[*j as usize] {
                dense[*i as usize] += a * coeff;
            }
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as u32, v))
            .collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        Elimination::run(self, None, &[]).pivots.len()
    }

    /// Rank of the submatrix keeping only rows/cols admitted by the filters.
    /// Used for truncation-stability checks where the lower-cutoff matrix is
    /// a leading block of the full one.
    pub fn rank_filtered(
        &self,
        keep_row: impl Fn(u32) -> bool,
        keep_col: impl Fn(usize) -> bool,
    ) -> usize {
        let columns: Vec<SparseVec> = self
            .columns
            .iter()
            .enumerate()
            .filter(|(j, _)| keep_col(*j))
            .map(|(_, col)| {
                col.iter()
                    .filter(|(i, _)| keep_row(*i))
                    .cloned()
                    .collect::<SparseVec>()
            })
            .collect();
        let sub = SparseMatrix::from_columns(self.rows, columns);
        sub.rank()
    }

    /// Basis of the kernel `{x : m·x = 0}` as column vectors.
    ///
    /// Vectors are normalized so their lowest-index nonzero entry is `1`,
    /// and are returned in increasing order of their free column.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let elim = Elimination::run(self, None, &[]);
        elim.free_columns()
            .iter()
            .map(|&f| elim.kernel_vector(f))
            .collect()
    }

    /// Solves `m·x = b` exactly. Returns `Ok(None)` when the system is
    /// inconsistent and an error on dimension mismatch. Free variables are
    /// set to zero, making the solution deterministic.
    pub fn solve(&self, b: &SparseVec) -> Result<Option<SparseVec>> {
        if let Some((i, _)) = b.last() {
            if *i as usize >= self.rows {
                return Err(Error::DimensionMismatch(format!(
                    "rhs touches row {} of a {}-row matrix",
                    i, self.rows
                )));
            }
        }
        let elim = Elimination::run(self, Some(b), &[]);
        Ok(elim.particular_solution())
    }

    /// Same as [`SparseMatrix::rank`] but with a row priority map: rows with
    /// smaller class are preferred as pivots. Deterministic for any map.
    pub fn rank_with_row_classes(&self, classes: &[u32]) -> usize {
        Elimination::run(self, None, classes).pivots.len()
    }

    /// Forward elimination state exposed for incremental rank updates.
    pub fn eliminate(&self, classes: &[u32]) -> Elimination {
        Elimination::run(self, None, classes)
    }
}

/// Result of a forward Gaussian elimination over the rationals.
///
/// Rows are reduced in the fixed column order `0..cols`; within a column the
/// pivot row is chosen by (class, fill, index), all exact.
pub struct Elimination {
    cols: usize,
    /// For each column, the pivot row id if the column has one.
    pivot_row_of_col: Vec<Option<usize>>,
    /// Row storage after forward elimination (pivot rows only are relevant).
    rows: Vec<SparseVec>,
    /// Augmented entries (one rational per row) when solving.
    aug: Option<Vec<Rational>>,
    /// (row, col) pivots in elimination order.
    pub pivots: Vec<(usize, usize)>,
    is_pivot_row: Vec<bool>,
}

impl Elimination {
    fn run(m: &SparseMatrix, rhs: Option<&SparseVec>, classes: &[u32]) -> Elimination {
        // Row-major copy.
        let mut rows: Vec<SparseVec> = vec![Vec::new(); m.rows];
        for (j, col) in m.columns.iter().enumerate() {
            for (i, v) in col {
                rows[*i as usize].push((j as u32, v.clone()));
            }
        }
        // Columns were visited in order, so each row is already sorted.
        let mut aug: Option<Vec<Rational>> = rhs.map(|b| {
            let mut dense = vec![Rational::zero(); m.rows];
            for (i, v) in b {
                dense[*i as usize] = v.clone();
            }
            dense
        });

        let mut col_index: Vec<Vec<u32>> = vec![Vec::new(); m.cols];
        for (i, row) in rows.iter().enumerate() {
            for (j, _) in row {
                col_index[*j as usize].push(i as u32);
            }
        }

        let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; m.cols];
        let mut is_pivot_row = vec![false; m.rows];
        let mut pivots = Vec::new();

        for j in 0..m.cols {
            // Candidate rows still alive with a genuine nonzero at j.
            let mut best: Option<(u32, usize, usize)> = None;
            let candidates = std::mem::take(&mut col_index[j]);
            let mut fresh: Vec<u32> = Vec::new();
            for &ri in &candidates {
                let r = ri as usize;
                if is_pivot_row[r] {
                    continue;
                }
                if rows[r].binary_search_by_key(&(j as u32), |e| e.0).is_err() {
                    continue; // stale index entry
                }
                fresh.push(ri);
                let class = classes.get(r).copied().unwrap_or(0);
                let key = (class, rows[r].len(), r);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
            col_index[j] = fresh.clone();
            let Some((_, _, p)) = best else { continue };
            pivot_row_of_col[j] = Some(p);
            is_pivot_row[p] = true;
            pivots.push((p, j));

            let pivot_val = rows[p]
                .binary_search_by_key(&(j as u32), |e| e.0)
                .ok()
                .map(|pos| rows[p][pos].1.clone())
                .expect("pivot entry");

            let targets: Vec<usize> = fresh
                .iter()
                .map(|&r| r as usize)
                .filter(|&r| r != p && !is_pivot_row[r])
                .collect();
            for r in targets {
                let Some(pos) = rows[r].binary_search_by_key(&(j as u32), |e| e.0).ok() else {
                    continue;
                };
                let factor = &rows[r][pos].1 / &pivot_val;
                let (updated, new_cols) = sub_scaled(&rows[r], &rows[p], &factor, j as u32);
                rows[r] = updated;
                for c in new_cols {
                    col_index[c as usize].push(r as u32);
                }
                if let Some(aug) = aug.as_mut() {
                    let delta = &factor * &aug[p];
                    aug[r] -= delta;
                }
            }
        }

        Elimination {
            cols: m.cols,
            pivot_row_of_col,
            rows,
            aug,
            pivots,
            is_pivot_row,
        }
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols)
            .filter(|&j| self.pivot_row_of_col[j].is_none())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel vector with value 1 at free column `f`, solved by
    /// back-substitution over the pivot columns.
    pub fn kernel_vector(&self, f: usize) -> SparseVec {
        let mut x: Vec<Rational> = vec![Rational::zero(); self.cols];
        x[f] = Rational::one();
        for j in (0..f).rev() {
            let Some(p) = self.pivot_row_of_col[j] else {
                continue;
            };
            let row = &self.rows[p];
            let mut acc = Rational::zero();
            let mut diag = Rational::zero();
            for (c, v) in row {
                let c = *c as usize;
                if c == j {
                    diag = v.clone();
                } else if c > j && !x[c].is_zero() {
                    acc += v * &x[c];
                }
            }
            if !acc.is_zero() {
                x[j] = -acc / diag;
            }
        }
        let mut out: SparseVec = x
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as u32, v))
            .collect();
        // Normalize so the lowest-index nonzero entry is 1.
        if let Some((_, lead)) = out.first() {
            let lead = lead.clone();
            if !lead.is_one() {
                for (_, v) in &mut out {
                    *v = &*v / &lead;
                }
            }
        }
        out
    }

    /// Particular solution with free variables set to zero, or `None` when
    /// the system is inconsistent.
    fn particular_solution(&self) -> Option<SparseVec> {
        let aug = self.aug.as_ref().expect("solve ran with a rhs");
        // Inconsistency: a fully-eliminated row with nonzero rhs remaining.
        for (r, row) in self.rows.iter().enumerate() {
            if !self.is_pivot_row[r] && row.is_empty() && !aug[r].is_zero() {
                return None;
            }
        }
        let mut x: Vec<Rational> = vec![Rational::zero(); self.cols];
        for j in (0..self.cols).rev() {
            let Some(p) = self.pivot_row_of_col[j] else {
                continue;
            };
            let row = &self.rows[p];
            let mut acc = aug[p].clone();
            let mut diag = Rational::zero();
            for (c, v) in row {
                let c = *c as usize;
                if c == j {
                    diag = v.clone();
                } else if c > j && !x[c].is_zero() {
                    acc -= v * &x[c];
                }
            }
            if !acc.is_zero() {
                x[j] = acc / diag;
            }
        }
        // Non-pivot rows must also be satisfied; they were reduced to rows
        // supported on free columns (all zero in x), so any remaining
        // equation is `0 = aug[r]` checked by substitution below.
        for (r, row) in self.rows.iter().enumerate() {
            if self.is_pivot_row[r] {
                continue;
            }
            let mut acc = Rational::zero();
            for (c, v) in row {
                let c = *c as usize;
                if !x[c].is_zero() {
                    acc += v * &x[c];
                }
            }
            if acc != aug[r] {
                return None;
            }
        }
        Some(
            x.into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i as u32, v))
                .collect(),
        )
    }
}

/// `target - factor * pivot`, skipping the cancelled entry at `pivot_col`.
/// Returns the new row and the columns that gained a nonzero entry.
fn sub_scaled(
    target: &SparseVec,
    pivot: &SparseVec,
    factor: &Rational,
    pivot_col: u32,
) -> (SparseVec, Vec<u32>) {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let mut new_cols = Vec::new();
    let mut a = target.iter().peekable();
    let mut b = pivot.iter().peekable();
    loop {
        match (a.peek().map(|e| e.0), b.peek().map(|e| e.0)) {
            (Some(ca), Some(cb)) if ca < cb => out.push(a.next().unwrap().clone()),
            (Some(ca), Some(cb)) if ca == cb => {
                let (c, va) = a.next().unwrap();
                let (_, vb) = b.next().unwrap();
                if *c == pivot_col {
                    continue; // exact cancellation by construction
                }
                let val = va - &(factor * vb);
                if !val.is_zero() {
                    out.push((*c, val));
                }
            }
            (_, Some(_)) => {
                let (c, v) = b.next().unwrap();
                if *c != pivot_col {
                    let val = factor * v;
                    if !val.is_zero() {
                        new_cols.push(*c);
                        out.push((*c, -val));
                    }
                }
            }
            (Some(_), None) => out.push(a.next().unwrap().clone()),
            (None, None) => break,
        }
    }
    (out, new_cols)
}

/// Adds `scale * src` into `dst` (both sparse, sorted).
pub fn add_scaled(dst: &SparseVec, src: &SparseVec, scale: &Rational) -> SparseVec {
    if scale.is_zero() {
        return dst.clone();
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let mut a = dst.iter().peekable();
    let mut b = src.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(&&(ca, _)), Some(&&(cb, _))) => {
                if ca < cb {
                    out.push(a.next().unwrap().clone());
                } else if cb < ca {
                    let (c, v) = b.next().unwrap();
                    let val = scale * v;
                    if !val.is_zero() {
                        out.push((*c, val));
                    }
                } else {
                    let (c, va) = a.next().unwrap();
                    let (_, vb) = b.next().unwrap();
                    let val = va + &(scale * vb);
                    if !val.is_zero() {
                        out.push((*c, val));
                    }
                }
            }
            (Some(_), None) => out.push(a.next().unwrap().clone()),
            (None, Some(_)) => {
                let (c, v) = b.next().unwrap();
                let val = scale * v;
                if !val.is_zero() {
                    out.push((*c, val));
                }
            }
            (None, None) => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn mat(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SparseMatrix {
        let mut m = SparseMatrix::new(rows, cols);
        for &(i, j, v) in entries {
            m.set(i, j, q(v));
        }
        m
    }

    #[test]
    fn kernel_empty_matrix() {
        let m = SparseMatrix::new(0, 0);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_identity() {
        let m = mat(3, 3, &[(0, 0, 1), (1, 1, 1), (2, 2, 1)]);
        assert!(m.kernel_basis().is_empty());
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn kernel_one_by_two() {
        let m = mat(1, 2, &[(0, 0, 1), (0, 1, 1)]);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![(0, q(1)), (1, q(-1))]]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(SparseMatrix::new(4, 5).rank(), 0);
        let m = mat(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_identity_and_scaling() {
        let m = mat(2, 2, &[(0, 0, 1), (1, 1, 1)]);
        let b = vec![(0, q(3)), (1, q(-7))];
        assert_eq!(m.solve(&b).unwrap().unwrap(), b);

        let m = mat(1, 1, &[(0, 0, 2)]);
        let x = m.solve(&vec![(0, q(1))]).unwrap().unwrap();
        assert_eq!(x, vec![(0, Rational::new(1.into(), 2.into()))]);
    }

    #[test]
    fn solve_inconsistent() {
        let m = mat(2, 1, &[(0, 0, 1), (1, 0, 1)]);
        let b = vec![(1, q(1))];
        assert_eq!(m.solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = mat(2, 1, &[(0, 0, 1)]);
        assert!(m.solve(&vec![(5, q(1))]).is_err());
    }

    #[test]
    fn rank_plus_nullity() {
        let m = mat(
            3,
            4,
            &[(0, 0, 1), (0, 1, 2), (1, 1, 1), (1, 2, 1), (2, 3, 5), (0, 3, 1)],
        );
        let k = m.kernel_basis();
        assert_eq!(m.rank() + k.len(), m.cols());
        for v in &k {
            assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn solve_reproduces_image_vector() {
        let m = mat(3, 3, &[(0, 0, 2), (1, 0, 1), (1, 1, 3), (2, 2, 1), (0, 2, 4)]);
        let x = vec![(0, q(1)), (2, q(2))];
        let b = m.apply(&x);
        let x2 = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.apply(&x2), b);
    }
}
