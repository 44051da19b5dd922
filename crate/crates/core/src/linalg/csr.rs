use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Square sparse matrix in compressed-row form. Column indices are sorted
/// and unique within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn identity(n: usize) -> Self {
        Self { n, row_ptr: (0..=n).collect(), col_idx: (0..n).collect(), values: vec![1.0; n] }
    }

    /// Build from a dense row-major array, dropping exact zeros off the diagonal.
    pub fn from_dense(n: usize, a: &[f64]) -> Self {
        let mut b = CsrBuilder::new(n);
        for r in 0..n {
            let row = (0..n)
                .filter(|&c| c == r || a[r * n + c] != 0.0)
                .map(|c| (c, a[r * n + c]));
            b.push_row(row);
        }
        b.finish()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.col_idx[a..b], &self.values[a..b])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).map(|p| vals[p]).unwrap_or(0.0)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate().take(self.n) {
            let (cols, vals) = self.row(r);
            *out = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    /// `b - A x`.
    pub fn residual(&self, b: &[f64], x: &[f64]) -> Vec<f64> {
        let mut ax = vec![0.0; self.n];
        self.matvec(x, &mut ax);
        b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect()
    }

    pub fn check_diagonal(&self) -> Result<()> {
        for r in 0..self.n {
            let d = self.get(r, r);
            if d == 0.0 || !d.is_finite() {
                return Err(Error::ZeroDiagonal { row: r });
            }
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                a[r * self.n + c] = v;
            }
        }
        a
    }
}

/// Row-by-row CSR construction. Entries of a row may arrive in any order and
/// with repeated columns; they are sorted and summed.
#[derive(Debug)]
pub struct CsrBuilder {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    scratch: Vec<(usize, f64)>,
}

impl CsrBuilder {
    pub fn new(n: usize) -> Self {
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        Self {
            n,
            row_ptr,
            col_idx: Vec::with_capacity(5 * n),
            values: Vec::with_capacity(5 * n),
            scratch: Vec::new(),
        }
    }

    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, f64)>) {
        debug_assert!(self.row_ptr.len() <= self.n);
        self.scratch.clear();
        self.scratch.extend(entries);
        self.scratch.sort_by_key(|e| e.0);
        let mut last = usize::MAX;
        for &(c, v) in &self.scratch {
            debug_assert!(c < self.n);
            if c == last {
                *self.values.last_mut().expect("previous entry") += v;
            } else {
                self.col_idx.push(c);
                self.values.push(v);
                last = c;
            }
        }
        self.row_ptr.push(self.col_idx.len());
    }

    pub fn finish(self) -> CsrMatrix {
        assert_eq!(self.row_ptr.len(), self.n + 1, "every row must be pushed");
        CsrMatrix { n: self.n, row_ptr: self.row_ptr, col_idx: self.col_idx, values: self.values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_merges_duplicates() {
        let mut b = CsrBuilder::new(3);
        b.push_row([(2, 1.0), (0, 2.0), (2, 0.5)]);
        b.push_row([(1, 4.0)]);
        b.push_row([(0, -1.0), (1, 3.0)]);
        let m = b.finish();
        assert_eq!(m.row(0).0, &[0, 2]);
        assert_eq!(m.get(0, 2), 1.5);
        assert_eq!(m.get(1, 0), 0.0);
        let mut y = [0.0; 3];
        m.matvec(&[1.0, 1.0, 1.0], &mut y);
        assert_eq!(y, [3.5, 4.0, 2.0]);
        assert!(m.check_diagonal().is_err());
    }
}
