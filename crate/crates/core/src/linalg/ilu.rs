use alloc::vec;
use alloc::vec::Vec;

use super::CsrMatrix;
use crate::{Error, Result};

/// Zero-fill incomplete LU factorization on the sparsity pattern of `A`.
///
/// `L` (unit diagonal) and `U` share the pattern storage of the input.
#[derive(Debug, Clone)]
pub struct Ilu0 {
    lu: CsrMatrix,
    diag: Vec<usize>,
}

impl Ilu0 {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.n();
        let mut lu = a.clone();
        let row_ptr = lu.row_ptr().to_vec();
        let cols = lu.col_idx().to_vec();
        let mut diag = vec![usize::MAX; n];
        for r in 0..n {
            for p in row_ptr[r]..row_ptr[r + 1] {
                if cols[p] == r {
                    diag[r] = p;
                }
            }
            if diag[r] == usize::MAX {
                return Err(Error::ZeroDiagonal { row: r });
            }
        }
        let mut marker = vec![usize::MAX; n];
        let vals = lu.values_mut();
        for r in 0..n {
            let (start, end) = (row_ptr[r], row_ptr[r + 1]);
            for p in start..end {
                marker[cols[p]] = p;
            }
            for p in start..end {
                let k = cols[p];
                if k >= r {
                    break;
                }
                let pivot = vals[diag[k]];
                if pivot == 0.0 {
                    return Err(Error::ZeroDiagonal { row: k });
                }
                let f = vals[p] / pivot;
                vals[p] = f;
                for q in diag[k] + 1..row_ptr[k + 1] {
                    let m = marker[cols[q]];
                    if m != usize::MAX {
                        vals[m] -= f * vals[q];
                    }
                }
            }
            for p in start..end {
                marker[cols[p]] = usize::MAX;
            }
            if vals[diag[r]] == 0.0 || !vals[diag[r]].is_finite() {
                return Err(Error::ZeroDiagonal { row: r });
            }
        }
        Ok(Self { lu, diag })
    }

    /// Overwrite `x` with `(LU)^{-1} x`.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.lu.n();
        let rp = self.lu.row_ptr();
        let ci = self.lu.col_idx();
        let v = self.lu.values();
        for r in 0..n {
            let mut s = x[r];
            for p in rp[r]..self.diag[r] {
                s -= v[p] * x[ci[p]];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for p in self.diag[r] + 1..rp[r + 1] {
                s -= v[p] * x[ci[p]];
            }
            x[r] = s / v[self.diag[r]];
        }
    }
}
