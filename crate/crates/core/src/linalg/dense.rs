//! Small dense LU with partial pivoting.

use alloc::vec;
use alloc::vec::Vec;

/// Factor the row-major `n x n` matrix `a` in place and solve for each of the
/// `m` right-hand sides stored column-wise in `b` (`n x m`, row-major).
///
/// Returns false when a pivot falls below `rel_tol * max|a|`.
pub fn lu_solve(n: usize, a: &mut [f64], b: &mut [f64], m: usize, rel_tol: f64) -> bool {
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return false;
    }
    for k in 0..n {
        let mut p = k;
        for r in k + 1..n {
            if a[r * n + k].abs() > a[p * n + k].abs() {
                p = r;
            }
        }
        if a[p * n + k].abs() <= rel_tol * scale {
            return false;
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            for c in 0..m {
                b.swap(k * m + c, p * m + c);
            }
        }
        let piv = a[k * n + k];
        for r in k + 1..n {
            let f = a[r * n + k] / piv;
            if f == 0.0 {
                continue;
            }
            a[r * n + k] = 0.0;
            for c in k + 1..n {
                a[r * n + c] -= f * a[k * n + c];
            }
            for c in 0..m {
                b[r * m + c] -= f * b[k * m + c];
            }
        }
    }
    for k in (0..n).rev() {
        for c in 0..m {
            let mut s = b[k * m + c];
            for j in k + 1..n {
                s -= a[k * n + j] * b[j * m + c];
            }
            b[k * m + c] = s / a[k * n + k];
        }
    }
    true
}

/// Inverse of a row-major `n x n` matrix, or `None` if it is numerically singular.
pub fn invert(n: usize, a: &[f64], rel_tol: f64) -> Option<Vec<f64>> {
    let mut work = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for k in 0..n {
        inv[k * n + k] = 1.0;
    }
    lu_solve(n, &mut work, &mut inv, n, rel_tol).then_some(inv)
}
