//! Bilinear and quadratic ENO interpolation at points inside a grid cell.

use crate::grid::{CellPoint, NodeField};

/// Undivided second difference `u[i+1] - 2u[i] + u[i-1]` along x, shifted
/// inward at the first and last columns.
#[inline]
pub fn dxx(u: &NodeField, i: usize, j: usize) -> f64 {
    let nx = u.grid().nx;
    let c = i.clamp(1, nx - 2);
    u.get(c + 1, j) - 2.0 * u.get(c, j) + u.get(c - 1, j)
}

/// Undivided second difference along y, shifted inward at the first and last rows.
#[inline]
pub fn dyy(u: &NodeField, i: usize, j: usize) -> f64 {
    let ny = u.grid().ny;
    let c = j.clamp(1, ny - 2);
    u.get(i, c + 1) - 2.0 * u.get(i, c) + u.get(i, c - 1)
}

#[inline]
pub fn bilinear(u: &NodeField, p: &CellPoint) -> f64 {
    bilinear_values(&corner_values(u, p), p)
}

/// Bilinear combination of four corner values in [`CellPoint::corners`] order.
#[inline]
pub fn bilinear_values(values: &[f64; 4], p: &CellPoint) -> f64 {
    let w = p.bilinear_weights();
    w[0] * values[0] + w[1] * values[1] + w[2] * values[2] + w[3] * values[3]
}

#[inline]
pub fn corner_values(u: &NodeField, p: &CellPoint) -> [f64; 4] {
    let c = p.corners(u.grid());
    [u[c[0]], u[c[1]], u[c[2]], u[c[3]]]
}

/// Return the argument of smallest magnitude (first wins on ties).
#[inline]
fn min_abs(values: [f64; 4]) -> f64 {
    let mut best = values[0];
    for &v in &values[1..] {
        if v.abs() < best.abs() {
            best = v;
        }
    }
    best
}

/// Second differences used by the quadratic ENO correction in a cell:
/// the smallest-magnitude candidate over the four corners, per axis.
pub fn eno_second_differences(u: &NodeField, p: &CellPoint) -> (f64, f64) {
    let (i, j) = (p.ic, p.jc);
    let uxx = min_abs([dxx(u, i, j), dxx(u, i + 1, j), dxx(u, i, j + 1), dxx(u, i + 1, j + 1)]);
    let uyy = min_abs([dyy(u, i, j), dyy(u, i + 1, j), dyy(u, i, j + 1), dyy(u, i + 1, j + 1)]);
    (uxx, uyy)
}

/// Quadratic ENO interpolation: bilinear plus limited second-derivative corrections.
pub fn quadratic_eno(u: &NodeField, p: &CellPoint) -> f64 {
    let (uxx, uyy) = eno_second_differences(u, p);
    bilinear(u, p) - uxx * p.tx * (1.0 - p.tx) * 0.5 - uyy * p.ty * (1.0 - p.ty) * 0.5
}
