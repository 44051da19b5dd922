//! Node-centred uniform grids and fields stored on their nodes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Uniform Cartesian grid of `nx * ny` nodes, boundary nodes included.
///
/// Nodes are flattened row-major, `j * nx + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x_min: f64,
    pub y_min: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid2D {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_max <= x_min || y_max <= y_min {
            return Err(Error::Config(format!(
                "bad extents [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        if nx < 4 || ny < 4 {
            return Err(Error::Config(format!("need at least 4 nodes per axis, got {nx} x {ny}")));
        }
        Ok(Self {
            x_min,
            y_min,
            dx: (x_max - x_min) / (nx - 1) as f64,
            dy: (y_max - y_min) / (ny - 1) as f64,
            nx,
            ny,
        })
    }

    /// Square grid `[lo, hi]^2` with `cells` intervals per axis (`cells + 1` nodes).
    pub fn square(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        Self::new(lo, hi, lo, hi, cells + 1, cells + 1)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.dy
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x(i), self.y(j))
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.nx - 1)
    }

    pub fn y_max(&self) -> f64 {
        self.y(self.ny - 1)
    }

    /// `max(dx, dy)`.
    pub fn h(&self) -> f64 {
        self.dx.max(self.dy)
    }

    #[inline]
    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    /// Neighbour of `(i, j)` shifted by `(di, dj)`, if it is on the grid.
    #[inline]
    pub fn offset(&self, i: usize, j: usize, di: isize, dj: isize) -> Option<(usize, usize)> {
        let ii = i as isize + di;
        let jj = j as isize + dj;
        (ii >= 0 && jj >= 0 && (ii as usize) < self.nx && (jj as usize) < self.ny)
            .then_some((ii as usize, jj as usize))
    }

    /// Clamp a point into the closed domain; the flag reports whether it moved.
    pub fn clamp(&self, x: f64, y: f64) -> ((f64, f64), bool) {
        let cx = x.clamp(self.x_min, self.x_max());
        let cy = y.clamp(self.y_min, self.y_max());
        ((cx, cy), cx != x || cy != y)
    }

    /// Cell `(ic, jc)` containing the (clamped) point and local coordinates in `[0, 1]`.
    pub fn locate(&self, x: f64, y: f64) -> CellPoint {
        let ((x, y), clamped) = self.clamp(x, y);
        let fx = (x - self.x_min) / self.dx;
        let fy = (y - self.y_min) / self.dy;
        let ic = (fx as usize).min(self.nx - 2);
        let jc = (fy as usize).min(self.ny - 2);
        CellPoint {
            ic,
            jc,
            tx: (fx - ic as f64).clamp(0.0, 1.0),
            ty: (fy - jc as f64).clamp(0.0, 1.0),
            clamped,
        }
    }
}

/// A point located inside a grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPoint {
    pub ic: usize,
    pub jc: usize,
    pub tx: f64,
    pub ty: f64,
    pub clamped: bool,
}

impl CellPoint {
    /// Flat indices of the corners in the order (ic,jc), (ic+1,jc), (ic,jc+1), (ic+1,jc+1).
    pub fn corners(&self, grid: &Grid2D) -> [usize; 4] {
        let base = grid.index(self.ic, self.jc);
        [base, base + 1, base + grid.nx, base + grid.nx + 1]
    }

    /// Bilinear weights matching [`CellPoint::corners`].
    pub fn bilinear_weights(&self) -> [f64; 4] {
        let (tx, ty) = (self.tx, self.ty);
        [(1.0 - tx) * (1.0 - ty), tx * (1.0 - ty), (1.0 - tx) * ty, tx * ty]
    }
}

/// Scalar field, one value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeField {
    grid: Grid2D,
    values: Vec<f64>,
}

impl NodeField {
    pub fn zeros(grid: Grid2D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid2D, value: f64) -> Self {
        Self { grid, values: vec![value; grid.len()] }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Evaluate `f(x, y)` at every node without checking finiteness.
    pub fn from_fn(grid: Grid2D, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let (x, y) = grid.node(i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    /// Sample `f(x, y, t)` at every node; fails on the first non-finite value.
    pub fn sample(grid: Grid2D, t: f64, mut f: impl FnMut(f64, f64, f64) -> f64) -> Result<Self> {
        let field = Self::from_fn(grid, |x, y| f(x, y, t));
        field.check_finite()?;
        Ok(field)
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(idx) => {
                let (i, j) = self.grid.coords(idx);
                Err(Error::NonFinite { i, j, value: self.values[idx] })
            }
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let idx = self.grid.index(i, j);
        self.values[idx] = value;
    }

    #[inline]
    pub fn at(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl core::ops::Index<usize> for NodeField {
    type Output = f64;
    fn index(&self, idx: usize) -> &f64 {
        &self.values[idx]
    }
}

impl core::ops::IndexMut<usize> for NodeField {
    fn index_mut(&mut self, idx: usize) -> &mut f64 {
        &mut self.values[idx]
    }
}

/// Collocated vector field stored as two scalar fields.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub x: NodeField,
    pub y: NodeField,
}

impl VectorField {
    pub fn zeros(grid: Grid2D) -> Self {
        Self { x: NodeField::zeros(grid), y: NodeField::zeros(grid) }
    }

    pub fn from_fn(grid: Grid2D, mut f: impl FnMut(f64, f64) -> (f64, f64)) -> Self {
        let mut x = NodeField::zeros(grid);
        let mut y = NodeField::zeros(grid);
        for idx in 0..grid.len() {
            let (i, j) = grid.coords(idx);
            let (px, py) = grid.node(i, j);
            let (vx, vy) = f(px, py);
            x[idx] = vx;
            y[idx] = vy;
        }
        Self { x, y }
    }

    pub fn grid(&self) -> &Grid2D {
        self.x.grid()
    }

    /// Largest component magnitude over all nodes.
    pub fn max_component(&self) -> f64 {
        self.x.max_abs().max(self.y.max_abs())
    }

    pub fn check_finite(&self) -> Result<()> {
        self.x.check_finite()?;
        self.y.check_finite()
    }
}
