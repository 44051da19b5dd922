//! Departure points and interpolation at departure points.

use crate::gfm::{ghost_value, InterfaceValues};
use crate::grid::{CellPoint, Grid2D, NodeField, VectorField};
use crate::interp;
use crate::levelset::{InterfaceGeometry, Region};
use crate::{Error, Result};

/// A traced foot point. `x, y` are not clamped; `clamped` reports whether the
/// point left the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracedPoint {
    pub x: f64,
    pub y: f64,
    pub clamped: bool,
}

/// Foot points at both history levels for one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Departures {
    pub n: TracedPoint,
    pub nm1: TracedPoint,
}

/// Reject steps at or beyond `min(dx, dy) / (2 max|V|)`.
pub fn check_step(v: &VectorField, dt: f64) -> Result<()> {
    let vmax = v.max_component();
    if !vmax.is_finite() {
        return Err(Error::NonFinite { i: 0, j: 0, value: vmax });
    }
    if vmax == 0.0 {
        return Ok(());
    }
    let g = v.grid();
    let limit = g.dx.min(g.dy) / (2.0 * vmax);
    if dt >= limit {
        return Err(Error::StepSize { dt, limit });
    }
    Ok(())
}

fn velocity_at(v: &VectorField, x: f64, y: f64) -> (f64, f64) {
    let p = v.grid().locate(x, y);
    (interp::bilinear(&v.x, &p), interp::bilinear(&v.y, &p))
}

fn traced(g: &Grid2D, x: f64, y: f64) -> TracedPoint {
    let (_, clamped) = g.clamp(x, y);
    TracedPoint { x, y, clamped }
}

/// Second-order foot points of node `(i, j)`.
///
/// Level `n` uses a midpoint step with the velocity extrapolated to
/// `t^{n+1/2}` from `v_n` and `v_nm1`; level `n-1` uses a midpoint step of
/// length `2 dt` with `v_n`.
pub fn trace_departure(g: &Grid2D, i: usize, j: usize, v_n: &VectorField, v_nm1: &VectorField, dt: f64) -> Departures {
    let (x, y) = g.node(i, j);
    let k = g.index(i, j);
    let (u0, w0) = (v_n.x[k], v_n.y[k]);

    let (xh, yh) = (x - 0.5 * dt * u0, y - 0.5 * dt * w0);
    let (ua, wa) = velocity_at(v_n, xh, yh);
    let (ub, wb) = velocity_at(v_nm1, xh, yh);
    let n = traced(g, x - dt * (1.5 * ua - 0.5 * ub), y - dt * (1.5 * wa - 0.5 * wb));

    let (xh, yh) = (x - dt * u0, y - dt * w0);
    let (uc, wc) = velocity_at(v_n, xh, yh);
    let nm1 = traced(g, x - 2.0 * dt * uc, y - 2.0 * dt * wc);
    Departures { n, nm1 }
}

/// Interpolation class of a departure point relative to a history level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpolationClass {
    /// Cell corners and their second-difference stencils all in the assumed region.
    Regular,
    /// Some cell corners in the assumed region; the rest are replaced by ghost values.
    IrregularGhost,
    /// No corner in the assumed region.
    OppositeRegionFallback,
}

/// A departure point with the region the arrival node is assumed to belong to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeparturePoint {
    pub origin: (usize, usize),
    pub x: f64,
    pub y: f64,
    pub cell: CellPoint,
    pub region: Region,
}

impl DeparturePoint {
    pub fn new(g: &Grid2D, origin: (usize, usize), p: TracedPoint, region: Region) -> Self {
        Self { origin, x: p.x, y: p.y, cell: g.locate(p.x, p.y), region }
    }
}

/// Classify against the level set of the history level being interpolated.
pub fn classify(dp: &DeparturePoint, geo: &InterfaceGeometry) -> InterpolationClass {
    let g = geo.grid();
    let corners = dp.cell.corners(g);
    let inside = |k: usize| geo.region(k) == dp.region;
    if !corners.iter().any(|&k| inside(k)) {
        return InterpolationClass::OppositeRegionFallback;
    }
    if !corners.iter().all(|&k| inside(k)) {
        return InterpolationClass::IrregularGhost;
    }
    // second-difference stencils use the same inward shift as interp::dxx
    for &k in &corners {
        let (i, j) = g.coords(k);
        let ci = i.clamp(1, g.nx - 2);
        let cj = j.clamp(1, g.ny - 2);
        for d in 0..3 {
            if !inside(g.index(ci + d - 1, j)) || !inside(g.index(i, cj + d - 1)) {
                return InterpolationClass::IrregularGhost;
            }
        }
    }
    InterpolationClass::Regular
}

/// Quadrant directions pointing from each cell corner into the cell.
const INTO_CELL: [(isize, isize); 4] = [(1, 1), (-1, 1), (1, -1), (-1, -1)];

/// Interpolate `u` at the departure point according to `class`.
///
/// Returns the class actually used: an irregular point whose ghost values are
/// not all available is demoted to the opposite-region fallback.
pub fn interpolate(
    dp: &DeparturePoint,
    class: InterpolationClass,
    u: &NodeField,
    geo: &InterfaceGeometry,
    values: &InterfaceValues,
) -> (f64, InterpolationClass) {
    match class {
        InterpolationClass::Regular => (interp::quadratic_eno(u, &dp.cell), class),
        InterpolationClass::OppositeRegionFallback => (interp::bilinear(u, &dp.cell), class),
        InterpolationClass::IrregularGhost => {
            let g = geo.grid();
            let corners = dp.cell.corners(g);
            let mut c = [0.0; 4];
            for (q, &k) in corners.iter().enumerate() {
                let (i, j) = g.coords(k);
                let (sx, sy) = INTO_CELL[q];
                match ghost_value(geo, values, u, i, j, dp.region, sx, sy) {
                    Some((v, _)) => c[q] = v,
                    None => {
                        return (interp::bilinear(u, &dp.cell), InterpolationClass::OppositeRegionFallback);
                    }
                }
            }
            (interp::bilinear_values(&c, &dp.cell), class)
        }
    }
}
