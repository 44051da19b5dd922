//! Normal extension of interface data into a band around the interface.
//!
//! Solves `W_xi + (sgn(phi) n) . grad W = 0` in pseudo-time with upwind
//! second-order differences. Arms crossed by the interface use the arm value
//! at the crossing point instead of the neighbour across it, so the information
//! flows outward from the interface on both sides.

use alloc::vec::Vec;


use crate::gfm::InterfaceValues;
use crate::grid::{NodeField, VectorField};
use crate::levelset::{minmod, second_diff, Arm, InterfaceGeometry};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionConfig {
    pub cfl: f64,
    pub iterations: usize,
    /// Nodes with `|phi| < band * h` are updated; the rest stay frozen.
    pub band: f64,
}

impl Default for ExtensionConfig {
    fn default() -> Self {
        Self { cfl: 0.4, iterations: 20, band: 6.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExtensionReport {
    pub band_nodes: usize,
    /// Max change of the last pseudo-time step.
    pub last_change: f64,
}

const GROWTH_LIMIT: f64 = 10.0;

struct BandNode {
    k: usize,
    i: usize,
    j: usize,
    m: [f64; 2],
    step: f64,
    /// Interface value and distance fraction for each jump arm.
    sub: [Option<(f64, f64)>; 4],
}

/// Both one-sided differences along one axis.
#[allow(clippy::too_many_arguments)]
fn sided(
    w: &[f64],
    k: usize,
    pos: usize,
    len: usize,
    stride: usize,
    h: f64,
    back_sub: Option<(f64, f64)>,
    fwd_sub: Option<(f64, f64)>,
) -> (f64, f64) {
    let p = w[k];
    let here = second_diff(w, k, pos, len, stride);
    let curv = |other: Option<f64>| match (here, other) {
        (Some(a), Some(b)) => minmod(a, b),
        _ => 0.0,
    };
    let prev = if pos >= 1 { second_diff(w, k - stride, pos - 1, len, stride) } else { None };
    let next = second_diff(w, k + stride, pos + 1, len, stride);
    let back = match back_sub {
        Some((wi, theta)) => {
            let s = theta * h;
            (p - wi) / s + 0.5 * s * curv(prev) / (h * h)
        }
        None => (p - w[k - stride]) / h + 0.5 * curv(prev) / h,
    };
    let fwd = match fwd_sub {
        Some((wi, theta)) => {
            let s = theta * h;
            (wi - p) / s - 0.5 * s * curv(next) / (h * h)
        }
        None => (w[k + stride] - p) / h - 0.5 * curv(next) / h,
    };
    (back, fwd)
}

fn rate(w: &[f64], b: &BandNode, g: &crate::grid::Grid2D) -> f64 {
    let (bx, fx) = sided(w, b.k, b.i, g.nx, 1, g.dx, b.sub[Arm::L as usize], b.sub[Arm::R as usize]);
    let (by, fy) = sided(w, b.k, b.j, g.ny, g.nx, g.dy, b.sub[Arm::B as usize], b.sub[Arm::T as usize]);
    let [mx, my] = b.m;
    mx.max(0.0) * bx + mx.min(0.0) * fx + my.max(0.0) * by + my.min(0.0) * fy
}

/// Extend one scalar field off the interface using its arm values.
pub fn extend_scalar(
    u: &NodeField,
    geo: &InterfaceGeometry,
    values: &InterfaceValues,
    cfg: &ExtensionConfig,
) -> Result<(NodeField, ExtensionReport)> {
    let g = *geo.grid();
    let h = g.dx.min(g.dy);
    let mut band = Vec::new();
    for k in 0..g.len() {
        let (i, j) = g.coords(k);
        if g.is_boundary(i, j) || geo.phi(k).abs() >= cfg.band * g.h() {
            continue;
        }
        let mut sub = [None; 4];
        let mut tmin = 1.0f64;
        for arm in Arm::ALL {
            if geo.jump_arm(k, arm) {
                if let Some(v) = values.get(k, arm) {
                    let t = geo.theta(k, arm);
                    sub[arm as usize] = Some((v, t));
                    tmin = tmin.min(t);
                }
            }
        }
        let n = geo.normal(k);
        let s = geo.region(k).sign();
        band.push(BandNode { k, i, j, m: [s * n[0], s * n[1]], step: tmin * cfg.cfl * h, sub });
    }

    let scale = u.max_abs().max(1.0);
    let mut w = u.values().to_vec();
    let mut stage = w.clone();
    let mut report = ExtensionReport { band_nodes: band.len(), last_change: 0.0 };
    for _ in 0..cfg.iterations {
        for b in &band {
            stage[b.k] = w[b.k] - b.step * rate(&w, b, &g);
        }
        let mut change = 0.0f64;
        let mut peak = 0.0f64;
        // second Heun stage evaluated on the first, averaged with the start
        let first = stage.clone();
        for b in &band {
            let w2 = first[b.k] - b.step * rate(&first, b, &g);
            let next = 0.5 * (w[b.k] + w2);
            change = change.max((next - w[b.k]).abs());
            peak = peak.max(next.abs());
            stage[b.k] = next;
        }
        for b in &band {
            w[b.k] = stage[b.k];
        }
        if !peak.is_finite() || peak > GROWTH_LIMIT * scale {
            return Err(Error::ExtensionUnstable { growth: peak / scale });
        }
        report.last_change = change;
    }
    Ok((NodeField::from_values(g, w)?, report))
}

/// Extend both velocity components.
pub fn extend_velocity(
    v: &VectorField,
    geo: &InterfaceGeometry,
    values: [&InterfaceValues; 2],
    cfg: &ExtensionConfig,
) -> Result<(VectorField, ExtensionReport)> {
    let (x, rx) = extend_scalar(&v.x, geo, values[0], cfg)?;
    let (y, ry) = extend_scalar(&v.y, geo, values[1], cfg)?;
    let report = ExtensionReport { band_nodes: rx.band_nodes, last_change: rx.last_change.max(ry.last_change) };
    Ok((VectorField { x, y }, report))
}
