//! Ghost fluid treatment of the interface jump conditions.
//!
//! At every node with a crossed arm a 4x4 system links the four arm values
//! `u^R, u^L, u^T, u^B`. Uncrossed (and double-crossed) arms are pinned to the
//! neighbour they reach. Each crossed arm carries the flux condition
//! `[mu du/dn] = b` split along the arm axis, with the tangential derivative
//! taken from a local quadratic through the node, its four arm values and one
//! diagonal neighbour of the same region.
//!
//! The system is inverted once per node. Every arm value is then an affine
//! functional of grid values plus the jump data `b` at the crossed arm points,
//! which lets the implicit assembly substitute arm values symbolically and the
//! post-solve step evaluate them numerically with the same coefficients.

use alloc::vec;
use alloc::vec::Vec;

use crate::grid::{Grid2D, NodeField};
use crate::levelset::{Arm, InterfaceGeometry, Region};
use crate::linalg::dense;
use crate::{Error, Result};

const NO_SLOT: u32 = u32::MAX;
const PIVOT_TOL: f64 = 1e-12;

/// Diffusion coefficients on both sides of the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viscosity {
    pub plus: f64,
    pub minus: f64,
}

impl Viscosity {
    pub fn of(&self, r: Region) -> f64 {
        match r {
            Region::Plus => self.plus,
            Region::Minus => self.minus,
        }
    }

    /// `[mu] = mu^+ - mu^-`.
    pub fn jump(&self) -> f64 {
        self.plus - self.minus
    }
}

/// `sum terms_k u[node_k] + sum jump_k b_k`, where `b_k` is the flux jump at
/// the crossing point of arm `k` of the owning node.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArmFunctional {
    pub terms: Vec<(usize, f64)>,
    pub jump: [f64; 4],
}

impl ArmFunctional {
    fn identity(node: usize) -> Self {
        Self { terms: vec![(node, 1.0)], jump: [0.0; 4] }
    }

    pub fn eval(&self, u: &[f64], b: &[f64; 4]) -> f64 {
        let grid: f64 = self.terms.iter().map(|&(k, c)| c * u[k]).sum();
        grid + self.jump.iter().zip(b).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// Symbolic arm values of one node.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalStencil {
    pub node: usize,
    pub region: Region,
    pub arms: [ArmFunctional; 4],
    /// Diagonal neighbour used for the mixed term, if one was in the same region.
    pub extra: Option<usize>,
}

impl LocalStencil {
    pub fn arm(&self, arm: Arm) -> &ArmFunctional {
        &self.arms[arm as usize]
    }

    /// True if the mixed quadratic coefficient was dropped.
    pub fn reduced(&self) -> bool {
        self.extra.is_none()
    }
}

/// Local stencils of every node adjacent to the interface, indexed by node.
#[derive(Debug, Clone)]
pub struct InterfaceFunctionals {
    grid: Grid2D,
    slot: Vec<u32>,
    stencils: Vec<LocalStencil>,
}

impl InterfaceFunctionals {
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn get(&self, node: usize) -> Option<&LocalStencil> {
        match self.slot[node] {
            NO_SLOT => None,
            s => Some(&self.stencils[s as usize]),
        }
    }

    pub fn stencils(&self) -> &[LocalStencil] {
        &self.stencils
    }

    pub fn reduced_count(&self) -> usize {
        self.stencils.iter().filter(|s| s.reduced()).count()
    }

    /// Jump data `b` at the crossing points of a node; zero on uncrossed arms.
    pub fn jump_data(geo: &InterfaceGeometry, node: usize, b: &mut impl FnMut(f64, f64) -> f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        for arm in Arm::ALL {
            if geo.jump_arm(node, arm) {
                let (x, y) = geo.arm_point(node, arm);
                out[arm as usize] = b(x, y);
            }
        }
        out
    }

    /// Numerical arm values from a solved field and the jump data `b(x, y)`.
    pub fn evaluate(&self, geo: &InterfaceGeometry, u: &NodeField, mut b: impl FnMut(f64, f64) -> f64) -> InterfaceValues {
        let values = self
            .stencils
            .iter()
            .map(|s| {
                let bj = Self::jump_data(geo, s.node, &mut b);
                core::array::from_fn(|a| s.arms[a].eval(u.values(), &bj))
            })
            .collect();
        InterfaceValues { slot: self.slot.clone(), values }
    }
}

/// Numerical arm values `u^R, u^L, u^T, u^B` at interface-adjacent nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceValues {
    slot: Vec<u32>,
    values: Vec<[f64; 4]>,
}

impl InterfaceValues {
    /// No interface nodes on a grid of `len` nodes.
    pub fn empty(len: usize) -> Self {
        Self { slot: vec![NO_SLOT; len], values: Vec::new() }
    }

    pub fn get(&self, node: usize, arm: Arm) -> Option<f64> {
        match self.slot[node] {
            NO_SLOT => None,
            s => Some(self.values[s as usize][arm as usize]),
        }
    }

    pub fn node(&self, node: usize) -> Option<[f64; 4]> {
        match self.slot[node] {
            NO_SLOT => None,
            s => Some(self.values[s as usize]),
        }
    }
}

/// Lagrange weights of the first derivative at `x` through nodes `xs` (unit spacing units).
fn derivative_weights(xs: &[f64; 3], x: f64) -> [f64; 3] {
    let [a, b, c] = *xs;
    [
        ((x - b) + (x - c)) / ((a - b) * (a - c)),
        ((x - a) + (x - c)) / ((b - a) * (b - c)),
        ((x - a) + (x - b)) / ((c - a) * (c - b)),
    ]
}

/// Second-derivative Lagrange weights through nodes `xs`.
fn second_weights(xs: &[f64; 3]) -> [f64; 3] {
    let [a, b, c] = *xs;
    [2.0 / ((a - b) * (a - c)), 2.0 / ((b - a) * (b - c)), 2.0 / ((c - a) * (c - b))]
}

// Local symbols: 0 centre, 1..=4 arm unknowns (R, L, T, B), 5 diagonal
// neighbour, 6 and 7 the two far-side nodes of the arm being discretized.
const S_C: usize = 0;
const S_EXT: usize = 5;
const S_F1: usize = 6;
const S_F2: usize = 7;
type Lin = [f64; 8];

#[inline]
fn sym(arm: Arm) -> usize {
    1 + arm as usize
}

/// Coefficients `(c0, cx, cy, cxx, cyy, cxy)` of the local quadratic as
/// combinations of the local symbols, in physical units centred at the node.
struct Quadratic {
    cx: Lin,
    cy: Lin,
    cxx: Lin,
    cyy: Lin,
    cxy: Lin,
}

impl Quadratic {
    fn new(xl: [f64; 3], yl: [f64; 3], dx: f64, dy: f64, ext: Option<(f64, f64)>) -> Self {
        let syms_x = [sym(Arm::L), S_C, sym(Arm::R)];
        let syms_y = [sym(Arm::B), S_C, sym(Arm::T)];
        let mut q = Quadratic { cx: [0.0; 8], cy: [0.0; 8], cxx: [0.0; 8], cyy: [0.0; 8], cxy: [0.0; 8] };
        let (wx, wxx) = (derivative_weights(&xl, 0.0), second_weights(&xl));
        let (wy, wyy) = (derivative_weights(&yl, 0.0), second_weights(&yl));
        for k in 0..3 {
            q.cx[syms_x[k]] += wx[k] / dx;
            q.cxx[syms_x[k]] += 0.5 * wxx[k] / (dx * dx);
            q.cy[syms_y[k]] += wy[k] / dy;
            q.cyy[syms_y[k]] += 0.5 * wyy[k] / (dy * dy);
        }
        if let Some((ex, ey)) = ext {
            // u_ext = c0 + cx ex + cy ey + cxx ex^2 + cyy ey^2 + cxy ex ey, with c0 = u_c
            let inv = 1.0 / (ex * ey);
            q.cxy[S_EXT] += inv;
            q.cxy[S_C] -= inv;
            for s in 0..8 {
                q.cxy[s] -= inv * (q.cx[s] * ex + q.cy[s] * ey + q.cxx[s] * ex * ex + q.cyy[s] * ey * ey);
            }
        }
        q
    }

    /// Gradient of the quadratic at `(px, py)` relative to the node.
    fn gradient(&self, px: f64, py: f64) -> (Lin, Lin) {
        let mut gx = [0.0; 8];
        let mut gy = [0.0; 8];
        for s in 0..8 {
            gx[s] = self.cx[s] + 2.0 * self.cxx[s] * px + self.cxy[s] * py;
            gy[s] = self.cy[s] + 2.0 * self.cyy[s] * py + self.cxy[s] * px;
        }
        (gx, gy)
    }
}

/// Same-region diagonal neighbour with the largest `|phi|`.
fn pick_diagonal(geo: &InterfaceGeometry, i: usize, j: usize, region: Region) -> Option<(usize, isize, isize)> {
    let g = geo.grid();
    let mut best: Option<(usize, isize, isize, f64)> = None;
    for (di, dj) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
        let Some((ni, nj)) = g.offset(i, j, di, dj) else { continue };
        let k = g.index(ni, nj);
        if geo.region(k) != region {
            continue;
        }
        let a = geo.phi(k).abs();
        if best.is_none_or(|b| a > b.3) {
            best = Some((k, di, dj, a));
        }
    }
    best.map(|(k, di, dj, _)| (k, di, dj))
}

/// Build the local stencil of interior node `(i, j)`, or `None` if no arm carries
/// a jump equation.
pub fn build_local_system(geo: &InterfaceGeometry, mu: Viscosity, i: usize, j: usize) -> Result<Option<LocalStencil>> {
    let g = *geo.grid();
    let idx = g.index(i, j);
    if g.is_boundary(i, j) || !Arm::ALL.iter().any(|&a| geo.jump_arm(idx, a)) {
        return Ok(None);
    }
    let region = geo.region(idx);
    let t = |a: Arm| geo.effective_theta(idx, a);
    let xl = [-t(Arm::L), 0.0, t(Arm::R)];
    let yl = [-t(Arm::B), 0.0, t(Arm::T)];
    let diag = pick_diagonal(geo, i, j, region);
    let ext_off = diag.map(|(_, di, dj)| (di as f64 * g.dx, dj as f64 * g.dy));
    let quad = Quadratic::new(xl, yl, g.dx, g.dy, ext_off);

    let (mu_c, mu_f) = (mu.of(region), mu.of(region.opposite()));
    let sgn = region.sign();
    let mu_jump = mu.jump();

    // Row k: sum_s lin[s] * symbol_s = jump_k * b_k, with far symbols per row.
    let mut m = [0.0; 16];
    let mut rows: [(Lin, [Option<usize>; 2], f64); 4] = [([0.0; 8], [None; 2], 0.0); 4];

    for arm in Arm::ALL {
        let r = arm as usize;
        let (di, dj) = arm.offset();
        let mut lin = [0.0; 8];
        if !geo.jump_arm(idx, arm) {
            // u^arm = neighbour reached by the arm
            let steps = if geo.is_double(idx, arm) { 2 } else { 1 };
            let nb = g
                .offset(i, j, di * steps, dj * steps)
                .map(|(a, b)| g.index(a, b))
                .ok_or(Error::MissingInterfaceRows { i, j })?;
            lin[sym(arm)] = 1.0;
            lin[S_F1] = -1.0;
            rows[r] = (lin, [Some(nb), None], 0.0);
            continue;
        }
        let horizontal = arm.is_horizontal();
        let (h, line, sym_lo, sym_hi) = if horizontal {
            (g.dx, xl, sym(Arm::L), sym(Arm::R))
        } else {
            (g.dy, yl, sym(Arm::B), sym(Arm::T))
        };
        let dir = if horizontal { di as f64 } else { dj as f64 };
        let theta = geo.theta(idx, arm);
        let xc = dir * theta;

        // centre side through (lo arm, node, hi arm)
        let wc = derivative_weights(&line, xc);
        let mut dcen = [0.0; 8];
        dcen[sym_lo] += wc[0] / h;
        dcen[S_C] += wc[1] / h;
        dcen[sym_hi] += wc[2] / h;

        // far side through (interface, first node past it, second node)
        let n1 = g.offset(i, j, di, dj).map(|(a, b)| g.index(a, b)).ok_or(Error::MissingInterfaceRows { i, j })?;
        let n2 = g.offset(i, j, 2 * di, 2 * dj).map(|(a, b)| g.index(a, b));
        let mut dfar = [0.0; 8];
        match n2 {
            Some(_) => {
                let wf = derivative_weights(&[xc, dir, 2.0 * dir], xc);
                dfar[sym(arm)] += wf[0] / h;
                dfar[S_F1] += wf[1] / h;
                dfar[S_F2] += wf[2] / h;
            }
            None => {
                let w = 1.0 / ((dir - xc) * h);
                dfar[sym(arm)] -= w;
                dfar[S_F1] += w;
            }
        }

        let nrm = geo.normal_at_arm(idx, arm);
        let (px, py) = if horizontal { (xc * g.dx, 0.0) } else { (0.0, xc * g.dy) };
        let (gx, gy) = quad.gradient(px, py);
        // tangent (-n_y, n_x)
        let tang_coef = if horizontal { mu_jump * nrm[1] } else { -mu_jump * nrm[0] };
        for s in 0..8 {
            let tau = -nrm[1] * gx[s] + nrm[0] * gy[s];
            lin[s] = sgn * (mu_c * dcen[s] - mu_f * dfar[s]) + tang_coef * tau;
        }
        let bw = if horizontal { nrm[0] } else { nrm[1] };
        rows[r] = (lin, [Some(n1), n2], bw);
    }

    // Split symbols into the 4x4 unknown block and the grid right-hand side.
    let ext_node = diag.map(|d| d.0);
    let mut rhs_terms: [Vec<(usize, f64)>; 4] = Default::default();
    for r in 0..4 {
        let (lin, far, _) = &rows[r];
        for a in 0..4 {
            m[r * 4 + a] = lin[1 + a];
        }
        let mut push = |node: Option<usize>, c: f64| {
            if c != 0.0 {
                if let Some(n) = node {
                    rhs_terms[r].push((n, -c));
                }
            }
        };
        push(Some(idx), lin[S_C]);
        push(ext_node, lin[S_EXT]);
        push(far[0], lin[S_F1]);
        push(far[1], lin[S_F2]);
    }

    let inv = dense::invert(4, &m, PIVOT_TOL).ok_or(Error::SingularLocalSystem { i, j })?;

    let arms = core::array::from_fn(|a| {
        let arm = Arm::ALL[a];
        if !geo.jump_arm(idx, arm) {
            let (di, dj) = arm.offset();
            let steps = if geo.is_double(idx, arm) { 2 } else { 1 };
            let (ni, nj) = g.offset(i, j, di * steps, dj * steps).expect("checked above");
            return ArmFunctional::identity(g.index(ni, nj));
        }
        let mut f = ArmFunctional::default();
        for r in 0..4 {
            let w = inv[a * 4 + r];
            if w == 0.0 {
                continue;
            }
            for &(n, c) in &rhs_terms[r] {
                f.terms.push((n, w * c));
            }
            f.jump[r] += w * rows[r].2;
        }
        f.terms.sort_by_key(|e| e.0);
        f.terms.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        f
    });
    Ok(Some(LocalStencil { node: idx, region, arms, extra: ext_node }))
}

/// Local stencils at every interior node that has a jump arm.
pub fn build_functionals(geo: &InterfaceGeometry, mu: Viscosity) -> Result<InterfaceFunctionals> {
    let g = *geo.grid();
    let mut slot = vec![NO_SLOT; g.len()];
    let mut stencils = Vec::new();
    for idx in 0..g.len() {
        if !geo.near_interface(idx) {
            continue;
        }
        let (i, j) = g.coords(idx);
        if let Some(s) = build_local_system(geo, mu, i, j)? {
            slot[idx] = stencils.len() as u32;
            stencils.push(s);
        }
    }
    Ok(InterfaceFunctionals { grid: g, slot, stencils })
}

/// How a ghost value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhostRoute {
    /// The node already lies in the requested region.
    Own,
    Horizontal,
    Vertical,
    Diagonal,
}

/// Linear extrapolation along one arm: the interface value sits at `theta`,
/// the same-region neighbour at 1, the ghost at 0.
#[inline]
fn extrapolate(interface: f64, neighbour: f64, theta: f64) -> f64 {
    (interface - theta * neighbour) / (1.0 - theta)
}

fn arm_for(di: isize, dj: isize) -> Arm {
    match (di, dj) {
        (1, 0) => Arm::R,
        (-1, 0) => Arm::L,
        (0, 1) => Arm::T,
        _ => Arm::B,
    }
}

/// Value at node `(i, j)` as seen from region `target`, using neighbours in the
/// quadrant `(sx, sy)` (each `+-1`). Returns `None` when no route is available.
pub fn ghost_value(
    geo: &InterfaceGeometry,
    values: &InterfaceValues,
    u: &NodeField,
    i: usize,
    j: usize,
    target: Region,
    sx: isize,
    sy: isize,
) -> Option<(f64, GhostRoute)> {
    let g = geo.grid();
    let idx = g.index(i, j);
    if geo.region(idx) == target {
        return Some((u[idx], GhostRoute::Own));
    }
    let route = |di: isize, dj: isize| -> Option<(f64, f64)> {
        let (ni, nj) = g.offset(i, j, di, dj)?;
        let nb = g.index(ni, nj);
        let arm = arm_for(di, dj);
        if geo.region(nb) != target || !geo.jump_arm(idx, arm) {
            return None;
        }
        let theta = geo.theta(idx, arm);
        let ui = values.get(idx, arm)?;
        Some((theta, extrapolate(ui, u[nb], theta)))
    };
    let rx = route(sx, 0);
    let ry = route(0, sy);
    match (rx, ry) {
        (Some((tx, vx)), Some((ty, _))) if tx <= ty => return Some((vx, GhostRoute::Horizontal)),
        (Some((_, vx)), None) => return Some((vx, GhostRoute::Horizontal)),
        (_, Some((_, vy))) => return Some((vy, GhostRoute::Vertical)),
        (None, None) => {}
    }
    // diagonal: both axis neighbours are in the ghost's own region
    let (di_, dj_) = g.offset(i, j, sx, sy)?;
    let d = g.index(di_, dj_);
    if geo.region(d) != target {
        return None;
    }
    let (ai, aj) = g.offset(i, j, 0, sy)?;
    let (bi, bj) = g.offset(i, j, sx, 0)?;
    let a = g.index(ai, aj);
    let b = g.index(bi, bj);
    let (arm1, arm2) = (arm_for(sx, 0), arm_for(0, sy));
    if !geo.jump_arm(a, arm1) || !geo.jump_arm(b, arm2) {
        return None;
    }
    let (t1, t2) = (geo.theta(a, arm1), geo.theta(b, arm2));
    let (u1, u2) = (values.get(a, arm1)?, values.get(b, arm2)?);
    let ud = u[d];
    let v = (t1 * t2 - 1.0) / ((1.0 - t1) * (1.0 - t2)) * ud + u1 / (1.0 - t1) + u2 / (1.0 - t2);
    Some((v, GhostRoute::Diagonal))
}

/// Ghost value at node `idx` from any direction: the single-arm route with the
/// smallest crossing fraction, else the first available diagonal route.
pub fn ghost_value_any(
    geo: &InterfaceGeometry,
    values: &InterfaceValues,
    u: &NodeField,
    idx: usize,
    target: Region,
) -> Option<(f64, GhostRoute)> {
    let g = geo.grid();
    if geo.region(idx) == target {
        return Some((u[idx], GhostRoute::Own));
    }
    let (i, j) = g.coords(idx);
    let mut best: Option<(f64, f64, GhostRoute)> = None;
    for arm in Arm::ALL {
        let (di, dj) = arm.offset();
        let Some((ni, nj)) = g.offset(i, j, di, dj) else { continue };
        let nb = g.index(ni, nj);
        if geo.region(nb) != target || !geo.jump_arm(idx, arm) {
            continue;
        }
        let Some(ui) = values.get(idx, arm) else { continue };
        let theta = geo.theta(idx, arm);
        if best.is_none_or(|b| theta < b.0) {
            let route = if arm.is_horizontal() { GhostRoute::Horizontal } else { GhostRoute::Vertical };
            best = Some((theta, extrapolate(ui, u[nb], theta), route));
        }
    }
    if let Some((_, v, r)) = best {
        return Some((v, r));
    }
    [(1, 1), (-1, 1), (1, -1), (-1, -1)]
        .into_iter()
        .find_map(|(sx, sy)| ghost_value(geo, values, u, i, j, target, sx, sy))
}
