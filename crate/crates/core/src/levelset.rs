//! Level-set representation of the interface.
//!
//! `phi > 0` is the plus region, `phi < 0` the minus region. Nodes with
//! `|phi| < 1e-10 h` are nudged to `+1e-10 h` before any sign test so that no
//! node ever sits exactly on the interface.

use alloc::vec;
use alloc::vec::Vec;



// unused only when a dev-dependency enables num-traits/std
#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::{Grid2D, NodeField, VectorField};
use crate::interp;
use crate::semilag;
use crate::Result;

/// Crossed arms closer than this fraction of a cell to either end are snapped.
pub const THETA_MIN: f64 = 1e-3;

/// Relative size of the zero perturbation, in units of `max(dx, dy)`.
pub const ZERO_PERTURBATION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Plus,
    Minus,
}

impl Region {
    /// Region of an already perturbed level-set value.
    #[inline]
    pub fn of(phi: f64) -> Self {
        if phi > 0.0 {
            Region::Plus
        } else {
            Region::Minus
        }
    }

    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Region::Plus => 1.0,
            Region::Minus => -1.0,
        }
    }

    #[inline]
    pub fn opposite(self) -> Self {
        match self {
            Region::Plus => Region::Minus,
            Region::Minus => Region::Plus,
        }
    }
}

#[inline]
pub fn perturb(phi: f64, eps0: f64) -> f64 {
    if phi.abs() < eps0 {
        eps0
    } else {
        phi
    }
}

/// The four grid arms leaving a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    R = 0,
    L = 1,
    T = 2,
    B = 3,
}

impl Arm {
    pub const ALL: [Arm; 4] = [Arm::R, Arm::L, Arm::T, Arm::B];

    #[inline]
    pub fn offset(self) -> (isize, isize) {
        match self {
            Arm::R => (1, 0),
            Arm::L => (-1, 0),
            Arm::T => (0, 1),
            Arm::B => (0, -1),
        }
    }

    #[inline]
    pub fn is_horizontal(self) -> bool {
        matches!(self, Arm::R | Arm::L)
    }

    pub fn name(self) -> &'static str {
        match self {
            Arm::R => "R",
            Arm::L => "L",
            Arm::T => "T",
            Arm::B => "B",
        }
    }
}

/// Sub-cell crossing fraction along one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub theta: f64,
    /// The quadratic root was unusable and the linear root was taken instead.
    pub fallback: bool,
}

/// Fraction of the arm from the centre value `phi_0` towards `phi_p1` at which
/// the level set crosses zero, from the parabola through `(phi_m1, phi_0, phi_p1)`.
///
/// Returns `theta = 1` when the arm is not crossed. Crossed values are clamped
/// to `[THETA_MIN, 1 - THETA_MIN]`.
pub fn crossing_fraction(phi_m1: f64, phi_0: f64, phi_p1: f64) -> Crossing {
    if phi_0 * phi_p1 > 0.0 {
        return Crossing { theta: 1.0, fallback: false };
    }
    let d0 = 0.5 * (phi_p1 - phi_m1);
    let d2 = 0.5 * (phi_p1 - 2.0 * phi_0 + phi_m1);
    let secant = phi_0 / (phi_0 - phi_p1);
    let in_arm = |s: f64| s.is_finite() && s > 0.0 && s < 1.0;

    let eps_q = 1e-12 * (phi_m1.abs() + phi_0.abs() + phi_p1.abs());
    let (theta, fallback) = if d2.abs() < eps_q {
        let linear = -phi_0 / d0;
        if in_arm(linear) {
            (linear, false)
        } else {
            (secant, true)
        }
    } else {
        let disc = d0 * d0 - 4.0 * phi_0 * d2;
        if disc < 0.0 {
            (secant, true)
        } else {
            // Same root as (-d0 - sgn(phi_0) sqrt(disc)) / (2 d2), without the
            // cancellation as d2 -> 0.
            let root = 2.0 * phi_0 / (-d0 + phi_0.signum() * disc.sqrt());
            if in_arm(root) {
                (root, false)
            } else {
                (secant, true)
            }
        }
    };
    Crossing { theta: theta.clamp(THETA_MIN, 1.0 - THETA_MIN), fallback }
}

/// A level-set function at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetField {
    pub phi: NodeField,
    pub time: f64,
}

impl LevelSetField {
    pub fn new(phi: NodeField, time: f64) -> Self {
        Self { phi, time }
    }

    pub fn grid(&self) -> &Grid2D {
        self.phi.grid()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GeometryDiagnostics {
    pub crossed_arms: usize,
    pub quadratic_fallbacks: usize,
    pub double_crossings: usize,
    pub degenerate_normals: usize,
}

/// Crossing fractions, crossing flags and normals at every node for one level set.
#[derive(Debug, Clone)]
pub struct InterfaceGeometry {
    grid: Grid2D,
    phi: Vec<f64>,
    theta: Vec<[f64; 4]>,
    double: Vec<[bool; 4]>,
    normal: Vec<[f64; 2]>,
    degenerate: Vec<bool>,
    pub diagnostics: GeometryDiagnostics,
}

impl InterfaceGeometry {
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Perturbed level-set value at a node.
    #[inline]
    pub fn phi(&self, idx: usize) -> f64 {
        self.phi[idx]
    }

    #[inline]
    pub fn region(&self, idx: usize) -> Region {
        Region::of(self.phi[idx])
    }

    /// Raw crossing fraction along `arm`: in `(0, 1)` when crossed, 1 otherwise.
    #[inline]
    pub fn theta(&self, idx: usize, arm: Arm) -> f64 {
        self.theta[idx][arm as usize]
    }

    #[inline]
    pub fn crossed(&self, idx: usize, arm: Arm) -> bool {
        self.theta[idx][arm as usize] < 1.0
    }

    /// Crossed, but the node two steps along the arm is back in this node's region.
    #[inline]
    pub fn is_double(&self, idx: usize, arm: Arm) -> bool {
        self.double[idx][arm as usize]
    }

    /// Arm length used by the discretization: 2 on double crossings.
    #[inline]
    pub fn effective_theta(&self, idx: usize, arm: Arm) -> f64 {
        if self.is_double(idx, arm) {
            2.0
        } else {
            self.theta(idx, arm)
        }
    }

    /// Crossed with a regular (single) crossing: this arm carries a jump equation.
    #[inline]
    pub fn jump_arm(&self, idx: usize, arm: Arm) -> bool {
        self.crossed(idx, arm) && !self.is_double(idx, arm)
    }

    /// True when any arm of the node deviates from the plain five-point stencil.
    #[inline]
    pub fn near_interface(&self, idx: usize) -> bool {
        Arm::ALL.iter().any(|&a| self.crossed(idx, a))
    }

    pub fn normal(&self, idx: usize) -> [f64; 2] {
        self.normal[idx]
    }

    pub fn is_degenerate(&self, idx: usize) -> bool {
        self.degenerate[idx]
    }

    /// Location of the arm end point (the interface point on crossed arms).
    pub fn arm_point(&self, idx: usize, arm: Arm) -> (f64, f64) {
        let (i, j) = self.grid.coords(idx);
        let (x, y) = self.grid.node(i, j);
        let t = self.effective_theta(idx, arm);
        let (di, dj) = arm.offset();
        (x + di as f64 * t * self.grid.dx, y + dj as f64 * t * self.grid.dy)
    }

    /// Unit normal at the crossing point of `arm`, linearly interpolated between
    /// the two nodal normals of the segment and renormalized.
    pub fn normal_at_arm(&self, idx: usize, arm: Arm) -> [f64; 2] {
        let (i, j) = self.grid.coords(idx);
        let (di, dj) = arm.offset();
        let Some((ni, nj)) = self.grid.offset(i, j, di, dj) else {
            return self.normal[idx];
        };
        let t = self.theta(idx, arm).min(1.0);
        let a = self.normal[idx];
        let b = self.normal[self.grid.index(ni, nj)];
        let nx = (1.0 - t) * a[0] + t * b[0];
        let ny = (1.0 - t) * a[1] + t * b[1];
        let norm = (nx * nx + ny * ny).sqrt();
        if norm > 0.0 {
            [nx / norm, ny / norm]
        } else {
            a
        }
    }

    /// Flat indices of nodes with at least one crossed arm, in ascending order.
    pub fn crossed_nodes(&self) -> Vec<usize> {
        (0..self.grid.len()).filter(|&k| self.near_interface(k)).collect()
    }
}

/// Central difference of `phi` along x at `(i, j)`, one-sided at the boundary.
fn grad_x(phi: &[f64], g: &Grid2D, i: usize, j: usize) -> f64 {
    let at = |ii: usize| phi[g.index(ii, j)];
    if i == 0 {
        (at(1) - at(0)) / g.dx
    } else if i + 1 == g.nx {
        (at(i) - at(i - 1)) / g.dx
    } else {
        (at(i + 1) - at(i - 1)) / (2.0 * g.dx)
    }
}

fn grad_y(phi: &[f64], g: &Grid2D, i: usize, j: usize) -> f64 {
    let at = |jj: usize| phi[g.index(i, jj)];
    if j == 0 {
        (at(1) - at(0)) / g.dy
    } else if j + 1 == g.ny {
        (at(j) - at(j - 1)) / g.dy
    } else {
        (at(j + 1) - at(j - 1)) / (2.0 * g.dy)
    }
}

/// Crossing fractions of all four arms of a node from an (already perturbed) field.
fn node_crossings(phi: &[f64], g: &Grid2D, i: usize, j: usize) -> [Option<Crossing>; 4] {
    let mut out = [None; 4];
    let p0 = phi[g.index(i, j)];
    for arm in Arm::ALL {
        let (di, dj) = arm.offset();
        let Some((ni, nj)) = g.offset(i, j, di, dj) else {
            continue;
        };
        let p1 = phi[g.index(ni, nj)];
        let m1 = match g.offset(i, j, -di, -dj) {
            Some((mi, mj)) => phi[g.index(mi, mj)],
            None => 2.0 * p0 - p1,
        };
        out[arm as usize] = Some(crossing_fraction(m1, p0, p1));
    }
    out
}

/// Fill crossing fractions, double-crossing flags and unit normals for `ls`.
pub fn compute_geometry(ls: &LevelSetField) -> InterfaceGeometry {
    let g = *ls.grid();
    let eps0 = ZERO_PERTURBATION * g.h();
    let phi: Vec<f64> = ls.phi.values().iter().map(|&p| perturb(p, eps0)).collect();
    let n = g.len();
    let mut theta = vec![[1.0; 4]; n];
    let mut double = vec![[false; 4]; n];
    let mut normal = vec![[1.0, 0.0]; n];
    let mut degenerate = vec![false; n];
    let mut diag = GeometryDiagnostics::default();

    for j in 0..g.ny {
        for i in 0..g.nx {
            let idx = g.index(i, j);
            let crossings = node_crossings(&phi, &g, i, j);
            for arm in Arm::ALL {
                let Some(c) = crossings[arm as usize] else { continue };
                if c.theta >= 1.0 {
                    continue;
                }
                theta[idx][arm as usize] = c.theta;
                diag.crossed_arms += 1;
                diag.quadratic_fallbacks += c.fallback as usize;
                let (di, dj) = arm.offset();
                if let Some((fi, fj)) = g.offset(i, j, 2 * di, 2 * dj) {
                    if phi[g.index(fi, fj)] * phi[idx] > 0.0 {
                        double[idx][arm as usize] = true;
                        diag.double_crossings += 1;
                    }
                }
            }
            let gx = grad_x(&phi, &g, i, j);
            let gy = grad_y(&phi, &g, i, j);
            let norm = (gx * gx + gy * gy).sqrt();
            if norm > 0.0 && norm.is_finite() {
                normal[idx] = [gx / norm, gy / norm];
            } else {
                degenerate[idx] = true;
                diag.degenerate_normals += 1;
            }
        }
    }
    InterfaceGeometry { grid: g, phi, theta, double, normal, degenerate, diagnostics: diag }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AdvectionDiagnostics {
    /// Departure points that left the domain and were clamped.
    pub clamped: usize,
    pub second_order: bool,
}

/// Value of `u` at `(x, y)`: quadratic ENO inside the domain, linear
/// extrapolation across the boundary from the clamped point.
pub fn eno_value_extrapolated(u: &NodeField, x: f64, y: f64) -> f64 {
    let g = u.grid();
    let p = g.locate(x, y);
    let mut value = interp::quadratic_eno(u, &p);
    if p.clamped {
        let ((cx, cy), _) = g.clamp(x, y);
        if cx != x {
            let (ia, ib) = if x < cx { (0, 1) } else { (g.nx - 1, g.nx - 2) };
            let a = lerp_column(u, ia, &p);
            let b = lerp_column(u, ib, &p);
            let slope = (a - b) / (g.x(ia) - g.x(ib));
            value += slope * (x - cx);
        }
        if cy != y {
            let (ja, jb) = if y < cy { (0, 1) } else { (g.ny - 1, g.ny - 2) };
            let a = lerp_row(u, ja, &p);
            let b = lerp_row(u, jb, &p);
            let slope = (a - b) / (g.y(ja) - g.y(jb));
            value += slope * (y - cy);
        }
    }
    value
}

fn lerp_column(u: &NodeField, i: usize, p: &crate::grid::CellPoint) -> f64 {
    (1.0 - p.ty) * u.get(i, p.jc) + p.ty * u.get(i, p.jc + 1)
}

fn lerp_row(u: &NodeField, j: usize, p: &crate::grid::CellPoint) -> f64 {
    (1.0 - p.tx) * u.get(p.ic, j) + p.tx * u.get(p.ic + 1, j)
}

/// Semi-Lagrangian level-set update.
///
/// With both history levels present this is the BDF2 form
/// `phi^{n+1} = (4 phi^n(X_d^n) - phi^{n-1}(X_d^{n-1})) / 3`; without `phi_nm1`
/// it falls back to `phi^{n+1} = phi^n(X_d^n)`. A missing `w_nm1` is replaced
/// by `w_n` in the midpoint velocity extrapolation.
pub fn advect_levelset(
    phi_n: &LevelSetField,
    phi_nm1: Option<&LevelSetField>,
    w_n: &VectorField,
    w_nm1: Option<&VectorField>,
    dt: f64,
) -> Result<(LevelSetField, AdvectionDiagnostics)> {
    let g = *phi_n.grid();
    semilag::check_step(w_n, dt)?;
    let w_prev = w_nm1.unwrap_or(w_n);
    let mut out = NodeField::zeros(g);
    let mut diag = AdvectionDiagnostics { clamped: 0, second_order: phi_nm1.is_some() };
    for idx in 0..g.len() {
        let (i, j) = g.coords(idx);
        let dep = semilag::trace_departure(&g, i, j, w_n, w_prev, dt);
        diag.clamped += dep.n.clamped as usize;
        let a = eno_value_extrapolated(&phi_n.phi, dep.n.x, dep.n.y);
        out[idx] = match phi_nm1 {
            Some(prev) => {
                diag.clamped += dep.nm1.clamped as usize;
                let b = eno_value_extrapolated(&prev.phi, dep.nm1.x, dep.nm1.y);
                (4.0 * a - b) / 3.0
            }
            None => a,
        };
    }
    out.check_finite()?;
    Ok((LevelSetField::new(out, phi_n.time + dt), diag))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReinitConfig {
    /// Each sweep visits the grid in all four orderings.
    pub sweeps: usize,
    /// Pseudo-time step as a fraction of the local cell (or sub-cell) size.
    pub cfl: f64,
}

impl Default for ReinitConfig {
    fn default() -> Self {
        Self { sweeps: 5, cfl: 0.45 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReinitReport {
    pub passes: usize,
    /// `max | |grad phi| - 1 |` over band nodes after the last pass.
    pub residual: f64,
}

#[inline]
pub(crate) fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Undivided second difference along one axis at flat index `k`, if the
/// three-point stencil fits on the grid.
#[inline]
pub(crate) fn second_diff(v: &[f64], k: usize, pos: usize, len: usize, stride: usize) -> Option<f64> {
    (pos >= 1 && pos + 1 < len).then(|| v[k + stride] - 2.0 * v[k] + v[k - stride])
}

struct AxisView {
    pos: usize,
    len: usize,
    stride: usize,
    h: f64,
}

/// One-sided ENO differences (backward, forward) along one axis at flat index `k`.
/// `sub` carries sub-cell interface distances (in units of `h`) for arms
/// crossed by the initial level set.
fn one_sided(
    phi: &[f64],
    phi0: &[f64],
    k: usize,
    ax: &AxisView,
    sub: (Option<f64>, Option<f64>),
) -> (Option<f64>, Option<f64>) {
    let h = ax.h;
    let p = phi[k];
    let here = second_diff(phi, k, ax.pos, ax.len, ax.stride);
    let here0 = second_diff(phi0, k, ax.pos, ax.len, ax.stride);

    let back = if ax.pos == 0 {
        None
    } else if let Some(theta) = sub.0 {
        let s = theta * h;
        let prev0 = second_diff(phi0, k - ax.stride, ax.pos - 1, ax.len, ax.stride);
        let curv = match (here0, prev0) {
            (Some(a), Some(b)) => minmod(a, b),
            _ => 0.0,
        };
        Some(p / s + 0.5 * s * curv / (h * h))
    } else {
        let prev = second_diff(phi, k - ax.stride, ax.pos - 1, ax.len, ax.stride);
        let curv = match (here, prev) {
            (Some(a), Some(b)) => minmod(a, b),
            _ => 0.0,
        };
        Some((p - phi[k - ax.stride]) / h + 0.5 * curv / h)
    };

    let fwd = if ax.pos + 1 == ax.len {
        None
    } else if let Some(theta) = sub.1 {
        let s = theta * h;
        let next0 = second_diff(phi0, k + ax.stride, ax.pos + 1, ax.len, ax.stride);
        let curv = match (here0, next0) {
            (Some(a), Some(b)) => minmod(a, b),
            _ => 0.0,
        };
        Some(-p / s - 0.5 * s * curv / (h * h))
    } else {
        let next = second_diff(phi, k + ax.stride, ax.pos + 1, ax.len, ax.stride);
        let curv = match (here, next) {
            (Some(a), Some(b)) => minmod(a, b),
            _ => 0.0,
        };
        Some((phi[k + ax.stride] - p) / h - 0.5 * curv / h)
    };

    match (back, fwd) {
        (Some(b), Some(f)) => (Some(b), Some(f)),
        (Some(b), None) => (Some(b), Some(b)),
        (None, Some(f)) => (Some(f), Some(f)),
        (None, None) => (None, None),
    }
}

/// Godunov Hamiltonian `|grad phi|` for motion in the direction of `sign`.
#[inline]
fn godunov(sign: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    let (gx, gy) = if sign > 0.0 {
        (a.max(0.0).powi(2).max(b.min(0.0).powi(2)), c.max(0.0).powi(2).max(d.min(0.0).powi(2)))
    } else {
        (a.min(0.0).powi(2).max(b.max(0.0).powi(2)), c.min(0.0).powi(2).max(d.max(0.0).powi(2)))
    };
    (gx + gy).sqrt()
}

/// Drive `phi` towards a signed distance function while keeping its zero level set.
///
/// Gauss-Seidel iteration of `phi_t + sgn(phi0) (|grad phi| - 1) = 0` with
/// second-order ENO one-sided differences. Next to the interface the
/// differences use the sub-cell crossing of the input field instead of the
/// neighbour value, so the interface itself does not move.
pub fn reinitialize(ls: &LevelSetField, cfg: &ReinitConfig) -> (LevelSetField, ReinitReport) {
    let g = *ls.grid();
    let eps0 = ZERO_PERTURBATION * g.h();
    let phi0: Vec<f64> = ls.phi.values().iter().map(|&p| perturb(p, eps0)).collect();
    let sign: Vec<f64> = phi0.iter().map(|p| p.signum()).collect();
    let sub: Vec<[Option<f64>; 4]> = (0..g.len())
        .map(|k| {
            let (i, j) = g.coords(k);
            let c = node_crossings(&phi0, &g, i, j);
            let pick = |a: Arm| c[a as usize].filter(|c| c.theta < 1.0).map(|c| c.theta);
            [pick(Arm::R), pick(Arm::L), pick(Arm::T), pick(Arm::B)]
        })
        .collect();
    let mut phi = phi0.clone();

    // (residual, pseudo-time step) at a node for the current iterate
    let eval = |phi: &[f64], i: usize, j: usize| -> Option<(f64, f64)> {
        let k = g.index(i, j);
        let s = &sub[k];
        let ax = AxisView { pos: i, len: g.nx, stride: 1, h: g.dx };
        let ay = AxisView { pos: j, len: g.ny, stride: g.nx, h: g.dy };
        let (a, b) = one_sided(phi, &phi0, k, &ax, (s[1], s[0]));
        let (c, d) = one_sided(phi, &phi0, k, &ay, (s[3], s[2]));
        let (Some(a), Some(b), Some(c), Some(d)) = (a, b, c, d) else {
            return None;
        };
        let hmin = s
            .iter()
            .zip([g.dx, g.dx, g.dy, g.dy])
            .filter_map(|(t, h)| t.map(|t| t * h))
            .fold(g.dx.min(g.dy), f64::min);
        Some((godunov(sign[k], a, b, c, d) - 1.0, cfg.cfl * hmin))
    };
    let update = |phi: &mut [f64], i: usize, j: usize| {
        if let Some((res, step)) = eval(phi, i, j) {
            let k = g.index(i, j);
            phi[k] -= step * sign[k] * res;
        }
    };

    let mut passes = 0;
    for _ in 0..cfg.sweeps {
        for order in 0..4 {
            let rev_i = order == 1 || order == 2;
            let rev_j = order >= 2;
            for jj in 0..g.ny {
                let j = if rev_j { g.ny - 1 - jj } else { jj };
                for ii in 0..g.nx {
                    let i = if rev_i { g.nx - 1 - ii } else { ii };
                    update(&mut phi, i, j);
                }
            }
            passes += 1;
        }
    }

    let band = 3.0 * g.h();
    let mut residual: f64 = 0.0;
    for j in 2..g.ny.saturating_sub(2) {
        for i in 2..g.nx.saturating_sub(2) {
            let k = g.index(i, j);
            if phi[k].abs() < band {
                if let Some((res, _)) = eval(&phi, i, j) {
                    residual = residual.max(res.abs());
                }
            }
        }
    }
    let field = NodeField::from_values(g, phi).expect("same grid");
    (LevelSetField::new(field, ls.time), ReinitReport { passes, residual })
}
