//! Implicit step assembly.
//!
//! Interior rows discretize `rho (a u - beta) - mu Lap u = f`, where
//! `(a, beta)` comes from the BDF1 or BDF2 time term at the node. Away from
//! the interface the Laplacian is the five-point stencil; next to it the
//! Shortley-Weller stencil with the arm values replaced by their GFM
//! functionals. Boundary rows impose the Dirichlet data.

use alloc::vec::Vec;

use crate::gfm::{ghost_value_any, InterfaceFunctionals, InterfaceValues};
use crate::grid::NodeField;
use crate::levelset::{Arm, InterfaceGeometry};
use crate::linalg::{CsrBuilder, CsrMatrix};
use crate::problem::Phases;
use crate::Result;

/// Time discretization at one node, holding the values carried from history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeTerm {
    Bdf1 { un: f64 },
    Bdf2 { un: f64, unm1: f64 },
}

impl TimeTerm {
    /// `(a, beta)` with `u_t ~ a u^{n+1} - beta`.
    #[inline]
    pub fn coefficients(self, dt: f64) -> (f64, f64) {
        match self {
            TimeTerm::Bdf1 { un } => (1.0 / dt, un / dt),
            TimeTerm::Bdf2 { un, unm1 } => (1.5 / dt, (4.0 * un - unm1) / (2.0 * dt)),
        }
    }

    pub fn is_bdf2(self) -> bool {
        matches!(self, TimeTerm::Bdf2 { .. })
    }
}

#[derive(Debug, Clone)]
pub struct SparseLinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
}

/// Geometry and coefficients shared by every component of one step.
#[derive(Debug, Clone, Copy)]
pub struct StepOperator<'a> {
    pub geometry: &'a InterfaceGeometry,
    pub functionals: &'a InterfaceFunctionals,
    pub phases: Phases,
    pub dt: f64,
}

impl StepOperator<'_> {
    /// Off-time part of an interior row: the entries of `-Lap` scaled by `mu`
    /// and the constant moved to the right-hand side.
    fn laplacian(&self, k: usize, force_sw: bool, jump: &mut impl FnMut(f64, f64) -> f64, out: &mut Vec<(usize, f64)>) -> f64 {
        let geo = self.geometry;
        let g = geo.grid();
        let mu = self.phases.viscosity().of(geo.region(k));
        let (i, j) = g.coords(k);
        if !force_sw && !geo.near_interface(k) {
            let (cx, cy) = (mu / (g.dx * g.dx), mu / (g.dy * g.dy));
            // diagonal accumulated arm by arm in the Shortley-Weller order
            for (n, c) in [(k + 1, cx), (k - 1, cx), (k + g.nx, cy), (k - g.nx, cy)] {
                out.push((k, c));
                out.push((n, -c));
            }
            return 0.0;
        }
        let stencil = self.functionals.get(k);
        let b = stencil.map(|_| InterfaceFunctionals::jump_data(geo, k, jump)).unwrap_or_default();
        let mut constant = 0.0;
        for (hi, lo, h) in [(Arm::R, Arm::L, g.dx), (Arm::T, Arm::B, g.dy)] {
            let (th, tl) = (geo.effective_theta(k, hi), geo.effective_theta(k, lo));
            let scale = 2.0 * mu / ((th + tl) * h * h);
            for (arm, t) in [(hi, th), (lo, tl)] {
                let c = scale / t;
                out.push((k, c));
                match stencil {
                    Some(s) => {
                        let f = s.arm(arm);
                        for &(n, w) in &f.terms {
                            out.push((n, -c * w));
                        }
                        constant += c * f.jump.iter().zip(&b).map(|(w, v)| w * v).sum::<f64>();
                    }
                    None => {
                        let (di, dj) = arm.offset();
                        let steps = if geo.is_double(k, arm) { 2 } else { 1 };
                        let (ni, nj) = g.offset(i, j, di * steps, dj * steps).expect("interior node");
                        out.push((g.index(ni, nj), -c));
                    }
                }
            }
        }
        constant
    }

    /// Assemble the system for one component.
    ///
    /// `time`, `source` and `boundary` are indexed by node; `source` is read at
    /// interior nodes and `boundary` at boundary nodes. `jump(x, y)` is the flux
    /// jump of this component at time `t^{n+1}`.
    pub fn assemble(
        &self,
        time: &[TimeTerm],
        source: &[f64],
        boundary: &[f64],
        mut jump: impl FnMut(f64, f64) -> f64,
    ) -> Result<SparseLinearSystem> {
        let geo = self.geometry;
        let g = *geo.grid();
        let mut builder = CsrBuilder::new(g.len());
        let mut rhs = Vec::with_capacity(g.len());
        let mut row = Vec::with_capacity(32);
        for k in 0..g.len() {
            let (i, j) = g.coords(k);
            if g.is_boundary(i, j) {
                builder.push_row([(k, 1.0)]);
                rhs.push(boundary[k]);
                continue;
            }
            row.clear();
            let rho = self.phases.rho(geo.region(k));
            let (a, beta) = time[k].coefficients(self.dt);
            row.push((k, rho * a));
            let c = self.laplacian(k, false, &mut jump, &mut row);
            builder.push_row(row.iter().copied());
            rhs.push(rho * beta + source[k] + c);
        }
        let matrix = builder.finish();
        matrix.check_diagonal()?;
        Ok(SparseLinearSystem { matrix, rhs })
    }
}

/// Time terms for a parabolic step, where history values are read at the node
/// itself. A node that changed region since level `n` takes a ghost value of
/// the new region and drops to BDF1; a region change since `n-1` alone also
/// drops to BDF1.
pub fn parabolic_time_terms(
    geo_np1: &InterfaceGeometry,
    geo_n: &InterfaceGeometry,
    values_n: &InterfaceValues,
    u_n: &NodeField,
    prev: Option<(&InterfaceGeometry, &NodeField)>,
) -> Vec<TimeTerm> {
    (0..u_n.values().len())
        .map(|k| {
            let s = geo_np1.region(k);
            if geo_n.region(k) != s {
                let un = ghost_value_any(geo_n, values_n, u_n, k, s).map_or(u_n[k], |v| v.0);
                return TimeTerm::Bdf1 { un };
            }
            match prev {
                Some((geo_nm1, u_nm1)) if geo_nm1.region(k) == s => TimeTerm::Bdf2 { un: u_n[k], unm1: u_nm1[k] },
                _ => TimeTerm::Bdf1 { un: u_n[k] },
            }
        })
        .collect()
}
