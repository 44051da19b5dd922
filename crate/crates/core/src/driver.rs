//! Time stepping.
//!
//! One step from `t^n` to `t^{n+1}`:
//! 1. advance the level set (extended velocity, raw velocity or exact),
//!    reinitialize, and rebuild the interface geometry and local GFM stencils;
//! 2. trace departure points and interpolate `u^n`, `u^{n-1}` there, choosing
//!    BDF2 or BDF1 per node;
//! 3. assemble and solve one implicit system per component;
//! 4. evaluate the numerical interface values for the next step.

use alloc::vec;
use alloc::vec::Vec;



// unused only when a dev-dependency enables num-traits/std
#[allow(unused_imports)]
use num_traits::Float;

use crate::assemble::{parabolic_time_terms, SparseLinearSystem, StepOperator, TimeTerm};
use crate::extend::{extend_velocity, ExtensionConfig};
use crate::gfm::{build_functionals, InterfaceFunctionals, InterfaceValues};
use crate::grid::{Grid2D, NodeField, VectorField};
use crate::interp;
use crate::levelset::{advect_levelset, compute_geometry, reinitialize, InterfaceGeometry, LevelSetField, ReinitConfig, Region};
use crate::linalg::{gmres, GmresConfig, Ilu0};
use crate::problem::Problem;
use crate::semilag::{self, classify, interpolate, DeparturePoint, InterpolationClass};
use crate::{Error, Result};

/// How values at departure points are interpolated and which nodes use BDF2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Region-aware interpolation with ghost values; BDF2 only where both
    /// departure points are regular.
    SlGfm,
    /// Quadratic ENO everywhere, ignoring the interface; BDF2 everywhere.
    SlBdf2,
}

/// How the level set is advanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelSetMode {
    /// Advected with the normally extended velocity.
    Extended,
    /// Advected with the raw velocity field.
    Raw,
    /// Sampled from the exact level set at every step.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub grid: Grid2D,
    pub final_time: f64,
    /// Nominal `dt = dt_factor * h`, adjusted so that whole steps reach the final time.
    pub dt_factor: f64,
    pub method: Method,
    pub levelset: LevelSetMode,
    /// Drop the advection of `u`: history is read at the node itself.
    pub parabolic: bool,
    /// Start BDF2 on the first step from exact data at `t = -dt`.
    pub exact_history: bool,
    pub extension: ExtensionConfig,
    pub reinit: ReinitConfig,
    pub gmres: GmresConfig,
    pub preconditioner: bool,
    /// Keep the linear systems of the latest step in [`TimeState::systems`].
    pub keep_systems: bool,
}

impl SimulationConfig {
    pub fn new(grid: Grid2D, final_time: f64, dt_factor: f64) -> Self {
        Self {
            grid,
            final_time,
            dt_factor,
            method: Method::SlGfm,
            levelset: LevelSetMode::Extended,
            parabolic: false,
            exact_history: false,
            extension: ExtensionConfig::default(),
            reinit: ReinitConfig::default(),
            gmres: GmresConfig::default(),
            preconditioner: true,
            keep_systems: false,
        }
    }

    /// Number of steps and the uniform step size.
    pub fn steps(&self) -> Result<(usize, f64)> {
        let nominal = self.dt_factor * self.grid.h();
        if !(nominal > 0.0) || !(self.final_time >= 0.0) || !nominal.is_finite() || !self.final_time.is_finite() {
            return Err(Error::Config(alloc::format!(
                "need a non-negative final time and a positive step, got T={} dt={}",
                self.final_time,
                nominal
            )));
        }
        if self.final_time == 0.0 {
            return Ok((0, nominal));
        }
        let n = (self.final_time / nominal - 1e-9).ceil().max(1.0) as usize;
        Ok((n, self.final_time / n as f64))
    }
}

/// One time level.
#[derive(Debug, Clone)]
pub struct Level {
    pub time: f64,
    pub u: Vec<NodeField>,
    pub phi: LevelSetField,
    pub geometry: InterfaceGeometry,
    pub functionals: InterfaceFunctionals,
    pub values: Vec<InterfaceValues>,
    /// Velocity used to advect the level set from this level.
    pub w: Option<VectorField>,
}

#[derive(Debug, Clone)]
pub struct TimeState {
    pub current: Level,
    pub previous: Option<Level>,
    pub step: usize,
    /// One system per component from the latest step, when requested.
    pub systems: Vec<SparseLinearSystem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassCounts {
    pub regular: usize,
    pub irregular: usize,
    pub fallback: usize,
}

impl ClassCounts {
    fn add(&mut self, c: InterpolationClass) {
        match c {
            InterpolationClass::Regular => self.regular += 1,
            InterpolationClass::IrregularGhost => self.irregular += 1,
            InterpolationClass::OppositeRegionFallback => self.fallback += 1,
        }
    }

    fn merge(&mut self, o: &ClassCounts) {
        self.regular += o.regular;
        self.irregular += o.irregular;
        self.fallback += o.fallback;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepLog {
    pub step: usize,
    pub time: f64,
    /// GMRES iterations summed over components.
    pub gmres_iterations: usize,
    /// Largest final relative residual over components.
    pub residual: f64,
    /// Interpolation classes at level `n` departure points (interior nodes).
    pub classes: ClassCounts,
    pub bdf2_nodes: usize,
    pub interface_nodes: usize,
    pub reduced_fits: usize,
    pub extension_change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// Max nodal error of `u` over all components, with the exact solution
    /// taken from the phase given by the sign of the exact level set.
    pub u_inf: f64,
    /// Same, with the phase given by the sign of the numerical level set.
    pub u_inf_numerical_phase: f64,
    /// Max level-set error in the band `|phi| < 3h`, when the exact level set
    /// is a distance function and the level set is computed.
    pub phi_inf: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub steps: usize,
    pub dt: f64,
    pub errors: ErrorReport,
    pub logs: Vec<StepLog>,
    pub classes: ClassCounts,
}

impl RunReport {
    pub fn gmres_iters_mean(&self) -> f64 {
        if self.logs.is_empty() {
            return 0.0;
        }
        self.logs.iter().map(|l| l.gmres_iterations as f64).sum::<f64>() / self.logs.len() as f64
    }
}

pub struct Simulation<'p, P: Problem + ?Sized> {
    problem: &'p P,
    cfg: SimulationConfig,
    dt: f64,
    n_steps: usize,
    state: TimeState,
}

fn sample_levelset<P: Problem + ?Sized>(p: &P, cfg: &SimulationConfig, t: f64) -> Result<LevelSetField> {
    let phi = NodeField::sample(cfg.grid, t, |x, y, t| p.phi(x, y, t))?;
    let ls = LevelSetField::new(phi, t);
    Ok(match cfg.levelset {
        LevelSetMode::Exact => ls,
        _ => reinitialize(&ls, &cfg.reinit).0,
    })
}

fn exact_level<P: Problem + ?Sized>(p: &P, cfg: &SimulationConfig, t: f64) -> Result<Level> {
    let phi = sample_levelset(p, cfg, t)?;
    let geometry = compute_geometry(&phi);
    let g = cfg.grid;
    let u: Vec<NodeField> = (0..p.components())
        .map(|c| {
            let mut f = NodeField::zeros(g);
            for k in 0..g.len() {
                let (i, j) = g.coords(k);
                let (x, y) = g.node(i, j);
                f[k] = p.exact(geometry.region(k), c, x, y, t);
            }
            f.check_finite().map(|_| f)
        })
        .collect::<Result<_>>()?;
    let functionals = build_functionals(&geometry, p.phases().viscosity())?;
    let values = (0..p.components())
        .map(|c| functionals.evaluate(&geometry, &u[c], |x, y| p.flux_jump(c, x, y, t)))
        .collect();
    Ok(Level { time: t, u, phi, geometry, functionals, values, w: None })
}

fn velocity_field<P: Problem + ?Sized>(p: &P, g: Grid2D, t: f64) -> Option<VectorField> {
    p.velocity(g.x_min, g.y_min, t)?;
    Some(VectorField::from_fn(g, |x, y| p.velocity(x, y, t).unwrap_or((0.0, 0.0))))
}

impl<'p, P: Problem + ?Sized> Simulation<'p, P> {
    pub fn new(problem: &'p P, cfg: SimulationConfig) -> Result<Self> {
        let (n_steps, dt) = cfg.steps()?;
        let self_advected = problem.velocity(cfg.grid.x_min, cfg.grid.y_min, 0.0).is_none();
        if self_advected && problem.components() != 2 {
            return Err(Error::Config("a self-advected problem needs two components".into()));
        }
        let mut current = exact_level(problem, &cfg, 0.0)?;
        let previous = if cfg.exact_history {
            let mut prev = exact_level(problem, &cfg, -dt)?;
            if self_advected && !cfg.parabolic {
                prev.w = Some(Self::levelset_velocity_of(&cfg, &prev)?.0);
            }
            Some(prev)
        } else {
            None
        };
        current.w = None;
        Ok(Self { problem, cfg, dt, n_steps, state: TimeState { current, previous, step: 0, systems: Vec::new() } })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn total_steps(&self) -> usize {
        self.n_steps
    }

    pub fn state(&self) -> &TimeState {
        &self.state
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.cfg
    }

    pub fn is_finished(&self) -> bool {
        self.state.step >= self.n_steps
    }

    fn self_advected(&self) -> bool {
        self.problem.velocity(self.cfg.grid.x_min, self.cfg.grid.y_min, 0.0).is_none()
    }

    /// Velocity carrying the level set of a self-advected level.
    fn levelset_velocity_of(cfg: &SimulationConfig, level: &Level) -> Result<(VectorField, Option<f64>)> {
        let v = VectorField { x: level.u[0].clone(), y: level.u[1].clone() };
        match cfg.levelset {
            LevelSetMode::Extended => {
                let (w, rep) = extend_velocity(&v, &level.geometry, [&level.values[0], &level.values[1]], &cfg.extension)?;
                Ok((w, Some(rep.last_change)))
            }
            _ => Ok((v, None)),
        }
    }

    fn time_at(&self, step: usize) -> f64 {
        if step >= self.n_steps {
            self.cfg.final_time
        } else {
            step as f64 * self.dt
        }
    }

    /// Advance one step.
    pub fn step(&mut self) -> Result<StepLog> {
        let p = self.problem;
        let cfg = &self.cfg;
        let g = cfg.grid;
        let dt = self.dt;
        let n = self.state.step;
        let t_n = self.state.current.time;
        let t_np1 = self.time_at(n + 1);
        let self_adv = self.self_advected();
        let cur = &self.state.current;
        let prev = self.state.previous.as_ref();

        // transport velocity of u and of the interface at levels n, n-1
        let (v_n, v_nm1) = if self_adv {
            let vn = VectorField { x: cur.u[0].clone(), y: cur.u[1].clone() };
            let vp = prev.map(|l| VectorField { x: l.u[0].clone(), y: l.u[1].clone() });
            (vn, vp)
        } else {
            let vn = velocity_field(p, g, t_n).expect("prescribed velocity");
            (vn, velocity_field(p, g, t_n - dt))
        };

        let mut extension_change = None;
        let mut w_used = None;
        let phi = match cfg.levelset {
            LevelSetMode::Exact => LevelSetField::new(NodeField::sample(g, t_np1, |x, y, t| p.phi(x, y, t))?, t_np1),
            _ => {
                let (w_n, w_nm1) = if self_adv {
                    let (w, change) = Self::levelset_velocity_of(cfg, cur)?;
                    extension_change = change;
                    (w, prev.and_then(|l| l.w.clone()))
                } else {
                    (v_n.clone(), v_nm1.clone())
                };
                let phi_prev = prev.map(|l| &l.phi);
                let (adv, _) = advect_levelset(&cur.phi, phi_prev, &w_n, w_nm1.as_ref(), dt)?;
                w_used = Some(w_n);
                let mut ls = reinitialize(&adv, &cfg.reinit).0;
                ls.time = t_np1;
                ls
            }
        };
        let geometry = compute_geometry(&phi);
        let phases = p.phases();
        let functionals = build_functionals(&geometry, phases.viscosity())?;
        let comps = p.components();

        // time terms per component
        let mut classes = ClassCounts::default();
        let time_terms: Vec<Vec<TimeTerm>> = if cfg.parabolic {
            let history = prev.map(|l| (&l.geometry, l));
            (0..comps)
                .map(|c| {
                    parabolic_time_terms(
                        &geometry,
                        &cur.geometry,
                        &cur.values[c],
                        &cur.u[c],
                        history.map(|(geo, l)| (geo, &l.u[c])),
                    )
                })
                .collect()
        } else {
            semilag::check_step(&v_n, dt)?;
            let v_prev = v_nm1.as_ref().unwrap_or(&v_n);
            let mut terms = vec![vec![TimeTerm::Bdf1 { un: 0.0 }; g.len()]; comps];
            for k in 0..g.len() {
                let (i, j) = g.coords(k);
                if g.is_boundary(i, j) {
                    continue;
                }
                let region = geometry.region(k);
                let dep = semilag::trace_departure(&g, i, j, &v_n, v_prev, dt);
                let dp_n = DeparturePoint::new(&g, (i, j), dep.n, region);
                let dp_nm1 = DeparturePoint::new(&g, (i, j), dep.nm1, region);
                match cfg.method {
                    Method::SlGfm => {
                        let class_n = classify(&dp_n, &cur.geometry);
                        let class_nm1 = prev.map(|l| classify(&dp_nm1, &l.geometry));
                        for c in 0..comps {
                            let (un, used_n) = interpolate(&dp_n, class_n, &cur.u[c], &cur.geometry, &cur.values[c]);
                            if c == 0 {
                                classes.add(used_n);
                            }
                            terms[c][k] = match (prev, class_nm1) {
                                (Some(l), Some(cls)) if used_n == InterpolationClass::Regular && cls == InterpolationClass::Regular => {
                                    let (unm1, _) = interpolate(&dp_nm1, cls, &l.u[c], &l.geometry, &l.values[c]);
                                    TimeTerm::Bdf2 { un, unm1 }
                                }
                                _ => TimeTerm::Bdf1 { un },
                            };
                        }
                    }
                    Method::SlBdf2 => {
                        for c in 0..comps {
                            let un = interp::quadratic_eno(&cur.u[c], &dp_n.cell);
                            if c == 0 {
                                classes.add(InterpolationClass::Regular);
                            }
                            terms[c][k] = match prev {
                                Some(l) => TimeTerm::Bdf2 { un, unm1: interp::quadratic_eno(&l.u[c], &dp_nm1.cell) },
                                None => TimeTerm::Bdf1 { un },
                            };
                        }
                    }
                }
            }
            terms
        };
        let bdf2_nodes = time_terms[0].iter().enumerate().filter(|(k, t)| {
            let (i, j) = g.coords(*k);
            !g.is_boundary(i, j) && t.is_bdf2()
        });
        let bdf2_nodes = bdf2_nodes.count();

        // implicit solves
        let op = StepOperator { geometry: &geometry, functionals: &functionals, phases, dt };
        let mut u_new = Vec::with_capacity(comps);
        let mut values = Vec::with_capacity(comps);
        let (mut iters, mut residual) = (0usize, 0.0f64);
        let mut systems = Vec::new();
        for c in 0..comps {
            let mut source = vec![0.0; g.len()];
            let mut boundary = vec![0.0; g.len()];
            for k in 0..g.len() {
                let (i, j) = g.coords(k);
                let (x, y) = g.node(i, j);
                if g.is_boundary(i, j) {
                    boundary[k] = p.boundary(c, x, y, t_np1);
                } else {
                    source[k] = p.source(geometry.region(k), c, x, y, t_np1);
                }
            }
            let jump = |x: f64, y: f64| p.flux_jump(c, x, y, t_np1);
            let sys = op.assemble(&time_terms[c], &source, &boundary, jump)?;
            let ilu = if cfg.preconditioner { Some(Ilu0::factor(&sys.matrix)?) } else { None };
            let out = gmres(&sys.matrix, &sys.rhs, Some(cur.u[c].values()), ilu.as_ref(), &cfg.gmres)?;
            iters += out.iterations;
            residual = residual.max(out.residual);
            let field = NodeField::from_values(g, out.x)?;
            field.check_finite().map_err(|_| Error::Diverged { step: n + 1 })?;
            values.push(functionals.evaluate(&geometry, &field, jump));
            u_new.push(field);
            if cfg.keep_systems {
                systems.push(sys);
            }
        }

        let log = StepLog {
            step: n + 1,
            time: t_np1,
            gmres_iterations: iters,
            residual,
            classes,
            bdf2_nodes,
            interface_nodes: functionals.stencils().len(),
            reduced_fits: functionals.reduced_count(),
            extension_change,
        };
        self.state.current.w = w_used;
        let next = Level { time: t_np1, u: u_new, phi, geometry, functionals, values, w: None };
        let old = core::mem::replace(&mut self.state.current, next);
        self.state.previous = Some(old);
        self.state.step = n + 1;
        self.state.systems = systems;
        Ok(log)
    }

    /// Run to the final time, calling `on_step` after every step.
    pub fn run_with(mut self, mut on_step: impl FnMut(&StepLog)) -> Result<(RunReport, TimeState)> {
        let mut logs = Vec::with_capacity(self.n_steps);
        let mut classes = ClassCounts::default();
        while !self.is_finished() {
            let log = self.step()?;
            on_step(&log);
            classes.merge(&log.classes);
            logs.push(log);
        }
        let errors = self.errors();
        Ok((RunReport { steps: self.n_steps, dt: self.dt, errors, logs, classes }, self.state))
    }

    pub fn run(self) -> Result<(RunReport, TimeState)> {
        self.run_with(|_| {})
    }

    /// Errors of the current level against the exact solution.
    pub fn errors(&self) -> ErrorReport {
        let p = self.problem;
        let g = self.cfg.grid;
        let lvl = &self.state.current;
        let t = lvl.time;
        let mut u_inf = 0.0f64;
        let mut u_inf_num = 0.0f64;
        let mut phi_inf = 0.0f64;
        let band = 3.0 * g.h();
        for k in 0..g.len() {
            let (i, j) = g.coords(k);
            let (x, y) = g.node(i, j);
            let phi_ex = p.phi(x, y, t);
            let r = Region::of(phi_ex);
            let rn = lvl.geometry.region(k);
            for c in 0..p.components() {
                u_inf = u_inf.max((lvl.u[c][k] - p.exact(r, c, x, y, t)).abs());
                u_inf_num = u_inf_num.max((lvl.u[c][k] - p.exact(rn, c, x, y, t)).abs());
            }
            if phi_ex.abs() < band {
                phi_inf = phi_inf.max((lvl.phi.phi[k] - phi_ex).abs());
            }
        }
        let phi_inf = (self.cfg.levelset != LevelSetMode::Exact && p.phi_is_distance()).then_some(phi_inf);
        ErrorReport { u_inf, u_inf_numerical_phase: u_inf_num, phi_inf }
    }
}
