//! Single runs and grid-refinement sweeps of the test problems.

use std::time::Instant;

use slgfm_core::driver::{ErrorReport, LevelSetMode, Method, RunReport, SimulationConfig, Simulation, StepLog, TimeState};
use slgfm_core::Grid2D;

use crate::cases::TestCase;

/// Options shared by every run of a study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub method: Method,
    pub levelset: LevelSetMode,
    /// Overrides the case's `dt / dx` ratio.
    pub dt_factor: Option<f64>,
    /// Overrides the case's final time.
    pub final_time: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { method: Method::SlGfm, levelset: LevelSetMode::Extended, dt_factor: None, final_time: None }
    }
}

impl RunOptions {
    pub fn config(&self, case: &TestCase, cells: usize) -> slgfm_core::Result<SimulationConfig> {
        let (lo, hi) = case.domain();
        let grid = Grid2D::square(lo, hi, cells)?;
        let mut cfg = SimulationConfig::new(
            grid,
            self.final_time.unwrap_or_else(|| case.final_time()),
            self.dt_factor.unwrap_or_else(|| case.dt_factor()),
        );
        cfg.method = self.method;
        cfg.levelset = self.levelset;
        Ok(cfg)
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub cells: usize,
    pub report: RunReport,
    pub final_state: TimeState,
    pub runtime_s: f64,
}

impl RunResult {
    pub fn errors(&self) -> &ErrorReport {
        &self.report.errors
    }
}

/// Run `case` on a grid of `cells` x `cells` cells.
pub fn run_case(
    case: &TestCase,
    cells: usize,
    opts: &RunOptions,
    on_step: impl FnMut(&StepLog),
) -> slgfm_core::Result<RunResult> {
    let cfg = opts.config(case, cells)?;
    let start = Instant::now();
    let sim = Simulation::new(case, cfg)?;
    let (report, final_state) = sim.run_with(on_step)?;
    Ok(RunResult { cells, report, final_state, runtime_s: start.elapsed().as_secs_f64() })
}

/// Observed order between two successive resolutions.
pub fn order(e_coarse: f64, e_fine: f64, ratio: f64) -> f64 {
    (e_coarse / e_fine).ln() / ratio.ln()
}

/// One line of a refinement table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub cells: usize,
    pub error_u: f64,
    pub order_u: Option<f64>,
    pub error_phi: Option<f64>,
    pub order_phi: Option<f64>,
    pub runtime_s: f64,
    pub gmres_iters_mean: f64,
}

/// Rows of a sweep in the order of `results`, with orders against the previous row.
pub fn sweep_rows(results: &[RunResult]) -> Vec<SweepRow> {
    let mut rows: Vec<SweepRow> = Vec::with_capacity(results.len());
    for r in results {
        let e = r.errors();
        let prev = rows.last();
        let ratio = prev.map(|p| r.cells as f64 / p.cells as f64);
        let order_u = prev.zip(ratio).map(|(p, q)| order(p.error_u, e.u_inf, q));
        let order_phi = match (prev.and_then(|p| p.error_phi), e.phi_inf, ratio) {
            (Some(a), Some(b), Some(q)) => Some(order(a, b, q)),
            _ => None,
        };
        rows.push(SweepRow {
            cells: r.cells,
            error_u: e.u_inf,
            order_u,
            error_phi: e.phi_inf,
            order_phi,
            runtime_s: r.runtime_s,
            gmres_iters_mean: r.report.gmres_iters_mean(),
        });
    }
    rows
}

/// Run `case` at every resolution, each on its own thread. Results come back
/// in the order of `grids`; the first failure in that order is returned.
pub fn sweep(case: &TestCase, grids: &[usize], opts: &RunOptions) -> slgfm_core::Result<Vec<RunResult>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = grids.iter().map(|&n| s.spawn(move || run_case(case, n, opts, |_| {}))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    })
}
