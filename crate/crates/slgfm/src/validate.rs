//! Consistency checks of the closed-form test data against finite differences
//! of the exact solution.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slgfm_core::problem::Problem;
use slgfm_core::Region;

use crate::cases::TestCase;

/// Tolerance on `|u+ - u-|` at interface points.
pub const CONTINUITY_TOL: f64 = 1e-9;
/// Tolerance on the flux jump against differentiated exact data.
pub const FLUX_TOL: f64 = 1e-8;
/// Relative tolerance on the source term against differentiated exact data.
pub const SOURCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub worst: f64,
    pub tol: f64,
    /// Where `worst` was attained: `(x, y, t)`.
    pub at: (f64, f64, f64),
}

impl Check {
    pub fn passed(&self) -> bool {
        self.worst <= self.tol
    }

    fn new(name: &'static str, tol: f64) -> Self {
        Self { name, worst: 0.0, tol, at: (0.0, 0.0, 0.0) }
    }

    fn record(&mut self, e: f64, at: (f64, f64, f64)) {
        if !(e <= self.worst) {
            self.worst = e;
            self.at = at;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub case: TestCase,
    pub checks: Vec<Check>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "test {} ({}): {verdict}", self.case.id, self.case.name())?;
        for c in &self.checks {
            let v = if c.passed() { "ok" } else { "FAIL" };
            write!(f, "  {:<10} max {:.3e} (tol {:.0e}) {v}", c.name, c.worst, c.tol)?;
            if !c.passed() {
                write!(f, " at x={:.4} y={:.4} t={:.4}", c.at.0, c.at.1, c.at.2)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Point on the exact interface along the ray from the case centre.
pub fn interface_point(case: &TestCase, angle: f64, t: f64) -> (f64, f64) {
    let (cx, cy) = case.centre(t);
    let (dx, dy) = (angle.cos(), angle.sin());
    let at = |s: f64| case.phi(cx + s * dx, cy + s * dy, t);
    let (mut lo, mut hi) = (0.0, 0.5);
    while at(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    (cx + s * dx, cy + s * dy)
}

const FD_STEP: f64 = 1e-3;

/// Fourth-order central difference of `f` at 0.
fn d1(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h)
}

fn d2(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (-(f(2.0 * h) + f(-2.0 * h)) + 16.0 * (f(h) + f(-h)) - 30.0 * f(0.0)) / (12.0 * h * h)
}

struct NumJet {
    value: f64,
    dx: f64,
    dy: f64,
    lap: f64,
    dt: f64,
}

fn numerical_jet(case: &TestCase, r: Region, c: usize, x: f64, y: f64, t: f64) -> NumJet {
    let h = FD_STEP;
    let u = |x: f64, y: f64, t: f64| case.exact(r, c, x, y, t);
    NumJet {
        value: u(x, y, t),
        dx: d1(|s| u(x + s, y, t), h),
        dy: d1(|s| u(x, y + s, t), h),
        lap: d2(|s| u(x + s, y, t), h) + d2(|s| u(x, y + s, t), h),
        dt: d1(|s| u(x, y, t + s), h),
    }
}

/// Run every check with `samples` random points, seeded deterministically.
pub fn validate(case: &TestCase, samples: usize, seed: u64) -> Validation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ph = case.phases();
    let t_end = case.final_time();
    let comps = case.components();
    let mut continuity = Check::new("continuity", CONTINUITY_TOL);
    let mut flux = Check::new("flux jump", FLUX_TOL);
    let mut source = Check::new("source", SOURCE_TOL);

    for _ in 0..samples {
        let t = rng.gen_range(0.0..=t_end);
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let (x, y) = interface_point(case, angle, t);
        let (nx, ny) = case.normal(x, y, t);
        for c in 0..comps {
            let plus = case.exact(Region::Plus, c, x, y, t);
            let minus = case.exact(Region::Minus, c, x, y, t);
            continuity.record((plus - minus).abs(), (x, y, t));
            let p = numerical_jet(case, Region::Plus, c, x, y, t);
            let m = numerical_jet(case, Region::Minus, c, x, y, t);
            let b = ph.mu_plus * (p.dx * nx + p.dy * ny) - ph.mu_minus * (m.dx * nx + m.dy * ny);
            flux.record((b - case.flux_jump(c, x, y, t)).abs(), (x, y, t));
        }
    }

    let (lo, hi) = case.domain();
    for _ in 0..samples {
        let t = rng.gen_range(0.0..=t_end);
        let (x, y) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
        let phi = case.phi(x, y, t);
        // keep the difference stencil on one side
        if phi.abs() < 10.0 * FD_STEP {
            continue;
        }
        let r = Region::of(phi);
        let (rho, mu) = (ph.rho(r), ph.viscosity().of(r));
        let jets: Vec<NumJet> = (0..comps).map(|c| numerical_jet(case, r, c, x, y, t)).collect();
        let (vx, vy) = case.velocity(x, y, t).unwrap_or_else(|| (jets[0].value, jets[1].value));
        for (c, j) in jets.iter().enumerate() {
            let f = rho * (j.dt + vx * j.dx + vy * j.dy) - mu * j.lap;
            let got = case.source(r, c, x, y, t);
            source.record((f - got).abs() / f.abs().max(1.0), (x, y, t));
        }
    }
    Validation { case: *case, checks: vec![continuity, flux, source] }
}
