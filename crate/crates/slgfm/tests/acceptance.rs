//! Acceptance run: one PASS/FAIL line per criterion, with the measured values.
//!
//! `SLGFM_ACCEPTANCE_QUICK=1` runs the rotation test on 80/160 instead of
//! 160/320. `SLGFM_ACCEPTANCE_STRICT=1` turns any failure into a non-zero
//! exit status; by default failures are reported and the run still succeeds.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slgfm::cases::{CaseId, TestCase};
use slgfm::study::{order, sweep, RunOptions, RunResult};
use slgfm::validate::validate;
use slgfm_core::assemble::{StepOperator, TimeTerm};
use slgfm_core::driver::{LevelSetMode, Method, Simulation, SimulationConfig};
use slgfm_core::extend::{extend_scalar, ExtensionConfig};
use slgfm_core::gfm::{build_functionals, Viscosity};
use slgfm_core::levelset::{compute_geometry, crossing_fraction, Arm};
use slgfm_core::linalg::{gmres, CsrBuilder, CsrMatrix, GmresConfig, Ilu0};
use slgfm_core::problem::{Phases, Problem};
use slgfm_core::semilag::trace_departure;
use slgfm_core::{Grid2D, LevelSetField, NodeField, Region, VectorField};

struct Tally {
    failed: Vec<String>,
}

impl Tally {
    fn report(&mut self, id: &str, what: &str, pass: bool, details: &[String]) {
        println!("{} {id}: {what}", if pass { "PASS" } else { "FAIL" });
        for d in details {
            println!("       {d}");
        }
        if !pass {
            self.failed.push(id.to_string());
        }
    }
}

fn within(e: f64, reference: f64, factor: f64) -> bool {
    e <= factor * reference && e >= reference / factor
}

fn run_sweep(id: CaseId, grids: &[usize], opts: RunOptions) -> Result<Vec<RunResult>, String> {
    sweep(&TestCase::new(id), grids, &opts).map_err(|e| e.to_string())
}

fn errors_u(r: &[RunResult]) -> Vec<f64> {
    r.iter().map(|r| r.errors().u_inf).collect()
}

fn orders(e: &[f64]) -> Vec<f64> {
    e.windows(2).map(|w| order(w[0], w[1], 2.0)).collect()
}

fn fmt(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

fn fmt_orders(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(", ")
}

fn criterion_1(t: &mut Tally) {
    let grids = [40, 80, 160];
    let refs = [1.05e-2, 2.62e-3, 7.02e-4];
    let start = Instant::now();
    let gfm = run_sweep(CaseId::Translation, &grids, RunOptions::default());
    let elapsed = start.elapsed().as_secs_f64();
    let bdf = run_sweep(CaseId::Translation, &grids, RunOptions { method: Method::SlBdf2, ..Default::default() });
    let (gfm, bdf) = match (gfm, bdf) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            let msg = a.err().or(b.err()).unwrap_or_default();
            return t.report("1", "translation convergence", false, &[format!("run failed: {msg}")]);
        }
    };
    let e = errors_u(&gfm);
    let o = orders(&e);
    let eb = errors_u(&bdf);
    let ob = orders(&eb);
    let errs_ok = e.iter().zip(refs).all(|(e, r)| within(*e, r, 3.0));
    let orders_ok = o.iter().all(|&o| o >= 1.7);
    let bdf_ok = ob.iter().all(|&o| (0.7..=1.3).contains(&o));
    let time_ok = elapsed <= 120.0;
    t.report(
        "1",
        "translation: SL-GFM errors within 3x of reference, orders >= 1.7; SL-BDF2 orders in [0.7, 1.3]; <= 120 s",
        errs_ok && orders_ok && bdf_ok && time_ok,
        &[
            format!("SL-GFM errors {} (reference {}) {}", fmt(&e), fmt(&refs), ok(errs_ok)),
            format!("SL-GFM orders {} {}", fmt_orders(&o), ok(orders_ok)),
            format!("SL-BDF2 errors {} orders {} {}", fmt(&eb), fmt_orders(&ob), ok(bdf_ok)),
            format!("SL-GFM wall time {elapsed:.1} s {}", ok(time_ok)),
        ],
    );
}

fn ok(b: bool) -> &'static str {
    if b { "ok" } else { "FAIL" }
}

fn criterion_2(t: &mut Tally) {
    let quick = std::env::var_os("SLGFM_ACCEPTANCE_QUICK").is_some();
    let (grids, min_order, tier) = if quick { ([80, 160], 1.5, "quick tier 80/160") } else { ([160, 320], 1.6, "160/320") };
    let r = match run_sweep(CaseId::Rotation, &grids, RunOptions::default()) {
        Ok(r) => r,
        Err(e) => return t.report("2", "rotation convergence", false, &[format!("run failed: {e}")]),
    };
    let e = errors_u(&r);
    let o = order(e[0], e[1], 2.0);
    let e160 = r.iter().find(|r| r.cells == 160).map(|r| r.errors().u_inf).unwrap();
    let err_ok = within(e160, 2.15e-2, 3.0);
    let order_ok = o >= min_order;
    let fine_time = r[1].runtime_s;
    let time_ok = quick || fine_time <= 900.0;
    t.report(
        "2",
        &format!("rotation ({tier}): order >= {min_order}, error at 160 within 3x of 2.15e-2"),
        err_ok && order_ok && time_ok,
        &[
            format!("errors {} order {o:.2} {}", fmt(&e), ok(order_ok)),
            format!("error at 160: {e160:.3e} {}", ok(err_ok)),
            format!("runtime at {}: {fine_time:.1} s {}", grids[1], ok(time_ok)),
        ],
    );
}

fn criterion_3(t: &mut Tally) {
    let refs = [2.72e-2, 7.93e-3, 2.18e-3];
    let r = match run_sweep(CaseId::Deformation, &[40, 80, 160], RunOptions::default()) {
        Ok(r) => r,
        Err(e) => return t.report("3", "deformation convergence", false, &[format!("run failed: {e}")]),
    };
    let e = errors_u(&r);
    let o = orders(&e);
    let errs_ok = e.iter().zip(refs).all(|(e, r)| within(*e, r, 3.0));
    let orders_ok = o.iter().all(|&o| o >= 1.6);
    t.report(
        "3",
        "deformation: errors within 3x of reference, orders >= 1.6",
        errs_ok && orders_ok,
        &[
            format!("errors {} (reference {}) {}", fmt(&e), fmt(&refs), ok(errs_ok)),
            format!("orders {} {}", fmt_orders(&o), ok(orders_ok)),
        ],
    );
}

fn criterion_4(t: &mut Tally) {
    let grids = [80, 160];
    let mode = |levelset| RunOptions { levelset, ..Default::default() };
    let runs = [LevelSetMode::Raw, LevelSetMode::Extended, LevelSetMode::Exact]
        .map(|m| run_sweep(CaseId::NonlinearTranslation, &grids, mode(m)));
    let [a, b, c] = match runs {
        [Ok(a), Ok(b), Ok(c)] => [a, b, c],
        other => {
            let msg = other.into_iter().find_map(Result::err).unwrap_or_default();
            return t.report("4", "nonlinear translation ablation", false, &[format!("run failed: {msg}")]);
        }
    };
    let (ea, eb, ec) = (errors_u(&a), errors_u(&b), errors_u(&c));
    let ordering_ok = (0..2).all(|i| ec[i] < eb[i] && eb[i] < ea[i]);
    let phi = |r: &[RunResult]| r.iter().map(|r| r.errors().phi_inf.unwrap_or(f64::NAN)).collect::<Vec<_>>();
    let (pa, pb) = (phi(&a), phi(&b));
    let (opa, opb) = (order(pa[0], pa[1], 2.0), order(pb[0], pb[1], 2.0));
    let phi_ok = opb >= 1.7 && opa <= 1.4;
    let refs = [3.19e-3, 9.13e-4];
    let ub_ok = eb.iter().zip(refs).all(|(e, r)| within(*e, r, 3.0));
    t.report(
        "4",
        "nonlinear translation: u(exact phi) < u(extended) < u(raw) at 80 and 160, phi orders, u(extended) within 3x",
        ordering_ok && phi_ok && ub_ok,
        &[
            format!("u raw {} | extended {} | exact phi {} {}", fmt(&ea), fmt(&eb), fmt(&ec), ok(ordering_ok)),
            format!("phi raw {} order {opa:.2} | extended {} order {opb:.2} {}", fmt(&pa), fmt(&pb), ok(phi_ok)),
            format!("u extended vs reference {} {}", fmt(&refs), ok(ub_ok)),
        ],
    );
}

fn criterion_5(t: &mut Tally) {
    let mut details = Vec::new();
    let mut any_valid = false;
    let mut pass = true;
    for id in [CaseId::NonlinearRotation, CaseId::NonlinearRotationCorrected] {
        let v = validate(&TestCase::new(id), 1000, 20240917);
        if !v.passed() {
            let worst = v.checks.iter().filter(|c| !c.passed()).map(|c| format!("{} {:.2e}", c.name, c.worst));
            details.push(format!("variant {id}: data inconsistent ({}), not run", worst.collect::<Vec<_>>().join(", ")));
            continue;
        }
        any_valid = true;
        match run_sweep(id, &[80, 160], RunOptions::default()) {
            Ok(r) => {
                let e = errors_u(&r);
                let p: Vec<f64> = r.iter().map(|r| r.errors().phi_inf.unwrap_or(f64::NAN)).collect();
                let (ou, op) = (order(e[0], e[1], 2.0), order(p[0], p[1], 2.0));
                let good = ou >= 1.5 && op >= 1.5;
                pass &= good;
                details.push(format!(
                    "variant {id}: u {} order {ou:.2}, phi {} order {op:.2} {}",
                    fmt(&e),
                    fmt(&p),
                    ok(good)
                ));
            }
            Err(e) => {
                pass = false;
                details.push(format!("variant {id}: run failed: {e}"));
            }
        }
    }
    if !any_valid {
        details.push("no variant validates; criteria 1-4 carry acceptance".into());
    }
    t.report("5", "nonlinear rotation: u and band phi orders 80 -> 160 >= 1.5 for the consistent variant", pass, &details);
}

fn flat_interface_error(rng: &mut ChaCha8Rng) -> f64 {
    let g = Grid2D::square(-1.0, 1.0, 16).unwrap();
    let xs = g.x(8) + rng.gen_range(0.02..0.98) * g.dx;
    let vertical = rng.gen_bool(0.5);
    let (mu_minus, mu_plus) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
    let slope = rng.gen_range(-3.0..3.0);
    let coord = move |x: f64, y: f64| if vertical { y } else { x };
    let geo = compute_geometry(&LevelSetField::new(NodeField::from_fn(g, |x, y| coord(x, y) - xs), 0.0));
    let funcs = build_functionals(&geo, Viscosity { plus: mu_plus, minus: mu_minus }).unwrap();
    let u = NodeField::from_fn(g, |x, y| {
        let s = coord(x, y);
        if s < xs { s } else { xs + slope * (s - xs) }
    });
    let b = mu_plus * slope - mu_minus;
    let vals = funcs.evaluate(&geo, &u, |_, _| b);
    let mut worst = 0.0f64;
    for k in geo.crossed_nodes() {
        for arm in Arm::ALL {
            if geo.jump_arm(k, arm) {
                if let Some(v) = vals.get(k, arm) {
                    worst = worst.max((v - xs).abs());
                }
            }
        }
    }
    worst
}

/// Worst relative deviation of `theta = 1` coefficients from the five-point
/// values, over rows next to a flat interface and rows away from it.
fn five_point_deviation() -> (f64, usize) {
    let g = Grid2D::new(-1.0, 1.0, -1.0, 2.0, 17, 25).unwrap();
    let geo = compute_geometry(&LevelSetField::new(NodeField::from_fn(g, |x, _| x - 0.137), 0.0));
    let phases = Phases { rho_plus: 1.0, rho_minus: 3.0, mu_plus: 2.0, mu_minus: 0.5 };
    let funcs = build_functionals(&geo, phases.viscosity()).unwrap();
    let dt = 0.05;
    let op = StepOperator { geometry: &geo, functionals: &funcs, phases, dt };
    let zeros = vec![0.0; g.len()];
    let sys = op.assemble(&vec![TimeTerm::Bdf1 { un: 0.0 }; g.len()], &zeros, &zeros, |_, _| 0.0).unwrap();
    let (mut worst, mut rows) = (0.0f64, 0);
    for k in 0..g.len() {
        let (i, j) = g.coords(k);
        if g.is_boundary(i, j) {
            continue;
        }
        let mu = phases.viscosity().of(geo.region(k));
        let rho = phases.rho(geo.region(k));
        let (cx, cy) = (mu / (g.dx * g.dx), mu / (g.dy * g.dy));
        let get = |c: usize| sys.matrix.get(k, c);
        let mut dev = |got: f64, want: f64| worst = worst.max((got - want).abs() / want.abs());
        dev(get(k + g.nx), -cy);
        dev(get(k - g.nx), -cy);
        if !geo.near_interface(k) {
            dev(get(k + 1), -cx);
            dev(get(k - 1), -cx);
            dev(get(k), rho / dt + 2.0 * cx + 2.0 * cy);
        }
        rows += 1;
    }
    (worst, rows)
}

struct Uniform;

impl Problem for Uniform {
    fn phases(&self) -> Phases {
        Phases { rho_plus: 1.0, rho_minus: 1000.0, mu_plus: 0.1, mu_minus: 10.0 }
    }
    fn components(&self) -> usize {
        2
    }
    fn phi(&self, x: f64, y: f64, t: f64) -> f64 {
        (x + 0.8 - 0.6 * t).hypot(y + 0.4 - 0.3 * t) - 0.7
    }
    fn exact(&self, _: Region, c: usize, _: f64, _: f64, _: f64) -> f64 {
        [0.6, 0.3][c]
    }
    fn source(&self, _: Region, _: usize, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn flux_jump(&self, _: usize, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn velocity(&self, _: f64, _: f64, _: f64) -> Option<(f64, f64)> {
        None
    }
}

fn constant_state_drift() -> Result<(f64, usize), String> {
    let g = Grid2D::square(-2.0, 2.0, 40).map_err(|e| e.to_string())?;
    let sim = Simulation::new(&Uniform, SimulationConfig::new(g, 2.0, 0.4)).map_err(|e| e.to_string())?;
    let steps = sim.total_steps();
    let (_, state) = sim.run().map_err(|e| e.to_string())?;
    let drift = state
        .current
        .u
        .iter()
        .enumerate()
        .flat_map(|(c, u)| u.values().iter().map(move |v| (v - [0.6, 0.3][c]).abs()))
        .fold(0.0, f64::max);
    Ok((drift, steps))
}

fn bisect(p: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    let s = p(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid).signum() == s { lo = mid } else { hi = mid }
    }
    0.5 * (lo + hi)
}

fn crossing_deviation(rng: &mut ChaCha8Rng) -> f64 {
    (0..1000)
        .map(|_| {
            let root = rng.gen_range(0.01..0.99);
            let other = if rng.gen_bool(0.5) { rng.gen_range(-50.0..-1.05) } else { rng.gen_range(1.05..50.0) };
            let a = rng.gen_range(0.1..10.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let p = move |s: f64| a * (s - root) * (s - other);
            (crossing_fraction(p(-1.0), p(0.0), p(1.0)).theta - bisect(p)).abs()
        })
        .fold(0.0, f64::max)
}

fn departure_slopes() -> Vec<f64> {
    let g = Grid2D::square(-2.0, 2.0, 8).unwrap();
    let v = VectorField::from_fn(g, |x, y| (-y, x));
    let (i, j) = (6, 5);
    let (x, y) = g.node(i, j);
    let err = |dt: f64| {
        let d = trace_departure(&g, i, j, &v, &v, dt);
        (d.n.x - (x * dt.cos() + y * dt.sin())).hypot(d.n.y - (-x * dt.sin() + y * dt.cos()))
    };
    [0.1, 0.05, 0.025, 0.0125].windows(2).map(|w| (err(w[0]) / err(w[1])).log2()).collect()
}

/// Idempotence ratio and maximum-principle excess for a circle extension.
fn extension_checks() -> (f64, f64) {
    let g = Grid2D::square(-1.0, 1.0, 40).unwrap();
    let geo = compute_geometry(&LevelSetField::new(NodeField::from_fn(g, |x, y| x.hypot(y) - 0.5), 0.0));
    let funcs = build_functionals(&geo, Viscosity { plus: 1.0, minus: 1.0 }).unwrap();
    let u = NodeField::from_fn(g, |x, y| 1.0 + x + 0.5 * y * y);
    let vals = funcs.evaluate(&geo, &u, |_, _| 0.0);
    let cfg = ExtensionConfig { iterations: 600, ..Default::default() };
    let (w1, _) = extend_scalar(&u, &geo, &vals, &cfg).unwrap();
    let (w2, _) = extend_scalar(&w1, &geo, &vals, &cfg).unwrap();
    let in_band = |k: usize| {
        let (i, j) = g.coords(k);
        geo.phi(k).abs() < cfg.band * g.h() && !g.is_boundary(i, j)
    };
    let band: Vec<usize> = (0..g.len()).filter(|&k| in_band(k)).collect();
    let idem = band.iter().map(|&k| (w2[k] - w1[k]).abs()).fold(0.0, f64::max) / w1.max_abs();
    let data = geo
        .crossed_nodes()
        .into_iter()
        .filter_map(|k| vals.node(k))
        .flatten()
        .filter(|v| v.is_finite())
        .chain(band.iter().map(|&k| u[k]));
    let (lo, hi) = data.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let excess = band.iter().map(|&k| (lo - w1[k]).max(w1[k] - hi).max(0.0)).fold(0.0, f64::max);
    (idem, excess)
}

fn dense_solve(a: &CsrMatrix, b: &[f64]) -> Vec<f64> {
    let n = a.n();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            let mut row = vec![0.0; n + 1];
            let (cols, vals) = a.row(r);
            cols.iter().zip(vals).for_each(|(c, v)| row[*c] = *v);
            row[n] = b[r];
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, p);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..=n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        x[r] = (m[r][n] - (r + 1..n).map(|k| m[r][k] * x[k]).sum::<f64>()) / m[r][r];
    }
    x
}

fn gmres_deviation(rng: &mut ChaCha8Rng) -> f64 {
    let (nx, ny) = (10usize, 5usize);
    let n = nx * ny;
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let mut b = CsrBuilder::new(n);
        for k in 0..n {
            let (i, j) = (k % nx, k / nx);
            let mut cols = Vec::new();
            if i > 0 { cols.push(k - 1) }
            if i + 1 < nx { cols.push(k + 1) }
            if j > 0 { cols.push(k - nx) }
            if j + 1 < ny { cols.push(k + nx) }
            if (4..6).contains(&i) && i + 2 < nx && j + 1 < ny {
                cols.push(k + nx + 2);
            }
            let row: Vec<(usize, f64)> = cols.into_iter().map(|c| (c, rng.gen_range(-1.0..1.0))).collect();
            let off: f64 = row.iter().map(|(_, v): &(usize, f64)| v.abs()).sum();
            let diag = off * rng.gen_range(1.1..2.0) + 0.1;
            b.push_row(row.into_iter().chain([(k, diag)]));
        }
        let a = b.finish();
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let ilu = Ilu0::factor(&a).unwrap();
        let cfg = GmresConfig { tol: 1e-14, max_iter: 2000, restart: 10 + trial };
        let x = gmres(&a, &rhs, None, (trial % 2 == 0).then_some(&ilu), &cfg).unwrap().x;
        let oracle = dense_solve(&a, &rhs);
        let scale = oracle.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        worst = worst.max(x.iter().zip(&oracle).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale);
    }
    worst
}

fn criterion_6(t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let flat = (0..50).map(|_| flat_interface_error(&mut rng)).fold(0.0, f64::max);
    t.report("6(a)", "flat-interface piecewise-linear arm values exact to 1e-10", flat <= 1e-10, &[format!("max error {flat:.2e}")]);

    let (dev, rows) = five_point_deviation();
    t.report(
        "6(b)",
        "theta = 1 Shortley-Weller coefficients equal the five-point stencil",
        dev <= 1e-14,
        &[format!("max relative deviation {dev:.2e} over {rows} rows")],
    );

    match constant_state_drift() {
        Ok((drift, steps)) => t.report(
            "6(c)",
            "uniform state preserved over 50 steps to 1e-9",
            drift <= 1e-9 && steps == 50,
            &[format!("{steps} steps, max drift {drift:.2e}")],
        ),
        Err(e) => t.report("6(c)", "uniform state preserved over 50 steps to 1e-9", false, &[e]),
    }

    let cross = crossing_deviation(&mut rng);
    t.report("6(d)", "crossing fraction matches bisection to 1e-12 on 1000 quadratics", cross <= 1e-12, &[format!("max deviation {cross:.2e}")]);

    let slopes = departure_slopes();
    t.report(
        "6(e)",
        "departure point error slope >= 2.7 under dt halving",
        slopes.iter().all(|&s| s >= 2.7),
        &[format!("slopes {}", fmt_orders(&slopes))],
    );

    let (idem, excess) = extension_checks();
    t.report(
        "6(f)",
        "extension idempotent to 1e-8 max|W| and bounded by inputs within 1e-10",
        idem <= 1e-8 && excess <= 1e-10,
        &[format!("idempotence {idem:.2e}, bound excess {excess:.2e}")],
    );

    let g = gmres_deviation(&mut rng);
    t.report("6(g)", "GMRES matches dense elimination to 1e-10 on 50x50 systems", g <= 1e-10, &[format!("max deviation {g:.2e}")]);
}

fn criterion_7(t: &mut Tally) {
    let dir = tempfile::tempdir().expect("temp dir");
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(name);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_slgfm"))
            .args(["sweep", "--test", "1", "--grids", "40,80", "--out"])
            .arg(&out)
            .stdout(std::process::Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("sweep exited with {status}"));
        }
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    match (run("a.csv"), run("b.csv")) {
        (Ok(a), Ok(b)) => t.report(
            "7",
            "two identical sweeps give bitwise-identical CSVs",
            a == b && !a.is_empty(),
            &[format!("{} bytes, {} lines", a.len(), a.iter().filter(|&&c| c == b'\n').count())],
        ),
        (a, b) => t.report("7", "two identical sweeps give bitwise-identical CSVs", false, &[a.err().or(b.err()).unwrap_or_default()]),
    }
}

fn main() -> ExitCode {
    let mut t = Tally { failed: Vec::new() };
    let start = Instant::now();
    criterion_6(&mut t);
    criterion_7(&mut t);
    criterion_1(&mut t);
    criterion_3(&mut t);
    criterion_4(&mut t);
    criterion_5(&mut t);
    criterion_2(&mut t);
    println!("acceptance finished in {:.0} s", start.elapsed().as_secs_f64());
    if t.failed.is_empty() {
        println!("all criteria passed");
        return ExitCode::SUCCESS;
    }
    println!("failed: {}", t.failed.join(", "));
    if std::env::var_os("SLGFM_ACCEPTANCE_STRICT").is_some() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
