//! Property tests of the building blocks against independent oracles.

use proptest::prelude::*;
use slgfm_core::assemble::{StepOperator, TimeTerm};
use slgfm_core::extend::{extend_scalar, ExtensionConfig};
use slgfm_core::gfm::{build_functionals, Viscosity};
use slgfm_core::levelset::{compute_geometry, crossing_fraction, Arm};
use slgfm_core::linalg::{gmres, CsrBuilder, CsrMatrix, GmresConfig, Ilu0};
use slgfm_core::problem::Phases;
use slgfm_core::semilag::trace_departure;
use slgfm_core::{Grid2D, LevelSetField, NodeField, VectorField};

/// Root of `p` in `(lo, hi)` by bisection; `p(lo)` and `p(hi)` differ in sign.
fn bisect(p: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let s_lo = p(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid).signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Gaussian elimination with partial pivoting on a dense copy.
fn dense_solve(a: &CsrMatrix, b: &[f64]) -> Vec<f64> {
    let n = a.n();
    let mut m = vec![vec![0.0; n + 1]; n];
    for (r, row) in m.iter_mut().enumerate() {
        let (cols, vals) = a.row(r);
        for (c, v) in cols.iter().zip(vals) {
            row[*c] = *v;
        }
        row[n] = b[r];
    }
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
        let s: f64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn crossing_fraction_matches_bisection(
        root in 0.01f64..0.99,
        other in prop_oneof![-50.0f64..-1.05, 1.05f64..50.0],
        scale in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
    ) {
        // parabola through the three nodes with exactly one root on the arm
        let p = |s: f64| scale * (s - root) * (s - other);
        let c = crossing_fraction(p(-1.0), p(0.0), p(1.0));
        let oracle = bisect(p, 0.0, 1.0);
        prop_assert!(!c.fallback);
        prop_assert!((c.theta - oracle).abs() <= 1e-12, "theta {} oracle {}", c.theta, oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Piecewise-linear data across a flat interface: the arm values are the
    /// exact interface value for any viscosities and any admissible slopes.
    #[test]
    fn flat_interface_arm_values_are_exact(
        frac in 0.02f64..0.98,
        mu_minus in 0.1f64..10.0,
        mu_plus in 0.1f64..10.0,
        slope_plus in -3.0f64..3.0,
        vertical in any::<bool>(),
    ) {
        let g = Grid2D::square(-1.0, 1.0, 16).unwrap();
        let xs = g.x(8) + frac * g.dx;
        let coord = |x: f64, y: f64| if vertical { y } else { x };
        let phi = NodeField::from_fn(g, |x, y| coord(x, y) - xs);
        let geo = compute_geometry(&LevelSetField::new(phi, 0.0));
        let mu = Viscosity { plus: mu_plus, minus: mu_minus };
        let funcs = build_functionals(&geo, mu).unwrap();
        let exact = |s: f64| if s < xs { s } else { xs + slope_plus * (s - xs) };
        let u = NodeField::from_fn(g, |x, y| exact(coord(x, y)));
        let b = mu_plus * slope_plus - mu_minus;
        let vals = funcs.evaluate(&geo, &u, |_, _| b);
        let mut checked = 0;
        for k in geo.crossed_nodes() {
            let (i, j) = g.coords(k);
            if g.is_boundary(i, j) {
                continue;
            }
            for arm in Arm::ALL {
                if geo.jump_arm(k, arm) {
                    let v = vals.get(k, arm).unwrap();
                    prop_assert!((v - xs).abs() <= 1e-10, "arm {:?} at ({}, {}): {} vs {}", arm, i, j, v, xs);
                    checked += 1;
                }
            }
        }
        prop_assert!(checked >= 2 * 13);
    }

    /// Without an interface every interior row is the five-point operator.
    #[test]
    fn rows_without_interface_are_five_point(
        mu in 0.1f64..10.0,
        rho in 0.1f64..10.0,
        dt in 0.01f64..1.0,
        bdf2 in any::<bool>(),
    ) {
        let g = Grid2D::new(-1.0, 1.0, 0.0, 3.0, 9, 13).unwrap();
        let geo = compute_geometry(&LevelSetField::new(NodeField::constant(g, 1.0), 0.0));
        let phases = Phases { rho_plus: rho, rho_minus: 1.0, mu_plus: mu, mu_minus: 1.0 };
        let funcs = build_functionals(&geo, phases.viscosity()).unwrap();
        let op = StepOperator { geometry: &geo, functionals: &funcs, phases, dt };
        let term = if bdf2 { TimeTerm::Bdf2 { un: 0.0, unm1: 0.0 } } else { TimeTerm::Bdf1 { un: 0.0 } };
        let zeros = vec![0.0; g.len()];
        let sys = op.assemble(&vec![term; g.len()], &zeros, &zeros, |_, _| 0.0).unwrap();
        let a = if bdf2 { 1.5 / dt } else { 1.0 / dt };
        let (cx, cy) = (mu / (g.dx * g.dx), mu / (g.dy * g.dy));
        for j in 1..g.ny - 1 {
            for i in 1..g.nx - 1 {
                let k = g.index(i, j);
                let expect = [
                    (k - g.nx, -cy),
                    (k - 1, -cx),
                    (k, rho * a + 2.0 * cx + 2.0 * cy),
                    (k + 1, -cx),
                    (k + g.nx, -cy),
                ];
                let (cols, vals) = sys.matrix.row(k);
                prop_assert_eq!(cols.len(), 5);
                for ((c, v), (ec, ev)) in cols.iter().zip(vals).zip(expect) {
                    prop_assert_eq!(*c, ec);
                    prop_assert!((v - ev).abs() <= 1e-12 * ev.abs());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Random systems on the assembled sparsity pattern: a five-point stencil
    /// plus extra couplings at a band of nodes, as next to an interface.
    #[test]
    fn gmres_matches_dense_solve(
        seed_vals in proptest::collection::vec(-1.0f64..1.0, 50 * 12),
        rhs in proptest::collection::vec(-1.0f64..1.0, 50),
        precond in any::<bool>(),
        restart in 5usize..40,
    ) {
        let (nx, ny) = (10usize, 5usize);
        let n = nx * ny;
        let mut draw = seed_vals.into_iter();
        let mut b = CsrBuilder::new(n);
        for k in 0..n {
            let (i, j) = (k % nx, k / nx);
            let mut row = Vec::new();
            let mut off = 0.0;
            let mut push = |c: usize, row: &mut Vec<(usize, f64)>, off: &mut f64| {
                let v = draw.next().unwrap();
                *off += v.abs();
                row.push((c, v));
            };
            if i > 0 { push(k - 1, &mut row, &mut off); }
            if i + 1 < nx { push(k + 1, &mut row, &mut off); }
            if j > 0 { push(k - nx, &mut row, &mut off); }
            if j + 1 < ny { push(k + nx, &mut row, &mut off); }
            if (4..6).contains(&i) {
                if i + 2 < nx && j + 1 < ny { push(k + nx + 2, &mut row, &mut off); }
                if i >= 2 && j > 0 { push(k - nx - 2, &mut row, &mut off); }
            }
            let d = draw.next().unwrap();
            row.push((k, off * (1.1 + d.abs()) + 0.1));
            b.push_row(row);
        }
        let a = b.finish();
        let ilu = Ilu0::factor(&a).unwrap();
        let cfg = GmresConfig { tol: 1e-14, max_iter: 2000, restart };
        let out = gmres(&a, &rhs, None, precond.then_some(&ilu), &cfg).unwrap();
        let x = dense_solve(&a, &rhs);
        let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (p, q) in out.x.iter().zip(&x) {
            prop_assert!((p - q).abs() <= 1e-10 * scale.max(1.0), "{} vs {}", p, q);
        }
        let r = a.residual(&rhs, &out.x);
        let rel = r.iter().map(|v| v * v).sum::<f64>().sqrt() / rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((rel - out.residual).abs() <= 1e-14 + 1e-6 * rel);
    }
}

#[test]
fn departure_points_are_third_order_per_step() {
    // a linear rotation is represented exactly by bilinear interpolation, so
    // only the time integration error remains
    let g = Grid2D::square(-2.0, 2.0, 8).unwrap();
    let v = VectorField::from_fn(g, |x, y| (-y, x));
    let (i, j) = (6, 5);
    let (x, y) = g.node(i, j);
    let exact = |t: f64| (x * t.cos() + y * t.sin(), -x * t.sin() + y * t.cos());
    let err = |dt: f64| {
        let d = trace_departure(&g, i, j, &v, &v, dt);
        let (en, enm1) = (exact(dt), exact(2.0 * dt));
        let a = (d.n.x - en.0).hypot(d.n.y - en.1);
        let b = (d.nm1.x - enm1.0).hypot(d.nm1.y - enm1.1);
        (a, b)
    };
    let dts = [0.1, 0.05, 0.025, 0.0125];
    for w in dts.windows(2) {
        let (a0, b0) = err(w[0]);
        let (a1, b1) = err(w[1]);
        let (sa, sb) = ((a0 / a1).log2(), (b0 / b1).log2());
        assert!(sa >= 2.7, "level n slope {sa}");
        assert!(sb >= 2.7, "level n-1 slope {sb}");
    }
}

struct Band {
    geo: slgfm_core::InterfaceGeometry,
    vals: slgfm_core::gfm::InterfaceValues,
    smooth: NodeField,
}

/// Circle of radius 0.5 and interface data `1 + x` from a smooth field.
fn circle_band(cells: usize) -> Band {
    let g = Grid2D::square(-1.0, 1.0, cells).unwrap();
    let phi = NodeField::from_fn(g, |x, y| x.hypot(y) - 0.5);
    let geo = compute_geometry(&LevelSetField::new(phi, 0.0));
    let funcs = build_functionals(&geo, Viscosity { plus: 1.0, minus: 1.0 }).unwrap();
    let smooth = NodeField::from_fn(g, |x, _| 1.0 + x);
    let vals = funcs.evaluate(&geo, &smooth, |_, _| 0.0);
    Band { geo, vals, smooth }
}

fn converged() -> ExtensionConfig {
    ExtensionConfig { iterations: 600, ..ExtensionConfig::default() }
}

#[test]
fn extension_carries_interface_data_along_normals() {
    // exact extension of 1 + x from the circle r = 0.5 is 1 + 0.5 x / r
    let mut errs = Vec::new();
    for cells in [40, 80] {
        let band = circle_band(cells);
        let g = *band.geo.grid();
        let (w, _) = extend_scalar(&band.smooth, &band.geo, &band.vals, &converged()).unwrap();
        let mut e = 0.0f64;
        for k in 0..g.len() {
            let (i, j) = g.coords(k);
            let (x, y) = g.node(i, j);
            if band.geo.phi(k).abs() < 3.0 * g.h() {
                e = e.max((w[k] - (1.0 + 0.5 * x / x.hypot(y))).abs());
            }
        }
        errs.push(e);
    }
    assert!(errs[1] < 5e-3, "{errs:?}");
    assert!((errs[0] / errs[1]).log2() > 1.5, "{errs:?}");
}

#[test]
fn extension_leaves_nodes_outside_the_band_alone() {
    let band = circle_band(40);
    let g = *band.geo.grid();
    let cfg = ExtensionConfig { band: 2.0, ..converged() };
    let (w, rep) = extend_scalar(&band.smooth, &band.geo, &band.vals, &cfg).unwrap();
    assert!(rep.band_nodes > 0);
    for k in 0..g.len() {
        if band.geo.phi(k).abs() >= 2.0 * g.h() {
            assert_eq!(w[k].to_bits(), band.smooth[k].to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn extension_is_idempotent_and_bounded(noise in proptest::collection::vec(-5.0f64..5.0, 41 * 41)) {
        let band = circle_band(40);
        let g = *band.geo.grid();
        // the initial guess inside the band does not matter once converged
        let start = NodeField::from_values(g, band.smooth.values().iter().zip(&noise).map(|(a, b)| a + b).collect()).unwrap();
        let cfg = converged();
        let (w1, _) = extend_scalar(&start, &band.geo, &band.vals, &cfg).unwrap();
        let (w2, rep) = extend_scalar(&w1, &band.geo, &band.vals, &cfg).unwrap();
        let peak = w1.max_abs();
        for k in 0..g.len() {
            prop_assert!((w2[k] - w1[k]).abs() <= 1e-8 * peak);
        }
        prop_assert!(rep.last_change <= 1e-8 * peak);

        // bounds over the band inputs and the interface data
        let in_band = |k: usize| {
            let (i, j) = g.coords(k);
            band.geo.phi(k).abs() < cfg.band * g.h() && !g.is_boundary(i, j)
        };
        let data = band.geo.crossed_nodes().into_iter()
            .filter_map(|k| band.vals.node(k))
            .flat_map(|v| v.into_iter())
            .filter(|v| v.is_finite())
            .chain((0..g.len()).filter(|&k| in_band(k)).map(|k| start[k]));
        let (lo, hi) = data.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        for k in (0..g.len()).filter(|&k| in_band(k)) {
            prop_assert!(w1[k] >= lo - 1e-10 && w1[k] <= hi + 1e-10, "node {} value {} outside [{}, {}]", k, w1[k], lo, hi);
        }
    }
}
