//! Text and CSV output formats.

use std::io::{self, Write};

use slgfm_core::assemble::SparseLinearSystem;
use slgfm_core::driver::{Level, StepLog};
use slgfm_core::gfm::InterfaceFunctionals;
use slgfm_core::levelset::Arm;
use slgfm_core::{InterfaceGeometry, NodeField, VectorField};

use crate::study::SweepRow;

fn header(w: &mut impl Write, f: &NodeField) -> io::Result<()> {
    let g = f.grid();
    writeln!(w, "{} {} {:.16e} {:.16e} {:.16e} {:.16e}", g.nx, g.ny, g.x_min, g.y_min, g.dx, g.dy)
}

/// Node field as `nx ny x_min y_min dx dy` followed by `i j value` in row-major order.
pub fn write_field(w: &mut impl Write, f: &NodeField) -> io::Result<()> {
    header(w, f)?;
    let g = f.grid();
    for k in 0..g.len() {
        let (i, j) = g.coords(k);
        writeln!(w, "{i} {j} {:.16e}", f[k])?;
    }
    Ok(())
}

pub fn write_vector_field(w: &mut impl Write, v: &VectorField) -> io::Result<()> {
    header(w, &v.x)?;
    let g = v.grid();
    for k in 0..g.len() {
        let (i, j) = g.coords(k);
        writeln!(w, "{i} {j} {:.16e} {:.16e}", v.x[k], v.y[k])?;
    }
    Ok(())
}

/// Parse a field written by [`write_field`].
pub fn read_field(text: &str) -> Result<NodeField, String> {
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().ok_or("empty field file")?.split_whitespace().collect();
    if head.len() != 6 {
        return Err(format!("bad header `{}`", head.join(" ")));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    let int = |s: &str| s.parse::<usize>().map_err(|e| format!("`{s}`: {e}"));
    let (nx, ny) = (int(head[0])?, int(head[1])?);
    let (x0, y0, dx, dy) = (num(head[2])?, num(head[3])?, num(head[4])?, num(head[5])?);
    if nx < 2 || ny < 2 {
        return Err(format!("grid of {nx} x {ny} nodes"));
    }
    let grid = slgfm_core::Grid2D::new(
        x0,
        x0 + dx * (nx - 1) as f64,
        y0,
        y0 + dy * (ny - 1) as f64,
        nx,
        ny,
    )
    .map_err(|e| e.to_string())?;
    let mut f = NodeField::zeros(grid);
    let mut seen = 0;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let p: Vec<&str> = line.split_whitespace().collect();
        if p.len() != 3 {
            return Err(format!("bad line `{line}`"));
        }
        let (i, j) = (int(p[0])?, int(p[1])?);
        if i >= nx || j >= ny {
            return Err(format!("node ({i}, {j}) outside the grid"));
        }
        f.set(i, j, num(p[2])?);
        seen += 1;
    }
    if seen != grid.len() {
        return Err(format!("expected {} nodes, found {seen}", grid.len()));
    }
    Ok(f)
}

/// Flag column of the interface diagnostics.
pub const FLAG_FULL: u8 = 0;
/// The local fit had no usable diagonal and dropped its cross term.
pub const FLAG_REDUCED: u8 = 1;
/// The arm is crossed twice and the interface value is not defined.
pub const FLAG_DOUBLE: u8 = 2;

/// Interface values of one component: `i,j,arm,theta,u_arm,flag` per crossed arm.
pub fn write_interface_values(
    w: &mut impl Write,
    geo: &InterfaceGeometry,
    funcs: &InterfaceFunctionals,
    values: &slgfm_core::gfm::InterfaceValues,
) -> io::Result<()> {
    writeln!(w, "i,j,arm,theta,u_arm,flag")?;
    let g = geo.grid();
    for k in geo.crossed_nodes() {
        let (i, j) = g.coords(k);
        if g.is_boundary(i, j) {
            continue;
        }
        let reduced = funcs.get(k).is_some_and(|s| s.reduced());
        for arm in Arm::ALL {
            if !geo.crossed(k, arm) {
                continue;
            }
            let (flag, value) = if geo.is_double(k, arm) {
                (FLAG_DOUBLE, None)
            } else {
                (if reduced { FLAG_REDUCED } else { FLAG_FULL }, values.get(k, arm))
            };
            let value = value.map(|v| format!("{v:.16e}")).unwrap_or_default();
            writeln!(w, "{i},{j},{},{:.16e},{value},{flag}", arm.name(), geo.theta(k, arm))?;
        }
    }
    Ok(())
}

/// Matrix in coordinate form `row col value`, one entry per line.
pub fn write_matrix(w: &mut impl Write, sys: &SparseLinearSystem) -> io::Result<()> {
    let a = &sys.matrix;
    for r in 0..a.n() {
        let (cols, vals) = a.row(r);
        for (c, v) in cols.iter().zip(vals) {
            writeln!(w, "{r} {c} {v:.16e}")?;
        }
    }
    Ok(())
}

/// Right-hand side as `row value`.
pub fn write_rhs(w: &mut impl Write, sys: &SparseLinearSystem) -> io::Result<()> {
    for (r, v) in sys.rhs.iter().enumerate() {
        writeln!(w, "{r} {v:.16e}")?;
    }
    Ok(())
}

pub const STEP_LOG_HEADER: &str = "step,time,Linf_residual,gmres_iters,regular_count,irregular_count,fallback_count";

pub fn step_log_line(log: &StepLog) -> String {
    format!(
        "{},{:.16e},{:.16e},{},{},{},{}",
        log.step,
        log.time,
        log.residual,
        log.gmres_iterations,
        log.classes.regular,
        log.classes.irregular,
        log.classes.fallback
    )
}

pub const REPORT_HEADER: &str = "grid,error_u,order_u,error_phi,order_phi,runtime_s,gmres_iters_mean";

fn opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

/// Refinement table; `runtime_s` is left empty unless `timing` is set.
pub fn write_report(w: &mut impl Write, rows: &[SweepRow], timing: bool) -> io::Result<()> {
    writeln!(w, "{REPORT_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{:.16e},{},{},{},{},{:.16e}",
            r.cells,
            r.error_u,
            opt(r.order_u),
            opt(r.error_phi),
            opt(r.order_phi),
            opt(timing.then_some(r.runtime_s)),
            r.gmres_iters_mean
        )?;
    }
    Ok(())
}

/// Level-set band error per grid as `grid,inf_error`.
pub fn write_levelset_errors(w: &mut impl Write, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "grid,inf_error")?;
    for r in rows {
        if let Some(e) = r.error_phi {
            writeln!(w, "{},{e:.16e}", r.cells)?;
        }
    }
    Ok(())
}

/// Parsed row of a report CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRecord {
    pub grid: usize,
    pub error_u: f64,
    pub order_u: Option<f64>,
    pub error_phi: Option<f64>,
    pub order_phi: Option<f64>,
    pub runtime_s: Option<f64>,
    pub gmres_iters_mean: f64,
}

pub fn read_report(text: &str) -> Result<Vec<ReportRecord>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(REPORT_HEADER) {
        return Err("missing report header".into());
    }
    let opt = |s: &str| -> Result<Option<f64>, String> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| format!("`{s}`: {e}"))
        }
    };
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let p: Vec<&str> = l.split(',').collect();
            if p.len() != 7 {
                return Err(format!("bad row `{l}`"));
            }
            Ok(ReportRecord {
                grid: p[0].parse().map_err(|e| format!("`{}`: {e}", p[0]))?,
                error_u: opt(p[1])?.ok_or("missing error_u")?,
                order_u: opt(p[2])?,
                error_phi: opt(p[3])?,
                order_phi: opt(p[4])?,
                runtime_s: opt(p[5])?,
                gmres_iters_mean: opt(p[6])?.ok_or("missing gmres_iters_mean")?,
            })
        })
        .collect()
}

/// Every field of a level: `u{c}.txt`, `phi.txt`, `error{c}.txt` and
/// `interface{c}.csv`. `exact(c, x, y)` is the exact solution on the side the
/// level's own level set selects.
pub fn dump_level(
    dir: &std::path::Path,
    level: &Level,
    mut exact: impl FnMut(usize, f64, f64, slgfm_core::Region) -> f64,
) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let create = |name: String| std::fs::File::create(dir.join(name)).map(io::BufWriter::new);
    let g = *level.phi.grid();
    write_field(&mut create("phi.txt".into())?, &level.phi.phi)?;
    for (c, u) in level.u.iter().enumerate() {
        write_field(&mut create(format!("u{c}.txt"))?, u)?;
        let mut err = NodeField::zeros(g);
        for k in 0..g.len() {
            let (i, j) = g.coords(k);
            let (x, y) = g.node(i, j);
            err[k] = u[k] - exact(c, x, y, level.geometry.region(k));
        }
        write_field(&mut create(format!("error{c}.txt"))?, &err)?;
        write_interface_values(&mut create(format!("interface{c}.csv"))?, &level.geometry, &level.functionals, &level.values[c])?;
    }
    Ok(())
}
