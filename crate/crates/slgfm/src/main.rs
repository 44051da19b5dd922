use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use slgfm_core::driver::{LevelSetMode, Method, Simulation};
use slgfm_core::problem::Problem;

use slgfm::cases::{CaseId, TestCase};
use slgfm::config::{parse_config, LevelSetArg, MethodArg, RunSettings};
use slgfm::io;
use slgfm::study::{sweep, sweep_rows, RunOptions, RunResult};
use slgfm::validate::validate;

/// Semi-Lagrangian ghost fluid solver for two-phase convection-diffusion.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and report its errors.
    Run(RunArgs),
    /// Run a test on several grids and tabulate convergence orders.
    Sweep(SweepArgs),
    /// Check the closed-form data of the test problems.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Test problem: 1, 2, 3, 4, 5 or 5-corrected.
    #[arg(long)]
    test: Option<CaseId>,
    /// `key = value` file with any of the options below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cells per axis.
    #[arg(long)]
    nx: Option<usize>,
    /// slgfm or slbdf2.
    #[arg(long)]
    method: Option<MethodArg>,
    /// computed, no-extension or exact.
    #[arg(long)]
    levelset: Option<LevelSetArg>,
    /// Ratio dt / dx, overriding the test's default.
    #[arg(long)]
    dt_factor: Option<f64>,
    /// Final time, overriding the test's default.
    #[arg(long)]
    final_time: Option<f64>,
    /// Write final fields, interface values and the last linear systems here.
    #[arg(long)]
    dump_fields: Option<PathBuf>,
    /// Report CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-step progress CSV.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Fill the runtime column of the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    test: CaseId,
    /// Comma-separated cells per axis, coarse to fine.
    #[arg(long, value_parser = parse_grids, default_value = "40,80,160")]
    grids: Grids,
    #[arg(long, default_value = "slgfm")]
    method: MethodArg,
    #[arg(long, default_value = "computed")]
    levelset: LevelSetArg,
    /// Report CSV; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Level-set band error CSV.
    #[arg(long)]
    phi_out: Option<PathBuf>,
    /// Fill the runtime column of the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Only check this test.
    #[arg(long)]
    test: Option<CaseId>,
    /// Random samples per check.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 20240917)]
    seed: u64,
}

#[derive(Clone)]
struct Grids(Vec<usize>);

fn parse_grids(s: &str) -> Result<Grids, String> {
    let grids = s
        .split(',')
        .map(|g| match g.trim().parse::<usize>() {
            Ok(n) if n >= 3 => Ok(n),
            _ => Err(format!("`{g}` is not a grid size of at least 3 cells")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if grids.windows(2).any(|w| w[1] <= w[0]) {
        return Err("grids must increase".into());
    }
    Ok(Grids(grids))
}

/// A failure and the exit status it maps to.
enum Failure {
    Usage(String),
    Numeric(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(e.into())
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn print_summary(case: &TestCase, r: &RunResult, method: Method, levelset: LevelSetMode) {
    let e = r.errors();
    println!(
        "test {} grid {} method {:?} levelset {:?}: {} steps, dt {:.6e}",
        case.id, r.cells, method, levelset, r.report.steps, r.report.dt
    );
    println!("  error_u   {:.6e} (numerical phase {:.6e})", e.u_inf, e.u_inf_numerical_phase);
    if let Some(p) = e.phi_inf {
        println!("  error_phi {p:.6e}");
    }
    println!("  gmres iterations per solve {:.2}, runtime {:.2}s", r.report.gmres_iters_mean(), r.runtime_s);
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let file = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            parse_config(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => RunSettings::default(),
    };
    let cli = RunSettings {
        test: args.test,
        nx: args.nx,
        method: args.method.map(|m| m.0),
        levelset: args.levelset.map(|l| l.0),
        dt_factor: args.dt_factor,
        final_time: args.final_time,
        dump_fields: args.dump_fields,
        out: args.out,
        log: args.log,
        timing: args.timing.then_some(true),
    };
    let s = file.overridden_by(cli);
    let id = s.test.ok_or_else(|| Failure::Usage("no test given (use --test or a config file)".into()))?;
    let case = TestCase::new(id);
    let cells = s.nx.unwrap_or(80);
    let opts = RunOptions {
        method: s.method.unwrap_or(Method::SlGfm),
        levelset: s.levelset.unwrap_or(LevelSetMode::Extended),
        dt_factor: s.dt_factor,
        final_time: s.final_time,
    };
    let mut cfg = opts.config(&case, cells).map_err(|e| Failure::Usage(e.to_string()))?;
    cfg.keep_systems = s.dump_fields.is_some();

    let mut log = s.log.as_deref().map(create).transpose()?;
    if let Some(w) = log.as_mut() {
        writeln!(w, "{}", io::STEP_LOG_HEADER)?;
    }
    let start = std::time::Instant::now();
    let sim = Simulation::new(&case, cfg).context("setting up the run")?;
    let mut log_err = None;
    let (report, state) = sim
        .run_with(|l| {
            if let Some(w) = log.as_mut() {
                if let Err(e) = writeln!(w, "{}", io::step_log_line(l)) {
                    log_err.get_or_insert(e);
                }
            }
        })
        .context("time stepping")?;
    if let Some(e) = log_err {
        return Err(e.into());
    }
    if let Some(w) = log.as_mut() {
        w.flush()?;
    }
    let result = RunResult { cells, report, final_state: state, runtime_s: start.elapsed().as_secs_f64() };
    print_summary(&case, &result, opts.method, opts.levelset);

    if let Some(dir) = &s.dump_fields {
        let level = &result.final_state.current;
        let t = level.time;
        io::dump_level(dir, level, |c, x, y, r| case.exact(r, c, x, y, t))
            .with_context(|| format!("writing fields to {}", dir.display()))?;
        for (c, sys) in result.final_state.systems.iter().enumerate() {
            io::write_matrix(&mut create(&dir.join(format!("matrix{c}.txt")))?, sys)?;
            io::write_rhs(&mut create(&dir.join(format!("rhs{c}.txt")))?, sys)?;
        }
        if let Some(w) = &result.final_state.previous.as_ref().and_then(|l| l.w.as_ref()) {
            io::write_vector_field(&mut create(&dir.join("velocity.txt"))?, w)?;
        }
    }
    if let Some(out) = &s.out {
        let mut w = create(out)?;
        io::write_report(&mut w, &sweep_rows(std::slice::from_ref(&result)), s.timing.unwrap_or(false))?;
        w.flush()?;
    }
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    let case = TestCase::new(args.test);
    let opts = RunOptions { method: args.method.0, levelset: args.levelset.0, ..Default::default() };
    let results = sweep(&case, &args.grids.0, &opts).context("sweep")?;
    let rows = sweep_rows(&results);
    match &args.out {
        Some(p) => {
            let mut w = create(p)?;
            io::write_report(&mut w, &rows, args.timing)?;
            w.flush()?;
            for r in &rows {
                let order = r.order_u.map(|o| format!("{o:.2}")).unwrap_or_else(|| "-".into());
                println!("{:>5} {:.4e} {order}", r.cells, r.error_u);
            }
        }
        None => io::write_report(&mut std::io::stdout().lock(), &rows, args.timing)?,
    }
    if let Some(p) = &args.phi_out {
        let mut w = create(p)?;
        io::write_levelset_errors(&mut w, &rows)?;
        w.flush()?;
    }
    Ok(())
}

fn run_validate(args: ValidateArgs) -> Result<(), Failure> {
    let ids: Vec<CaseId> = args.test.map_or_else(|| CaseId::ALL.to_vec(), |t| vec![t]);
    let mut failed = Vec::new();
    for id in ids {
        let v = validate(&TestCase::new(id), args.samples, args.seed);
        print!("{v}");
        if !v.passed() {
            failed.push(id.to_string());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numeric(anyhow::anyhow!("inconsistent test data: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Validate(a) => run_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
