use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mib_elastic::harness::norms::fill_orders;
use mib_elastic::harness::{
    load_overrides, manufactured_case, run_solve, write_errors_csv, write_field_vtk, ErrorRow, GridSpec, Overrides,
    SolveOptions, CATALOG,
};
use mib_elastic::solver::PreconditionerKind;

fn parse_preconditioner(s: &str) -> Result<PreconditionerKind, String> {
    PreconditionerKind::parse(s).ok_or_else(|| format!("unknown preconditioner {s:?}"))
}

#[derive(Parser)]
#[command(name = "mib-elastic", about = "MIB solver for 3D elasticity interface problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    example: u32,
    #[arg(long, default_value_t = 1)]
    case: u32,
    /// Relative residual tolerance of BiCGStab.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Preconditioner: ilu0 (default) or jacobi.
    #[arg(long, value_parser = parse_preconditioner)]
    precond: Option<PreconditionerKind>,
    /// key=value override file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one catalog problem on one grid.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Nodes per axis.
        #[arg(long, conflicts_with = "grid_size")]
        n: Option<usize>,
        #[arg(long)]
        grid_size: Option<f64>,
        /// Legacy VTK output of the solution and error.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        errors: Option<PathBuf>,
    },
    /// Refinement study over several grids.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Node counts, or grid sizes when they contain a decimal point.
        #[arg(long, value_delimiter = ',', required = true)]
        grids: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the catalog.
    List,
}

enum Failure {
    Usage(String),
    NotConverged,
    Run(mib_elastic::Error),
}

impl<E: Into<mib_elastic::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Run(e.into())
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, Failure> {
    let s = s.trim();
    if s.contains('.') || s.contains('e') {
        s.parse::<f64>()
            .ok()
            .filter(|h| *h > 0.0)
            .map(GridSpec::Size)
            .ok_or_else(|| Failure::Usage(format!("invalid grid size {s:?}")))
    } else {
        s.parse::<usize>()
            .map(GridSpec::Nodes)
            .map_err(|_| Failure::Usage(format!("invalid node count {s:?}")))
    }
}

fn setup(common: &Common) -> Result<(mib_elastic::ManufacturedProblem, SolveOptions), Failure> {
    let mut problem =
        manufactured_case::<f64>(common.example, common.case).map_err(|e| Failure::Usage(e.to_string()))?;
    let overrides = match &common.config {
        Some(p) => load_overrides(p).map_err(|e| Failure::Usage(e.to_string()))?,
        None => Overrides::default(),
    };
    if let Some(b) = overrides.bounds_min {
        problem.bounds_min = b;
    }
    if let Some(b) = overrides.bounds_max {
        problem.bounds_max = b;
    }
    let mut options = SolveOptions::default();
    if let Some(t) = common.tol.or(overrides.tolerance) {
        options.tolerance = t;
    }
    options.max_iterations = common.max_iter.or(overrides.max_iterations);
    if let Some(k) = common.precond.or(overrides.preconditioner) {
        options.preconditioner = k;
    }
    Ok((problem, options))
}

fn print_row(r: &ErrorRow) {
    println!(
        "n=({},{},{}) h={:.4} Linf=({:.3e}, {:.3e}, {:.3e}) L2=({:.3e}, {:.3e}, {:.3e}) iters={} residual={:.2e}",
        r.node_counts[0],
        r.node_counts[1],
        r.node_counts[2],
        r.h,
        r.linf[0],
        r.linf[1],
        r.linf[2],
        r.l2[0],
        r.l2[1],
        r.l2[2],
        r.iterations,
        r.residual
    );
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::List => {
            for (e, c) in CATALOG {
                let p = manufactured_case::<f64>(e, c)?;
                let grids: Vec<String> = p.grids.iter().map(|g| g.label()).collect();
                println!(
                    "example {e:>2} case {c}  {:<20} grids {:<16} {}",
                    p.problem.shape.kind.name(),
                    grids.join(","),
                    p.notes
                );
            }
            Ok(())
        }
        Command::Solve {
            common,
            n,
            grid_size,
            out,
            errors,
        } => {
            let spec = match (n, grid_size) {
                (Some(n), None) => GridSpec::Nodes(n),
                (None, Some(h)) if h > 0.0 => GridSpec::Size(h),
                _ => {
                    return Err(Failure::Usage(
                        "give exactly one of --n or a positive --grid-size".into(),
                    ))
                }
            };
            let (problem, options) = setup(&common)?;
            let o = run_solve(&problem, spec, &options)?;
            let row = ErrorRow::new(
                problem.example,
                problem.case,
                &o.errors,
                o.report.iterations,
                o.report.relative_residual,
            );
            print_row(&row);
            if let Some(p) = errors {
                write_errors_csv(&[row], &p)?;
            }
            if let Some(p) = out {
                write_field_vtk(&o.discretization.grid, &o.numeric, &o.exact, &p)?;
            }
            if !o.report.converged {
                return Err(Failure::NotConverged);
            }
            Ok(())
        }
        Command::Converge { common, grids, out } => {
            let specs = grids.iter().map(|g| parse_grid(g)).collect::<Result<Vec<_>, _>>()?;
            let (problem, options) = setup(&common)?;
            let mut reports = Vec::new();
            let mut solves = Vec::new();
            for spec in specs {
                let o = run_solve(&problem, spec, &options)?;
                reports.push(o.errors);
                solves.push(o.report);
            }
            fill_orders(&mut reports);
            let rows: Vec<ErrorRow> = reports
                .iter()
                .zip(&solves)
                .map(|(e, s)| ErrorRow::new(problem.example, problem.case, e, s.iterations, s.relative_residual))
                .collect();
            rows.iter().for_each(print_row);
            write_errors_csv(&rows, &out)?;
            if solves.iter().any(|s| !s.converged) {
                return Err(Failure::NotConverged);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::NotConverged) => {
            eprintln!("error: solver did not converge");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
