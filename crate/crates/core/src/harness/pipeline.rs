//! End-to-end solve: grid → phases → intersections → fictitious values →
//! assembly → BiCGStab → errors.

use crate::assembly::{assemble_system, SparseSystem};
use crate::error::{Error, HarnessError};
use crate::fictitious::{build_fictitious_table, FictitiousTable, LocalContext, TableStats};
use crate::geometry::{classify_nodes, Grid, IntersectionIndex, PhaseMap};
use crate::harness::catalog::{GridSpec, ManufacturedProblem};
use crate::harness::norms::{error_norms, fill_orders, ErrorReport};
use crate::scalar::{lit, Scalar};
use crate::solver::{
    solve_preconditioned, PreconditionerKind, SolveReport, DEFAULT_ITERATION_FACTOR, DEFAULT_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub tolerance: f64,
    /// Defaults to 10 × system dimension.
    pub max_iterations: Option<usize>,
    pub preconditioner: PreconditionerKind,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: None,
            preconditioner: PreconditionerKind::default(),
        }
    }
}

fn stage<E: Into<Error>>(stage: &'static str) -> impl FnOnce(E) -> HarnessError {
    move |e| HarnessError::Pipeline {
        stage,
        source: Box::new(e.into()),
    }
}

/// Everything up to and including the assembled system.
#[derive(Debug, Clone)]
pub struct Discretization<T: Scalar> {
    pub grid: Grid<T>,
    pub phases: PhaseMap,
    pub intersections: IntersectionIndex<T>,
    pub table: FictitiousTable<T>,
    pub system: SparseSystem<T>,
}

impl<T: Scalar> Discretization<T> {
    pub fn stats(&self) -> &TableStats {
        &self.table.stats
    }
}

pub fn build_grid<T: Scalar>(problem: &ManufacturedProblem<T>, spec: GridSpec) -> Result<Grid<T>, HarnessError> {
    let counts = spec.node_counts(&problem.bounds_min, &problem.bounds_max);
    Grid::new(problem.bounds_min, problem.bounds_max, counts).map_err(stage("grid"))
}

pub fn discretize<T: Scalar>(
    problem: &ManufacturedProblem<T>,
    grid: Grid<T>,
) -> Result<Discretization<T>, HarnessError> {
    let p = &problem.problem;
    let phases = classify_nodes(&grid, &p.shape);
    let intersections = IntersectionIndex::build(&grid, &p.shape, &phases).map_err(stage("intersections"))?;
    let table = {
        let ctx = LocalContext {
            grid: &grid,
            phases: &phases,
            intersections: &intersections,
            materials: &p.materials,
            jumps: p,
        };
        build_fictitious_table(&ctx).map_err(stage("fictitious values"))?
    };
    let system = assemble_system(
        &grid,
        &phases,
        &p.materials,
        &table,
        |x, side| p.forcing(x, side),
        |x, side| p.displacement(x, side),
    )
    .map_err(stage("assembly"))?;
    Ok(Discretization {
        grid,
        phases,
        intersections,
        table,
        system,
    })
}

/// Exact solution sampled at the nodes, each from its own phase.
pub fn sample_exact<T: Scalar>(problem: &ManufacturedProblem<T>, grid: &Grid<T>, phases: &PhaseMap) -> Vec<T> {
    let mut u = Vec::with_capacity(3 * grid.len());
    for node in 0..grid.len() {
        u.extend_from_slice(&problem.problem.displacement(&grid.coord_of(node), phases.phase(node)));
    }
    u
}

/// Max |A·u_exact − rhs| over interior rows, split by whether the row's
/// node is irregular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub regular: f64,
    pub irregular: f64,
}

pub fn truncation_error<T: Scalar>(disc: &Discretization<T>, exact: &[T]) -> Truncation {
    let au = disc.system.matrix.mul_vec(exact);
    let mut t = Truncation {
        regular: 0.0,
        irregular: 0.0,
    };
    for node in 0..disc.grid.len() {
        if disc.grid.is_boundary(disc.grid.ijk(node)) {
            continue;
        }
        for c in 0..3 {
            let r = 3 * node + c;
            let e = (au[r] - disc.system.rhs[r]).abs().to_f64().unwrap_or(f64::NAN);
            let slot = if disc.phases.is_irregular(node) {
                &mut t.irregular
            } else {
                &mut t.regular
            };
            *slot = slot.max(e);
        }
    }
    t
}

#[derive(Debug, Clone)]
pub struct SolveOutcome<T: Scalar> {
    pub discretization: Discretization<T>,
    pub numeric: Vec<T>,
    pub exact: Vec<T>,
    pub errors: ErrorReport,
    pub report: SolveReport,
}

pub fn run_solve<T: Scalar>(
    problem: &ManufacturedProblem<T>,
    spec: GridSpec,
    options: &SolveOptions,
) -> Result<SolveOutcome<T>, HarnessError> {
    let grid = build_grid(problem, spec)?;
    let disc = discretize(problem, grid)?;
    let a = &disc.system.matrix;
    let max_iter = options
        .max_iterations
        .unwrap_or(DEFAULT_ITERATION_FACTOR * disc.system.dim());
    let (numeric, report) = solve_preconditioned(
        a,
        options.preconditioner,
        &disc.system.rhs,
        lit(options.tolerance),
        max_iter,
    )
    .map_err(stage("solve"))?;
    let exact = sample_exact(problem, &disc.grid, &disc.phases);
    let errors = error_norms(
        &numeric,
        &exact,
        disc.grid.node_counts(),
        disc.grid.max_spacing().to_f64().unwrap_or(f64::NAN),
    )?;
    Ok(SolveOutcome {
        discretization: disc,
        numeric,
        exact,
        errors,
        report,
    })
}

/// Solves on each grid in turn and fills the order columns.
pub fn run_convergence<T: Scalar>(
    problem: &ManufacturedProblem<T>,
    grids: &[GridSpec],
    options: &SolveOptions,
) -> Result<Vec<(ErrorReport, SolveReport)>, HarnessError> {
    let mut out = Vec::with_capacity(grids.len());
    for &g in grids {
        let o = run_solve(problem, g, options)?;
        out.push((o.errors, o.report));
    }
    let mut reports: Vec<ErrorReport> = out.iter().map(|(e, _)| e.clone()).collect();
    fill_orders(&mut reports);
    Ok(reports.into_iter().zip(out).map(|(e, (_, s))| (e, s)).collect())
}

/// Chebyshev index distance from `node` to the nearest irregular node lying
/// within h√3 of a geometric singularity; `None` if there is no such node.
pub fn distance_to_singular_irregular<T: Scalar>(
    problem: &ManufacturedProblem<T>,
    disc: &Discretization<T>,
    node: usize,
) -> Option<usize> {
    let grid = &disc.grid;
    let reach = grid.max_spacing() * lit::<T>(3.0).sqrt();
    let a = grid.ijk(node);
    let mut best: Option<usize> = None;
    for q in 0..grid.len() {
        if !disc.phases.is_irregular(q) {
            continue;
        }
        if problem.problem.shape.singular_distance(&grid.coord_of(q)) > reach {
            continue;
        }
        let b = grid.ijk(q);
        let d = (0..3).map(|k| a[k].abs_diff(b[k])).max().unwrap_or(0);
        best = Some(best.map_or(d, |x| x.min(d)));
    }
    best
}
