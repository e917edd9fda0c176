//! Manufactured-solution catalog, error norms, convergence studies and
//! file output.

pub mod catalog;
pub mod config;
pub mod io;
pub mod norms;
pub mod pipeline;

pub use catalog::{manufactured_case, GridSpec, ManufacturedProblem, CATALOG};
pub use config::{load_overrides, parse_overrides, Overrides};
pub use io::{
    format_errors_csv, format_field_vtk, parse_errors_csv, write_errors_csv, write_field_vtk, ErrorRow, CSV_HEADER,
};
pub use norms::{convergence_order, error_norms, fill_orders, ErrorReport};
pub use pipeline::{
    build_grid, discretize, distance_to_singular_irregular, run_convergence, run_solve, sample_exact, truncation_error,
    Discretization, SolveOptions, SolveOutcome, Truncation,
};
