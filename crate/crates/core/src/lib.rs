//! Matched interface and boundary (MIB) finite differences for static
//! linear elasticity with a material interface on uniform Cartesian grids.
//!
//! The core is generic over the floating-point type; the aliases below fix
//! it to `f64`.

pub mod assembly;
pub mod error;
pub mod fictitious;
pub mod field;
pub mod geometry;
pub mod harness;
pub mod jump;
pub mod materials;
pub mod problem;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Grid = geometry::Grid<f64>;
pub type InterfaceShape = geometry::InterfaceShape<f64>;
pub type MaterialField = materials::MaterialField<f64>;
pub type InterfaceProblem = problem::InterfaceProblem<f64>;
pub type ManufacturedProblem = harness::ManufacturedProblem<f64>;
pub type FictitiousTable = fictitious::FictitiousTable<f64>;
pub type SparseSystem = assembly::SparseSystem<f64>;
pub type CsrMatrix = assembly::CsrMatrix<f64>;
pub type SolveOutcome = harness::SolveOutcome<f64>;
