use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("degenerate interface normal at ({x}, {y}, {z}): |grad phi| = {magnitude:e}")]
    DegenerateNormal { x: f64, y: f64, z: f64, magnitude: f64 },
    #[error("no sign change between nodes {lower} and {upper} along axis {axis}")]
    NoSignChange { axis: usize, lower: usize, upper: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JumpError {
    #[error("no viable elimination pair for meshline axis {axis}")]
    NoViablePair { axis: usize },
    #[error("degenerate elimination for pair ({l}, {m})")]
    DegenerateElimination { l: usize, m: usize },
    #[error("invalid elimination pair ({l}, {m})")]
    InvalidPair { l: usize, m: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FictitiousError {
    #[error("stencil nodes are not pairwise distinct")]
    DuplicateNodes,
    #[error("unsupported derivative order {0}")]
    UnsupportedOrder(usize),
    #[error("no in-phase stencil for axis {axis} at node {node}")]
    StencilUnavailable { node: usize, axis: usize },
    #[error("local interface system is singular (condition estimate {cond:e})")]
    SingularLocalSystem { cond: f64 },
    #[error("local stencil leaves the computational domain at node {node}")]
    OutsideDomain { node: usize },
    #[error("nothing to disassociate for node {node}")]
    NothingToDisassociate { node: usize },
    #[error("no scheme resolves the fictitious value of node {node} seen from node {consumer}")]
    Unresolvable { node: usize, consumer: usize },
    #[error(transparent)]
    Jump(#[from] JumpError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error("missing fictitious value for node {target} referenced by node {consumer}")]
    MissingFictitious { consumer: usize, target: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },
    #[error("zero pivot in row {row} of the incomplete factorisation")]
    ZeroPivot { row: usize },
    #[error("dimension mismatch: matrix {matrix}, vector {vector}")]
    DimensionMismatch { matrix: usize, vector: usize },
    #[error("tolerance must be positive")]
    InvalidTolerance,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown case: example {example}, case {case}")]
    UnknownCase { example: u32, case: u32 },
    #[error("field shapes differ: {numeric} vs {exact}")]
    ShapeMismatch { numeric: usize, exact: usize },
    #[error("convergence order needs positive errors")]
    NonpositiveError,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{stage} failed: {source}")]
    Pipeline {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

/// Crate-wide error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Jump(#[from] JumpError),
    #[error(transparent)]
    Fictitious(#[from] FictitiousError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
