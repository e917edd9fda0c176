//! Fictitious values: extensions of each phase's solution across the
//! interface, expressed as linear functionals of real grid values.

pub mod dense;
pub mod functional;
pub mod lagrange;
pub mod local;
pub mod table;

pub use functional::LinearFunctional;
pub use lagrange::{lagrange_weights, StencilWeights, EXTRAPOLATION_WEIGHTS};
pub use local::{
    central_fictitious_pair, interfacial_derivative_stencil, sharp_edge_fictitious_triple, solve_segment,
    solve_segment_with_pair, stencil_availability, JumpSource, LocalContext, LocalScheme, SegmentSolution, StencilSlot,
    MAX_LOCAL_COND,
};
pub use table::{
    build_fictitious_table, cross_fictitious, ExtrapolationKind, FictitiousTable, FictitiousValue, Scheme, SegmentEnd,
    TableStats,
};
