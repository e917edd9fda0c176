//! Grids, implicit interfaces, phase classification and meshline crossings.

pub mod grid;
pub mod intersection;
pub mod phase;
pub mod shape;

pub use grid::Grid;
pub use intersection::{find_intersections, locate_crossing, IntersectionIndex, IntersectionPoint};
pub use phase::{classify_nodes, Phase, PhaseMap, PLANES};
pub use shape::{normal_angles, Implicit, InterfaceShape, NormalInfo, ShapeKind, SingularFeature, Smoothness};
