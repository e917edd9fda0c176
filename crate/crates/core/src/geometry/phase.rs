use super::grid::Grid;
use super::shape::InterfaceShape;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Plus,
    Minus,
}

impl Phase {
    pub fn opposite(self) -> Phase {
        match self {
            Phase::Plus => Phase::Minus,
            Phase::Minus => Phase::Plus,
        }
    }

    /// Phase of a level-set value; values within `tie` of zero count as Ω⁻.
    pub fn from_level<T: Scalar>(value: T, tie: T) -> Phase {
        if value.abs() < tie || value <= T::zero() {
            Phase::Minus
        } else {
            Phase::Plus
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Phase::Plus => "+",
            Phase::Minus => "-",
        }
    }
}

/// Coordinate planes for cross-derivative irregularity, indexed by the
/// axis pairs (x,y), (y,z), (x,z).
pub const PLANES: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

/// Per-node phase tags and irregularity flags.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMap {
    phases: Vec<Phase>,
    central_irregular: Vec<[bool; 3]>,
    cross_irregular: Vec<[bool; 3]>,
}

/// Relative tolerance below which a node is considered on the interface.
pub const ON_INTERFACE_TOL: f64 = 1e-12;

impl PhaseMap {
    pub fn phase(&self, node: usize) -> Phase {
        self.phases[node]
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn central_irregular(&self, node: usize, axis: usize) -> bool {
        self.central_irregular[node][axis]
    }

    /// `plane` indexes [`PLANES`].
    pub fn cross_irregular(&self, node: usize, plane: usize) -> bool {
        self.cross_irregular[node][plane]
    }

    pub fn is_irregular(&self, node: usize) -> bool {
        self.central_irregular[node].iter().any(|&b| b) || self.cross_irregular[node].iter().any(|&b| b)
    }

    pub fn from_phases<T: Scalar>(grid: &Grid<T>, phases: Vec<Phase>) -> Self {
        assert_eq!(phases.len(), grid.len());
        let n = grid.len();
        let mut central_irregular = vec![[false; 3]; n];
        let mut cross_irregular = vec![[false; 3]; n];
        for idx in 0..n {
            let ijk = grid.ijk(idx);
            let ph = phases[idx];
            for axis in 0..3 {
                central_irregular[idx][axis] = [-1isize, 1]
                    .iter()
                    .any(|&s| grid.step(ijk, axis, s).is_some_and(|q| phases[grid.index(q)] != ph));
            }
            for (plane, &(a, b)) in PLANES.iter().enumerate() {
                let mut flag = false;
                for sa in [-1isize, 1] {
                    for sb in [-1isize, 1] {
                        let mut off = [0isize; 3];
                        off[a] = sa;
                        off[b] = sb;
                        if let Some(q) = grid.offset(ijk, off) {
                            flag |= phases[grid.index(q)] != ph;
                        }
                    }
                }
                cross_irregular[idx][plane] = flag;
            }
        }
        Self {
            phases,
            central_irregular,
            cross_irregular,
        }
    }
}

/// Tags every node with its phase and irregularity flags.
pub fn classify_nodes<T: Scalar>(grid: &Grid<T>, shape: &InterfaceShape<T>) -> PhaseMap {
    let tie = grid.max_spacing() * lit(ON_INTERFACE_TOL);
    let phases = (0..grid.len())
        .map(|idx| Phase::from_level(shape.value(&grid.coord_of(idx)), tie))
        .collect();
    PhaseMap::from_phases(grid, phases)
}
