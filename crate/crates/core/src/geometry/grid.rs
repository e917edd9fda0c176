use crate::error::GeometryError;
use crate::scalar::{from_usize, Scalar, Vec3};

/// Uniform Cartesian node lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    bounds_min: Vec3<T>,
    bounds_max: Vec3<T>,
    node_counts: [usize; 3],
    spacing: Vec3<T>,
}

pub const MIN_NODES_PER_AXIS: usize = 4;

impl<T: Scalar> Grid<T> {
    pub fn new(bounds_min: Vec3<T>, bounds_max: Vec3<T>, node_counts: [usize; 3]) -> Result<Self, GeometryError> {
        for d in 0..3 {
            if node_counts[d] < MIN_NODES_PER_AXIS {
                return Err(GeometryError::InvalidGrid(format!(
                    "axis {d} has {} nodes, need at least {MIN_NODES_PER_AXIS}",
                    node_counts[d]
                )));
            }
            if !bounds_max[d].is_finite() || !bounds_min[d].is_finite() || bounds_max[d] <= bounds_min[d] {
                return Err(GeometryError::InvalidGrid(format!(
                    "axis {d} bounds [{}, {}] are not increasing",
                    bounds_min[d], bounds_max[d]
                )));
            }
        }
        let spacing = std::array::from_fn(|d| (bounds_max[d] - bounds_min[d]) / from_usize::<T>(node_counts[d] - 1));
        Ok(Self {
            bounds_min,
            bounds_max,
            node_counts,
            spacing,
        })
    }

    /// Grid whose node count per axis is `round(L/h) + 1`.
    pub fn with_grid_size(bounds_min: Vec3<T>, bounds_max: Vec3<T>, grid_size: T) -> Result<Self, GeometryError> {
        if !(grid_size > T::zero()) {
            return Err(GeometryError::InvalidGrid("grid size must be positive".into()));
        }
        let mut counts = [0usize; 3];
        for d in 0..3 {
            let cells = ((bounds_max[d] - bounds_min[d]) / grid_size).round();
            counts[d] = cells.to_usize().unwrap_or(0) + 1;
        }
        Self::new(bounds_min, bounds_max, counts)
    }

    pub fn bounds_min(&self) -> Vec3<T> {
        self.bounds_min
    }

    pub fn bounds_max(&self) -> Vec3<T> {
        self.bounds_max
    }

    pub fn node_counts(&self) -> [usize; 3] {
        self.node_counts
    }

    pub fn spacing(&self) -> Vec3<T> {
        self.spacing
    }

    /// Largest spacing over the three axes.
    pub fn max_spacing(&self) -> T {
        self.spacing[0].max(self.spacing[1]).max(self.spacing[2])
    }

    pub fn len(&self) -> usize {
        self.node_counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index with x fastest.
    #[inline]
    pub fn index(&self, ijk: [usize; 3]) -> usize {
        ijk[0] + self.node_counts[0] * (ijk[1] + self.node_counts[1] * ijk[2])
    }

    #[inline]
    pub fn ijk(&self, index: usize) -> [usize; 3] {
        let nx = self.node_counts[0];
        let ny = self.node_counts[1];
        [index % nx, (index / nx) % ny, index / (nx * ny)]
    }

    #[inline]
    pub fn coord(&self, ijk: [usize; 3]) -> Vec3<T> {
        std::array::from_fn(|d| self.bounds_min[d] + from_usize::<T>(ijk[d]) * self.spacing[d])
    }

    #[inline]
    pub fn coord_of(&self, index: usize) -> Vec3<T> {
        self.coord(self.ijk(index))
    }

    pub fn is_boundary(&self, ijk: [usize; 3]) -> bool {
        (0..3).any(|d| ijk[d] == 0 || ijk[d] + 1 == self.node_counts[d])
    }

    /// Node displaced by `offset`, or `None` outside the lattice.
    #[inline]
    pub fn offset(&self, ijk: [usize; 3], offset: [isize; 3]) -> Option<[usize; 3]> {
        let mut out = [0usize; 3];
        for d in 0..3 {
            let v = ijk[d] as isize + offset[d];
            if v < 0 || v >= self.node_counts[d] as isize {
                return None;
            }
            out[d] = v as usize;
        }
        Some(out)
    }

    #[inline]
    pub fn step(&self, ijk: [usize; 3], axis: usize, delta: isize) -> Option<[usize; 3]> {
        let mut off = [0isize; 3];
        off[axis] = delta;
        self.offset(ijk, off)
    }
}
