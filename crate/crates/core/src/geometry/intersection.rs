use std::collections::HashMap;

use super::grid::Grid;
use super::phase::{Phase, PhaseMap};
use super::shape::{angles_from_gradient, InterfaceShape, NormalInfo};
use crate::error::GeometryError;
use crate::scalar::{lit, Scalar, Vec3};

pub const BISECTION_MAX_ITER: usize = 200;

/// Crossing of the interface with the meshline segment between two
/// adjacent nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionPoint<T> {
    pub position: Vec3<T>,
    pub axis: usize,
    /// Flat index of the bracketing node with the smaller index.
    pub lower: usize,
    pub upper: usize,
    /// Distance from the lower node in units of the axis spacing, in (0, 1).
    pub fraction: T,
    pub side_of_lower_node: Phase,
    /// `None` when the interface gradient degenerates at the root.
    pub normal: Option<NormalInfo<T>>,
}

impl<T: Scalar> IntersectionPoint<T> {
    pub fn theta(&self) -> Option<T> {
        self.normal.map(|n| n.theta)
    }

    pub fn phi_angle(&self) -> Option<T> {
        self.normal.map(|n| n.phi_angle)
    }
}

/// Bracketed bisection for the interface crossing on segment `lower → lower + e_axis`.
pub fn locate_crossing<T: Scalar>(
    grid: &Grid<T>,
    shape: &InterfaceShape<T>,
    phases: &PhaseMap,
    lower: usize,
    axis: usize,
) -> Result<IntersectionPoint<T>, GeometryError> {
    let ijk = grid.ijk(lower);
    let upper_ijk = grid.step(ijk, axis, 1).ok_or(GeometryError::NoSignChange {
        axis,
        lower,
        upper: lower,
    })?;
    let upper = grid.index(upper_ijk);
    let lower_phase = phases.phase(lower);
    if phases.phase(upper) == lower_phase {
        return Err(GeometryError::NoSignChange { axis, lower, upper });
    }
    let start = grid.coord(ijk);
    let h = grid.spacing()[axis];
    let at = |t: T| {
        let mut p = start;
        p[axis] = p[axis] + t * h;
        p
    };
    let (mut lo, mut hi) = (T::zero(), T::one());
    let f_lo = shape.value(&at(lo));
    let f_hi = shape.value(&at(hi));
    let tol = lit::<T>(1e-10) * T::one().max(f_lo.abs()).max(f_hi.abs());
    let half = lit::<T>(0.5);
    let mut t = half;
    for _ in 0..BISECTION_MAX_ITER {
        t = (lo + hi) * half;
        if t <= lo || t >= hi {
            break;
        }
        let f = shape.value(&at(t));
        if f == T::zero() {
            break;
        }
        let mid_phase = if f > T::zero() { Phase::Plus } else { Phase::Minus };
        if mid_phase == lower_phase {
            lo = t;
        } else {
            hi = t;
        }
        if hi - lo <= T::epsilon() && f.abs() <= tol {
            break;
        }
    }
    let floor = lit::<T>(1e-12);
    let fraction = t.max(floor).min(T::one() - floor);
    let position = at(fraction);
    let normal = angles_from_gradient(&shape.gradient(&position), &position).ok();
    Ok(IntersectionPoint {
        position,
        axis,
        lower,
        upper,
        fraction,
        side_of_lower_node: lower_phase,
        normal,
    })
}

fn for_each_crossing<T: Scalar>(grid: &Grid<T>, phases: &PhaseMap, mut visit: impl FnMut(usize, usize)) {
    for axis in 0..3 {
        for idx in 0..grid.len() {
            let ijk = grid.ijk(idx);
            if let Some(q) = grid.step(ijk, axis, 1) {
                if phases.phase(grid.index(q)) != phases.phase(idx) {
                    visit(axis, idx);
                }
            }
        }
    }
}

/// Every interface crossing, ordered by axis then lower node index.
///
/// Fails with `DegenerateNormal` when the gradient vanishes at a root.
pub fn find_intersections<T: Scalar>(
    grid: &Grid<T>,
    shape: &InterfaceShape<T>,
    phases: &PhaseMap,
) -> Result<Vec<IntersectionPoint<T>>, GeometryError> {
    let mut out = Vec::new();
    let mut err = None;
    for_each_crossing(grid, phases, |axis, idx| {
        if err.is_some() {
            return;
        }
        match locate_crossing(grid, shape, phases, idx, axis) {
            Ok(p) if p.normal.is_some() => out.push(p),
            Ok(p) => {
                let g = shape.gradient(&p.position);
                err = Some(GeometryError::DegenerateNormal {
                    x: p.position[0].to_f64().unwrap_or(f64::NAN),
                    y: p.position[1].to_f64().unwrap_or(f64::NAN),
                    z: p.position[2].to_f64().unwrap_or(f64::NAN),
                    magnitude: crate::scalar::norm(&g).to_f64().unwrap_or(f64::NAN),
                })
            }
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Lookup of crossings by `(axis, lower node)`; degenerate normals are kept
/// with `normal == None` so the caller can fall back.
#[derive(Debug, Clone)]
pub struct IntersectionIndex<T> {
    points: Vec<IntersectionPoint<T>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl<T: Scalar> IntersectionIndex<T> {
    pub fn build(grid: &Grid<T>, shape: &InterfaceShape<T>, phases: &PhaseMap) -> Result<Self, GeometryError> {
        let mut points = Vec::new();
        let mut err = None;
        for_each_crossing(grid, phases, |axis, idx| {
            if err.is_some() {
                return;
            }
            match locate_crossing(grid, shape, phases, idx, axis) {
                Ok(p) => points.push(p),
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let lookup = points.iter().enumerate().map(|(i, p)| ((p.axis, p.lower), i)).collect();
        Ok(Self { points, lookup })
    }

    pub fn points(&self) -> &[IntersectionPoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, axis: usize, lower: usize) -> Option<&IntersectionPoint<T>> {
        self.lookup.get(&(axis, lower)).map(|&i| &self.points[i])
    }

    pub fn position_of(&self, axis: usize, lower: usize) -> Option<usize> {
        self.lookup.get(&(axis, lower)).copied()
    }
}
