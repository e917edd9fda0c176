//! Fictitious values for every interface-crossing reference of the PDE
//! stencils.
//!
//! Central references (axis neighbours) are keyed by the crossed segment;
//! cross references (diagonal neighbours) by the (consumer, target) pair.

use std::collections::HashMap;

use crate::error::FictitiousError;
use crate::fictitious::functional::LinearFunctional;
use crate::fictitious::lagrange::EXTRAPOLATION_WEIGHTS;
use crate::fictitious::local::{solve_segment, LocalContext, LocalScheme};
use crate::geometry::{Phase, PLANES};
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtrapolationKind {
    /// Three real grid values.
    I,
    /// Real and fictitious values mixed.
    II,
    /// Three fictitious values.
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Central,
    SharpEdge,
    Disassociated,
    Extrapolated(ExtrapolationKind),
    NeighborCombination,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Central => "central",
            Scheme::SharpEdge => "sharp_edge",
            Scheme::Disassociated => "disassociated",
            Scheme::Extrapolated(ExtrapolationKind::I) => "extrapolated_I",
            Scheme::Extrapolated(ExtrapolationKind::II) => "extrapolated_II",
            Scheme::Extrapolated(ExtrapolationKind::III) => "extrapolated_III",
            Scheme::NeighborCombination => "neighbor_combination",
        }
    }

    fn is_local_solve(self) -> bool {
        matches!(self, Scheme::Central | Scheme::SharpEdge)
    }
}

/// Extension of phase `side` to `node`, one functional per component.
#[derive(Debug, Clone, PartialEq)]
pub struct FictitiousValue<T> {
    pub node: usize,
    pub side: Phase,
    pub values: [LinearFunctional<T>; 3],
    pub scheme: Scheme,
    /// Condition estimate of the local solve the value came from; infinite
    /// for schemes without one.
    pub cond: T,
}

impl<T: Scalar> FictitiousValue<T> {
    fn retagged(&self, scheme: Scheme) -> Self {
        let mut v = self.clone();
        v.scheme = scheme;
        v
    }
}

/// Key of a crossed segment end: `(axis, lower node, at_upper)`.
pub type SegmentEnd = (usize, usize, bool);

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TableStats {
    pub segments: usize,
    pub failed_local_solves: usize,
    pub central_by_scheme: Vec<(Scheme, usize)>,
    pub cross_by_scheme: Vec<(Scheme, usize)>,
}

#[derive(Debug, Clone, Default)]
pub struct FictitiousTable<T> {
    central: HashMap<SegmentEnd, FictitiousValue<T>>,
    cross: HashMap<(usize, usize), FictitiousValue<T>>,
    pub stats: TableStats,
}

/// Axis search order for disassociation and extrapolation.
const AXIS_ORDER: [usize; 3] = [2, 0, 1];

fn count_into(list: &mut Vec<(Scheme, usize)>, s: Scheme) {
    match list.iter_mut().find(|(k, _)| *k == s) {
        Some((_, n)) => *n += 1,
        None => list.push((s, 1)),
    }
}

impl<T: Scalar> FictitiousTable<T> {
    pub fn new() -> Self {
        Self {
            central: HashMap::new(),
            cross: HashMap::new(),
            stats: TableStats::default(),
        }
    }

    /// Value of the consumer's phase at its axis neighbour `target`.
    pub fn central(&self, consumer: usize, target: usize, axis: usize) -> Option<&FictitiousValue<T>> {
        let key = (axis, consumer.min(target), target > consumer);
        self.central.get(&key)
    }

    pub fn cross(&self, consumer: usize, target: usize) -> Option<&FictitiousValue<T>> {
        self.cross.get(&(consumer, target))
    }

    pub fn insert_central(&mut self, key: SegmentEnd, value: FictitiousValue<T>) {
        self.central.insert(key, value);
    }

    pub fn insert_cross(&mut self, consumer: usize, target: usize, value: FictitiousValue<T>) {
        self.cross.insert((consumer, target), value);
    }

    pub fn central_len(&self) -> usize {
        self.central.len()
    }

    pub fn cross_len(&self) -> usize {
        self.cross.len()
    }

    /// Central entries sorted by key.
    pub fn central_entries(&self) -> Vec<(SegmentEnd, &FictitiousValue<T>)> {
        let mut v: Vec<_> = self.central.iter().map(|(k, e)| (*k, e)).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    /// Cross entries sorted by key.
    pub fn cross_entries(&self) -> Vec<((usize, usize), &FictitiousValue<T>)> {
        let mut v: Vec<_> = self.cross.iter().map(|(k, e)| (*k, e)).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    /// Central extensions of `side` to `node` from any crossed segment at
    /// that node, in axis order z, x, y.
    fn central_candidates<'s>(
        &'s self,
        ctx: &LocalContext<'_, T>,
        node: usize,
        side: Phase,
        exclude: Option<SegmentEnd>,
        solved_only: bool,
    ) -> Vec<(SegmentEnd, &'s FictitiousValue<T>)> {
        let ijk = ctx.grid.ijk(node);
        let mut out = Vec::new();
        for axis in AXIS_ORDER {
            for delta in [-1isize, 1] {
                let Some(q) = ctx.grid.step(ijk, axis, delta) else {
                    continue;
                };
                let q = ctx.grid.index(q);
                if ctx.phases.phase(q) != side {
                    continue;
                }
                let key = (axis, node.min(q), node > q);
                if Some(key) == exclude {
                    continue;
                }
                if let Some(v) = self.central.get(&key) {
                    if !solved_only || v.scheme.is_local_solve() {
                        out.push((key, v));
                    }
                }
            }
        }
        out
    }

    /// Reuses an extension of `side` to `node` computed along another
    /// direction, preferring the smallest condition number.
    pub fn disassociate(
        &self,
        ctx: &LocalContext<'_, T>,
        node: usize,
        side: Phase,
        exclude: Option<SegmentEnd>,
    ) -> Result<FictitiousValue<T>, FictitiousError> {
        self.best_central(ctx, node, side, exclude, false)
            .map(|v| v.retagged(Scheme::Disassociated))
            .ok_or(FictitiousError::NothingToDisassociate { node })
    }

    fn best_central(
        &self,
        ctx: &LocalContext<'_, T>,
        node: usize,
        side: Phase,
        exclude: Option<SegmentEnd>,
        solved_only: bool,
    ) -> Option<&FictitiousValue<T>> {
        let mut best: Option<&FictitiousValue<T>> = None;
        for (_, v) in self.central_candidates(ctx, node, side, exclude, solved_only) {
            if best.is_none_or(|b| v.cond < b.cond) {
                best = Some(v);
            }
        }
        best
    }

    /// Value of phase `side` at `node`: the grid value if the node is in
    /// that phase, else its best central extension.
    fn side_value(
        &self,
        ctx: &LocalContext<'_, T>,
        node: usize,
        side: Phase,
    ) -> Option<([LinearFunctional<T>; 3], bool)> {
        if ctx.phases.phase(node) == side {
            return Some((std::array::from_fn(|c| LinearFunctional::dof(3 * node + c)), false));
        }
        self.best_central(ctx, node, side, None, false)
            .map(|v| (v.values.clone(), true))
    }
}

fn extrapolate<T: Scalar>(values: &[[LinearFunctional<T>; 3]; 3]) -> [LinearFunctional<T>; 3] {
    std::array::from_fn(|c| {
        let mut f = LinearFunctional::zero();
        for k in 0..3 {
            f.add_scaled(&values[k][c], lit(EXTRAPOLATION_WEIGHTS[k]));
        }
        f.compacted()
    })
}

/// Quadratic extrapolation of phase `side` to `target` from real nodes
/// along one axis direction.
fn extrapolate_real<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    target: usize,
    side: Phase,
    axis: usize,
    delta: isize,
) -> Option<[LinearFunctional<T>; 3]> {
    let ijk = ctx.grid.ijk(target);
    let mut vals: Vec<[LinearFunctional<T>; 3]> = Vec::with_capacity(3);
    for k in 1..=3 {
        let q = ctx.grid.step(ijk, axis, delta * k)?;
        let q = ctx.grid.index(q);
        if ctx.phases.phase(q) != side {
            return None;
        }
        vals.push(std::array::from_fn(|c| LinearFunctional::dof(3 * q + c)));
    }
    let vals: [[LinearFunctional<T>; 3]; 3] = vals.try_into().ok()?;
    Some(extrapolate(&vals))
}

/// Quadratic extrapolation of phase `side` to `target` from the three
/// values at target + k·step, k = 1, 2, 3, grid or fictitious, with the
/// count of fictitious ones.
fn mixed_line<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    table: &FictitiousTable<T>,
    target: usize,
    side: Phase,
    step: [isize; 3],
) -> Option<(usize, [LinearFunctional<T>; 3])> {
    let tijk = ctx.grid.ijk(target);
    let mut vals = Vec::with_capacity(3);
    let mut fict = 0;
    for k in 1..=3 {
        let q = ctx.grid.offset(tijk, step.map(|s| s * k))?;
        let (v, is_fict) = table.side_value(ctx, ctx.grid.index(q), side)?;
        fict += usize::from(is_fict);
        vals.push(v);
    }
    let vals: [[LinearFunctional<T>; 3]; 3] = vals.try_into().ok()?;
    Some((fict, extrapolate(&vals)))
}

/// The axis line with the fewest fictitious values.
fn best_axis_line<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    table: &FictitiousTable<T>,
    target: usize,
    side: Phase,
) -> Option<(usize, [LinearFunctional<T>; 3])> {
    let mut best: Option<(usize, [LinearFunctional<T>; 3])> = None;
    for axis in AXIS_ORDER {
        for delta in [-1isize, 1] {
            let mut step = [0isize; 3];
            step[axis] = delta;
            if let Some((fict, v)) = mixed_line(ctx, table, target, side, step) {
                if best.as_ref().is_none_or(|(f, _)| fict < *f) {
                    best = Some((fict, v));
                }
            }
        }
    }
    best
}

fn extrapolated<T: Scalar>(
    target: usize,
    side: Phase,
    fict: usize,
    values: [LinearFunctional<T>; 3],
) -> FictitiousValue<T> {
    let kind = match fict {
        0 => ExtrapolationKind::I,
        3 => ExtrapolationKind::III,
        _ => ExtrapolationKind::II,
    };
    FictitiousValue {
        node: target,
        side,
        values,
        scheme: Scheme::Extrapolated(kind),
        cond: T::infinity(),
    }
}

/// Fallback when a segment's local solve fails: disassociation, then
/// extrapolation from real nodes (meshline direction first), then from
/// mixed lines.
fn central_fallback<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    table: &FictitiousTable<T>,
    key: SegmentEnd,
    consumer: usize,
    target: usize,
) -> Result<FictitiousValue<T>, FictitiousError> {
    let side = ctx.phases.phase(consumer);
    if let Some(v) = table.best_central(ctx, target, side, Some(key), true) {
        return Ok(v.retagged(Scheme::Disassociated));
    }
    let (axis, _, at_upper) = key;
    let toward_consumer: isize = if at_upper { -1 } else { 1 };
    let mut dirs = vec![(axis, toward_consumer)];
    for a in AXIS_ORDER {
        for d in [-1isize, 1] {
            if (a, d) != (axis, toward_consumer) {
                dirs.push((a, d));
            }
        }
    }
    for (a, d) in dirs {
        if let Some(values) = extrapolate_real(ctx, target, side, a, d) {
            return Ok(extrapolated(target, side, 0, values));
        }
    }
    // Lines through already extended values, then in-plane diagonals.
    if let Some((fict, values)) = best_axis_line(ctx, table, target, side) {
        return Ok(extrapolated(target, side, fict, values));
    }
    let mut best: Option<(usize, [LinearFunctional<T>; 3])> = None;
    for &(a, b) in PLANES.iter() {
        for sa in [-1isize, 1] {
            for sb in [-1isize, 1] {
                let mut step = [0isize; 3];
                step[a] = sa;
                step[b] = sb;
                if let Some((fict, v)) = mixed_line(ctx, table, target, side, step) {
                    if best.as_ref().is_none_or(|(f, _)| fict < *f) {
                        best = Some((fict, v));
                    }
                }
            }
        }
    }
    if let Some((fict, values)) = best {
        return Ok(extrapolated(target, side, fict, values));
    }
    Err(FictitiousError::Unresolvable { node: target, consumer })
}

/// Fictitious value for the diagonal reference `consumer → target` in a
/// coordinate plane: disassociation, then extrapolation along an axis or
/// the diagonal, then neighbour combination V(p+σ₁e₁) + V(p+σ₂e₂) − u(p).
pub fn cross_fictitious<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    table: &FictitiousTable<T>,
    consumer: usize,
    target: usize,
) -> Result<FictitiousValue<T>, FictitiousError> {
    let side = ctx.phases.phase(consumer);
    if let Ok(v) = table.disassociate(ctx, target, side, None) {
        return Ok(v);
    }

    let tijk = ctx.grid.ijk(target);
    let pijk = ctx.grid.ijk(consumer);
    let mut best = best_axis_line(ctx, table, target, side);
    // Along the diagonal back through the consumer, which stays inside
    // thin wedges where both axis lines leave the phase.
    if best.is_none() {
        best = mixed_line(
            ctx,
            table,
            target,
            side,
            std::array::from_fn(|d| pijk[d] as isize - tijk[d] as isize),
        );
    }
    if let Some((fict, values)) = best {
        return Ok(extrapolated(target, side, fict, values));
    }

    let mut axes = Vec::with_capacity(2);
    for d in 0..3 {
        let off = tijk[d] as isize - pijk[d] as isize;
        if off != 0 {
            axes.push((d, off));
        }
    }
    if axes.len() == 2 {
        let mut values: [LinearFunctional<T>; 3] = std::array::from_fn(|c| {
            let mut f = LinearFunctional::zero();
            f.push(3 * consumer + c, -T::one());
            f
        });
        let mut ok = true;
        for &(d, off) in &axes {
            let Some(q) = ctx.grid.step(pijk, d, off) else {
                ok = false;
                break;
            };
            let q = ctx.grid.index(q);
            let v = if ctx.phases.phase(q) == side {
                Some(std::array::from_fn(|c| LinearFunctional::dof(3 * q + c)))
            } else {
                table.central(consumer, q, d).map(|e| e.values.clone())
            };
            match v {
                Some(v) => {
                    for c in 0..3 {
                        values[c].add_scaled(&v[c], T::one());
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            for v in values.iter_mut() {
                v.compact();
            }
            return Ok(FictitiousValue {
                node: target,
                side,
                values,
                scheme: Scheme::NeighborCombination,
                cond: T::infinity(),
            });
        }
    }
    Err(FictitiousError::Unresolvable { node: target, consumer })
}

/// Builds all fictitious values: local solves on every crossed segment,
/// fallbacks for failed solves, then the cross-derivative references of
/// every interior node.
pub fn build_fictitious_table<T: Scalar>(ctx: &LocalContext<'_, T>) -> Result<FictitiousTable<T>, FictitiousError> {
    let mut table = FictitiousTable::new();
    let mut failed: Vec<(usize, usize, usize)> = Vec::new();
    let grid = ctx.grid;
    for p in ctx.intersections.points() {
        table.stats.segments += 1;
        match solve_segment(ctx, p.axis, p.lower) {
            Ok(sol) => {
                let scheme = match sol.scheme {
                    LocalScheme::Central => Scheme::Central,
                    LocalScheme::SharpEdge => Scheme::SharpEdge,
                };
                let pl = ctx.phases.phase(p.lower);
                let pu = ctx.phases.phase(p.upper);
                table.insert_central(
                    (p.axis, p.lower, false),
                    FictitiousValue {
                        node: p.lower,
                        side: pu,
                        values: sol.at_lower,
                        scheme,
                        cond: sol.cond,
                    },
                );
                table.insert_central(
                    (p.axis, p.lower, true),
                    FictitiousValue {
                        node: p.upper,
                        side: pl,
                        values: sol.at_upper,
                        scheme,
                        cond: sol.cond,
                    },
                );
            }
            Err(_) => {
                table.stats.failed_local_solves += 1;
                failed.push((p.axis, p.lower, p.upper));
            }
        }
    }
    let mut fallbacks = Vec::new();
    for &(axis, lower, upper) in &failed {
        for (at_upper, consumer, target) in [(false, upper, lower), (true, lower, upper)] {
            if grid.is_boundary(grid.ijk(consumer)) {
                continue;
            }
            let key = (axis, lower, at_upper);
            let v = central_fallback(ctx, &table, key, consumer, target)?;
            fallbacks.push((key, v));
        }
    }
    for (key, v) in fallbacks {
        table.insert_central(key, v);
    }

    for p in 0..grid.len() {
        let pijk = grid.ijk(p);
        if grid.is_boundary(pijk) {
            continue;
        }
        let side = ctx.phases.phase(p);
        for (plane, &(a, b)) in PLANES.iter().enumerate() {
            if !ctx.phases.cross_irregular(p, plane) {
                continue;
            }
            for sa in [-1isize, 1] {
                for sb in [-1isize, 1] {
                    let mut off = [0isize; 3];
                    off[a] = sa;
                    off[b] = sb;
                    let q = grid.index(grid.offset(pijk, off).expect("interior node"));
                    if ctx.phases.phase(q) == side {
                        continue;
                    }
                    let v = cross_fictitious(ctx, &table, p, q)?;
                    table.insert_cross(p, q, v);
                }
            }
        }
    }

    let mut central_by = Vec::new();
    for (_, v) in table.central_entries() {
        count_into(&mut central_by, v.scheme);
    }
    let mut cross_by = Vec::new();
    for (_, v) in table.cross_entries() {
        count_into(&mut cross_by, v.scheme);
    }
    table.stats.central_by_scheme = central_by;
    table.stats.cross_by_scheme = cross_by;
    Ok(table)
}
