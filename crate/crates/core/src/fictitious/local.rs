//! Local interface systems on a single crossed meshline segment.
//!
//! For the segment `a → b = a + e_d` with phases A ≠ B the unknowns are the
//! extension of u_B to `a` and of u_A to `b` (three components each). The
//! six equations are the value jumps and the three combined derivative
//! conditions at the crossing. When a one-sided meshline stencil re-crosses
//! the interface, the node across is added as an extra unknown together with
//! the value jumps at that second crossing.

use crate::error::{FictitiousError, GeometryError, JumpError};
use crate::fictitious::dense::invert;
use crate::fictitious::functional::LinearFunctional;
use crate::fictitious::lagrange::lagrange_weights;
use crate::geometry::{Grid, IntersectionIndex, IntersectionPoint, Phase, PhaseMap};
use crate::jump::{
    combined_condition_rows, decode_column, elimination_coefficients, ranked_elimination_pairs, transformation_matrix,
    DerivativeSet, InterfaceModuli, JumpData, JumpMatrix, LocalFrame, SetAvailability, N_COLS,
};
use crate::materials::MaterialField;
use crate::scalar::{lit, Scalar, Vec3};

/// Largest accepted condition estimate of a local system.
pub const MAX_LOCAL_COND: f64 = 1e12;

/// Source of prescribed jump data at interface points.
pub trait JumpSource<T: Scalar>: Sync {
    fn jump(&self, point: &Vec3<T>, frame: &LocalFrame<T>) -> JumpData<T>;
    fn value_jump(&self, point: &Vec3<T>) -> Vec3<T>;
}

/// Everything a local solve reads.
pub struct LocalContext<'a, T: Scalar> {
    pub grid: &'a Grid<T>,
    pub phases: &'a PhaseMap,
    pub intersections: &'a IntersectionIndex<T>,
    pub materials: &'a MaterialField<T>,
    pub jumps: &'a dyn JumpSource<T>,
}

/// A value in a local stencil: a real grid value, or the extension of
/// phase `side` to `node` (a fictitious value).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StencilSlot {
    Node(usize),
    Fictitious(usize, Phase),
}

/// Three-point stencil along the meshline for one side; offsets are in
/// units of the spacing relative to the lower segment node.
#[derive(Debug, Clone, PartialEq)]
struct SideStencil {
    offsets: [isize; 3],
    slots: [StencilSlot; 3],
}

#[derive(Debug, Clone, PartialEq)]
struct AuxCrossing<T> {
    /// Position of the second crossing relative to the lower node, in units
    /// of the spacing.
    at: T,
    point: Vec3<T>,
    stencils: [(Phase, SideStencil); 2],
}

/// Which local scheme produced a segment solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalScheme {
    Central,
    SharpEdge,
}

/// Solution of one segment's local system.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSolution<T> {
    pub axis: usize,
    pub lower: usize,
    pub upper: usize,
    /// Extension of the upper node's phase to the lower node.
    pub at_lower: [LinearFunctional<T>; 3],
    /// Extension of the lower node's phase to the upper node.
    pub at_upper: [LinearFunctional<T>; 3],
    /// Extra fictitious values of the sharp-edge scheme.
    pub auxiliary: Vec<(usize, Phase, [LinearFunctional<T>; 3])>,
    pub cond: T,
    pub pair: (usize, usize),
    pub scheme: LocalScheme,
}

/// Weighted combination of stencil slots for one derivative set.
pub type SlotFunctional<T> = Vec<(StencilSlot, T)>;

struct Segment<'c, T: Scalar> {
    axis: usize,
    lower: usize,
    upper: usize,
    lower_ijk: [usize; 3],
    phase_lower: Phase,
    phase_upper: Phase,
    crossing: &'c IntersectionPoint<T>,
    stencil_lower: SideStencil,
    stencil_upper: SideStencil,
    aux: Vec<AuxCrossing<T>>,
    unknowns: Vec<(usize, Phase)>,
}

impl<'c, T: Scalar> Segment<'c, T> {
    fn stencil_for(&self, side: Phase) -> &SideStencil {
        if side == self.phase_lower {
            &self.stencil_lower
        } else {
            &self.stencil_upper
        }
    }
}

fn aux_crossing<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    axis: usize,
    seg_lower: usize,
    base_offset: isize,
) -> Result<(T, Vec3<T>), FictitiousError> {
    let p = ctx
        .intersections
        .get(axis, seg_lower)
        .ok_or(GeometryError::NoSignChange {
            axis,
            lower: seg_lower,
            upper: seg_lower,
        })?;
    Ok((lit::<T>(base_offset as f64) + p.fraction, p.position))
}

impl<'a, T: Scalar> LocalContext<'a, T> {
    fn node_at(&self, ijk: [usize; 3], axis: usize, delta: isize) -> Option<usize> {
        self.grid.step(ijk, axis, delta).map(|q| self.grid.index(q))
    }

    fn segment(&self, axis: usize, lower: usize) -> Result<Segment<'a, T>, FictitiousError> {
        let crossing = self.intersections.get(axis, lower).ok_or(GeometryError::NoSignChange {
            axis,
            lower,
            upper: lower,
        })?;
        let lower_ijk = self.grid.ijk(lower);
        let upper = crossing.upper;
        let pa = self.phases.phase(lower);
        let pb = self.phases.phase(upper);
        let before = self
            .node_at(lower_ijk, axis, -1)
            .ok_or(FictitiousError::OutsideDomain { node: lower })?;
        let after = self
            .node_at(lower_ijk, axis, 2)
            .ok_or(FictitiousError::OutsideDomain { node: upper })?;
        let mut unknowns = vec![(lower, pb), (upper, pa)];
        let mut aux = Vec::new();

        let before_slot = if self.phases.phase(before) == pa {
            StencilSlot::Node(before)
        } else {
            unknowns.push((before, pa));
            StencilSlot::Fictitious(before, pa)
        };
        let after_slot = if self.phases.phase(after) == pb {
            StencilSlot::Node(after)
        } else {
            unknowns.push((after, pb));
            StencilSlot::Fictitious(after, pb)
        };
        let stencil_lower = SideStencil {
            offsets: [-1, 0, 1],
            slots: [
                before_slot,
                StencilSlot::Node(lower),
                StencilSlot::Fictitious(upper, pa),
            ],
        };
        let stencil_upper = SideStencil {
            offsets: [0, 1, 2],
            slots: [StencilSlot::Fictitious(lower, pb), StencilSlot::Node(upper), after_slot],
        };
        if matches!(before_slot, StencilSlot::Fictitious(..)) {
            let (at, point) = aux_crossing(self, axis, before, -1)?;
            let other = SideStencil {
                offsets: [-1, 0, 1],
                slots: [
                    StencilSlot::Node(before),
                    StencilSlot::Fictitious(lower, pb),
                    StencilSlot::Node(upper),
                ],
            };
            aux.push(AuxCrossing {
                at,
                point,
                stencils: [(pa, stencil_lower.clone()), (pb, other)],
            });
        }
        if matches!(after_slot, StencilSlot::Fictitious(..)) {
            let (at, point) = aux_crossing(self, axis, upper, 1)?;
            let other = SideStencil {
                offsets: [0, 1, 2],
                slots: [
                    StencilSlot::Node(lower),
                    StencilSlot::Fictitious(upper, pa),
                    StencilSlot::Node(after),
                ],
            };
            aux.push(AuxCrossing {
                at,
                point,
                stencils: [(pb, stencil_upper.clone()), (pa, other)],
            });
        }
        Ok(Segment {
            axis,
            lower,
            upper,
            lower_ijk,
            phase_lower: pa,
            phase_upper: pb,
            crossing,
            stencil_lower,
            stencil_upper,
            aux,
            unknowns,
        })
    }

    fn in_phase(&self, ijk: [usize; 3], off: [isize; 3], side: Phase) -> Option<usize> {
        self.grid
            .offset(ijk, off)
            .map(|q| self.grid.index(q))
            .filter(|&q| self.phases.phase(q) == side)
    }

    /// Count of `side` nodes in the planes ±1, ±2 along `tangent` next to
    /// the crossing.
    fn availability_score(&self, seg: &Segment<'_, T>, tangent: usize, side: Phase) -> usize {
        let mut count = 0;
        for level in [-2isize, -1, 1, 2] {
            for w in -1isize..=2 {
                let mut off = [0isize; 3];
                off[tangent] = level;
                off[seg.axis] = w;
                if self.in_phase(seg.lower_ijk, off, side).is_some() {
                    count += 1;
                }
            }
        }
        count
    }

    /// 3×3 block for ∂/∂x_tangent at the crossing on `side`: three levels
    /// along the tangent, each interpolated along the meshline. Among the
    /// admissible blocks the one closest to the crossing is used.
    fn tangential_block(&self, seg: &Segment<'_, T>, tangent: usize, side: Phase) -> Option<SlotFunctional<T>> {
        let h = self.grid.spacing();
        let hd = h[seg.axis];
        let ht = h[tangent];
        let s = seg.crossing.fraction;
        let dist = |w: isize, level: isize| {
            let dx = (lit::<T>(w as f64) - s) * hd;
            let dy = lit::<T>(level as f64) * ht;
            (dx * dx + dy * dy).sqrt()
        };
        let base = seg.stencil_for(side);
        let base_weights = lagrange_weights(&base.offsets.map(|o| lit::<T>(o as f64)), s, 0).ok()?;
        let base_cost = base.offsets.iter().fold(T::zero(), |a, &o| a + dist(o, 0));

        let level_option = |level: isize| -> Option<(T, SlotFunctional<T>)> {
            let mut best: Option<(T, isize)> = None;
            for w0 in -2isize..=1 {
                let mut ok = true;
                let mut cost = T::zero();
                for k in 0..3 {
                    let mut off = [0isize; 3];
                    off[tangent] = level;
                    off[seg.axis] = w0 + k;
                    if self.in_phase(seg.lower_ijk, off, side).is_none() {
                        ok = false;
                        break;
                    }
                    cost = cost + dist(w0 + k, level);
                }
                if ok && best.is_none_or(|(c, _)| cost < c) {
                    best = Some((cost, w0));
                }
            }
            let (cost, w0) = best?;
            let xs = [0isize, 1, 2].map(|k| lit::<T>((w0 + k) as f64));
            let wts = lagrange_weights(&xs, s, 0).ok()?;
            let entries = (0..3)
                .map(|k| {
                    let mut off = [0isize; 3];
                    off[tangent] = level;
                    off[seg.axis] = w0 + k as isize;
                    let q = self.in_phase(seg.lower_ijk, off, side).expect("checked above");
                    (StencilSlot::Node(q), wts[k])
                })
                .collect();
            Some((cost, entries))
        };

        let mut levels: Vec<Option<(T, SlotFunctional<T>)>> = Vec::with_capacity(5);
        for level in -2isize..=2 {
            if level == 0 {
                let entries = (0..3).map(|k| (base.slots[k], base_weights[k])).collect();
                levels.push(Some((base_cost, entries)));
            } else {
                levels.push(level_option(level));
            }
        }
        let mut best: Option<(T, [isize; 3])> = None;
        for set in [[-2isize, -1, 0], [-1, 0, 1], [0, 1, 2]] {
            let mut cost = T::zero();
            let mut ok = true;
            for &l in &set {
                match &levels[(l + 2) as usize] {
                    Some((c, _)) => cost = cost + *c,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && best.is_none_or(|(c, _)| cost < c) {
                best = Some((cost, set));
            }
        }
        let (_, set) = best?;
        let xs = set.map(|l| lit::<T>(l as f64) * ht);
        let dw = lagrange_weights(&xs, T::zero(), 1).ok()?;
        let mut out = Vec::with_capacity(9);
        for (k, &l) in set.iter().enumerate() {
            let (_, entries) = levels[(l + 2) as usize].as_ref().expect("checked above");
            for &(slot, w) in entries {
                out.push((slot, dw[k] * w));
            }
        }
        Some(out)
    }

    /// Meshline derivative at the crossing on `side`.
    fn normal_line_derivative(&self, seg: &Segment<'_, T>, side: Phase) -> SlotFunctional<T> {
        let hd = self.grid.spacing()[seg.axis];
        let st = seg.stencil_for(side);
        let xs = st.offsets.map(|o| lit::<T>(o as f64) * hd);
        let w = lagrange_weights(&xs, seg.crossing.fraction * hd, 1).expect("distinct offsets");
        (0..3).map(|k| (st.slots[k], w[k])).collect()
    }

    fn moduli_at(&self, p: &Vec3<T>) -> InterfaceModuli<T> {
        let plus = self.materials.evaluate(p, Phase::Plus);
        let minus = self.materials.evaluate(p, Phase::Minus);
        InterfaceModuli {
            lambda_plus: plus.lambda,
            lambda_minus: minus.lambda,
            mu_plus: plus.mu,
            mu_minus: minus.mu,
        }
    }
}

/// One equation of a local system.
struct LocalRow<T> {
    unknown: Vec<T>,
    real: Vec<(usize, T)>,
    rhs: T,
}

impl<T: Scalar> LocalRow<T> {
    fn new(n: usize, rhs: T) -> Self {
        Self {
            unknown: vec![T::zero(); n],
            real: Vec::new(),
            rhs,
        }
    }

    fn add(&mut self, unknowns: &[(usize, Phase)], slot: StencilSlot, comp: usize, w: T) {
        match slot {
            StencilSlot::Node(q) => self.real.push((3 * q + comp, w)),
            StencilSlot::Fictitious(q, side) => {
                let k = unknowns
                    .iter()
                    .position(|&u| u == (q, side))
                    .expect("fictitious slot is a local unknown");
                self.unknown[3 * k + comp] = self.unknown[3 * k + comp] + w;
            }
        }
    }
}

fn push_value_jumps<T: Scalar>(
    rows: &mut Vec<LocalRow<T>>,
    unknowns: &[(usize, Phase)],
    at: T,
    stencils: [(Phase, &SideStencil); 2],
    jump: Vec3<T>,
) {
    let n = 3 * unknowns.len();
    for comp in 0..3 {
        let mut row = LocalRow::new(n, jump[comp]);
        for (side, st) in stencils {
            let sign = if side == Phase::Plus { T::one() } else { -T::one() };
            let w = lagrange_weights(&st.offsets.map(|o| lit::<T>(o as f64)), at, 0).expect("distinct offsets");
            for k in 0..3 {
                row.add(unknowns, st.slots[k], comp, sign * w[k]);
            }
        }
        rows.push(row);
    }
}

fn tangential_axes(axis: usize) -> [usize; 2] {
    match axis {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// Inputs shared by every elimination pair tried on one segment.
struct Prepared<'c, T: Scalar> {
    seg: Segment<'c, T>,
    jump_matrix: JumpMatrix<T>,
    jump: JumpData<T>,
    /// Derivative functionals indexed by derivative set (0-based).
    derivatives: [Option<SlotFunctional<T>>; 6],
    availability: [SetAvailability; 6],
}

fn prepare<'a, T: Scalar>(
    ctx: &LocalContext<'a, T>,
    axis: usize,
    lower: usize,
) -> Result<Prepared<'a, T>, FictitiousError> {
    let seg = ctx.segment(axis, lower)?;
    let info = seg.crossing.normal.ok_or_else(|| {
        let p = seg.crossing.position;
        GeometryError::DegenerateNormal {
            x: p[0].to_f64().unwrap_or(f64::NAN),
            y: p[1].to_f64().unwrap_or(f64::NAN),
            z: p[2].to_f64().unwrap_or(f64::NAN),
            magnitude: 0.0,
        }
    })?;
    let frame = transformation_matrix(info.theta, info.phi_angle);
    let point = seg.crossing.position;
    let jump_matrix = JumpMatrix::assemble(&frame, ctx.moduli_at(&point)).traction_scaled();
    let jump = ctx.jumps.jump(&point, &frame);

    let mut derivatives: [Option<SlotFunctional<T>>; 6] = Default::default();
    let mut availability = [SetAvailability {
        score: usize::MAX,
        evaluable: true,
    }; 6];
    for side in [Phase::Plus, Phase::Minus] {
        let set = DerivativeSet { axis, side };
        derivatives[set.index() - 1] = Some(ctx.normal_line_derivative(&seg, side));
        for t in tangential_axes(axis) {
            let set = DerivativeSet { axis: t, side };
            let block = ctx.tangential_block(&seg, t, side);
            availability[set.index() - 1] = SetAvailability {
                score: ctx.availability_score(&seg, t, side),
                evaluable: block.is_some(),
            };
            derivatives[set.index() - 1] = block;
        }
    }
    Ok(Prepared {
        seg,
        jump_matrix,
        jump,
        derivatives,
        availability,
    })
}

fn solve_with_pair<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    prep: &Prepared<'_, T>,
    pair: (usize, usize),
) -> Result<SegmentSolution<T>, FictitiousError> {
    let seg = &prep.seg;
    let elim = elimination_coefficients(&prep.jump_matrix, pair.0, pair.1)?;
    let cond = combined_condition_rows(&elim, &prep.jump);
    let unknowns = &seg.unknowns;
    let n = 3 * unknowns.len();
    let mut rows: Vec<LocalRow<T>> = Vec::with_capacity(n);

    push_value_jumps(
        &mut rows,
        unknowns,
        seg.crossing.fraction,
        [
            (seg.phase_lower, &seg.stencil_lower),
            (seg.phase_upper, &seg.stencil_upper),
        ],
        cond.value_jump,
    );
    for i in 0..3 {
        let mut row = LocalRow::new(n, cond.rhs[i]);
        for col in 0..N_COLS {
            let coef = cond.rows[i][col];
            if coef == T::zero() {
                continue;
            }
            let (comp, axis, side) = decode_column(col);
            let set = DerivativeSet { axis, side };
            let f = prep.derivatives[set.index() - 1]
                .as_ref()
                .ok_or(FictitiousError::StencilUnavailable { node: seg.lower, axis })?;
            for &(slot, w) in f {
                row.add(unknowns, slot, comp, coef * w);
            }
        }
        rows.push(row);
    }
    for aux in &seg.aux {
        let jump = ctx.jumps.value_jump(&aux.point);
        push_value_jumps(
            &mut rows,
            unknowns,
            aux.at,
            [
                (aux.stencils[0].0, &aux.stencils[0].1),
                (aux.stencils[1].0, &aux.stencils[1].1),
            ],
            jump,
        );
    }
    debug_assert_eq!(rows.len(), n);

    let mut a = Vec::with_capacity(n * n);
    for r in &rows {
        a.extend_from_slice(&r.unknown);
    }
    let inv = invert(&a, n)?;
    if !(inv.cond <= lit(MAX_LOCAL_COND)) {
        return Err(FictitiousError::SingularLocalSystem {
            cond: inv.cond.to_f64().unwrap_or(f64::INFINITY),
        });
    }
    // Right-hand sides as functionals of the real grid values.
    let rhs: Vec<LinearFunctional<T>> = rows
        .iter()
        .map(|r| {
            let mut f = LinearFunctional::constant_only(r.rhs);
            for &(d, w) in &r.real {
                f.push(d, -w);
            }
            f
        })
        .collect();
    let value = |j: usize| {
        let mut f = LinearFunctional::zero();
        for (i, ri) in rhs.iter().enumerate() {
            let w = inv.inverse[j * n + i];
            if w != T::zero() {
                f.add_scaled(ri, w);
            }
        }
        f.compacted()
    };
    let block = |k: usize| -> [LinearFunctional<T>; 3] { std::array::from_fn(|c| value(3 * k + c)) };
    let auxiliary = (2..unknowns.len())
        .map(|k| (unknowns[k].0, unknowns[k].1, block(k)))
        .collect();
    Ok(SegmentSolution {
        axis: seg.axis,
        lower: seg.lower,
        upper: seg.upper,
        at_lower: block(0),
        at_upper: block(1),
        auxiliary,
        cond: inv.cond,
        pair,
        scheme: if seg.aux.is_empty() {
            LocalScheme::Central
        } else {
            LocalScheme::SharpEdge
        },
    })
}

/// Solves the local system of the crossed segment `lower → lower + e_axis`
/// over the viable elimination pairs.
pub fn solve_segment<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    axis: usize,
    lower: usize,
) -> Result<SegmentSolution<T>, FictitiousError> {
    let prep = prepare(ctx, axis, lower)?;
    let pairs = ranked_elimination_pairs(axis, &prep.availability);
    if pairs.is_empty() {
        return Err(JumpError::NoViablePair { axis }.into());
    }
    // Every viable pair is solved and the one with the smallest extension
    // weights kept; ties go to the better-ranked pair.
    let mut best: Option<(T, SegmentSolution<T>)> = None;
    let mut last = None;
    for pair in pairs {
        match solve_with_pair(ctx, &prep, pair) {
            Ok(s) => {
                let w = extension_weight(&s);
                if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                    best = Some((w, s));
                }
            }
            Err(e) => last = Some(e),
        }
    }
    match best {
        Some((_, s)) => Ok(s),
        None => Err(last.expect("at least one pair was tried")),
    }
}

/// Largest absolute weight sum over the grid values of any extension in a
/// segment solution.
fn extension_weight<T: Scalar>(s: &SegmentSolution<T>) -> T {
    let norm = |f: &LinearFunctional<T>| f.terms().iter().fold(T::zero(), |a, &(_, w)| a + w.abs());
    s.at_lower
        .iter()
        .chain(s.at_upper.iter())
        .chain(s.auxiliary.iter().flat_map(|(_, _, v)| v.iter()))
        .fold(T::zero(), |a, f| a.max(norm(f)))
}

/// Local solve with a caller-chosen elimination pair.
pub fn solve_segment_with_pair<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    axis: usize,
    lower: usize,
    pair: (usize, usize),
) -> Result<SegmentSolution<T>, FictitiousError> {
    let prep = prepare(ctx, axis, lower)?;
    solve_with_pair(ctx, &prep, pair)
}

/// Standard six-unknown scheme; fails if the segment needs the sharp-edge
/// treatment.
pub fn central_fictitious_pair<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    axis: usize,
    lower: usize,
) -> Result<SegmentSolution<T>, FictitiousError> {
    let s = solve_segment(ctx, axis, lower)?;
    if s.scheme != LocalScheme::Central {
        return Err(FictitiousError::StencilUnavailable { node: lower, axis });
    }
    Ok(s)
}

/// Sharp-edge scheme: the one-sided stencil re-crosses the interface and the
/// node beyond the second crossing becomes an extra unknown.
pub fn sharp_edge_fictitious_triple<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    axis: usize,
    lower: usize,
) -> Result<SegmentSolution<T>, FictitiousError> {
    let s = solve_segment(ctx, axis, lower)?;
    if s.scheme != LocalScheme::SharpEdge {
        return Err(FictitiousError::StencilUnavailable { node: lower, axis });
    }
    Ok(s)
}

/// Interfacial derivative ∂/∂x_axis on `side` at the crossing of segment
/// `(meshline_axis, lower)`, as a combination of grid and fictitious slots.
pub fn interfacial_derivative_stencil<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    meshline_axis: usize,
    lower: usize,
    axis: usize,
    side: Phase,
) -> Result<SlotFunctional<T>, FictitiousError> {
    let seg = ctx.segment(meshline_axis, lower)?;
    if axis == meshline_axis {
        return Ok(ctx.normal_line_derivative(&seg, side));
    }
    ctx.tangential_block(&seg, axis, side)
        .ok_or(FictitiousError::StencilUnavailable { node: lower, axis })
}

/// Availability of the six derivative sets at a segment's crossing.
pub fn stencil_availability<T: Scalar>(
    ctx: &LocalContext<'_, T>,
    axis: usize,
    lower: usize,
) -> Result<[SetAvailability; 6], FictitiousError> {
    Ok(prepare(ctx, axis, lower)?.availability)
}
