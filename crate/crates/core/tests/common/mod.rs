//! Fixtures and oracle checks shared by the property and acceptance tests.
//! Each check returns `Err` with a one-line reason on failure.

#![allow(dead_code)]

use std::sync::Arc;

use mib_elastic::fictitious::{
    cross_fictitious, lagrange_weights, solve_segment, FictitiousTable, FictitiousValue, LinearFunctional,
    LocalContext, LocalScheme, Scheme,
};
use mib_elastic::field::ScalarExpr;
use mib_elastic::geometry::{classify_nodes, IntersectionIndex, Phase, PhaseMap};
use mib_elastic::harness::{
    build_grid, discretize, manufactured_case, sample_exact, truncation_error, GridSpec, CATALOG,
};
use mib_elastic::jump::{
    elimination_coefficients, ranked_elimination_pairs, transformation_matrix, InterfaceModuli, JumpMatrix,
    SetAvailability,
};
use mib_elastic::problem::InterfaceProblem;
use mib_elastic::Grid;
use mib_elastic::{InterfaceShape, ManufacturedProblem};

pub type Check = Result<(), String>;

/// Small deterministic generator so the acceptance checks do not depend on
/// the proptest runner.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407))
    }

    pub fn unit(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

pub fn order(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (coarse / fine).ln() / ratio.ln()
}

/// Ex1 C1 data with its sphere replaced by `shape`.
pub fn problem_with_shape(shape: InterfaceShape) -> ManufacturedProblem {
    let mut p = manufactured_case::<f64>(1, 1).expect("catalog entry");
    p.problem.shape = shape;
    p
}

/// A grid of `2m+1` nodes per axis and spacing `h` centred on `center`,
/// with its phases and crossings.
pub struct Patch {
    pub problem: ManufacturedProblem,
    pub grid: Grid,
    pub phases: PhaseMap,
    pub intersections: IntersectionIndex<f64>,
    pub exact: Vec<f64>,
}

impl Patch {
    pub fn new(problem: ManufacturedProblem, center: [f64; 3], h: f64, m: usize) -> Self {
        let half = h * m as f64;
        let grid = Grid::new(center.map(|c| c - half), center.map(|c| c + half), [2 * m + 1; 3]).expect("grid");
        let phases = classify_nodes(&grid, &problem.problem.shape);
        let intersections = IntersectionIndex::build(&grid, &problem.problem.shape, &phases).expect("crossings");
        let exact = sample_exact(&problem, &grid, &phases);
        Self {
            problem,
            grid,
            phases,
            intersections,
            exact,
        }
    }

    pub fn ctx(&self) -> LocalContext<'_, f64> {
        LocalContext {
            grid: &self.grid,
            phases: &self.phases,
            intersections: &self.intersections,
            materials: &self.problem.problem.materials,
            jumps: &self.problem.problem,
        }
    }

    pub fn extension_error(&self, node: usize, side: Phase, values: &[LinearFunctional<f64>; 3]) -> f64 {
        let u = self.problem.problem.displacement(&self.grid.coord_of(node), side);
        (0..3)
            .map(|c| (values[c].evaluate(&self.exact) - u[c]).abs())
            .fold(0.0, f64::max)
    }

    pub fn near_center(&self, node: usize, reach: usize) -> bool {
        let m = self.grid.node_counts()[0] / 2;
        self.grid.ijk(node).iter().all(|&i| i.abs_diff(m) <= reach)
    }
}

pub fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|x| x / n)
}

pub fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub const PATCH_CENTER: [f64; 3] = [0.7, -0.4, 0.5];

/// Oblique plane through `PATCH_CENTER + h·shift`; the geometry relative to
/// the grid is the same at every `h`.
pub fn plane_shape(h: f64) -> InterfaceShape {
    let n = unit([1.0, 0.6, 0.35]);
    let o: [f64; 3] = std::array::from_fn(|d| PATCH_CENTER[d] + h * [0.37, 0.11, -0.23][d]);
    InterfaceShape::custom(
        Arc::new(move |p: &[f64; 3]| dot3(&n, &[p[0] - o[0], p[1] - o[1], p[2] - o[2]])),
        h,
    )
}

/// Thin wedge (about 25° opening) with its edge near `PATCH_CENTER`, so
/// one-sided stencils re-cross the interface.
pub fn wedge_shape(h: f64) -> InterfaceShape {
    let n1 = unit([0.2, 1.0, 0.3]);
    let n2 = unit([0.25, -1.0, 0.1]);
    let v: [f64; 3] = std::array::from_fn(|d| PATCH_CENTER[d] + h * [0.31, 0.17, 0.05][d]);
    InterfaceShape::custom(
        Arc::new(move |p: &[f64; 3]| {
            let r = [p[0] - v[0], p[1] - v[1], p[2] - v[2]];
            dot3(&n1, &r).max(dot3(&n2, &r))
        }),
        h,
    )
}

/// Largest extension error of the local solves of `scheme` on segments
/// within `reach` nodes of the patch centre.
pub fn local_extension_error(shape: InterfaceShape, h: f64, scheme: LocalScheme, reach: usize) -> Result<f64, String> {
    local_extension_error_for(problem_with_shape(shape), h, scheme, reach)
}

pub fn local_extension_error_for(
    problem: ManufacturedProblem,
    h: f64,
    scheme: LocalScheme,
    reach: usize,
) -> Result<f64, String> {
    let patch = Patch::new(problem, PATCH_CENTER, h, 7);
    let ctx = patch.ctx();
    let mut worst: Option<f64> = None;
    for p in patch.intersections.points() {
        if !patch.near_center(p.lower, reach) {
            continue;
        }
        let s = solve_segment(&ctx, p.axis, p.lower).map_err(|e| format!("local solve failed: {e}"))?;
        if s.scheme != scheme {
            continue;
        }
        let e_lower = patch.extension_error(s.lower, patch.phases.phase(s.upper), &s.at_lower);
        let e_upper = patch.extension_error(s.upper, patch.phases.phase(s.lower), &s.at_upper);
        let e = s
            .auxiliary
            .iter()
            .map(|(node, side, v)| patch.extension_error(*node, *side, v))
            .fold(e_lower.max(e_upper), f64::max);
        worst = Some(worst.map_or(e, |w| w.max(e)));
    }
    worst.ok_or_else(|| format!("no {scheme:?} segment near the patch centre"))
}

pub const EXTENSION_STEPS: [f64; 3] = [0.08, 0.04, 0.02];

pub fn refinement_exponent(errors: &[f64]) -> f64 {
    errors
        .windows(2)
        .map(|w| order(w[0], w[1], 2.0))
        .fold(f64::INFINITY, f64::min)
}

pub fn check_central_extension_exponent() -> Result<f64, String> {
    let errs = EXTENSION_STEPS
        .iter()
        .map(|&h| local_extension_error(plane_shape(h), h, LocalScheme::Central, 2))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(refinement_exponent(&errs))
}

pub fn check_sharp_edge_extension_exponent() -> Result<f64, String> {
    let errs = EXTENSION_STEPS
        .iter()
        .map(|&h| local_extension_error(wedge_shape(h), h, LocalScheme::SharpEdge, 3))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(refinement_exponent(&errs))
}

/// Neighbour combination for an isolated node: the only node of its phase
/// inside a tiny sphere, with exact central extensions inserted by hand so
/// every other cross-reference scheme is unavailable. Returns the error of
/// the diagonal reference.
pub fn neighbor_combination_error(h: f64) -> Result<f64, String> {
    let center = PATCH_CENTER;
    let shape = InterfaceShape::custom(
        Arc::new(move |p: &[f64; 3]| {
            let r = [p[0] - center[0], p[1] - center[1], p[2] - center[2]];
            dot3(&r, &r) - (0.3 * h) * (0.3 * h)
        }),
        h,
    );
    let patch = Patch::new(problem_with_shape(shape), center, h, 4);
    let ctx = patch.ctx();
    let g = &patch.grid;
    let p = g.index([4, 4, 4]);
    let side = patch.phases.phase(p);
    let mut table = FictitiousTable::new();
    for axis in 0..3 {
        for delta in [-1isize, 1] {
            let q = g.index(g.step([4, 4, 4], axis, delta).expect("interior"));
            let at = g.coord_of(q);
            let u = patch.problem.problem.displacement(&at, side);
            table.insert_central(
                (axis, p.min(q), q > p),
                FictitiousValue {
                    node: q,
                    side,
                    values: u.map(LinearFunctional::constant_only),
                    scheme: Scheme::Central,
                    cond: 1.0,
                },
            );
        }
    }
    let target = g.index([5, 5, 4]);
    let v = cross_fictitious(&ctx, &table, p, target).map_err(|e| e.to_string())?;
    if v.scheme != Scheme::NeighborCombination {
        return Err(format!("expected neighbour combination, got {}", v.scheme.name()));
    }
    Ok(patch.extension_error(target, side, &v.values))
}

pub fn check_neighbor_combination_exponent() -> Result<f64, String> {
    let errs = EXTENSION_STEPS
        .iter()
        .map(|&h| neighbor_combination_error(h))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(refinement_exponent(&errs))
}

/// Rotation matrix P of the local frame at angles (θ, φ).
pub fn frame_matrix(theta: f64, phi: f64) -> [[f64; 3]; 3] {
    let f = transformation_matrix(theta, phi);
    [f.normal(), f.eta(), f.zeta()]
}

pub fn check_orthogonality(theta: f64, phi: f64) -> Check {
    let p = frame_matrix(theta, phi);
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 1.0 } else { 0.0 };
            let got = dot3(&p[i], &p[j]);
            if (got - want).abs() > 1e-12 {
                return Err(format!("PPᵀ[{i}][{j}] = {got} at θ={theta}, φ={phi}"));
            }
        }
    }
    let det = dot3(
        &p[0],
        &[
            p[1][1] * p[2][2] - p[1][2] * p[2][1],
            p[1][2] * p[2][0] - p[1][0] * p[2][2],
            p[1][0] * p[2][1] - p[1][1] * p[2][0],
        ],
    );
    if (det - 1.0).abs() > 1e-12 {
        return Err(format!("det P = {det} at θ={theta}, φ={phi}"));
    }
    Ok(())
}

/// Every eliminable pair of every meshline axis zeroes its six columns in
/// the combined rows, relative to the row's largest entry.
pub fn check_elimination_nullity(theta: f64, phi: f64, moduli: InterfaceModuli<f64>) -> Check {
    let frame = transformation_matrix(theta, phi);
    let jm = JumpMatrix::assemble(&frame, moduli).traction_scaled();
    let avail = [SetAvailability {
        score: 0,
        evaluable: true,
    }; 6];
    for axis in 0..3 {
        for (l, m) in ranked_elimination_pairs(axis, &avail) {
            // Degenerate pairs are legitimately rejected.
            let Ok(res) = elimination_coefficients(&jm, l, m) else {
                continue;
            };
            for (r, row) in res.rows.iter().enumerate() {
                let mx = row.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
                for col in res.eliminated_columns() {
                    if row[col].abs() > 1e-10 * mx {
                        return Err(format!(
                            "pair ({l},{m}) at θ={theta}, φ={phi}: row {r} col {col} = {:e} of {mx:e}",
                            row[col]
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Moduli from (μ, ν) per side.
pub fn moduli(mu_plus: f64, nu_plus: f64, mu_minus: f64, nu_minus: f64) -> InterfaceModuli<f64> {
    let r = |nu: f64| 2.0 * nu / (1.0 - 2.0 * nu);
    InterfaceModuli {
        lambda_plus: r(nu_plus) * mu_plus,
        lambda_minus: r(nu_minus) * mu_minus,
        mu_plus,
        mu_minus,
    }
}

/// Lagrange weights reproduce polynomials up to their order exactly.
pub fn check_lagrange_exactness(nodes: &[f64], x: f64) -> Check {
    for order in 0..=1 {
        let w = lagrange_weights(nodes, x, order).map_err(|e| e.to_string())?;
        for degree in 0..nodes.len() as i32 {
            let want = match order {
                0 => x.powi(degree),
                _ if degree == 0 => 0.0,
                _ => degree as f64 * x.powi(degree - 1),
            };
            let got: f64 = nodes.iter().zip(&w).map(|(&t, &wi)| wi * t.powi(degree)).sum();
            let scale = w
                .iter()
                .zip(nodes)
                .fold(1.0, |a, (wi, t)| a + (wi * t.powi(degree)).abs());
            if (got - want).abs() > 1e-10 * scale {
                return Err(format!("order {order} degree {degree}: {got} vs {want}"));
            }
        }
    }
    Ok(())
}

/// A constant displacement with zero jumps, zero forcing and matching
/// boundary data must be reproduced exactly by the assembled rows, for
/// every catalog geometry and material field.
pub fn check_constant_annihilation(example: u32, case: u32, spec: GridSpec) -> Check {
    let mut mp = manufactured_case::<f64>(example, case).map_err(|e| e.to_string())?;
    let c = [0.7, -1.3, 2.1];
    mp.problem.plus = c.map(ScalarExpr::constant);
    mp.problem.minus = c.map(ScalarExpr::constant);
    let grid = build_grid(&mp, spec).map_err(|e| e.to_string())?;
    let disc = discretize(&mp, grid).map_err(|e| e.to_string())?;
    let u: Vec<f64> = (0..disc.grid.len()).flat_map(|_| c).collect();
    let au = disc.system.matrix.mul_vec(&u);
    for (r, (a, b)) in au.iter().zip(&disc.system.rhs).enumerate() {
        let (_, vals) = disc.system.matrix.row(r);
        let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())) * 3.0;
        if (a - b).abs() > 1e-9 * scale.max(1.0) {
            return Err(format!(
                "example {example}.{case}: row {r} residual {:e} (scale {scale:e})",
                a - b
            ));
        }
    }
    Ok(())
}

/// Central differences of the exact displacement, re-derived here from
/// values only.
fn fd_operator(problem: &InterfaceProblem<f64>, x: &[f64; 3], phase: Phase) -> [f64; 3] {
    let d = 1e-3;
    let u = |p: [f64; 3]| problem.displacement(&p, phase);
    let shifted = |a: usize, sa: f64, b: usize, sb: f64| {
        let mut p = *x;
        p[a] += sa;
        p[b] += sb;
        u(p)
    };
    // grad[c][j] and hess[c][j][k] by second-order differences
    let mut grad = [[0.0; 3]; 3];
    let mut hess = [[[0.0; 3]; 3]; 3];
    let u0 = u(*x);
    for j in 0..3 {
        let up = shifted(j, d, j, 0.0);
        let um = shifted(j, -d, j, 0.0);
        for c in 0..3 {
            grad[c][j] = (up[c] - um[c]) / (2.0 * d);
            hess[c][j][j] = (up[c] - 2.0 * u0[c] + um[c]) / (d * d);
        }
        for k in 0..3 {
            if k == j {
                continue;
            }
            let pp = shifted(j, d, k, d);
            let pm = shifted(j, d, k, -d);
            let mp = shifted(j, -d, k, d);
            let mm = shifted(j, -d, k, -d);
            for c in 0..3 {
                hess[c][j][k] = (pp[c] - pm[c] - mp[c] + mm[c]) / (4.0 * d * d);
            }
        }
    }
    let m = problem.materials.evaluate(x, phase);
    // μ and λ gradients by differences as well
    let moduli = |p: [f64; 3]| {
        let s = problem.materials.evaluate(&p, phase);
        (s.lambda, s.mu)
    };
    let mut grad_lambda = [0.0; 3];
    let mut grad_mu = [0.0; 3];
    for j in 0..3 {
        let mut a = *x;
        let mut b = *x;
        a[j] += d;
        b[j] -= d;
        let (la, ma) = moduli(a);
        let (lb, mb) = moduli(b);
        grad_lambda[j] = (la - lb) / (2.0 * d);
        grad_mu[j] = (ma - mb) / (2.0 * d);
    }
    let div = grad[0][0] + grad[1][1] + grad[2][2];
    std::array::from_fn(|i| {
        // ∂_j σ_ij with σ = λ div I + μ(∇u + ∇uᵀ)
        let grad_div: f64 = (0..3).map(|c| hess[c][c][i]).sum();
        let lap: f64 = (0..3).map(|j| hess[i][j][j]).sum();
        let shear: f64 = (0..3).map(|j| grad_mu[j] * (grad[i][j] + grad[j][i])).sum();
        (m.lambda + m.mu) * grad_div + m.mu * lap + grad_lambda[i] * div + shear
    })
}

/// Forcing equals minus the stress divergence of the exact displacement,
/// checked by finite differences at sample points of both phases.
pub fn check_forcing_oracle(example: u32, case: u32) -> Check {
    let mp = manufactured_case::<f64>(example, case).map_err(|e| e.to_string())?;
    let mut rng = Lcg::new(u64::from(example * 10 + case));
    for _ in 0..20 {
        let x: [f64; 3] = std::array::from_fn(|d| rng.range(mp.bounds_min[d], mp.bounds_max[d]));
        for phase in [Phase::Plus, Phase::Minus] {
            let f = mp.problem.forcing(&x, phase);
            let l = fd_operator(&mp.problem, &x, phase);
            let scale = mp.problem.materials.evaluate(&x, phase).pwave()
                * (1.0 + f.iter().map(|v| v.abs()).fold(0.0, f64::max) / 1e6);
            for i in 0..3 {
                if (f[i] + l[i]).abs() > 1e-4 * scale.max(1.0) {
                    return Err(format!(
                        "example {example}.{case} at {x:?} ({phase:?}) component {i}: F = {} vs −Lu = {}",
                        f[i], -l[i]
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Jump data at interface points match one-sided limits of the exact
/// solution: values by plain differences, traction from stresses built
/// from finite-difference gradients.
pub fn check_jump_oracle(example: u32, case: u32) -> Check {
    use mib_elastic::fictitious::JumpSource;
    let mp = manufactured_case::<f64>(example, case).map_err(|e| e.to_string())?;
    let grid = build_grid(&mp, mp.grids[0]).map_err(|e| e.to_string())?;
    let phases = classify_nodes(&grid, &mp.problem.shape);
    let index = IntersectionIndex::build(&grid, &mp.problem.shape, &phases).map_err(|e| e.to_string())?;
    let pts: Vec<_> = index
        .points()
        .iter()
        .filter(|p| p.normal.is_some())
        .step_by(7)
        .take(40)
        .collect();
    if pts.is_empty() {
        return Err(format!("example {example}.{case}: no crossings"));
    }
    let pr = &mp.problem;
    let d = 1e-5;
    for ip in pts {
        let x = ip.position;
        let info = ip.normal.expect("filtered");
        let frame = transformation_matrix(info.theta, info.phi_angle);
        let jd = pr.jump(&x, &frame);
        let n = frame.normal();
        let up = pr.displacement(&x, Phase::Plus);
        let um = pr.displacement(&x, Phase::Minus);
        let fd_grad = |phase: Phase| -> [[f64; 3]; 3] {
            let mut g = [[0.0; 3]; 3];
            for j in 0..3 {
                let mut a = x;
                let mut b = x;
                a[j] += d;
                b[j] -= d;
                let ua = pr.displacement(&a, phase);
                let ub = pr.displacement(&b, phase);
                for c in 0..3 {
                    g[c][j] = (ua[c] - ub[c]) / (2.0 * d);
                }
            }
            g
        };
        let traction = |phase: Phase| -> [f64; 3] {
            let g = fd_grad(phase);
            let m = pr.materials.evaluate(&x, phase);
            let div = g[0][0] + g[1][1] + g[2][2];
            std::array::from_fn(|r| {
                (0..3)
                    .map(|j| {
                        let iso = if r == j { m.lambda * div } else { 0.0 };
                        (iso + m.mu * (g[r][j] + g[j][r])) * n[j]
                    })
                    .sum()
            })
        };
        let tp = traction(Phase::Plus);
        let tm = traction(Phase::Minus);
        let gp = fd_grad(Phase::Plus);
        let gm = fd_grad(Phase::Minus);
        let (eta, zeta) = (frame.eta(), frame.zeta());
        let pw = pr
            .materials
            .evaluate(&x, Phase::Plus)
            .pwave()
            .max(pr.materials.evaluate(&x, Phase::Minus).pwave());
        for c in 0..3 {
            let checks = [
                ("value", jd.value[c], up[c] - um[c], 1e-12 * (1.0 + up[c].abs())),
                ("traction", jd.traction[c], tp[c] - tm[c], 1e-5 * pw),
                ("eta", jd.eta[c], dot3(&gp[c], &eta) - dot3(&gm[c], &eta), 1e-6),
                ("zeta", jd.zeta[c], dot3(&gp[c], &zeta) - dot3(&gm[c], &zeta), 1e-6),
            ];
            for (what, got, want, tol) in checks {
                if (got - want).abs() > tol.max(1e-9) {
                    return Err(format!(
                        "example {example}.{case} {what}[{c}] at {x:?}: {got} vs {want}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Every catalog entry: forcing and jump oracles.
pub fn check_catalog_oracles() -> Check {
    for (e, c) in CATALOG {
        check_forcing_oracle(e, c)?;
        check_jump_oracle(e, c)?;
    }
    Ok(())
}

/// Regular-row truncation is O(h²); irregular rows are reported.
pub struct TruncationStudy {
    pub h: Vec<f64>,
    pub regular: Vec<f64>,
    pub irregular: Vec<f64>,
}

pub fn truncation_study(example: u32, case: u32, grids: &[GridSpec]) -> Result<TruncationStudy, String> {
    let mp = manufactured_case::<f64>(example, case).map_err(|e| e.to_string())?;
    let mut s = TruncationStudy {
        h: vec![],
        regular: vec![],
        irregular: vec![],
    };
    for &g in grids {
        let grid = build_grid(&mp, g).map_err(|e| e.to_string())?;
        let disc = discretize(&mp, grid).map_err(|e| e.to_string())?;
        let exact = sample_exact(&mp, &disc.grid, &disc.phases);
        // Rows are in units of the material moduli; divide them out.
        let scale = mp.problem.materials.evaluate(&[0.0; 3], Phase::Plus).pwave();
        let t = truncation_error(&disc, &exact);
        s.h.push(disc.grid.max_spacing());
        s.regular.push(t.regular / scale);
        s.irregular.push(t.irregular / scale);
    }
    Ok(s)
}

pub fn study_orders(h: &[f64], e: &[f64]) -> Vec<f64> {
    h.windows(2)
        .zip(e.windows(2))
        .map(|(hw, ew)| order(ew[0], ew[1], hw[0] / hw[1]))
        .collect()
}
