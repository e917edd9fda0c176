mod common;

use common::*;

use mib_elastic::fictitious::JumpSource;
use mib_elastic::geometry::{classify_nodes, IntersectionIndex, Phase};
use mib_elastic::harness::{build_grid, manufactured_case};
use mib_elastic::jump::{
    column, combined_condition_rows, elimination_coefficients, ranked_elimination_pairs, transformation_matrix,
    JumpMatrix, SetAvailability, N_COLS, N_ROWS,
};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

fn full_availability() -> [SetAvailability; 6] {
    [SetAvailability {
        score: 0,
        evaluable: true,
    }; 6]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn frame_is_a_rotation(theta in -PI..PI, phi in 0.0..PI) {
        prop_assert!(check_orthogonality(theta, phi).is_ok(), "{:?}", check_orthogonality(theta, phi));
    }

    #[test]
    fn elimination_zeroes_the_designated_columns(
        theta in -PI..PI,
        phi in 0.0..PI,
        mu_p in 1.0..2e6f64,
        mu_m in 1.0..2e6f64,
        nu_p in 0.0..0.49f64,
        nu_m in 0.0..0.49f64,
    ) {
        let r = check_elimination_nullity(theta, phi, moduli(mu_p, nu_p, mu_m, nu_m));
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

/// Left null space of the eliminated columns, by eigen-decomposition of
/// C_E C_Eᵀ, and the projection of each combined row onto the span of
/// (null vector)ᵀ·C.
fn projection_residual(jm: &JumpMatrix<f64>, eliminated: [usize; 6], row: &[f64; N_COLS]) -> f64 {
    let c = DMatrix::from_fn(N_ROWS, N_COLS, |r, k| jm.c[r][k]);
    let ce = DMatrix::from_fn(N_ROWS, 6, |r, k| jm.c[r][eliminated[k]]);
    let eig = SymmetricEigen::new(&ce * ce.transpose());
    let mut order: Vec<usize> = (0..N_ROWS).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].abs().total_cmp(&eig.eigenvalues[b].abs()));
    let y = DMatrix::from_fn(N_ROWS, 3, |r, k| eig.eigenvectors[(r, order[k])]);
    let basis = (y.transpose() * c).transpose(); // 18 × 3
    let target = DVector::from_row_slice(row);
    let svd = basis.clone().svd(true, true);
    let coef = svd.solve(&target, 1e-14).expect("least squares");
    let resid = &basis * coef - &target;
    resid.amax() / target.amax()
}

#[test]
fn combined_rows_match_a_least_squares_elimination() {
    let mut rng = Lcg::new(7);
    let mut checked = 0;
    for _ in 0..200 {
        let frame = transformation_matrix(rng.range(-PI, PI), rng.range(0.05, PI - 0.05));
        let md = moduli(
            rng.range(1.0, 2e6),
            rng.range(0.0, 0.45),
            rng.range(1.0, 2e6),
            rng.range(0.0, 0.45),
        );
        let jm = JumpMatrix::assemble(&frame, md).traction_scaled();
        for axis in 0..3 {
            for (l, m) in ranked_elimination_pairs(axis, &full_availability()) {
                let Ok(res) = elimination_coefficients(&jm, l, m) else {
                    continue;
                };
                for row in &res.rows {
                    let e = projection_residual(&jm, res.eliminated_columns(), row);
                    assert!(e < 1e-8, "pair ({l},{m}): relative residual {e}");
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

/// The 18 interfacial derivatives ∂u_c/∂x_j on both sides.
fn derivatives(mp: &mib_elastic::ManufacturedProblem, x: &[f64; 3]) -> [f64; N_COLS] {
    let mut d = [0.0; N_COLS];
    for side in [Phase::Plus, Phase::Minus] {
        let g = mp.problem.displacement_gradient(x, side);
        for c in 0..3 {
            for j in 0..3 {
                d[column(c, j, side)] = g[c][j];
            }
        }
    }
    d
}

#[test]
fn jump_matrix_reproduces_the_jump_quantities() {
    for (e, case) in [(1, 1), (1, 3), (4, 1), (8, 1), (10, 1)] {
        let mp = manufactured_case::<f64>(e, case).unwrap();
        let grid = build_grid(&mp, mp.grids[0]).unwrap();
        let phases = classify_nodes(&grid, &mp.problem.shape);
        let index = IntersectionIndex::build(&grid, &mp.problem.shape, &phases).unwrap();
        for ip in index.points().iter().step_by(11) {
            let Some(n) = ip.normal else { continue };
            let frame = transformation_matrix(n.theta, n.phi_angle);
            let plus = mp.problem.materials.evaluate(&ip.position, Phase::Plus);
            let minus = mp.problem.materials.evaluate(&ip.position, Phase::Minus);
            let md = mib_elastic::jump::InterfaceModuli {
                lambda_plus: plus.lambda,
                lambda_minus: minus.lambda,
                mu_plus: plus.mu,
                mu_minus: minus.mu,
            };
            let jm = JumpMatrix::assemble(&frame, md);
            let got = jm.apply(&derivatives(&mp, &ip.position));
            let jd = mp.problem.jump(&ip.position, &frame);
            let want: Vec<f64> = jd.traction.iter().chain(&jd.eta).chain(&jd.zeta).copied().collect();
            let scale = plus.pwave().max(minus.pwave());
            for r in 0..N_ROWS {
                let tol = if r < 3 { 1e-9 * scale } else { 1e-9 };
                assert!(
                    (got[r] - want[r]).abs() < tol,
                    "example {e}.{case} row {r}: {} vs {}",
                    got[r],
                    want[r]
                );
            }
        }
    }
}

#[test]
fn combined_conditions_hold_for_the_exact_solution() {
    for (e, case) in [(1, 2), (4, 1), (9, 1)] {
        let mp = manufactured_case::<f64>(e, case).unwrap();
        let grid = build_grid(&mp, mp.grids[0]).unwrap();
        let phases = classify_nodes(&grid, &mp.problem.shape);
        let index = IntersectionIndex::build(&grid, &mp.problem.shape, &phases).unwrap();
        for ip in index.points().iter().step_by(13) {
            let Some(n) = ip.normal else { continue };
            let frame = transformation_matrix(n.theta, n.phi_angle);
            let plus = mp.problem.materials.evaluate(&ip.position, Phase::Plus);
            let minus = mp.problem.materials.evaluate(&ip.position, Phase::Minus);
            let md = mib_elastic::jump::InterfaceModuli {
                lambda_plus: plus.lambda,
                lambda_minus: minus.lambda,
                mu_plus: plus.mu,
                mu_minus: minus.mu,
            };
            let jm = JumpMatrix::assemble(&frame, md).traction_scaled();
            let jd = mp.problem.jump(&ip.position, &frame);
            let d = derivatives(&mp, &ip.position);
            for (l, m) in ranked_elimination_pairs(ip.axis, &full_availability()) {
                let Ok(res) = elimination_coefficients(&jm, l, m) else {
                    continue;
                };
                let cc = combined_condition_rows(&res, &jd);
                for i in 0..3 {
                    let lhs: f64 = (0..N_COLS).map(|k| cc.rows[i][k] * d[k]).sum();
                    let scale = cc.rows[i].iter().zip(&d).fold(1.0, |a, (w, x)| a + (w * x).abs());
                    assert!(
                        (lhs - cc.rhs[i]).abs() < 1e-9 * scale,
                        "example {e}: pair ({l},{m}) row {i}"
                    );
                }
            }
        }
    }
}

#[test]
fn continuous_matched_solution_has_zero_combined_residual() {
    let mut mp = manufactured_case::<f64>(1, 1).unwrap();
    mp.problem.minus = mp.problem.plus.clone();
    mp.problem.materials.minus = mp.problem.materials.plus.clone();
    let p = [1.2, -0.8, 1.3];
    let frame = transformation_matrix(0.9, 1.1);
    let jd = mp.problem.jump(&p, &frame);
    assert!(jd
        .value
        .iter()
        .chain(&jd.traction)
        .chain(&jd.eta)
        .chain(&jd.zeta)
        .all(|v| v.abs() < 1e-9));
}
