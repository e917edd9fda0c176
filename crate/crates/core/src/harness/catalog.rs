//! The twelve manufactured-solution test problems.

use std::f64::consts::PI;

use crate::error::{HarnessError, MaterialError};
use crate::field::{ScalarExpr, Term};
use crate::geometry::InterfaceShape;
use crate::materials::{MaterialField, PhaseMaterial};
use crate::problem::InterfaceProblem;
use crate::scalar::{lit, Scalar, Vec3};

/// Grid resolution: nodes per axis, or a target spacing converted through
/// the domain bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    Nodes(usize),
    Size(f64),
}

impl GridSpec {
    pub fn node_counts<T: Scalar>(&self, min: &Vec3<T>, max: &Vec3<T>) -> [usize; 3] {
        match *self {
            GridSpec::Nodes(n) => [n; 3],
            GridSpec::Size(h) => std::array::from_fn(|d| {
                let len = (max[d] - min[d]).to_f64().unwrap_or(0.0);
                (len / h).round() as usize + 1
            }),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            GridSpec::Nodes(n) => format!("{n}"),
            GridSpec::Size(h) => format!("{h}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ManufacturedProblem<T: Scalar> {
    pub example: u32,
    pub case: u32,
    pub bounds_min: Vec3<T>,
    pub bounds_max: Vec3<T>,
    pub problem: InterfaceProblem<T>,
    /// Grids of the reference convergence tables.
    pub grids: Vec<GridSpec>,
    /// Which side is Ω⁺ and other catalog remarks.
    pub notes: &'static str,
}

/// Every (example, case) pair in the catalog.
pub const CATALOG: [(u32, u32); 18] = [
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 1),
    (2, 2),
    (2, 3),
    (3, 1),
    (3, 2),
    (3, 3),
    (4, 1),
    (5, 1),
    (6, 1),
    (7, 1),
    (8, 1),
    (9, 1),
    (10, 1),
    (11, 1),
    (12, 1),
];

fn expr<T: Scalar>(terms: &[(f64, Term)]) -> ScalarExpr<T> {
    ScalarExpr::from_f64(terms)
}

/// The interface-vanishing quadric used to build continuous solutions.
fn sphere_term(level: f64) -> Vec<(f64, Term)> {
    vec![
        (1.0, Term::XSq),
        (1.0, Term::YSq),
        (1.0, Term::ZSq),
        (-level, Term::Const),
    ]
}

/// u⁻ = cos·cos·cos + (0, xy, yz), u⁺ = u⁻ + `added`.
fn continuous_solution<T: Scalar>(added: &[(f64, Term)]) -> ([ScalarExpr<T>; 3], [ScalarExpr<T>; 3]) {
    let extras = [vec![], vec![(1.0, Term::Xy)], vec![(1.0, Term::Yz)]];
    let minus = std::array::from_fn(|c| {
        let mut t = vec![(1.0, Term::CosProd)];
        t.extend_from_slice(&extras[c]);
        expr(&t)
    });
    let plus = std::array::from_fn(|c| {
        let mut t = vec![(1.0, Term::CosProd)];
        t.extend_from_slice(&extras[c]);
        t.extend_from_slice(added);
        expr(&t)
    });
    (plus, minus)
}

/// u⁺ = x²+y²+z²−4 + (0, xy, yz), u⁻ = cos·cos·cos + (0, xy, yz).
fn discontinuous_solution<T: Scalar>() -> ([ScalarExpr<T>; 3], [ScalarExpr<T>; 3]) {
    let extras = [vec![], vec![(1.0, Term::Xy)], vec![(1.0, Term::Yz)]];
    let plus = std::array::from_fn(|c| {
        let mut t = sphere_term(4.0);
        t.extend_from_slice(&extras[c]);
        expr(&t)
    });
    let minus = std::array::from_fn(|c| {
        let mut t = vec![(1.0, Term::CosProd)];
        t.extend_from_slice(&extras[c]);
        expr(&t)
    });
    (plus, minus)
}

/// u⁺ = cos·cos·cos + (xyz, x²+y²+z², 0), u⁻ = 3.
fn strong_solution<T: Scalar>() -> ([ScalarExpr<T>; 3], [ScalarExpr<T>; 3]) {
    let plus = [
        expr(&[(1.0, Term::CosProd), (1.0, Term::Xyz)]),
        expr(&[
            (1.0, Term::CosProd),
            (1.0, Term::XSq),
            (1.0, Term::YSq),
            (1.0, Term::ZSq),
        ]),
        expr(&[(1.0, Term::CosProd)]),
    ];
    let minus = std::array::from_fn(|_| ScalarExpr::constant(lit(3.0)));
    (plus, minus)
}

fn constant_materials<T: Scalar>(nu: (f64, f64), mu: (f64, f64)) -> Result<MaterialField<T>, MaterialError> {
    Ok(MaterialField::new(
        PhaseMaterial::constant(lit(mu.0), lit(nu.0))?,
        PhaseMaterial::constant(lit(mu.1), lit(nu.1))?,
    ))
}

/// Materials of the three large-contrast cases shared by Examples 1–3.
fn contrast_case<T: Scalar>(case: u32) -> Result<MaterialField<T>, MaterialError> {
    match case {
        1 => constant_materials((0.20, 0.24), (1.5e6, 2e6)),
        2 => constant_materials((0.00024, 0.24), (1.5e6, 2e6)),
        _ => constant_materials((0.20, 0.24), (2000.0, 2e6)),
    }
}

fn variable_materials<T: Scalar>(
    mu_plus: &[(f64, Term)],
    mu_minus: &[(f64, Term)],
    nu: (f64, f64),
) -> Result<MaterialField<T>, MaterialError> {
    Ok(MaterialField::new(
        PhaseMaterial::new(expr(mu_plus), lit(nu.0))?,
        PhaseMaterial::new(expr(mu_minus), lit(nu.1))?,
    ))
}

fn v<T: Scalar>(a: f64, b: f64, c: f64) -> Vec3<T> {
    [lit(a), lit(b), lit(c)]
}

fn nodes(list: &[usize]) -> Vec<GridSpec> {
    list.iter().map(|&n| GridSpec::Nodes(n)).collect()
}

fn sizes(list: &[f64]) -> Vec<GridSpec> {
    list.iter().map(|&h| GridSpec::Size(h)).collect()
}

/// Ω⁺ is the bounded region for every example: the reference error levels
/// of the large-contrast cases are only reproduced with the soft or stiff
/// material inside, as labelled. Shapes are complemented so that the
/// bounded region has φ > 0.
const BOUNDED_PLUS: &str = "Ω⁺ is the bounded region";

/// Builds one catalog entry.
pub fn manufactured_case<T: Scalar>(example: u32, case: u32) -> Result<ManufacturedProblem<T>, HarnessError> {
    if !CATALOG.contains(&(example, case)) {
        return Err(HarnessError::UnknownCase { example, case });
    }
    let mat_err = |e: MaterialError| HarnessError::Config(e.to_string());
    let ex4_materials = || constant_materials::<T>((0.20, 0.24), (1.5e6, 2e6)).map_err(mat_err);
    let ex10_materials = || constant_materials::<T>((0.24, 0.20), (2e6, 1.5e6)).map_err(mat_err);
    let pi = PI;

    let (min, max, shape, materials, (plus, minus), grids, notes) = match example {
        1 => (
            v(-3.0, -3.0, -3.0),
            v(3.0, 3.0, 3.0),
            InterfaceShape::sphere(lit(2.0)),
            contrast_case(case).map_err(mat_err)?,
            continuous_solution(&sphere_term(4.0)),
            nodes(&[10, 20, 40]),
            BOUNDED_PLUS,
        ),
        2 => (
            v(-3.0, -3.0, -3.0),
            v(3.0, 3.0, 3.0),
            InterfaceShape::hemisphere(lit(2.0)),
            contrast_case(case).map_err(mat_err)?,
            continuous_solution(&sphere_term(4.0)),
            nodes(&[10, 20, 40]),
            "Ω⁺ is the solid half ball; the solution is continuous only on the spherical part",
        ),
        3 => (
            v(-3.0, -4.0, -2.0),
            v(3.0, 4.0, 2.0),
            InterfaceShape::ellipsoid(v(2.0, 3.0, 1.0)),
            contrast_case(case).map_err(mat_err)?,
            continuous_solution(&[
                (0.25, Term::XSq),
                (1.0 / 9.0, Term::YSq),
                (1.0, Term::ZSq),
                (-1.0, Term::Const),
            ]),
            nodes(&[10, 20, 40]),
            BOUNDED_PLUS,
        ),
        4 | 8 | 9 => {
            let materials = match example {
                4 => ex4_materials()?,
                8 => variable_materials(
                    &[
                        (1.5e6, Term::Const),
                        (2000.0, Term::X),
                        (2000.0, Term::Y),
                        (2000.0, Term::Z),
                    ],
                    &[(2e6, Term::Const), (1500.0, Term::Xyz)],
                    (0.20, 0.24),
                )
                .map_err(mat_err)?,
                _ => variable_materials(
                    &[
                        (1.5e6, Term::Const),
                        (2000.0, Term::XSq),
                        (2000.0, Term::YSq),
                        (2000.0, Term::ZSq),
                    ],
                    &[(2e6, Term::Const), (1500.0, Term::XSqYSqZSq)],
                    (0.20, 0.24),
                )
                .map_err(mat_err)?,
            };
            let grids = if example == 8 {
                nodes(&[10, 20, 40])
            } else {
                nodes(&[20, 40, 80])
            };
            (
                v(-2.0, -2.0, -2.0),
                v(2.0, 2.0, 4.4),
                InterfaceShape::cylinder(lit(pi / 2.0), T::zero(), lit(pi)),
                materials,
                discontinuous_solution(),
                grids,
                BOUNDED_PLUS,
            )
        }
        5 => (
            v(-10.0, -10.0, -5.0),
            v(10.0, 10.0, 5.0),
            InterfaceShape::torus(lit(4.0), lit(2.0)),
            ex4_materials()?,
            discontinuous_solution(),
            nodes(&[20, 40, 80]),
            BOUNDED_PLUS,
        ),
        6 => (
            v(-5.0, -5.0, -2.0),
            v(5.0, 5.0, 2.0),
            InterfaceShape::flower_prism(lit(2.5), lit(5.0 / 7.0), lit(5.0), lit(2.0 / 3.0)),
            ex4_materials()?,
            discontinuous_solution(),
            sizes(&[0.5, 0.25, 0.125]),
            BOUNDED_PLUS,
        ),
        7 => (
            v(-3.0, -3.0, -3.0),
            v(3.0, 3.0, 3.0),
            InterfaceShape::sphere(lit(2.0)),
            variable_materials(
                &[(1.5e6, Term::Const), (1.0, Term::X), (1.0, Term::Y), (1.0, Term::Z)],
                &[(2e6, Term::Const), (1.0, Term::Xyz)],
                (0.20, 0.24),
            )
            .map_err(mat_err)?,
            continuous_solution(&sphere_term(4.0)),
            nodes(&[10, 20, 40]),
            BOUNDED_PLUS,
        ),
        10 => (
            v(-5.0, -5.0, -8.0),
            v(4.6, 4.6, 4.0),
            InterfaceShape::apple(lit(1.9)),
            ex10_materials()?,
            strong_solution(),
            sizes(&[0.6, 0.3, 0.15]),
            BOUNDED_PLUS,
        ),
        11 => (
            v(-5.0, -5.0, -5.0),
            v(4.6, 4.6, 4.6),
            InterfaceShape::acorn(lit(-6.0 / 7.0), lit(0.5), lit(15.0 / 7.0)),
            ex10_materials()?,
            strong_solution(),
            sizes(&[0.48, 0.24, 0.12]),
            "Ω⁺ is the bounded acorn; the cone and ball pieces meet on the rim circle",
        ),
        12 => (
            v(-1.3, -1.3, -1.3),
            v(1.1, 1.1, 1.1),
            InterfaceShape::pentagon_star_prism(
                lit(6.0 / 7.0),
                lit(pi / 5.0),
                lit(pi / 7.0),
                lit(3.0_f64.sqrt() / 2.0),
            ),
            ex10_materials()?,
            strong_solution(),
            sizes(&[0.12, 0.06, 0.03]),
            "Ω⁺ is the star prism; the second angle is the rotation θr = π/7",
        ),
        _ => return Err(HarnessError::UnknownCase { example, case }),
    };
    Ok(ManufacturedProblem {
        example,
        case,
        bounds_min: min,
        bounds_max: max,
        problem: InterfaceProblem {
            shape: shape.complement(),
            materials,
            plus,
            minus,
        },
        grids,
        notes,
    })
}
