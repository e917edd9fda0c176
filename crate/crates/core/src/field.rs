//! Closed-form scalar fields with analytic first and second derivatives.
//!
//! Manufactured displacements and position-dependent moduli are linear
//! combinations of the monomials and trigonometric products in [`Term`].

use crate::scalar::{lit, Scalar, Vec3};

pub type Hessian<T> = [[T; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Const,
    X,
    Y,
    Z,
    Xy,
    Yz,
    Xz,
    Xyz,
    XSq,
    YSq,
    ZSq,
    /// x²y²z²
    XSqYSqZSq,
    /// cos x · cos y · cos z
    CosProd,
}

impl Term {
    pub fn value<T: Scalar>(self, p: &Vec3<T>) -> T {
        let [x, y, z] = *p;
        match self {
            Term::Const => T::one(),
            Term::X => x,
            Term::Y => y,
            Term::Z => z,
            Term::Xy => x * y,
            Term::Yz => y * z,
            Term::Xz => x * z,
            Term::Xyz => x * y * z,
            Term::XSq => x * x,
            Term::YSq => y * y,
            Term::ZSq => z * z,
            Term::XSqYSqZSq => x * x * y * y * z * z,
            Term::CosProd => x.cos() * y.cos() * z.cos(),
        }
    }

    pub fn gradient<T: Scalar>(self, p: &Vec3<T>) -> Vec3<T> {
        let [x, y, z] = *p;
        let o = T::zero();
        let one = T::one();
        let two = lit::<T>(2.0);
        match self {
            Term::Const => [o, o, o],
            Term::X => [one, o, o],
            Term::Y => [o, one, o],
            Term::Z => [o, o, one],
            Term::Xy => [y, x, o],
            Term::Yz => [o, z, y],
            Term::Xz => [z, o, x],
            Term::Xyz => [y * z, x * z, x * y],
            Term::XSq => [two * x, o, o],
            Term::YSq => [o, two * y, o],
            Term::ZSq => [o, o, two * z],
            Term::XSqYSqZSq => {
                let (x2, y2, z2) = (x * x, y * y, z * z);
                [two * x * y2 * z2, two * y * x2 * z2, two * z * x2 * y2]
            }
            Term::CosProd => {
                let (cx, cy, cz) = (x.cos(), y.cos(), z.cos());
                let (sx, sy, sz) = (x.sin(), y.sin(), z.sin());
                [-sx * cy * cz, -cx * sy * cz, -cx * cy * sz]
            }
        }
    }

    pub fn hessian<T: Scalar>(self, p: &Vec3<T>) -> Hessian<T> {
        let [x, y, z] = *p;
        let o = T::zero();
        let one = T::one();
        let two = lit::<T>(2.0);
        let four = lit::<T>(4.0);
        let mut h = [[o; 3]; 3];
        match self {
            Term::Const | Term::X | Term::Y | Term::Z => {}
            Term::Xy => {
                h[0][1] = one;
                h[1][0] = one;
            }
            Term::Yz => {
                h[1][2] = one;
                h[2][1] = one;
            }
            Term::Xz => {
                h[0][2] = one;
                h[2][0] = one;
            }
            Term::Xyz => {
                h[0][1] = z;
                h[1][0] = z;
                h[0][2] = y;
                h[2][0] = y;
                h[1][2] = x;
                h[2][1] = x;
            }
            Term::XSq => h[0][0] = two,
            Term::YSq => h[1][1] = two,
            Term::ZSq => h[2][2] = two,
            Term::XSqYSqZSq => {
                let (x2, y2, z2) = (x * x, y * y, z * z);
                h[0][0] = two * y2 * z2;
                h[1][1] = two * x2 * z2;
                h[2][2] = two * x2 * y2;
                h[0][1] = four * x * y * z2;
                h[1][0] = h[0][1];
                h[0][2] = four * x * z * y2;
                h[2][0] = h[0][2];
                h[1][2] = four * y * z * x2;
                h[2][1] = h[1][2];
            }
            Term::CosProd => {
                let (cx, cy, cz) = (x.cos(), y.cos(), z.cos());
                let (sx, sy, sz) = (x.sin(), y.sin(), z.sin());
                let v = cx * cy * cz;
                h[0][0] = -v;
                h[1][1] = -v;
                h[2][2] = -v;
                h[0][1] = sx * sy * cz;
                h[1][0] = h[0][1];
                h[0][2] = sx * cy * sz;
                h[2][0] = h[0][2];
                h[1][2] = cx * sy * sz;
                h[2][1] = h[1][2];
            }
        }
        h
    }
}

/// Σ coefᵢ · termᵢ
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarExpr<T> {
    terms: Vec<(T, Term)>,
}

impl<T: Scalar> ScalarExpr<T> {
    pub fn new(terms: Vec<(T, Term)>) -> Self {
        Self { terms }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![(c, Term::Const)])
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    /// Builds from `f64` coefficients.
    pub fn from_f64(terms: &[(f64, Term)]) -> Self {
        Self::new(terms.iter().map(|&(c, t)| (lit(c), t)).collect())
    }

    pub fn terms(&self) -> &[(T, Term)] {
        &self.terms
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self { terms }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(_, t)| *t == Term::Const)
    }

    pub fn value(&self, p: &Vec3<T>) -> T {
        self.terms.iter().fold(T::zero(), |acc, &(c, t)| acc + c * t.value(p))
    }

    pub fn gradient(&self, p: &Vec3<T>) -> Vec3<T> {
        let mut g = [T::zero(); 3];
        for &(c, t) in &self.terms {
            let tg = t.gradient(p);
            for d in 0..3 {
                g[d] = g[d] + c * tg[d];
            }
        }
        g
    }

    pub fn hessian(&self, p: &Vec3<T>) -> Hessian<T> {
        let mut h = [[T::zero(); 3]; 3];
        for &(c, t) in &self.terms {
            let th = t.hessian(p);
            for i in 0..3 {
                for j in 0..3 {
                    h[i][j] = h[i][j] + c * th[i][j];
                }
            }
        }
        h
    }
}
