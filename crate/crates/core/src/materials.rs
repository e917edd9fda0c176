//! Isotropic elastic moduli per phase.

use crate::error::MaterialError;
use crate::field::ScalarExpr;
use crate::geometry::Phase;
use crate::scalar::{lit, Scalar, Vec3};

fn check_nu<T: Scalar>(nu: T) -> Result<(), MaterialError> {
    if !(nu >= T::zero() && nu < lit(0.5)) {
        return Err(MaterialError::InvalidModulus(format!(
            "Poisson ratio {nu} outside [0, 0.5)"
        )));
    }
    Ok(())
}

/// (λ, μ) from Young's modulus and Poisson's ratio.
pub fn lame_from_e_nu<T: Scalar>(e: T, nu: T) -> Result<(T, T), MaterialError> {
    check_nu(nu)?;
    if !(e > T::zero()) {
        return Err(MaterialError::InvalidModulus(format!(
            "Young modulus {e} must be positive"
        )));
    }
    let one = T::one();
    let two = lit::<T>(2.0);
    let mu = e / (two * (one + nu));
    let lambda = e * nu / ((one + nu) * (one - two * nu));
    Ok((lambda, mu))
}

/// ν = λ / (2(λ + μ))
pub fn nu_from_lame<T: Scalar>(lambda: T, mu: T) -> T {
    lambda / (lit::<T>(2.0) * (lambda + mu))
}

/// P-wave modulus M = 2μ(1−ν)/(1−2ν) = λ + 2μ.
pub fn pwave_modulus<T: Scalar>(mu: T, nu: T) -> Result<T, MaterialError> {
    check_nu(nu)?;
    if !(mu > T::zero()) {
        return Err(MaterialError::InvalidModulus(format!(
            "shear modulus {mu} must be positive"
        )));
    }
    let two = lit::<T>(2.0);
    Ok(two * mu * (T::one() - nu) / (T::one() - two * nu))
}

/// Moduli of one phase: μ(x) is a closed-form field, ν is constant and λ
/// follows from λ = 2μν/(1−2ν).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMaterial<T> {
    mu: ScalarExpr<T>,
    nu: T,
}

impl<T: Scalar> PhaseMaterial<T> {
    pub fn new(mu: ScalarExpr<T>, nu: T) -> Result<Self, MaterialError> {
        check_nu(nu)?;
        Ok(Self { mu, nu })
    }

    pub fn constant(mu: T, nu: T) -> Result<Self, MaterialError> {
        if !(mu > T::zero()) {
            return Err(MaterialError::InvalidModulus(format!(
                "shear modulus {mu} must be positive"
            )));
        }
        Self::new(ScalarExpr::constant(mu), nu)
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn mu_expr(&self) -> &ScalarExpr<T> {
        &self.mu
    }

    /// 2ν/(1−2ν), so that λ = ratio·μ.
    pub fn lambda_ratio(&self) -> T {
        let two = lit::<T>(2.0);
        two * self.nu / (T::one() - two * self.nu)
    }

    pub fn sample(&self, p: &Vec3<T>) -> MaterialSample<T> {
        let mu = self.mu.value(p);
        let grad_mu = self.mu.gradient(p);
        let r = self.lambda_ratio();
        MaterialSample {
            lambda: r * mu,
            mu,
            grad_lambda: [r * grad_mu[0], r * grad_mu[1], r * grad_mu[2]],
            grad_mu,
        }
    }
}

/// Pointwise λ, μ and their gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSample<T> {
    pub lambda: T,
    pub mu: T,
    pub grad_lambda: Vec3<T>,
    pub grad_mu: Vec3<T>,
}

impl<T: Scalar> MaterialSample<T> {
    /// λ + 2μ
    pub fn pwave(&self) -> T {
        self.lambda + lit::<T>(2.0) * self.mu
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialField<T> {
    pub plus: PhaseMaterial<T>,
    pub minus: PhaseMaterial<T>,
}

impl<T: Scalar> MaterialField<T> {
    pub fn new(plus: PhaseMaterial<T>, minus: PhaseMaterial<T>) -> Self {
        Self { plus, minus }
    }

    pub fn phase(&self, phase: Phase) -> &PhaseMaterial<T> {
        match phase {
            Phase::Plus => &self.plus,
            Phase::Minus => &self.minus,
        }
    }

    /// Evaluates the requested phase's moduli regardless of which side of
    /// the interface `point` lies on.
    pub fn evaluate(&self, point: &Vec3<T>, phase: Phase) -> MaterialSample<T> {
        self.phase(phase).sample(point)
    }

    pub fn is_constant(&self) -> bool {
        self.plus.mu.is_constant() && self.minus.mu.is_constant()
    }
}
