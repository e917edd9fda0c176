//! Interface problems with a known exact displacement per phase: forcing,
//! boundary data and jump data all follow from it.

use crate::fictitious::JumpSource;
use crate::field::ScalarExpr;
use crate::geometry::{InterfaceShape, Phase};
use crate::jump::{JumpData, LocalFrame};
use crate::materials::{MaterialField, MaterialSample};
use crate::scalar::{dot, Scalar, Vec3};

/// `g[c][j] = ∂u_c/∂x_j`
pub type DisplacementGradient<T> = [[T; 3]; 3];

/// Second derivatives `h[c][j][k] = ∂²u_c/∂x_j∂x_k`.
pub type DisplacementHessian<T> = [[[T; 3]; 3]; 3];

/// Left-hand side of the variable-coefficient equilibrium equations
///
/// (λ+μ)∂_i(∇·u) + μΔu_i + ∂_iλ (∇·u) + Σ_j ∂_jμ (∂_j u_i + ∂_i u_j),
///
/// whose value is −F for body force F.
pub fn elastic_operator<T: Scalar>(
    m: &MaterialSample<T>,
    grad: &DisplacementGradient<T>,
    hess: &DisplacementHessian<T>,
) -> Vec3<T> {
    let div = grad[0][0] + grad[1][1] + grad[2][2];
    std::array::from_fn(|i| {
        let grad_div = (0..3).fold(T::zero(), |a, c| a + hess[c][c][i]);
        let lap = (0..3).fold(T::zero(), |a, j| a + hess[i][j][j]);
        let shear = (0..3).fold(T::zero(), |a, j| a + m.grad_mu[j] * (grad[i][j] + grad[j][i]));
        (m.lambda + m.mu) * grad_div + m.mu * lap + m.grad_lambda[i] * div + shear
    })
}

/// Cauchy stress λ(∇·u)I + μ(∇u + ∇uᵀ).
pub fn stress<T: Scalar>(m: &MaterialSample<T>, grad: &DisplacementGradient<T>) -> [[T; 3]; 3] {
    let div = grad[0][0] + grad[1][1] + grad[2][2];
    std::array::from_fn(|r| {
        std::array::from_fn(|j| {
            let iso = if r == j { m.lambda * div } else { T::zero() };
            iso + m.mu * (grad[r][j] + grad[j][r])
        })
    })
}

#[derive(Debug, Clone)]
pub struct InterfaceProblem<T: Scalar> {
    pub shape: InterfaceShape<T>,
    pub materials: MaterialField<T>,
    /// Exact displacement in Ω⁺ (φ > 0).
    pub plus: [ScalarExpr<T>; 3],
    /// Exact displacement in Ω⁻ (φ ≤ 0).
    pub minus: [ScalarExpr<T>; 3],
}

impl<T: Scalar> InterfaceProblem<T> {
    pub fn exact(&self, phase: Phase) -> &[ScalarExpr<T>; 3] {
        match phase {
            Phase::Plus => &self.plus,
            Phase::Minus => &self.minus,
        }
    }

    pub fn displacement(&self, p: &Vec3<T>, phase: Phase) -> Vec3<T> {
        let u = self.exact(phase);
        std::array::from_fn(|c| u[c].value(p))
    }

    pub fn displacement_gradient(&self, p: &Vec3<T>, phase: Phase) -> DisplacementGradient<T> {
        let u = self.exact(phase);
        std::array::from_fn(|c| u[c].gradient(p))
    }

    pub fn displacement_hessian(&self, p: &Vec3<T>, phase: Phase) -> DisplacementHessian<T> {
        let u = self.exact(phase);
        std::array::from_fn(|c| u[c].hessian(p))
    }

    /// Body force F with −F equal to the elastic operator of the exact
    /// displacement of `phase`.
    pub fn forcing(&self, p: &Vec3<T>, phase: Phase) -> Vec3<T> {
        let m = self.materials.evaluate(p, phase);
        let g = self.displacement_gradient(p, phase);
        let h = self.displacement_hessian(p, phase);
        elastic_operator(&m, &g, &h).map(|v| -v)
    }

    /// Traction 𝕋·n on `phase` at `p`.
    pub fn traction(&self, p: &Vec3<T>, phase: Phase, normal: &Vec3<T>) -> Vec3<T> {
        let m = self.materials.evaluate(p, phase);
        let s = stress(&m, &self.displacement_gradient(p, phase));
        std::array::from_fn(|r| dot(&s[r], normal))
    }
}

impl<T: Scalar> JumpSource<T> for InterfaceProblem<T> {
    fn jump(&self, point: &Vec3<T>, frame: &LocalFrame<T>) -> JumpData<T> {
        let n = frame.normal();
        let eta = frame.eta();
        let zeta = frame.zeta();
        let gp = self.displacement_gradient(point, Phase::Plus);
        let gm = self.displacement_gradient(point, Phase::Minus);
        let tp = self.traction(point, Phase::Plus, &n);
        let tm = self.traction(point, Phase::Minus, &n);
        JumpData {
            value: self.value_jump(point),
            traction: std::array::from_fn(|r| tp[r] - tm[r]),
            eta: std::array::from_fn(|c| dot(&gp[c], &eta) - dot(&gm[c], &eta)),
            zeta: std::array::from_fn(|c| dot(&gp[c], &zeta) - dot(&gm[c], &zeta)),
        }
    }

    fn value_jump(&self, point: &Vec3<T>) -> Vec3<T> {
        let up = self.displacement(point, Phase::Plus);
        let um = self.displacement(point, Phase::Minus);
        std::array::from_fn(|c| up[c] - um[c])
    }
}
