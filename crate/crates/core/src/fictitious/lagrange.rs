use crate::error::FictitiousError;
use crate::scalar::Scalar;

/// Interpolation (order 0) or first-derivative (order 1) weights.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilWeights<T> {
    pub nodes: Vec<T>,
    pub eval_point: T,
    pub order: usize,
    pub weights: Vec<T>,
}

impl<T: Scalar> StencilWeights<T> {
    pub fn new(nodes: &[T], eval_point: T, order: usize) -> Result<Self, FictitiousError> {
        let weights = lagrange_weights(nodes, eval_point, order)?;
        Ok(Self {
            nodes: nodes.to_vec(),
            eval_point,
            order,
            weights,
        })
    }

    pub fn apply(&self, values: &[T]) -> T {
        self.weights
            .iter()
            .zip(values)
            .fold(T::zero(), |acc, (&w, &v)| acc + w * v)
    }
}

/// Weights of the Lagrange basis polynomials (order 0) or of their
/// derivatives (order 1) at `x`.
pub fn lagrange_weights<T: Scalar>(nodes: &[T], x: T, order: usize) -> Result<Vec<T>, FictitiousError> {
    let n = nodes.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if nodes[i] == nodes[j] {
                return Err(FictitiousError::DuplicateNodes);
            }
        }
    }
    match order {
        0 => Ok((0..n)
            .map(|k| {
                (0..n)
                    .filter(|&j| j != k)
                    .fold(T::one(), |acc, j| acc * (x - nodes[j]) / (nodes[k] - nodes[j]))
            })
            .collect()),
        1 => Ok((0..n)
            .map(|k| {
                let mut sum = T::zero();
                for m in (0..n).filter(|&m| m != k) {
                    let mut prod = T::one() / (nodes[k] - nodes[m]);
                    for j in (0..n).filter(|&j| j != k && j != m) {
                        prod = prod * (x - nodes[j]) / (nodes[k] - nodes[j]);
                    }
                    sum = sum + prod;
                }
                sum
            })
            .collect()),
        other => Err(FictitiousError::UnsupportedOrder(other)),
    }
}

/// Quadratic extrapolation from values at distances 1, 2, 3.
pub const EXTRAPOLATION_WEIGHTS: [f64; 3] = [3.0, -3.0, 1.0];
