//! Small dense solves for the local interface systems.

use crate::error::FictitiousError;
use crate::scalar::Scalar;

/// Inverse of a row-equilibrated square matrix and its ∞-norm condition
/// estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseInverse<T> {
    pub n: usize,
    /// Row-major inverse of the original (unscaled) matrix.
    pub inverse: Vec<T>,
    /// κ∞ of the equilibrated matrix.
    pub cond: T,
}

/// Inverts `a` (row-major n×n) by partial-pivot LU after scaling each row to
/// unit max-norm.
pub fn invert<T: Scalar>(a: &[T], n: usize) -> Result<DenseInverse<T>, FictitiousError> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut row_scale = vec![T::one(); n];
    for i in 0..n {
        let mx = m[i * n..(i + 1) * n].iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
        if !(mx > T::zero()) || !mx.is_finite() {
            return Err(FictitiousError::SingularLocalSystem { cond: f64::INFINITY });
        }
        row_scale[i] = T::one() / mx;
        for v in &mut m[i * n..(i + 1) * n] {
            *v = *v * row_scale[i];
        }
    }
    let norm_a = (0..n)
        .map(|i| m[i * n..(i + 1) * n].iter().fold(T::zero(), |acc, &v| acc + v.abs()))
        .fold(T::zero(), |a, b| a.max(b));

    // Gauss-Jordan with partial pivoting on [m | I].
    let mut inv = vec![T::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = T::one();
    }
    for col in 0..n {
        let mut piv = col;
        let mut best = m[col * n + col].abs();
        for r in (col + 1)..n {
            let v = m[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if !(best > T::zero()) {
            return Err(FictitiousError::SingularLocalSystem { cond: f64::INFINITY });
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
                inv.swap(col * n + k, piv * n + k);
            }
        }
        let d = m[col * n + col];
        for k in 0..n {
            m[col * n + k] = m[col * n + k] / d;
            inv[col * n + k] = inv[col * n + k] / d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col];
            if f == T::zero() {
                continue;
            }
            for k in 0..n {
                m[r * n + k] = m[r * n + k] - f * m[col * n + k];
                inv[r * n + k] = inv[r * n + k] - f * inv[col * n + k];
            }
        }
    }
    let norm_inv = (0..n)
        .map(|i| inv[i * n..(i + 1) * n].iter().fold(T::zero(), |acc, &v| acc + v.abs()))
        .fold(T::zero(), |a, b| a.max(b));
    let cond = norm_a * norm_inv;
    // (D A)⁻¹ = A⁻¹ D⁻¹, so A⁻¹ = (D A)⁻¹ D.
    for i in 0..n {
        for j in 0..n {
            inv[i * n + j] = inv[i * n + j] * row_scale[j];
        }
    }
    Ok(DenseInverse { n, inverse: inv, cond })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_small_matrix() {
        let a = [4.0_f64, 1.0, 1.0, 3.0];
        let r = invert(&a, 2).unwrap();
        let x0 = r.inverse[0] * 1.0 + r.inverse[1] * 2.0;
        let x1 = r.inverse[2] * 1.0 + r.inverse[3] * 2.0;
        assert!((x0 - 1.0 / 11.0).abs() < 1e-15);
        assert!((x1 - 7.0 / 11.0).abs() < 1e-15);
        assert!(r.cond >= 1.0);
    }

    #[test]
    fn badly_scaled_rows_are_equilibrated() {
        let a = [1e8_f64, 0.0, 0.0, 1e-8];
        let r = invert(&a, 2).unwrap();
        assert!((r.cond - 1.0).abs() < 1e-12);
        assert!((r.inverse[3] - 1e8).abs() < 1e-4);
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = [1.0_f64, 2.0, 2.0, 4.0];
        assert!(invert(&a, 2).is_err());
    }
}
