//! Right-preconditioned BiCGStab with Jacobi or ILU(0) preconditioning.

use std::time::Instant;

use crate::assembly::CsrMatrix;
use crate::error::SolverError;
use crate::scalar::{lit, Scalar};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Maximum iterations as a multiple of the system dimension.
pub const DEFAULT_ITERATION_FACTOR: usize = 10;

/// Preconditioner choice of the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PreconditionerKind {
    Jacobi,
    /// Default: Jacobi stalls on large-contrast systems whose soft-phase
    /// rows lose diagonal dominance.
    #[default]
    Ilu0,
}

impl PreconditionerKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Jacobi => "jacobi",
            Self::Ilu0 => "ilu0",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jacobi" => Some(Self::Jacobi),
            "ilu0" | "ilu" => Some(Self::Ilu0),
            _ => None,
        }
    }
}

/// BiCGStab with a freshly built preconditioner of the given kind.
pub fn solve_preconditioned<T: Scalar>(
    a: &CsrMatrix<T>,
    kind: PreconditionerKind,
    b: &[T],
    rel_tolerance: T,
    max_iterations: usize,
) -> Result<(Vec<T>, SolveReport), SolverError> {
    match kind {
        PreconditionerKind::Jacobi => bicgstab(a, &jacobi_preconditioner(a)?, b, rel_tolerance, max_iterations),
        PreconditionerKind::Ilu0 => bicgstab(a, &ilu0_preconditioner(a)?, b, rel_tolerance, max_iterations),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jacobi<T> {
    inv_diag: Vec<T>,
}

pub fn jacobi_preconditioner<T: Scalar>(a: &CsrMatrix<T>) -> Result<Jacobi<T>, SolverError> {
    let d = a.diagonal();
    let mut inv = Vec::with_capacity(d.len());
    for (row, v) in d.into_iter().enumerate() {
        if v == T::zero() {
            return Err(SolverError::ZeroDiagonal { row });
        }
        inv.push(T::one() / v);
    }
    Ok(Jacobi { inv_diag: inv })
}

impl<T: Scalar> Jacobi<T> {
    pub fn scaling(&self) -> &[T] {
        &self.inv_diag
    }
}

/// Approximate inverse applied once per Krylov step.
pub trait Preconditioner<T> {
    fn dim(&self) -> usize;
    fn apply_into(&self, x: &[T], y: &mut [T]);
}

impl<T: Scalar> Preconditioner<T> for Jacobi<T> {
    fn dim(&self) -> usize {
        self.inv_diag.len()
    }

    fn apply_into(&self, x: &[T], y: &mut [T]) {
        for ((o, &d), &v) in y.iter_mut().zip(&self.inv_diag).zip(x) {
            *o = d * v;
        }
    }
}

/// Pivots of U are kept at least this fraction of |a_ii|: interface rows
/// can lose nearly all of their diagonal during the elimination, and one
/// tiny pivot is enough to make the preconditioned operator blow up.
pub const PIVOT_FLOOR: f64 = 0.5;

/// Incomplete LU factorisation with the sparsity pattern of A. L has a unit
/// diagonal and shares storage with U.
#[derive(Debug, Clone, PartialEq)]
pub struct Ilu0<T> {
    factors: CsrMatrix<T>,
    diag_pos: Vec<usize>,
}

pub fn ilu0_preconditioner<T: Scalar>(a: &CsrMatrix<T>) -> Result<Ilu0<T>, SolverError> {
    ilu0_with_pivot_floor(a, PIVOT_FLOOR)
}

/// ILU(0) with a caller-chosen pivot floor; 0 gives the plain factorisation.
pub fn ilu0_with_pivot_floor<T: Scalar>(a: &CsrMatrix<T>, pivot_floor: f64) -> Result<Ilu0<T>, SolverError> {
    let n = a.n;
    let mut lu = a.clone();
    let mut diag_pos = Vec::with_capacity(n);
    for r in 0..n {
        let (cols, _) = lu.row(r);
        let k = cols
            .binary_search(&r)
            .map_err(|_| SolverError::ZeroDiagonal { row: r })?;
        diag_pos.push(lu.row_ptr[r] + k);
    }
    // Position of each column of the current row, usize::MAX if absent.
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let (start, end) = (lu.row_ptr[i], lu.row_ptr[i + 1]);
        for p in start..end {
            slot[lu.col_idx[p]] = p;
        }
        for p in start..diag_pos[i] {
            let k = lu.col_idx[p];
            let pivot = lu.values[diag_pos[k]];
            if pivot == T::zero() {
                return Err(SolverError::ZeroPivot { row: k });
            }
            let lik = lu.values[p] / pivot;
            lu.values[p] = lik;
            for q in diag_pos[k] + 1..lu.row_ptr[k + 1] {
                let target = slot[lu.col_idx[q]];
                if target != usize::MAX {
                    lu.values[target] = lu.values[target] - lik * lu.values[q];
                }
            }
        }
        let a_ii = a.values[diag_pos[i]];
        let u_ii = lu.values[diag_pos[i]];
        let floor = lit::<T>(pivot_floor) * a_ii.abs();
        if u_ii.abs() < floor {
            let sign = if u_ii == T::zero() {
                a_ii.signum()
            } else {
                u_ii.signum()
            };
            lu.values[diag_pos[i]] = sign * floor;
        }
        if lu.values[diag_pos[i]] == T::zero() {
            return Err(SolverError::ZeroPivot { row: i });
        }
        for p in start..end {
            slot[lu.col_idx[p]] = usize::MAX;
        }
    }
    Ok(Ilu0 { factors: lu, diag_pos })
}

impl<T: Scalar> Ilu0<T> {
    /// Diagonal of U.
    pub fn pivots(&self) -> Vec<T> {
        self.diag_pos.iter().map(|&p| self.factors.values[p]).collect()
    }
}

impl<T: Scalar> Preconditioner<T> for Ilu0<T> {
    fn dim(&self) -> usize {
        self.factors.n
    }

    fn apply_into(&self, x: &[T], y: &mut [T]) {
        let lu = &self.factors;
        for i in 0..lu.n {
            let mut v = x[i];
            for p in lu.row_ptr[i]..self.diag_pos[i] {
                v = v - lu.values[p] * y[lu.col_idx[p]];
            }
            y[i] = v;
        }
        for i in (0..lu.n).rev() {
            let mut v = y[i];
            for p in self.diag_pos[i] + 1..lu.row_ptr[i + 1] {
                v = v - lu.values[p] * y[lu.col_idx[p]];
            }
            y[i] = v / lu.values[self.diag_pos[i]];
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    Breakdown,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// ‖b − A·x‖₂ / ‖b‖₂ of the returned iterate.
    pub relative_residual: f64,
    pub converged: bool,
    pub termination: Termination,
    pub wall_time: f64,
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn true_residual<T: Scalar>(a: &CsrMatrix<T>, b: &[T], x: &[T]) -> T {
    let ax = a.mul_vec(x);
    let r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &v)| bi - v).collect();
    norm2(&r)
}

/// Restarts allowed after a breakdown before giving up.
pub const MAX_RESTARTS: usize = 10;

/// Right-preconditioned BiCGStab from a zero initial guess with the shadow
/// residual equal to the initial residual. Breakdown and the iteration cap
/// are reported in the returned report together with the last iterate.
pub fn bicgstab<T: Scalar, P: Preconditioner<T>>(
    a: &CsrMatrix<T>,
    m: &P,
    b: &[T],
    rel_tolerance: T,
    max_iterations: usize,
) -> Result<(Vec<T>, SolveReport), SolverError> {
    let start = Instant::now();
    let n = a.n;
    if b.len() != n || m.dim() != n {
        return Err(SolverError::DimensionMismatch {
            matrix: n,
            vector: b.len(),
        });
    }
    if !(rel_tolerance > T::zero()) {
        return Err(SolverError::InvalidTolerance);
    }
    let mut x = vec![T::zero(); n];
    let bnorm = norm2(b);
    let finish = |x: Vec<T>, it: usize, term: Termination| {
        let rel = if bnorm == T::zero() {
            T::zero()
        } else {
            true_residual(a, b, &x) / bnorm
        };
        let rel = rel.to_f64().unwrap_or(f64::INFINITY);
        let tol = rel_tolerance.to_f64().unwrap_or(0.0);
        let converged = rel <= tol;
        let termination = if converged { Termination::Converged } else { term };
        Ok((
            x,
            SolveReport {
                iterations: it,
                relative_residual: rel,
                converged,
                termination,
                wall_time: start.elapsed().as_secs_f64(),
            },
        ))
    };
    if bnorm == T::zero() {
        return finish(x, 0, Termination::Converged);
    }
    let tol_abs = rel_tolerance * bnorm;
    let mut r = b.to_vec();
    let mut r_hat = r.clone();
    let mut p = vec![T::zero(); n];
    let mut v = vec![T::zero(); n];
    let mut y = vec![T::zero(); n];
    let mut s = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut t = vec![T::zero(); n];
    let (mut rho, mut alpha, mut omega) = (T::one(), T::one(), T::one());
    let tiny = T::min_positive_value();
    let mut restarts = 0;

    for it in 1..=max_iterations {
        let mut rho_new = dot(&r_hat, &r);
        // A shadow residual orthogonal to the residual is replaced by the
        // residual itself and the recurrences restart.
        if rho_new.abs() <= T::epsilon() * norm2(&r_hat) * norm2(&r) || omega.abs() < tiny {
            if restarts == MAX_RESTARTS || norm2(&r) == T::zero() {
                return finish(x, it - 1, Termination::Breakdown);
            }
            restarts += 1;
            r_hat.copy_from_slice(&r);
            p.iter_mut().chain(v.iter_mut()).for_each(|e| *e = T::zero());
            (rho, alpha, omega) = (T::one(), T::one(), T::one());
            rho_new = dot(&r_hat, &r);
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for k in 0..n {
            p[k] = r[k] + beta * (p[k] - omega * v[k]);
        }
        m.apply_into(&p, &mut y);
        a.mul_vec_into(&y, &mut v);
        let rv = dot(&r_hat, &v);
        if rv.abs() < tiny {
            return finish(x, it - 1, Termination::Breakdown);
        }
        alpha = rho / rv;
        for k in 0..n {
            s[k] = r[k] - alpha * v[k];
        }
        if norm2(&s) <= tol_abs {
            for k in 0..n {
                x[k] = x[k] + alpha * y[k];
            }
            if true_residual(a, b, &x) <= tol_abs {
                return finish(x, it, Termination::Converged);
            }
            r = b.iter().zip(a.mul_vec(&x)).map(|(&bi, v)| bi - v).collect();
            continue;
        }
        m.apply_into(&s, &mut z);
        a.mul_vec_into(&z, &mut t);
        let tt = dot(&t, &t);
        if tt < tiny {
            return finish(x, it, Termination::Breakdown);
        }
        omega = dot(&t, &s) / tt;
        for k in 0..n {
            x[k] = x[k] + alpha * y[k] + omega * z[k];
            r[k] = s[k] - omega * t[k];
        }
        if norm2(&r) <= tol_abs {
            if true_residual(a, b, &x) <= tol_abs {
                return finish(x, it, Termination::Converged);
            }
            r = b.iter().zip(a.mul_vec(&x)).map(|(&bi, v)| bi - v).collect();
        }
    }
    finish(x, max_iterations, Termination::MaxIterations)
}
