//! Central-difference discretization of the equilibrium equations and the
//! global sparse system.

use crate::error::AssemblyError;
use crate::fictitious::{FictitiousTable, LinearFunctional};
use crate::geometry::{Grid, PhaseMap};
use crate::materials::MaterialField;
use crate::scalar::{lit, Scalar, Vec3};

/// One equation's finite-difference weights at a node.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeStencil<T> {
    pub node: usize,
    /// Equation (and displacement component) index 0..3.
    pub equation: usize,
    /// `(offset, component, coefficient)`, sorted by offset then component.
    pub entries: Vec<([isize; 3], usize, T)>,
    pub rhs_contribution: T,
}

impl<T: Scalar> PdeStencil<T> {
    fn new(node: usize, equation: usize) -> Self {
        Self {
            node,
            equation,
            entries: Vec::with_capacity(32),
            rhs_contribution: T::zero(),
        }
    }

    /// Adds `coef · ∂²u_comp/∂x_a∂x_b`.
    fn second(&mut self, h: &Vec3<T>, a: usize, b: usize, comp: usize, coef: T) {
        if coef == T::zero() {
            return;
        }
        if a == b {
            let w = coef / (h[a] * h[a]);
            let mut off = [0isize; 3];
            self.entries.push((off, comp, lit::<T>(-2.0) * w));
            off[a] = -1;
            self.entries.push((off, comp, w));
            off[a] = 1;
            self.entries.push((off, comp, w));
        } else {
            let w = coef / (lit::<T>(4.0) * h[a] * h[b]);
            for (sa, sb, s) in [(1isize, 1isize, 1.0), (-1, -1, 1.0), (1, -1, -1.0), (-1, 1, -1.0)] {
                let mut off = [0isize; 3];
                off[a] = sa;
                off[b] = sb;
                self.entries.push((off, comp, lit::<T>(s) * w));
            }
        }
    }

    /// Adds `coef · ∂u_comp/∂x_a`.
    fn first(&mut self, h: &Vec3<T>, a: usize, comp: usize, coef: T) {
        if coef == T::zero() {
            return;
        }
        let w = coef / (lit::<T>(2.0) * h[a]);
        let mut off = [0isize; 3];
        off[a] = 1;
        self.entries.push((off, comp, w));
        off[a] = -1;
        self.entries.push((off, comp, -w));
    }

    fn compact(&mut self) {
        self.entries.sort_by_key(|x| (x.0, x.1));
        let mut out: Vec<([isize; 3], usize, T)> = Vec::with_capacity(self.entries.len());
        for &(o, c, w) in &self.entries {
            match out.last_mut() {
                Some(last) if last.0 == o && last.1 == c => last.2 = last.2 + w,
                _ => out.push((o, c, w)),
            }
        }
        self.entries = out;
    }

    /// Applies the stencil to a nodal field given by `u(offset)[comp]`.
    pub fn apply(&self, u: impl Fn([isize; 3]) -> Vec3<T>) -> T {
        self.entries.iter().fold(T::zero(), |a, &(o, c, w)| a + w * u(o)[c])
    }
}

/// Stencil of equation `equation` at interior `node`, with λ, μ and their
/// gradients taken from the node's own phase.
pub fn pde_stencil<T: Scalar>(
    grid: &Grid<T>,
    node: usize,
    equation: usize,
    materials: &MaterialField<T>,
    phases: &PhaseMap,
) -> PdeStencil<T> {
    let h = grid.spacing();
    let m = materials.evaluate(&grid.coord_of(node), phases.phase(node));
    let i = equation;
    let mut st = PdeStencil::new(node, equation);
    for c in 0..3 {
        st.second(&h, i, c, c, m.lambda + m.mu);
    }
    for j in 0..3 {
        st.second(&h, j, j, i, m.mu);
    }
    for c in 0..3 {
        st.first(&h, c, c, m.grad_lambda[i]);
    }
    for j in 0..3 {
        st.first(&h, j, i, m.grad_mu[j]);
        st.first(&h, i, j, m.grad_mu[j]);
    }
    st.compact();
    st
}

/// Stencil of the constant-coefficient equations divided by λ+μ:
/// 2(1−ν)∂²u_i/∂x_i² + (1−2ν)Σ_{j≠i}∂²u_i/∂x_j² + Σ_{c≠i}∂²u_c/∂x_i∂x_c.
pub fn homogeneous_pde_stencil<T: Scalar>(grid: &Grid<T>, node: usize, equation: usize, nu: T) -> PdeStencil<T> {
    let h = grid.spacing();
    let two = lit::<T>(2.0);
    let i = equation;
    let mut st = PdeStencil::new(node, equation);
    st.second(&h, i, i, i, two * (T::one() - nu));
    for j in (0..3).filter(|&j| j != i) {
        st.second(&h, j, j, i, T::one() - two * nu);
        st.second(&h, i, j, j, T::one());
    }
    st.compact();
    st
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Builds from per-row entry lists; duplicates are summed and columns
    /// sorted.
    pub fn from_rows(n: usize, rows: Vec<Vec<(usize, T)>>) -> Self {
        assert_eq!(rows.len(), n);
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut r in rows {
            r.sort_by_key(|&(c, _)| c);
            let start = col_idx.len();
            for (c, v) in r {
                if col_idx.len() > start && *col_idx.last().expect("nonempty") == c {
                    let last = values.len() - 1;
                    values[last] = values[last] + v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[T]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => T::zero(),
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|r| self.get(r, r)).collect()
    }

    /// y = A·x
    pub fn mul_vec_into(&self, x: &[T], y: &mut [T]) {
        for (r, out) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            *out = cols.iter().zip(vals).fold(T::zero(), |a, (&c, &v)| a + v * x[c]);
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n];
        self.mul_vec_into(x, &mut y);
        y
    }
}

/// A·u = rhs over all 3N displacement unknowns, `dof = 3·node + component`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem<T> {
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
}

impl<T: Scalar> SparseSystem<T> {
    pub fn dim(&self) -> usize {
        self.matrix.n
    }
}

/// Expands a stencil into matrix entries, replacing every reference to a
/// node of the other phase by its fictitious functional. Returns the row
/// and the amount to add to the right-hand side.
pub fn substitute_fictitious<T: Scalar>(
    grid: &Grid<T>,
    phases: &PhaseMap,
    stencil: &PdeStencil<T>,
    table: &FictitiousTable<T>,
) -> Result<(Vec<(usize, T)>, T), AssemblyError> {
    let p = stencil.node;
    let pijk = grid.ijk(p);
    let side = phases.phase(p);
    let mut row = Vec::with_capacity(stencil.entries.len() * 4);
    let mut rhs = T::zero();
    for &(off, comp, w) in &stencil.entries {
        let q = grid.index(grid.offset(pijk, off).expect("interior stencil stays in the grid"));
        if phases.phase(q) == side {
            row.push((3 * q + comp, w));
            continue;
        }
        let axes: Vec<usize> = (0..3).filter(|&d| off[d] != 0).collect();
        let entry = match axes.as_slice() {
            [axis] => table.central(p, q, *axis),
            _ => table.cross(p, q),
        };
        let f: &LinearFunctional<T> = &entry
            .ok_or(AssemblyError::MissingFictitious { consumer: p, target: q })?
            .values[comp];
        for &(d, fw) in f.terms() {
            row.push((d, w * fw));
        }
        rhs = rhs - w * f.constant();
    }
    Ok((row, rhs))
}

/// Interior rows from the PDE stencils with right-hand side −F plus jump
/// constants; boundary rows are identity rows carrying the Dirichlet value.
pub fn assemble_system<T: Scalar>(
    grid: &Grid<T>,
    phases: &PhaseMap,
    materials: &MaterialField<T>,
    table: &FictitiousTable<T>,
    forcing: impl Fn(&Vec3<T>, crate::geometry::Phase) -> Vec3<T>,
    boundary: impl Fn(&Vec3<T>, crate::geometry::Phase) -> Vec3<T>,
) -> Result<SparseSystem<T>, AssemblyError> {
    let n = 3 * grid.len();
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for node in 0..grid.len() {
        let x = grid.coord_of(node);
        let side = phases.phase(node);
        if grid.is_boundary(grid.ijk(node)) {
            let g = boundary(&x, side);
            for c in 0..3 {
                rows.push(vec![(3 * node + c, T::one())]);
                rhs.push(g[c]);
            }
            continue;
        }
        let f = forcing(&x, side);
        for eq in 0..3 {
            let st = pde_stencil(grid, node, eq, materials, phases);
            let (row, delta) = substitute_fictitious(grid, phases, &st, table)?;
            rows.push(row);
            rhs.push(-f[eq] + delta);
        }
    }
    Ok(SparseSystem {
        matrix: CsrMatrix::from_rows(n, rows),
        rhs,
    })
}
