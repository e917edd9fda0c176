//! Interface jump conditions in the local (ξ, η, ζ) frame and elimination of
//! the interfacial derivatives that cannot be approximated.
//!
//! Derivative columns are laid out per displacement component in blocks of
//! six: (x⁺, x⁻, y⁺, y⁻, z⁺, z⁻). Rows 0–2 are the traction jumps, rows 3–5
//! the η-derivative jumps of u₁, u₂, u₃ and rows 6–8 the ζ-derivative jumps.

use crate::error::JumpError;
use crate::geometry::Phase;
use crate::scalar::{lit, Scalar, Vec3};

pub const N_ROWS: usize = 9;
pub const N_COLS: usize = 18;

/// Column of ∂u_component/∂x_axis on the given side.
#[inline]
pub fn column(component: usize, axis: usize, side: Phase) -> usize {
    component * 6 + axis * 2 + usize::from(side == Phase::Minus)
}

/// Inverse of [`column`].
#[inline]
pub fn decode_column(col: usize) -> (usize, usize, Phase) {
    let component = col / 6;
    let r = col % 6;
    let side = if r.is_multiple_of(2) { Phase::Plus } else { Phase::Minus };
    (component, r / 2, side)
}

/// One of the six derivative sets (side × direction), numbered 1–6 as
/// x⁺, x⁻, y⁺, y⁻, z⁺, z⁻.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DerivativeSet {
    pub axis: usize,
    pub side: Phase,
}

impl DerivativeSet {
    pub fn from_index(index: usize) -> Self {
        assert!((1..=6).contains(&index), "derivative set index {index}");
        let r = index - 1;
        DerivativeSet {
            axis: r / 2,
            side: if r.is_multiple_of(2) { Phase::Plus } else { Phase::Minus },
        }
    }

    pub fn index(self) -> usize {
        column(0, self.axis, self.side) + 1
    }
}

/// Rotation to the interface frame; rows are ξ (normal), η and ζ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame<T> {
    pub theta: T,
    pub phi_angle: T,
    pub p: [[T; 3]; 3],
}

impl<T: Scalar> LocalFrame<T> {
    pub fn normal(&self) -> Vec3<T> {
        self.p[0]
    }

    pub fn eta(&self) -> Vec3<T> {
        self.p[1]
    }

    pub fn zeta(&self) -> Vec3<T> {
        self.p[2]
    }
}

pub fn transformation_matrix<T: Scalar>(theta: T, phi_angle: T) -> LocalFrame<T> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi_angle.sin_cos();
    LocalFrame {
        theta,
        phi_angle,
        p: [[sp * ct, sp * st, cp], [-st, ct, T::zero()], [-cp * ct, -cp * st, sp]],
    }
}

/// Prescribed jumps at an interface point, all as (Ω⁺ value) − (Ω⁻ value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpData<T> {
    /// [u]
    pub value: Vec3<T>,
    /// [𝕋·n]
    pub traction: Vec3<T>,
    /// [∂u_c/∂η]
    pub eta: Vec3<T>,
    /// [∂u_c/∂ζ]
    pub zeta: Vec3<T>,
}

impl<T: Scalar> JumpData<T> {
    pub fn zero() -> Self {
        let z = [T::zero(); 3];
        Self {
            value: z,
            traction: z,
            eta: z,
            zeta: z,
        }
    }
}

/// One-sided moduli at an interface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceModuli<T> {
    pub lambda_plus: T,
    pub lambda_minus: T,
    pub mu_plus: T,
    pub mu_minus: T,
}

impl<T: Scalar> InterfaceModuli<T> {
    pub fn m_plus(&self) -> T {
        self.lambda_plus + lit::<T>(2.0) * self.mu_plus
    }

    pub fn m_minus(&self) -> T {
        self.lambda_minus + lit::<T>(2.0) * self.mu_minus
    }

    fn lame(&self, side: Phase) -> (T, T) {
        match side {
            Phase::Plus => (self.lambda_plus, self.mu_plus),
            Phase::Minus => (self.lambda_minus, self.mu_minus),
        }
    }
}

/// The 9×18 jump-condition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpMatrix<T> {
    pub c: [[T; N_COLS]; N_ROWS],
    /// Divisor applied to the traction rows (1 if unscaled).
    pub traction_scale: T,
    pub moduli: InterfaceModuli<T>,
}

/// Coefficient of ∂u_c/∂x_j in the r-th traction component with normal n.
fn traction_coefficient<T: Scalar>(r: usize, c: usize, j: usize, n: &Vec3<T>, lambda: T, mu: T) -> T {
    let d = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
    lambda * d(j, c) * n[r] + mu * (d(c, r) * n[j] + d(j, r) * n[c])
}

impl<T: Scalar> JumpMatrix<T> {
    /// Builds C from the frame and the one-sided moduli. The printed
    /// λ⁻P(1,1) entry of block C₁₃ carries the minus sign of every other
    /// Ω⁻ column.
    pub fn assemble(frame: &LocalFrame<T>, moduli: InterfaceModuli<T>) -> Self {
        let mut c = [[T::zero(); N_COLS]; N_ROWS];
        let n = frame.normal();
        for side in [Phase::Plus, Phase::Minus] {
            let sign = if side == Phase::Plus { T::one() } else { -T::one() };
            let (lambda, mu) = moduli.lame(side);
            for comp in 0..3 {
                for axis in 0..3 {
                    let col = column(comp, axis, side);
                    for r in 0..3 {
                        c[r][col] = sign * traction_coefficient(r, comp, axis, &n, lambda, mu);
                    }
                    c[3 + comp][col] = sign * frame.p[1][axis];
                    c[6 + comp][col] = sign * frame.p[2][axis];
                }
            }
        }
        Self {
            c,
            traction_scale: T::one(),
            moduli,
        }
    }

    /// Copy with the traction rows divided by max(M⁺, M⁻).
    pub fn traction_scaled(&self) -> Self {
        let s = self.moduli.m_plus().max(self.moduli.m_minus()) * self.traction_scale;
        let f = self.traction_scale / s;
        let mut out = self.clone();
        for r in 0..3 {
            for v in out.c[r].iter_mut() {
                *v = *v * f;
            }
        }
        out.traction_scale = s;
        out
    }

    /// C(row, col) with the 1-based indices used by the closed forms.
    #[inline]
    fn at(&self, row: usize, col: usize) -> T {
        self.c[row - 1][col - 1]
    }

    pub fn max_abs(&self) -> T {
        self.c
            .iter()
            .flat_map(|r| r.iter())
            .fold(T::zero(), |a, &b| a.max(b.abs()))
    }

    /// Applies C to a vector of the 18 one-sided derivatives.
    pub fn apply(&self, derivatives: &[T; N_COLS]) -> [T; N_ROWS] {
        std::array::from_fn(|r| (0..N_COLS).fold(T::zero(), |acc, k| acc + self.c[r][k] * derivatives[k]))
    }
}

/// Availability of a derivative set's one-sided tangential stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetAvailability {
    /// Number of in-phase nodes around the intersection in that direction.
    pub score: usize,
    /// Whether a one-sided 3×3 auxiliary block exists.
    pub evaluable: bool,
}

fn tangential_axes(meshline_axis: usize) -> (usize, usize) {
    match meshline_axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Ranking key of a set for elimination: fewer in-phase nodes first, then
/// the + side, then the smaller axis.
fn elimination_rank(set: DerivativeSet, avail: &[SetAvailability; 6]) -> (usize, usize, usize) {
    (
        avail[set.index() - 1].score,
        usize::from(set.side == Phase::Minus),
        set.axis,
    )
}

/// Candidate pairs (l, m), best first. Each pair eliminates one set from each
/// tangential direction, is never drawn from the meshline direction, and
/// keeps an evaluable set in both tangential directions.
pub fn ranked_elimination_pairs(meshline_axis: usize, availability: &[SetAvailability; 6]) -> Vec<(usize, usize)> {
    let (t1, t2) = tangential_axes(meshline_axis);
    let mut pairs = Vec::with_capacity(4);
    for s1 in [Phase::Plus, Phase::Minus] {
        for s2 in [Phase::Plus, Phase::Minus] {
            let l = DerivativeSet { axis: t1, side: s1 };
            let m = DerivativeSet { axis: t2, side: s2 };
            let keep_l = DerivativeSet {
                axis: t1,
                side: s1.opposite(),
            };
            let keep_m = DerivativeSet {
                axis: t2,
                side: s2.opposite(),
            };
            if !availability[keep_l.index() - 1].evaluable || !availability[keep_m.index() - 1].evaluable {
                continue;
            }
            let mut key = [elimination_rank(l, availability), elimination_rank(m, availability)];
            key.sort();
            pairs.push((key, (l.index(), m.index())));
        }
    }
    pairs.sort_by_key(|a| a.0);
    pairs.into_iter().map(|(_, p)| p).collect()
}

/// The preferred elimination pair.
pub fn select_elimination_pair(
    meshline_axis: usize,
    availability: &[SetAvailability; 6],
) -> Result<(usize, usize), JumpError> {
    ranked_elimination_pairs(meshline_axis, availability)
        .into_iter()
        .next()
        .ok_or(JumpError::NoViablePair { axis: meshline_axis })
}

/// Coefficients and rows after eliminating derivative sets l and m.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationResult<T> {
    pub l: usize,
    pub m: usize,
    pub a: [T; 3],
    pub b: [T; 3],
    pub c: [T; 3],
    pub d: [T; 3],
    pub e: [T; 3],
    pub f: [T; 3],
    pub g: [T; 3],
    /// Combined rows over the 18 interfacial derivatives.
    pub rows: [[T; N_COLS]; 3],
    /// Divisor of the traction rows of the matrix the rows came from.
    pub traction_scale: T,
}

impl<T: Scalar> EliminationResult<T> {
    /// The six eliminated columns (0-based).
    pub fn eliminated_columns(&self) -> [usize; 6] {
        let (l, m) = (self.l - 1, self.m - 1);
        [l, m, l + 6, m + 6, l + 12, m + 12]
    }
}

/// Closed-form elimination of sets l and m (1-based). The pair {5, 6}
/// uses the η conditions directly, since η has no z component.
pub fn elimination_coefficients<T: Scalar>(
    jm: &JumpMatrix<T>,
    l: usize,
    m: usize,
) -> Result<EliminationResult<T>, JumpError> {
    if !(1..=6).contains(&l) || !(1..=6).contains(&m) || l == m {
        return Err(JumpError::InvalidPair { l, m });
    }
    let z = [T::zero(); 3];
    let (mut a, mut b, mut c, mut d, mut e, mut f, mut g) = (z, z, z, z, z, z, z);
    let special = (l.min(m), l.max(m)) == (5, 6);
    if special {
        b[0] = T::one();
        d[1] = T::one();
        f[2] = T::one();
    } else {
        let cc = |r: usize, k: usize| jm.at(r, k);
        let a0 = cc(4, l) * cc(7, m) - cc(7, l) * cc(4, m);
        a = [a0; 3];
        for i in 0..3 {
            let r = i + 1;
            b[i] = cc(7, l) * cc(r, m) - cc(r, l) * cc(7, m);
            c[i] = cc(r, l) * cc(4, m) - cc(4, l) * cc(r, m);
            d[i] = cc(8, l + 6) * cc(r, m + 6) - cc(r, l + 6) * cc(8, m + 6);
            e[i] = cc(r, l + 6) * cc(5, m + 6) - cc(5, l + 6) * cc(r, m + 6);
            f[i] = cc(9, l + 12) * cc(r, m + 12) - cc(r, l + 12) * cc(9, m + 12);
            g[i] = cc(r, l + 12) * cc(6, m + 12) - cc(6, l + 12) * cc(r, m + 12);
        }
    }
    let mut rows = [[T::zero(); N_COLS]; 3];
    for i in 0..3 {
        let weights = [
            (i, a[i]),
            (3, b[i]),
            (6, c[i]),
            (4, d[i]),
            (7, e[i]),
            (5, f[i]),
            (8, g[i]),
        ];
        for (row, w) in weights {
            if w == T::zero() {
                continue;
            }
            for k in 0..N_COLS {
                rows[i][k] = rows[i][k] + w * jm.c[row][k];
            }
        }
    }
    let c_norm = jm.max_abs();
    let tiny = lit::<T>(1e-10) * c_norm;
    let row_norm = |r: &[T; N_COLS]| r.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
    // a₁ = 0 drops the traction condition from every combined row.
    let lost_traction = !special && a[0].abs() <= lit::<T>(1e-10);
    if lost_traction || rows.iter().all(|r| row_norm(r) < tiny) {
        return Err(JumpError::DegenerateElimination { l, m });
    }
    Ok(EliminationResult {
        l,
        m,
        a,
        b,
        c,
        d,
        e,
        f,
        g,
        rows,
        traction_scale: jm.traction_scale,
    })
}

/// Six interface equations at one point: three value jumps [u_c] = b_c and
/// three combined derivative conditions `rows · ∂u = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedConditions<T> {
    pub value_jump: Vec3<T>,
    pub rows: [[T; N_COLS]; 3],
    pub rhs: Vec3<T>,
}

pub fn combined_condition_rows<T: Scalar>(elim: &EliminationResult<T>, jump: &JumpData<T>) -> CombinedConditions<T> {
    let mut rows = elim.rows;
    for col in elim.eliminated_columns() {
        for r in rows.iter_mut() {
            r[col] = T::zero();
        }
    }
    let rhs = std::array::from_fn(|i| {
        elim.a[i] * jump.traction[i] / elim.traction_scale
            + elim.b[i] * jump.eta[0]
            + elim.c[i] * jump.zeta[0]
            + elim.d[i] * jump.eta[1]
            + elim.e[i] * jump.zeta[1]
            + elim.f[i] * jump.eta[2]
            + elim.g[i] * jump.zeta[2]
    });
    CombinedConditions {
        value_jump: jump.value,
        rows,
        rhs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn moduli() -> InterfaceModuli<f64> {
        let r = |nu: f64| 2.0 * nu / (1.0 - 2.0 * nu);
        InterfaceModuli {
            lambda_plus: r(0.2) * 1.5e6,
            lambda_minus: r(0.24) * 2e6,
            mu_plus: 1.5e6,
            mu_minus: 2e6,
        }
    }

    #[test]
    fn frame_examples() {
        let f = transformation_matrix(0.0_f64, PI / 2.0);
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((f.p[i][j] - id[i][j]).abs() < 1e-15);
            }
        }
        let f = transformation_matrix(PI / 2.0, PI / 2.0);
        let expect = [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((f.p[i][j] - expect[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn identity_frame_blocks() {
        let f = transformation_matrix(0.0_f64, PI / 2.0);
        let md = moduli();
        let jm = JumpMatrix::assemble(&f, md);
        let row0: Vec<f64> = jm.c[0][0..6].to_vec();
        let expect = [md.m_plus(), -md.m_minus(), 0.0, 0.0, 0.0, 0.0];
        for k in 0..6 {
            assert!((row0[k] - expect[k]).abs() < 1e-9);
        }
        assert_eq!(&jm.c[3][0..6], &[0.0, 0.0, 1.0, -1.0, 0.0, 0.0]);
        // C₁₃ block: u₃ columns of the first traction row carry λ±P(1,1) at z
        assert!((jm.c[0][column(2, 2, Phase::Plus)] - md.lambda_plus).abs() < 1e-9);
        assert!((jm.c[0][column(2, 2, Phase::Minus)] + md.lambda_minus).abs() < 1e-9);
    }

    #[test]
    fn printed_traction_blocks() {
        let f = transformation_matrix(0.7_f64, 1.1);
        let md = moduli();
        let jm = JumpMatrix::assemble(&f, md);
        let p = f.p;
        let (mp, lp, up) = (md.m_plus(), md.lambda_plus, md.mu_plus);
        let plus = |comp, axis| column(comp, axis, Phase::Plus);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + b.abs());
        assert!(close(jm.c[0][plus(0, 0)], mp * p[0][0]));
        assert!(close(jm.c[0][plus(0, 1)], up * p[0][1]));
        assert!(close(jm.c[0][plus(1, 1)], lp * p[0][0]));
        assert!(close(jm.c[0][plus(1, 2)], 0.0));
        assert!(close(jm.c[1][plus(0, 0)], lp * p[0][1]));
        assert!(close(jm.c[1][plus(1, 1)], mp * p[0][1]));
        assert!(close(jm.c[2][plus(2, 2)], mp * p[0][2]));
        assert!(close(jm.c[2][plus(1, 1)], lp * p[0][2]));
        assert!(close(jm.c[2][plus(2, 0)], up * p[0][0]));
    }

    #[test]
    fn worked_pair_choice() {
        let full = [SetAvailability {
            score: 16,
            evaluable: true,
        }; 6];
        assert_eq!(select_elimination_pair(1, &full).unwrap(), (1, 5));
        let mut partial = full;
        partial[1] = SetAvailability {
            score: 3,
            evaluable: false,
        };
        let (l, m) = select_elimination_pair(1, &partial).unwrap();
        assert!(l == 2 || m == 2);
        let mut none = full;
        for k in [0, 1, 4, 5] {
            none[k].evaluable = false;
        }
        assert_eq!(
            select_elimination_pair(1, &none),
            Err(JumpError::NoViablePair { axis: 1 })
        );
    }

    #[test]
    fn identity_frame_pair_is_degenerate() {
        let f = transformation_matrix(0.0_f64, PI / 2.0);
        let jm = JumpMatrix::assemble(&f, moduli()).traction_scaled();
        assert_eq!(
            elimination_coefficients(&jm, 1, 5),
            Err(JumpError::DegenerateElimination { l: 1, m: 5 })
        );
    }

    #[test]
    fn nullity_of_designated_columns() {
        let f = transformation_matrix(0.4_f64, 1.2);
        let jm = JumpMatrix::assemble(&f, moduli()).traction_scaled();
        for (l, m) in [(1, 5), (2, 6), (1, 6), (5, 6), (3, 5)] {
            let r = elimination_coefficients(&jm, l, m).unwrap();
            for row in &r.rows {
                let mx = row.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
                for col in r.eliminated_columns() {
                    assert!(row[col].abs() <= 1e-10 * mx, "({l},{m}) col {col}");
                }
            }
        }
    }

    #[test]
    fn value_jumps_decouple() {
        let f = transformation_matrix(0.4_f64, 1.2);
        let jm = JumpMatrix::assemble(&f, moduli()).traction_scaled();
        let r = elimination_coefficients(&jm, 1, 5).unwrap();
        let mut j = JumpData::zero();
        let base = combined_condition_rows(&r, &j);
        j.value = [1.0, -2.0, 0.5];
        let shifted = combined_condition_rows(&r, &j);
        assert_eq!(shifted.value_jump, [1.0, -2.0, 0.5]);
        assert_eq!(shifted.rows, base.rows);
        assert_eq!(shifted.rhs, base.rhs);
        assert_eq!(base.rhs, [0.0; 3]);
    }

    #[test]
    fn set_indices_round_trip() {
        for k in 1..=6 {
            assert_eq!(DerivativeSet::from_index(k).index(), k);
        }
        for col in 0..N_COLS {
            let (c, a, s) = decode_column(col);
            assert_eq!(column(c, a, s), col);
        }
    }
}
