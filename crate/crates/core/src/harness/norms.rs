use crate::error::HarnessError;
use crate::scalar::Scalar;

/// Per-component errors on one grid, with orders against the previous grid
/// of a refinement study.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub node_counts: [usize; 3],
    pub h: f64,
    pub linf: [f64; 3],
    pub l2: [f64; 3],
    pub linf_order: Option<[f64; 3]>,
    pub l2_order: Option<[f64; 3]>,
    /// Node of the largest error of each component.
    pub argmax: [usize; 3],
}

/// L∞ = max |e|, L₂ = √(Σe²/N) per component of interleaved 3-vectors.
pub fn error_norms<T: Scalar>(
    numeric: &[T],
    exact: &[T],
    node_counts: [usize; 3],
    h: f64,
) -> Result<ErrorReport, HarnessError> {
    if numeric.len() != exact.len() || !numeric.len().is_multiple_of(3) {
        return Err(HarnessError::ShapeMismatch {
            numeric: numeric.len(),
            exact: exact.len(),
        });
    }
    let n = numeric.len() / 3;
    let mut linf = [0.0f64; 3];
    let mut sq = [0.0f64; 3];
    let mut argmax = [0usize; 3];
    for node in 0..n {
        for c in 0..3 {
            let e = (numeric[3 * node + c] - exact[3 * node + c])
                .abs()
                .to_f64()
                .unwrap_or(f64::NAN);
            if e > linf[c] {
                linf[c] = e;
                argmax[c] = node;
            }
            sq[c] += e * e;
        }
    }
    let l2 = sq.map(|s| if n == 0 { 0.0 } else { (s / n as f64).sqrt() });
    Ok(ErrorReport {
        node_counts,
        h,
        linf,
        l2,
        linf_order: None,
        l2_order: None,
        argmax,
    })
}

/// log₂(coarse / fine)
pub fn convergence_order(coarse: f64, fine: f64) -> Result<f64, HarnessError> {
    if !(coarse > 0.0) || !(fine > 0.0) {
        return Err(HarnessError::NonpositiveError);
    }
    Ok((coarse / fine).log2())
}

/// Fills the order columns of a refinement sequence; orders stay empty
/// when an error is zero.
pub fn fill_orders(reports: &mut [ErrorReport]) {
    for k in 1..reports.len() {
        let (prev, cur) = reports.split_at_mut(k);
        let prev = &prev[k - 1];
        let cur = &mut cur[0];
        let orders = |a: &[f64; 3], b: &[f64; 3]| -> Option<[f64; 3]> {
            let mut o = [0.0; 3];
            for c in 0..3 {
                o[c] = convergence_order(a[c], b[c]).ok()?;
            }
            Some(o)
        };
        cur.linf_order = orders(&prev.linf, &cur.linf);
        cur.l2_order = orders(&prev.l2, &cur.l2);
    }
}
