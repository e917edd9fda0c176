//! Error tables as CSV and fields as legacy VTK.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::HarnessError;
use crate::geometry::Grid;
use crate::harness::norms::ErrorReport;
use crate::scalar::Scalar;

pub const CSV_HEADER: &str = "example,case,nx,ny,nz,h,linf_u1,ord_u1,linf_u2,ord_u2,linf_u3,ord_u3,l2_u1,ord2_u1,l2_u2,ord2_u2,l2_u3,ord2_u3,iters,residual";

/// One CSV line of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub example: u32,
    pub case: u32,
    pub node_counts: [usize; 3],
    pub h: f64,
    pub linf: [f64; 3],
    pub linf_order: Option<[f64; 3]>,
    pub l2: [f64; 3],
    pub l2_order: Option<[f64; 3]>,
    pub iterations: usize,
    pub residual: f64,
}

impl ErrorRow {
    pub fn new(example: u32, case: u32, r: &ErrorReport, iterations: usize, residual: f64) -> Self {
        Self {
            example,
            case,
            node_counts: r.node_counts,
            h: r.h,
            linf: r.linf,
            linf_order: r.linf_order,
            l2: r.l2,
            l2_order: r.l2_order,
            iterations,
            residual,
        }
    }
}

fn opt(o: &Option<[f64; 3]>, c: usize) -> String {
    o.map(|v| format!("{}", v[c])).unwrap_or_default()
}

pub fn format_errors_csv(rows: &[ErrorRow]) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let [nx, ny, nz] = r.node_counts;
        let _ = write!(s, "{},{},{nx},{ny},{nz},{}", r.example, r.case, r.h);
        for c in 0..3 {
            let _ = write!(s, ",{},{}", r.linf[c], opt(&r.linf_order, c));
        }
        for c in 0..3 {
            let _ = write!(s, ",{},{}", r.l2[c], opt(&r.l2_order, c));
        }
        let _ = writeln!(s, ",{},{}", r.iterations, r.residual);
    }
    s
}

pub fn write_errors_csv(rows: &[ErrorRow], path: &Path) -> Result<(), HarnessError> {
    fs::write(path, format_errors_csv(rows))?;
    Ok(())
}

pub fn parse_errors_csv(text: &str) -> Result<Vec<ErrorRow>, HarnessError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        _ => return Err(HarnessError::Parse("missing or unexpected CSV header".into())),
    }
    let bad = |what: &str, line: usize| HarnessError::Parse(format!("bad {what} on line {line}"));
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let ln = k + 2;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 20 {
            return Err(bad("field count", ln));
        }
        let num = |i: usize| {
            f[i].trim()
                .parse::<f64>()
                .map_err(|_| bad(CSV_HEADER.split(',').nth(i).unwrap_or("field"), ln))
        };
        let int = |i: usize| f[i].trim().parse::<usize>().map_err(|_| bad("integer", ln));
        let orders = |idx: [usize; 3]| -> Result<Option<[f64; 3]>, HarnessError> {
            if idx.iter().all(|&i| f[i].trim().is_empty()) {
                return Ok(None);
            }
            Ok(Some([num(idx[0])?, num(idx[1])?, num(idx[2])?]))
        };
        rows.push(ErrorRow {
            example: int(0)? as u32,
            case: int(1)? as u32,
            node_counts: [int(2)?, int(3)?, int(4)?],
            h: num(5)?,
            linf: [num(6)?, num(8)?, num(10)?],
            linf_order: orders([7, 9, 11])?,
            l2: [num(12)?, num(14)?, num(16)?],
            l2_order: orders([13, 15, 17])?,
            iterations: int(18)?,
            residual: num(19)?,
        });
    }
    Ok(rows)
}

/// Legacy ASCII STRUCTURED_POINTS with scalars u1..u3 and err1..err3.
pub fn format_field_vtk<T: Scalar>(grid: &Grid<T>, numeric: &[T], exact: &[T]) -> Result<String, HarnessError> {
    let n = grid.len();
    if numeric.len() != 3 * n || exact.len() != 3 * n {
        return Err(HarnessError::ShapeMismatch {
            numeric: numeric.len(),
            exact: 3 * n,
        });
    }
    let [nx, ny, nz] = grid.node_counts();
    let o = grid.bounds_min();
    let h = grid.spacing();
    let mut s = String::with_capacity(n * 6 * 24 + 256);
    s.push_str("# vtk DataFile Version 3.0\nelasticity interface solution\nASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(s, "DIMENSIONS {nx} {ny} {nz}");
    let _ = writeln!(s, "ORIGIN {:e} {:e} {:e}", o[0], o[1], o[2]);
    let _ = writeln!(s, "SPACING {:e} {:e} {:e}", h[0], h[1], h[2]);
    let _ = writeln!(s, "POINT_DATA {n}");
    for (label, err) in [("u", false), ("err", true)] {
        for c in 0..3 {
            let _ = writeln!(s, "SCALARS {label}{} double 1\nLOOKUP_TABLE default", c + 1);
            for node in 0..n {
                let v = if err {
                    (numeric[3 * node + c] - exact[3 * node + c]).abs()
                } else {
                    numeric[3 * node + c]
                };
                let _ = writeln!(s, "{v:e}");
            }
        }
    }
    Ok(s)
}

pub fn write_field_vtk<T: Scalar>(grid: &Grid<T>, numeric: &[T], exact: &[T], path: &Path) -> Result<(), HarnessError> {
    fs::write(path, format_field_vtk(grid, numeric, exact)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(orders: bool) -> ErrorRow {
        ErrorRow {
            example: 1,
            case: 1,
            node_counts: [20, 20, 20],
            h: 6.0 / 19.0,
            linf: [1.39e-2, 1.36e-2, 1.31e-2],
            linf_order: orders.then_some([2.27, 2.21, 2.12]),
            l2: [3.2e-3, 3.2e-3, 3.15e-3],
            l2_order: orders.then_some([2.02, 2.01, 2.05]),
            iterations: 412,
            residual: 7.5e-11,
        }
    }

    #[test]
    fn header_only() {
        assert_eq!(format_errors_csv(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn first_grid_has_blank_orders() {
        let s = format_errors_csv(&[row(false)]);
        assert_eq!(s.lines().count(), 2);
        let f: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(f[7], "");
        assert_eq!(f[13], "");
    }

    #[test]
    fn round_trip() {
        let rows = vec![row(false), row(true)];
        assert_eq!(parse_errors_csv(&format_errors_csv(&rows)).unwrap(), rows);
    }

    #[test]
    fn vtk_dimensions() {
        let g = Grid::new([0.0_f64; 3], [1.0; 3], [10, 10, 10]).unwrap();
        let u = vec![0.5; 3000];
        let s = format_field_vtk(&g, &u, &u).unwrap();
        assert!(s.contains("DIMENSIONS 10 10 10"));
        assert!(s.contains("POINT_DATA 1000"));
        let block: Vec<&str> = s
            .split("SCALARS u1 double 1\nLOOKUP_TABLE default\n")
            .nth(1)
            .unwrap()
            .lines()
            .take_while(|l| !l.starts_with("SCALARS"))
            .collect();
        assert_eq!(block.len(), 1000);
    }
}
