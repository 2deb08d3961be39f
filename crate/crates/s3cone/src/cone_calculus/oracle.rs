use serde::Serialize;

use crate::cone_calculus::cartesian::{bilaplacian_at, frobenius, prepared_stencil, to_cartesian, GridSpec};
use crate::cone_calculus::SeparatedTensor;
use crate::error::{Error, Result};
use crate::numerics::loglog_slope;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub grid_n: usize,
    pub h_grid: f64,
    pub max_rel_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub label: String,
    pub order: usize,
    pub inner: f64,
    pub outer: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of log error against log h; None when the
    /// formula side vanishes and errors are at rounding level.
    pub slope: Option<f64>,
    /// Formula side is identically zero: errors are absolute.
    pub degenerate: bool,
}

/// Formula (closed-form bilaplacian) against the Cartesian FD oracle
/// on each grid; the error is max |FD − exact| / max |exact| over the
/// annulus nodes in the Frobenius norm.
pub fn compare_oracle(
    label: &str,
    s: &SeparatedTensor<f64>,
    grids: &[usize],
    inner: f64,
    outer: f64,
    order: usize,
) -> Result<ConvergenceReport> {
    if grids.len() < 3 {
        return Err(Error::Invalid(format!("convergence study needs >= 3 grids, got {}", grids.len())));
    }
    let exact = s.bilaplacian();
    let mut rows = Vec::new();
    let mut degenerate = false;
    for &n in grids {
        let spec = GridSpec::new(n, inner, outer)?;
        let radius = if order == 2 { 2 } else { 4 };
        let field = to_cartesian(s, spec, radius)?;
        let (st, scale) = prepared_stencil(&field, order)?;
        let (mut err, mut size, mut input) = (0.0f64, 0.0f64, 0.0f64);
        for idx in field.annulus_nodes() {
            let x = field.point(idx);
            let fd = bilaplacian_at(&field, &st, scale, idx)?;
            let ex = exact.packed_at(&x)?;
            let d: [f64; 10] = std::array::from_fn(|c| fd[c] - ex[c]);
            err = err.max(frobenius(&d));
            size = size.max(frobenius(&ex));
            input = input.max(frobenius(field.get(idx).expect("annulus node stored")));
        }
        let zero = size <= 1e-12 * input.max(1.0);
        degenerate |= zero;
        let rel = if zero { err } else { err / size };
        rows.push(ConvergenceRow { grid_n: n, h_grid: spec.spacing(), max_rel_error: rel });
    }
    let slope = if degenerate {
        None
    } else {
        let h: Vec<f64> = rows.iter().map(|r| r.h_grid).collect();
        let e: Vec<f64> = rows.iter().map(|r| r.max_rel_error).collect();
        loglog_slope(&h, &e)
    };
    Ok(ConvergenceReport { label: label.to_string(), order, inner, outer, rows, slope, degenerate })
}
