//! Curvature, the Bach tensor and the linearized Bach-flat operator.
//!
//! Metric-derived quantities are computed pointwise from a degree-4 Taylor
//! jet of the metric, the jet coming from central differences (configurable
//! order) either on an explicit metric or on the nodes of a Cartesian grid.

mod curvature;
mod fd;
mod jet;
mod linearized;
mod remainder;

pub use curvature::{bach_from_jet, BachPoint, PointCurvature};
pub use fd::{check_order, fd_jet, fd_jet_at, jet_radius, jet_reach};
pub use jet::{Jet, MAX_DEGREE};
pub use linearized::{
    delta_t, linearized_from_jet, linearized_operator, modified_from_jet, modified_operator, modified_operator_with,
    scalar_linearization, scalar_linearization_from_jet, GaugeParameter, LINEARIZATION_FACTOR,
};
pub use remainder::{annulus_points, metric_plus, remainder_slopes, JetConfig, RemainderReport};

use serde::Serialize;

use crate::cone_calculus::CartesianField4;
use crate::error::{Error, Result};

/// Curvature at every annulus node of a grid metric.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureBundle {
    pub nodes: Vec<[i32; 4]>,
    pub points: Vec<PointCurvature>,
}

impl CurvatureBundle {
    pub fn max_abs(&self) -> f64 {
        self.points.iter().map(PointCurvature::max_abs).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BachField {
    pub nodes: Vec<[i32; 4]>,
    pub values: Vec<BachPoint>,
}

fn grid_jet(g: &CartesianField4, idx: [i32; 4], order: usize, deg: usize) -> Result<[Jet; 10]> {
    check_order(order)?;
    let need = jet_reach(order, deg);
    if (g.pad as f64) < need - 1e-9 {
        return Err(Error::Grid(format!("pad {} below the jet stencil reach {need:.3}", g.pad)));
    }
    fd_jet(
        |o| {
            let j = [idx[0] + o[0], idx[1] + o[1], idx[2] + o[2], idx[3] + o[3]];
            g.get(j).copied().ok_or_else(|| Error::Grid(format!("jet stencil leaves the grid at {j:?}")))
        },
        g.spacing(),
        order,
        deg,
    )
}

/// Curvature of a metric sampled on a grid, at the annulus nodes.
pub fn curvature(g: &CartesianField4, order: usize) -> Result<CurvatureBundle> {
    let nodes = g.annulus_nodes();
    let mut points = Vec::with_capacity(nodes.len());
    for &idx in &nodes {
        let jet = grid_jet(g, idx, order, 2)?;
        points.push(PointCurvature::from_jet(&jet, g.point(idx))?);
    }
    Ok(CurvatureBundle { nodes, points })
}

/// Bach tensor of a grid metric at the annulus nodes.
pub fn bach_tensor(g: &CartesianField4, order: usize) -> Result<BachField> {
    let nodes = g.annulus_nodes();
    let mut values = Vec::with_capacity(nodes.len());
    for &idx in &nodes {
        let jet = grid_jet(g, idx, order, 4)?;
        values.push(bach_from_jet(&jet, g.point(idx))?);
    }
    Ok(BachField { nodes, values })
}

/// P(h) at the annulus nodes of a grid perturbation, returned as a field
/// on the same annulus (no pad).
pub fn linearized_operator_grid(h: &CartesianField4, order: usize) -> Result<CartesianField4> {
    let spacing = h.spacing();
    let outer = h.spec.outer;
    CartesianField4::sample(h.spec, 0, |x| {
        let idx = x.map(|v| ((v + outer) / spacing).round() as i32);
        Ok(linearized_from_jet(&grid_jet(h, idx, order, 4)?))
    })
}

/// Curvature of an explicit metric at x0.
pub fn curvature_at(
    g: impl Fn(&[f64; 4]) -> Result<[f64; 10]>,
    x0: &[f64; 4],
    cfg: JetConfig,
) -> Result<PointCurvature> {
    PointCurvature::from_jet(&fd_jet_at(g, x0, cfg.spacing, cfg.order, 2)?, *x0)
}

/// Bach tensor of an explicit metric at x0.
pub fn bach_at(g: impl Fn(&[f64; 4]) -> Result<[f64; 10]>, x0: &[f64; 4], cfg: JetConfig) -> Result<BachPoint> {
    bach_from_jet(&fd_jet_at(g, x0, cfg.spacing, cfg.order, 4)?, *x0)
}

#[cfg(test)]
mod tests;
