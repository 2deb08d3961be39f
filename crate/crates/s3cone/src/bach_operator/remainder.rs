use serde::Serialize;

use crate::bach_operator::curvature::bach_from_jet;
use crate::bach_operator::fd::fd_jet_at;
use crate::bach_operator::jet::Jet;
use crate::bach_operator::linearized::{
    linearized_from_jet, linearized_operator, scalar_linearization_from_jet,
    LINEARIZATION_FACTOR,
};
use crate::cone_calculus::{frobenius, SeparatedTensor, SYM4};
use crate::error::{Error, Result};
use crate::numerics::loglog_slope;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JetConfig {
    /// Lattice spacing of the jet stencils.
    pub spacing: f64,
    /// Accuracy order of the central differences.
    pub order: usize,
}

impl Default for JetConfig {
    fn default() -> Self {
        Self { spacing: 0.02, order: 4 }
    }
}

/// Deterministic points in the annulus 1.2 ≤ |x| ≤ 1.9 (Kronecker
/// sequence directions).
pub fn annulus_points(n: usize) -> Vec<[f64; 4]> {
    const A: [f64; 5] = [0.754_877_666_2, 0.569_840_290_9, 0.430_159_709_0, 0.324_717_957_2, 0.245_122_333_8];
    let mut out = Vec::new();
    let mut k = 1;
    while out.len() < n {
        let u: [f64; 5] = std::array::from_fn(|i| (k as f64 * A[i]).fract());
        k += 1;
        let v: [f64; 4] = std::array::from_fn(|i| 2.0 * u[i] - 1.0);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(0.2..=1.0).contains(&norm) {
            continue;
        }
        let r = 1.2 + 0.7 * u[4];
        out.push(v.map(|x| x * r / norm));
    }
    out
}

pub fn metric_plus(h: &SeparatedTensor<f64>, eps: f64) -> impl Fn(&[f64; 4]) -> Result<[f64; 10]> + '_ {
    move |x| {
        let v = h.packed_at(x)?;
        Ok(std::array::from_fn(|s| v[s] * eps + if SYM4[s].0 == SYM4[s].1 { 1.0 } else { 0.0 }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemainderReport {
    pub direction: String,
    pub eps: Vec<f64>,
    /// max over points of |B(g₀+εh) − ε(−¼)P(h)|
    pub bach_residuals: Vec<f64>,
    /// max over points of |R(g₀+εh) − εR'(h)|
    pub scalar_residuals: Vec<f64>,
    pub bach_slope: Option<f64>,
    pub scalar_slope: Option<f64>,
    /// Residuals below this level are rounding noise and left out of the fit.
    pub noise_floor: f64,
    pub excluded: Vec<bool>,
    /// max |P_fd(h) − P_formula(h)| / max(|P_formula(h)|, |h|), the
    /// agreement of the lattice linearization with the closed form
    pub formula_discrepancy: f64,
}

/// Remainder slopes of the Bach tensor and scalar curvature around the
/// flat metric.  The linear parts are taken from the same lattice jets as
/// the nonlinear quantities, so the residual is O(ε²) up to rounding; the
/// closed-form linearization is compared separately.
pub fn remainder_slopes(
    label: &str,
    h: &SeparatedTensor<f64>,
    eps: &[f64],
    points: &[[f64; 4]],
    cfg: JetConfig,
) -> Result<RemainderReport> {
    if eps.len() < 3 || eps.iter().any(|e| !(*e > 0.0 && *e <= 0.1)) {
        return Err(Error::Invalid("need >= 3 values of ε in (0, 0.1]".into()));
    }
    let p_formula = linearized_operator(h);
    let zero_h = |x: &[f64; 4]| h.packed_at(x);
    let mut disc_num = 0.0f64;
    let mut disc_den = 0.0f64;
    let mut lin = Vec::new();
    let mut scale = 0.0f64;
    for x in points {
        let jh: [Jet; 10] = fd_jet_at(zero_h, x, cfg.spacing, cfg.order, 4)?;
        let p_fd = linearized_from_jet(&jh);
        let p_ex = p_formula.packed_at(x)?;
        let d: [f64; 10] = std::array::from_fn(|s| p_fd[s] - p_ex[s]);
        disc_num = disc_num.max(frobenius(&d));
        disc_den = disc_den.max(frobenius(&p_ex));
        let r_fd = scalar_linearization_from_jet(&jh);
        scale = scale.max(frobenius(&h.packed_at(x)?));
        lin.push((p_fd, r_fd));
    }
    let mut bach_res = Vec::new();
    let mut scal_res = Vec::new();
    for &e in eps {
        let g = metric_plus(h, e);
        let (mut rb, mut rs) = (0.0f64, 0.0f64);
        for (x, (p, rl)) in points.iter().zip(&lin) {
            let jet = fd_jet_at(&g, x, cfg.spacing, cfg.order, 4)?;
            let b = bach_from_jet(&jet, *x)?;
            let d: [f64; 10] = std::array::from_fn(|s| b.divergence_form[s] - e * LINEARIZATION_FACTOR * p[s]);
            rb = rb.max(frobenius(&d));
            rs = rs.max((b.scalar_curvature - e * rl).abs());
        }
        bach_res.push(rb);
        scal_res.push(rs);
    }
    let noise_floor = 1e3 * f64::EPSILON * (1.0 + scale) * cfg.spacing.powi(-4);
    let excluded: Vec<bool> = bach_res.iter().map(|r| *r < noise_floor).collect();
    let fit = |res: &[f64]| {
        let (x, y): (Vec<f64>, Vec<f64>) =
            eps.iter().zip(res).zip(&excluded).filter(|(_, ex)| !**ex).map(|((e, r), _)| (*e, *r)).unzip();
        loglog_slope(&x, &y)
    };
    Ok(RemainderReport {
        direction: label.to_string(),
        eps: eps.to_vec(),
        bach_slope: fit(&bach_res),
        scalar_slope: fit(&scal_res),
        bach_residuals: bach_res,
        scalar_residuals: scal_res,
        noise_floor,
        excluded,
        formula_discrepancy: if disc_den.max(scale) > 0.0 { disc_num / disc_den.max(scale) } else { disc_num },
    })
}
