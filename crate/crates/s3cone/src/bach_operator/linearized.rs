//! The linearized Bach-flat operator on the flat cone,
//!
//!   P(h) = Δ²h − 2Δδ*δh + ⅓(∇²Δ tr h − (Δ² tr h)g + (Δδ²h)g + 2∇²δ²h),
//!
//! with Δ = Σ∂²_i and δ = +div, and its gauge-modified version P_t in which
//! δh is replaced by t·i_{r⁻¹∂r}h.  The linearization of the Bach tensor
//! at the flat metric is −¼P.

use crate::bach_operator::jet::Jet;
use crate::cone_calculus::{
    Link, Radial, Separated, SeparatedOneForm, SeparatedScalar, SeparatedTensor, SYM4,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// B(g₀ + εh) = ε·LINEARIZATION_FACTOR·P(h) + O(ε²).
pub const LINEARIZATION_FACTOR: f64 = -0.25;

/// |t| ≤ 0.1.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GaugeParameter {
    t: f64,
}

impl GaugeParameter {
    pub const BOUND: f64 = 0.1;

    pub fn new(t: f64) -> Result<Self> {
        if !(t.abs() <= Self::BOUND) {
            return Err(Error::Gauge(t.abs()));
        }
        Ok(Self { t })
    }

    pub fn value(&self) -> f64 {
        self.t
    }
}

fn third<R: Radial<S = F::S>, F: Link>(s: &Separated<R, F>) -> Separated<R, F> {
    s.times(&(F::S::int(1) / F::S::int(3)))
}

/// The gauge-independent part Δ²h + ⅓(∇²Δ tr h − (Δ² tr h)g).
fn trace_part<R: Radial<S = F::S>, F: Link>(h: &Separated<R, F>) -> Separated<R, F> {
    let tr = h.trace();
    let ltr = tr.laplacian();
    let inner = ltr.hessian().minus(&ltr.laplacian().times_metric());
    h.bilaplacian().plus(&third(&inner))
}

/// Terms driven by a 1-form ω standing in for δh (ω = δh gives P, ω = t·ih gives P_t):
/// −2Δδ*ω + ⅓((Δδω)g + 2∇²δω).
fn gauge_part<R: Radial<S = F::S>, F: Link>(w: &SeparatedOneForm<R, F>) -> Separated<R, F> {
    let sym = w.sym_derivative().delta_laplacian().times_int(-2);
    let dw = w.divergence();
    let inner = dw.laplacian().times_metric().plus(&dw.hessian().times_int(2));
    sym.plus(&third(&inner))
}

pub fn linearized_operator<R: Radial<S = F::S>, F: Link>(h: &Separated<R, F>) -> Separated<R, F> {
    trace_part(h).plus(&gauge_part(&h.divergence()))
}

/// δ_t h = δh − t·i_{r⁻¹∂r}h.
pub fn delta_t<R: Radial<S = F::S>, F: Link>(h: &Separated<R, F>, t: &F::S) -> SeparatedOneForm<R, F> {
    let ih = h.radial_contraction();
    h.divergence().plus(&scale_one_form(&ih, &-t.clone()))
}

fn scale_one_form<R: Radial<S = F::S>, F: Link>(w: &SeparatedOneForm<R, F>, t: &F::S) -> SeparatedOneForm<R, F> {
    use crate::cone_calculus::OneFormTerm;
    SeparatedOneForm {
        terms: w
            .terms
            .iter()
            .map(|x| match x {
                OneFormTerm::Tangential(p, s) => OneFormTerm::Tangential(p.times(t), s.clone()),
                OneFormTerm::Radial(q, s) => OneFormTerm::Radial(q.times(t), s.clone()),
            })
            .collect(),
    }
}

/// P_t(h) with t as a ring element (used symbolically by the mode analysis).
pub fn modified_operator_with<R: Radial<S = F::S>, F: Link>(h: &Separated<R, F>, t: &F::S) -> Separated<R, F> {
    trace_part(h).plus(&gauge_part(&scale_one_form(&h.radial_contraction(), t)))
}

pub fn modified_operator(h: &SeparatedTensor<f64>, t: GaugeParameter) -> SeparatedTensor<f64> {
    modified_operator_with(h, &t.value())
}

/// First-order change of the scalar curvature, R' = −Δ tr h + δδh.
pub fn scalar_linearization<R: Radial<S = F::S>, F: Link>(h: &Separated<R, F>) -> SeparatedScalar<R, F> {
    h.divergence().divergence().plus(&h.trace().laplacian().times_int(-1))
}

fn e(axes: &[usize]) -> [u8; 4] {
    let mut x = [0u8; 4];
    for &a in axes {
        x[a] += 1;
    }
    x
}

fn sym_at(jets: &[Jet; 10], i: usize, j: usize) -> &Jet {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    &jets[SYM4.iter().position(|p| *p == (a, b)).unwrap()]
}

/// P(h) at the base point of a degree-4 jet of Cartesian components.
pub fn linearized_from_jet(h: &[Jet; 10]) -> [f64; 10] {
    operator_from_jet(h, None)
}

/// P_t(h) at x0 from a degree-4 jet of h around x0.
pub fn modified_from_jet(h: &[Jet; 10], x0: &[f64; 4], t: GaugeParameter) -> Result<[f64; 10]> {
    let r2 = x0.iter().map(|v| v * v).sum::<f64>();
    if r2 < 1e-12 {
        return Err(Error::ConePoint { point: *x0 });
    }
    let deg = h[0].degree();
    let xs: [Jet; 4] = std::array::from_fn(|a| Jet::variable(x0[a], a, deg));
    let rr = xs.iter().fold(Jet::zero(deg), |s, x| s.add(&x.mul(x)));
    let inv = rr.powf(-1.0);
    // ω_j = t Σ_i x_i h_ij / r²
    let w: [Jet; 4] = std::array::from_fn(|j| {
        (0..4).fold(Jet::zero(deg), |s, i| s.add(&xs[i].mul(sym_at(h, i, j)))).mul(&inv).scale(t.value())
    });
    Ok(operator_from_jet(h, Some(&w)))
}

fn operator_from_jet(h: &[Jet; 10], omega: Option<&[Jet; 4]>) -> [f64; 10] {
    let d = |i: usize, j: usize, axes: &[usize]| sym_at(h, i, j).derivative(e(axes));
    // δh as jets when ω is not given
    let dh: [Jet; 4] = std::array::from_fn(|j| (0..4).fold(Jet::zero(3), |s, i| s.add(&sym_at(h, i, j).partial(i))));
    let w = omega.map_or_else(|| dh.clone(), |w| w.clone());
    let wd = |j: usize, axes: &[usize]| w[j].derivative(e(axes));
    let lap2_tr: f64 = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| (0..4).map(|k| d(k, k, &[a, a, b, b])).sum::<f64>()).sum();
    // δω and its Laplacian
    let lap_div_w: f64 = (0..4).flat_map(|a| (0..4).map(move |k| (a, k))).map(|(a, k)| wd(k, &[a, a, k])).sum();
    SYM4.map(|(i, j)| {
        let bil: f64 = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| d(i, j, &[a, a, b, b])).sum();
        let lap_sym_w: f64 = (0..4).map(|a| 0.5 * (wd(j, &[a, a, i]) + wd(i, &[a, a, j]))).sum();
        let hess_lap_tr: f64 = (0..4).flat_map(|a| (0..4).map(move |k| (a, k))).map(|(a, k)| d(k, k, &[i, j, a, a])).sum();
        let hess_div_w: f64 = (0..4).map(|k| wd(k, &[i, j, k])).sum();
        let kron = if i == j { 1.0 } else { 0.0 };
        bil - 2.0 * lap_sym_w + (hess_lap_tr - lap2_tr * kron + lap_div_w * kron + 2.0 * hess_div_w) / 3.0
    })
}

/// R' = −Δ tr h + δδh at the base point.
pub fn scalar_linearization_from_jet(h: &[Jet; 10]) -> f64 {
    let d = |i: usize, j: usize, axes: &[usize]| sym_at(h, i, j).derivative(e(axes));
    let lap_tr: f64 = (0..4).flat_map(|a| (0..4).map(move |k| (a, k))).map(|(a, k)| d(k, k, &[a, a])).sum();
    let dd: f64 = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| d(a, b, &[a, b])).sum();
    dd - lap_tr
}
