use proptest::prelude::*;

use super::*;
use crate::cone_calculus::{frobenius, GridSpec, OneFormTerm, RadialProfile, SeparatedOneForm, SeparatedTensor, SYM4};
use crate::s3_tensor_calculus::{Bundle, TensorFieldS3};
use crate::su2_frame::Polynomial;

type Field = TensorFieldS3<f64>;

fn c(v: f64) -> Polynomial<f64> {
    Polynomial::constant(v)
}

fn p(a: usize) -> Polynomial<f64> {
    Polynomial::coordinate(a)
}

fn mono(b: f64) -> RadialProfile<f64> {
    RadialProfile::monomial(1.0, b)
}

fn tt() -> Field {
    Field::from_components(Bundle::SymTwoTensor, vec![c(1.0), c(-1.0), Polynomial::zero(), c(0.5), Polynomial::zero(), Polynomial::zero()])
        .unwrap()
}

fn generic() -> Field {
    Field::from_components(Bundle::SymTwoTensor, vec![p(0), p(1), c(0.5), p(2), Polynomial::zero(), p(3)]).unwrap()
}

fn flat(_: &[f64; 4]) -> Result<[f64; 10]> {
    Ok(SYM4.map(|(i, j)| if i == j { 1.0 } else { 0.0 }))
}

fn conformal(x: &[f64; 4]) -> Result<[f64; 10]> {
    let u = 0.05 * (x[0] * x[0] - x[1] * x[2] + 0.5 * x[3] * x[3] + 0.3 * x[0] * x[3]);
    let e = (2.0 * u).exp();
    Ok(SYM4.map(|(i, j)| if i == j { e } else { 0.0 }))
}

fn inverse(g: &[f64; 10]) -> [f64; 16] {
    let m = crate::cone_calculus::unpack(g);
    let inv = nalgebra::Matrix4::from_fn(|i, j| m[i][j]).try_inverse().unwrap();
    std::array::from_fn(|n| inv[(n / 4, n % 4)])
}

fn trace(g: &[f64; 10], b: &[f64; 10]) -> f64 {
    let gi = inverse(g);
    let m = crate::cone_calculus::unpack(b);
    (0..16).map(|n| gi[n] * m[n / 4][n % 4]).sum()
}

#[test]
fn flat_metric_has_no_curvature() {
    let x = [1.1, -0.4, 0.3, 0.7];
    let k = curvature_at(flat, &x, JetConfig::default()).unwrap();
    assert!(k.max_abs() < 1e-12);
    let b = bach_at(flat, &x, JetConfig::default()).unwrap();
    assert!(frobenius(&b.divergence_form) < 1e-12 && frobenius(&b.schouten_form) < 1e-12);
}

#[test]
fn conformally_flat_metric_has_small_weyl() {
    let x = [0.9, 0.5, -0.6, 0.2];
    let k = curvature_at(conformal, &x, JetConfig::default()).unwrap();
    let w = k.w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(k.max_abs() > 1e-2);
    assert!(w < 1e-8, "{w}");
    assert!(k.symmetry_defect() < 1e-12);
    assert!(k.weyl_trace(&inverse(&conformal(&x).unwrap())) < 1e-8);
}

#[test]
fn bach_routes_agree_and_are_trace_free() {
    let h = SeparatedTensor::horizontal(mono(2.0), generic()).plus(&SeparatedTensor::vertical(mono(-1.0), Field::scalar(&p(1) * &p(2))));
    let g = metric_plus(&h, 0.05);
    for x in annulus_points(3) {
        let b = bach_at(&g, &x, JetConfig::default()).unwrap();
        let d: [f64; 10] = std::array::from_fn(|s| b.divergence_form[s] - b.schouten_form[s]);
        let scale = frobenius(&b.divergence_form);
        assert!(scale > 1e-3);
        assert!(frobenius(&d) < 1e-10 * scale);
        assert!(trace(&g(&x).unwrap(), &b.divergence_form).abs() < 1e-5 * scale);
    }
}

#[test]
fn singular_metric_is_rejected_with_location() {
    let x = [1.0, 0.0, 0.0, 0.0];
    let deg = |_: &[f64; 4]| Ok(SYM4.map(|(i, j)| if i == j && i > 0 { 1.0 } else { 0.0 }));
    assert!(matches!(curvature_at(deg, &x, JetConfig::default()), Err(Error::Singular { point }) if point == x));
}

#[test]
fn linearization_factor_is_minus_a_quarter() {
    let h = SeparatedTensor::horizontal(mono(-1.0), tt());
    let pts = annulus_points(4);
    let rep = remainder_slopes("tt", &h, &[0.1, 0.03, 0.01], &pts, JetConfig::default()).unwrap();
    assert!(rep.bach_slope.unwrap() > 1.9, "{rep:?}");
    assert!(rep.scalar_slope.unwrap() > 1.9, "{rep:?}");
    assert!(rep.formula_discrepancy < 1e-4);
}

#[test]
fn zero_direction_has_zero_residuals() {
    let rep = remainder_slopes("0", &SeparatedTensor::zero(), &[0.1, 0.03, 0.01], &annulus_points(2), JetConfig::default()).unwrap();
    assert!(rep.bach_residuals.iter().chain(&rep.scalar_residuals).all(|r| *r == 0.0));
    assert!(rep.bach_slope.is_none() && rep.excluded.iter().all(|e| *e));
}

#[test]
fn remainder_rejects_bad_eps() {
    let h = SeparatedTensor::zero();
    assert!(remainder_slopes("0", &h, &[0.1, 0.01], &annulus_points(1), JetConfig::default()).is_err());
    assert!(remainder_slopes("0", &h, &[0.2, 0.1, 0.01], &annulus_points(1), JetConfig::default()).is_err());
}

#[test]
fn transverse_traceless_reduces_to_bilaplacian() {
    let h = SeparatedTensor::horizontal(mono(1.0), tt());
    assert!(h.divergence().terms.is_empty() && h.trace().terms.is_empty());
    let d = linearized_operator(&h).minus(&h.bilaplacian());
    assert!(d.max_abs_coefficient() < 1e-12);
}

#[test]
fn constant_trace_is_annihilated() {
    let g0 = SeparatedTensor::<f64>::flat_metric();
    assert!(linearized_operator(&g0).max_abs_coefficient() < 1e-12);
}

fn lie_direction() -> SeparatedTensor<f64> {
    let w = SeparatedOneForm {
        terms: vec![
            OneFormTerm::Radial(mono(2.0), Field::scalar(p(0))),
            OneFormTerm::Tangential(mono(-1.0), Field::one_form([p(1), p(0), &p(2) + &p(3)])),
            OneFormTerm::Tangential(mono(3.0), Field::scalar(&p(1) * &p(2)).exterior_d().unwrap()),
        ],
    };
    w.lie_metric()
}

#[test]
fn lie_directions_are_annihilated() {
    let h = lie_direction();
    assert!(h.max_abs_coefficient() > 0.1);
    assert!(linearized_operator(&h).max_abs_coefficient() < 1e-10);
    // the lattice value is pure truncation error: it falls like s⁴
    for x in annulus_points(3) {
        let at = |s: f64| frobenius(&linearized_from_jet(&fd_jet_at(|y| h.packed_at(y), &x, s, 4, 4).unwrap()));
        let (coarse, fine) = (at(0.04), at(0.02));
        assert!(fine < coarse / 12.0, "{coarse} {fine}");
    }
}

#[test]
fn jet_path_matches_formula_path() {
    let h = SeparatedTensor::horizontal(mono(2.0), generic()).plus(&SeparatedTensor::cross(mono(-1.0), Field::one_form([c(1.0), p(0), Polynomial::zero()])));
    let ph = linearized_operator(&h);
    let t = GaugeParameter::new(0.05).unwrap();
    let pt = modified_operator(&h, t);
    for x in annulus_points(3) {
        let jet = fd_jet_at(|y| h.packed_at(y), &x, 0.02, 4, 4).unwrap();
        let exact = ph.packed_at(&x).unwrap();
        let d: [f64; 10] = std::array::from_fn(|s| linearized_from_jet(&jet)[s] - exact[s]);
        assert!(frobenius(&d) < 1e-5 * frobenius(&exact).max(1.0));
        let exact_t = pt.packed_at(&x).unwrap();
        let got = modified_from_jet(&jet, &x, t).unwrap();
        let d: [f64; 10] = std::array::from_fn(|s| got[s] - exact_t[s]);
        assert!(frobenius(&d) < 1e-5 * frobenius(&exact_t).max(1.0));
    }
}

#[test]
fn gauge_parameter_bound() {
    assert!(GaugeParameter::new(0.1).is_ok());
    assert!(matches!(GaugeParameter::new(0.2), Err(Error::Gauge(_))));
    assert!(GaugeParameter::new(f64::NAN).is_err());
}

#[test]
fn delta_t_of_dr_squared() {
    let h = SeparatedTensor::vertical(RadialProfile::constant(1.0), Field::scalar(Polynomial::one()));
    let t = 0.03;
    // δ(dr⊗dr) = 3r⁻¹dr, so δ_t = (3 − t)r⁻¹dr
    let w = delta_t(&h, &t);
    let x = [0.4, 1.1, -0.3, 0.2];
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut total = 0.0;
    for term in &w.terms {
        match term {
            OneFormTerm::Radial(q, psi) => total += q.eval(r) * psi.eval(&[1.0, 0.0, 0.0, 0.0])[0],
            OneFormTerm::Tangential(..) => panic!("unexpected tangential part"),
        }
    }
    assert!((total - (3.0 - t) / r).abs() < 1e-14);
}

#[test]
fn modified_operator_at_zero_gauge() {
    let t0 = GaugeParameter::new(0.0).unwrap();
    let div_free = SeparatedTensor::horizontal(mono(-1.0), tt()).plus(&SeparatedTensor::<f64>::flat_metric());
    let d = modified_operator(&div_free, t0).minus(&linearized_operator(&div_free));
    assert!(d.max_abs_coefficient() < 1e-12);
    // with δh ≠ 0 the two differ at t = 0
    let h = SeparatedTensor::horizontal(mono(2.0), generic());
    assert!(modified_operator(&h, t0).minus(&linearized_operator(&h)).max_abs_coefficient() > 1e-3);
}

#[test]
fn modified_operator_deviation_is_linear_in_t() {
    let h = SeparatedTensor::horizontal(mono(-1.0), tt()).plus(&SeparatedTensor::vertical(mono(-1.0), Field::scalar(p(0))));
    let x = [0.8, -0.7, 0.5, 0.6];
    let dev = |t: f64| {
        let a = modified_operator(&h, GaugeParameter::new(t).unwrap()).packed_at(&x).unwrap();
        let b = modified_operator(&h, GaugeParameter::new(0.0).unwrap()).packed_at(&x).unwrap();
        frobenius(&std::array::from_fn::<f64, 10, _>(|s| a[s] - b[s]))
    };
    let slope = crate::numerics::loglog_slope(&[1e-2, 1e-3], &[dev(1e-2), dev(1e-3)]).unwrap();
    assert!((slope - 1.0).abs() < 1e-6);
}

#[test]
fn cone_point_is_rejected() {
    let h = SeparatedTensor::horizontal(mono(2.0), tt());
    let x = [0.3, 0.0, 0.0, 0.0];
    let jet = fd_jet_at(|y| h.packed_at(y), &x, 0.02, 4, 4).unwrap();
    assert!(modified_from_jet(&jet, &[0.0; 4], GaugeParameter::new(0.01).unwrap()).is_err());
}

#[test]
fn grid_bach_of_flat_metric() {
    let spec = GridSpec { n: 8, inner: 1.85, outer: 2.0 };
    let g = CartesianField4::sample(spec, 3, flat).unwrap();
    let b = bach_tensor(&g, 2).unwrap();
    assert!(!b.values.is_empty());
    assert!(b.values.iter().all(|v| frobenius(&v.divergence_form) < 1e-12));
    assert!(curvature(&g, 2).unwrap().max_abs() < 1e-12);
    let thin = CartesianField4::sample(spec, 2, flat).unwrap();
    assert!(matches!(bach_tensor(&thin, 2), Err(Error::Grid(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    // L_X δ for a cubic Cartesian vector field X
    #[test]
    fn polynomial_lie_directions(coef in proptest::collection::vec(-1.0f64..1.0, 16)) {
        let x_field = |x: &[f64; 4], i: usize| -> [f64; 4] {
            // ∂_a X_i for X_i = c·x_{i+1}³ + c'·x_i x_{i+2} + c''·x_{i+3}² x_i + c'''
            let k = |o: usize| (i + o) % 4;
            let cc = &coef[4 * i..4 * i + 4];
            let mut d = [0.0; 4];
            d[k(1)] += 3.0 * cc[0] * x[k(1)].powi(2);
            d[k(0)] += cc[1] * x[k(2)];
            d[k(2)] += cc[1] * x[k(0)];
            d[k(3)] += 2.0 * cc[2] * x[k(3)] * x[k(0)];
            d[k(0)] += cc[2] * x[k(3)].powi(2);
            d
        };
        let h = |x: &[f64; 4]| -> Result<[f64; 10]> {
            let d: Vec<[f64; 4]> = (0..4).map(|i| x_field(x, i)).collect();
            Ok(SYM4.map(|(i, j)| d[j][i] + d[i][j]))
        };
        let x = [1.0, 0.3, -0.2, 0.5];
        let jet = fd_jet_at(h, &x, 0.05, 4, 4).unwrap();
        prop_assert!(frobenius(&linearized_from_jet(&jet)) < 1e-6);
    }
}
