//! Classifier output checked against Cartesian finite differences, which
//! know nothing about the separated formulas.

use proptest::prelude::*;

use s3cone::bach_operator::{annulus_points, fd_jet_at, linearized_from_jet, Jet};
use s3cone::cone_calculus::{frobenius, SYM4};
use s3cone::indicial_classifier::{classify, genuine_solution, link_eigenvalue, Branch, BundleMode};
use s3cone::s3_tensor_calculus::Bundle;
use s3cone::su2_frame::Polynomial;
use s3cone::{ExactTensorField, Quadrature, Rational, SeparatedTensor, TensorField};

fn p(a: usize) -> Polynomial<f64> {
    Polynomial::coordinate(a)
}

fn seeds() -> Vec<(BundleMode, TensorField)> {
    let rule = Quadrature::new(12);
    let tau = TensorField::one_form([p(0).scale(&2.0), p(3), p(2).scale(&-1.0)]);
    let one = Polynomial::constant(1.0);
    let z = Polynomial::zero;
    let tt = TensorField::sym_from_matrix([[one.clone(), z(), z()], [z(), one.scale(&-1.0), z()], [z(), z(), z()]]);
    vec![
        (BundleMode::function(1), TensorField::scalar(p(1))),
        (BundleMode::function(2), TensorField::scalar(&p(1) * &p(2))),
        (BundleMode::one_form_eigenvalue(link_eigenvalue(&tau, &rule).unwrap()).unwrap(), tau),
        (BundleMode::tt(6.0).unwrap(), tt),
    ]
}

fn entry(jets: &[Jet; 10], i: usize, j: usize) -> &Jet {
    let s = SYM4.iter().position(|&(a, b)| (a, b) == (i.min(j), i.max(j))).unwrap();
    &jets[s]
}

/// Cartesian divergence Σ_i ∂_i h_ij and trace Σ_i h_ii from a jet.
fn div_and_trace(jets: &[Jet; 10]) -> ([f64; 4], f64) {
    let d = |a: usize| {
        let mut e = [0u8; 4];
        e[a] = 1;
        e
    };
    let div = std::array::from_fn(|j| (0..4).map(|i| entry(jets, i, j).derivative(d(i))).sum());
    let tr = (0..4).map(|i| entry(jets, i, i).value()).sum();
    (div, tr)
}

#[test]
fn realizable_roots_give_lattice_solutions() {
    let pts = annulus_points(3);
    for (mode, seed) in seeds() {
        let c = classify(&mode).unwrap();
        for root in c.roots.iter().filter(|r| r.branch != Branch::ConstraintExcluded && r.im == 0.0) {
            let h = genuine_solution(&mode, root.re, &seed).unwrap();
            let at = |s: f64| {
                pts.iter().fold((0.0f64, 0.0f64, 0.0f64), |(op, dv, size), x| {
                    let jets = fd_jet_at(|y| h.packed_at(y), x, s, 4, 4).unwrap();
                    let (div, tr) = div_and_trace(&jets);
                    let lin = frobenius(&linearized_from_jet(&jets));
                    let d = div.iter().map(|v| v * v).sum::<f64>().sqrt() + tr.abs();
                    (op.max(lin), dv.max(d), size.max(frobenius(&h.packed_at(x).unwrap())))
                })
            };
            let (op, dv, size) = at(0.02);
            let (op_coarse, dv_coarse, _) = at(0.04);
            // order-4 jets: residuals are truncation and shrink ~16x per halving;
            // exact polynomial modes only see roundoff amplified by s^-4
            assert!(dv < 1e-4 * size, "{} b = {}: divergence/trace {dv:e}", mode.label(), root.re);
            assert!(dv < dv_coarse / 8.0 || dv < 1e-12 * size, "{} b = {}: {dv_coarse:e} -> {dv:e}", mode.label(), root.re);
            assert!(op < 5e-2 * size, "{} b = {}: |P h| {op:e} vs |h| {size:e}", mode.label(), root.re);
            assert!(op < op_coarse / 8.0 || op < 1e-6 * size, "{} b = {}: {op_coarse:e} -> {op:e}", mode.label(), root.re);
        }
    }
}

#[test]
fn excluded_roots_have_no_solution() {
    for (mode, seed) in seeds() {
        for r in classify(&mode).unwrap().roots.iter().filter(|r| r.branch == Branch::ConstraintExcluded) {
            assert!(genuine_solution(&mode, r.re, &seed).is_err(), "{} b = {}", mode.label(), r.re);
        }
    }
}

#[test]
fn growth_tt_mode_is_biharmonic_on_the_lattice() {
    let (_, tt) = seeds().pop().unwrap();
    for b in [2.0, 4.0] {
        let h = SeparatedTensor::horizontal(s3cone::cone_calculus::RadialProfile::monomial(1.0, b), tt.clone());
        assert!(h.bilaplacian().max_abs_coefficient() < 1e-12);
        for x in annulus_points(2) {
            let jets = fd_jet_at(|y| h.packed_at(y), &x, 0.02, 4, 4).unwrap();
            assert!(frobenius(&linearized_from_jet(&jets)) < 1e-5 * frobenius(&h.packed_at(&x).unwrap()));
        }
    }
}

fn exact_poly(coef: &[i64]) -> Polynomial<Rational> {
    let mut out = Polynomial::zero();
    for (k, c) in coef.iter().enumerate() {
        let mono = match k {
            0 => Polynomial::one(),
            1..=4 => Polynomial::coordinate(k - 1),
            _ => &Polynomial::coordinate((k - 5) % 4) * &Polynomial::coordinate((k - 3) % 4),
        };
        out = &out + &mono.scale(&Rational::from_integer(*c));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // the exact and floating instantiations compute the same Laplacian
    #[test]
    fn rational_and_f64_laplacians_agree(coef in proptest::collection::vec(-3i64..4, 27)) {
        let comps: Vec<Polynomial<Rational>> = coef.chunks(9).map(exact_poly).collect();
        let exact = ExactTensorField::one_form([comps[0].clone(), comps[1].clone(), comps[2].clone()]);
        let float: TensorField = exact.map(|c| *c.numer() as f64 / *c.denom() as f64);
        let le = exact.rough_laplacian().map(|c| *c.numer() as f64 / *c.denom() as f64);
        let lf = float.rough_laplacian();
        let d = le.try_add(&lf.scale(&-1.0)).unwrap();
        prop_assert!(d.max_abs_coefficient() < 1e-12 * (1.0 + lf.max_abs_coefficient()));
        prop_assert_eq!(exact.bundle(), Bundle::OneForm);
    }
}
