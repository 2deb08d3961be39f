use proptest::prelude::*;

use super::*;
use crate::s3_tensor_calculus::{monomial_basis, Bundle};
use crate::su2_frame::Polynomial;

type F = TensorFieldS3<f64>;
type S = SeparatedTensor<f64>;

fn mono(c: f64, b: f64) -> RadialProfile<f64> {
    RadialProfile::monomial(c, b)
}

fn one() -> F {
    F::scalar(Polynomial::one())
}

fn tt_constant() -> F {
    let z = Polynomial::zero;
    let c = |v: f64| Polynomial::constant(v);
    F::from_components(Bundle::SymTwoTensor, vec![c(1.0), c(-1.0), z(), c(0.5), z(), z()]).unwrap()
}

fn assert_small(s: &S, scale: f64, tol: f64) {
    let m = s.max_abs_coefficient();
    assert!(m <= tol * scale.max(1.0), "residual {m:e} vs scale {scale:e}: {s:?}");
}

#[test]
fn flat_metric_is_parallel_and_divergence_free() {
    let g = S::flat_metric();
    assert_small(&g.laplacian(), 1.0, 0.0);
    assert_small(&g.bilaplacian(), 1.0, 0.0);
    let d = g.divergence();
    let total: f64 = [1.2, 1.7]
        .iter()
        .map(|&r| {
            d.terms
                .iter()
                .map(|t| match t {
                    OneFormTerm::Tangential(p, s) | OneFormTerm::Radial(p, s) => p.eval(r) * s.max_abs_coefficient(),
                })
                .sum::<f64>()
        })
        .sum();
    assert_eq!(total, 0.0);
}

#[test]
fn vertical_unit_laplacian() {
    let v = S::vertical(mono(1.0, 0.0), one());
    let expect = S::horizontal(mono(-2.0, -2.0), F::metric()).plus(&S::vertical(mono(6.0, -2.0), one()));
    assert_small(&v.laplacian().minus(&expect), 1.0, 1e-14);
    let expect2 = S::horizontal(mono(-16.0, -4.0), F::metric()).plus(&S::vertical(mono(48.0, -4.0), one()));
    assert_small(&v.bilaplacian().minus(&expect2), 1.0, 1e-14);
}

#[test]
fn tt_growth_mode_is_harmonic() {
    let h = S::horizontal(mono(1.0, 2.0), tt_constant());
    assert_small(&h.laplacian(), 1.0, 1e-14);
}

#[test]
fn divergence_examples() {
    let phi = F::scalar(Polynomial::coordinate(1));
    let d = S::vertical(mono(1.0, 3.0), phi.clone()).divergence();
    // (l' + 3l/r) = 6 r²
    assert_eq!(d.terms.len(), 1);
    match &d.terms[0] {
        OneFormTerm::Radial(q, p) => {
            assert_eq!(q, &mono(6.0, 2.0));
            assert_eq!(p, &phi);
        }
        t => panic!("{t:?}"),
    }
    let tau = monomial_basis::<f64>(Bundle::OneForm, 1, false)[4].clone();
    let d = S::cross(mono(1.0, -4.0), tau.clone()).divergence();
    assert_eq!(d.terms.len(), 1);
    assert!(matches!(&d.terms[0], OneFormTerm::Radial(q, f) if q == &mono(1.0, -5.0) && f == &tau.div_unchecked()));
}

#[test]
fn lie_metric_of_radial_field_is_twice_the_metric() {
    let x = SeparatedOneForm { terms: vec![OneFormTerm::Radial(mono(1.0, 1.0), one())] };
    let l = x.lie_metric();
    assert_small(&l.minus(&S::flat_metric().times_int(2)), 1.0, 1e-15);
    let hess = SeparatedScalar::single(mono(0.5, 2.0), one()).hessian();
    assert_small(&hess.minus(&S::flat_metric()), 1.0, 1e-15);
}

#[test]
fn cross_variant_is_not_the_square() {
    let tau = monomial_basis::<f64>(Bundle::OneForm, 1, false)[5].clone();
    let s = S::cross(mono(1.0, 1.5), tau);
    let comp = s.laplacian().laplacian();
    assert_small(&s.bilaplacian().minus(&comp), comp.max_abs_coefficient(), 1e-12);
    assert!(s.bilaplacian_cross_variant().minus(&comp).max_abs_coefficient() > 1e-3);
}

#[test]
fn sampled_profile_tracks_monomial() {
    let b = tt_constant();
    let exact = S::horizontal(mono(1.0, -1.5), b.clone()).bilaplacian();
    let sampled = S::horizontal(RadialProfile::sampled(1.0, 2.0, 64, |r: f64| r.powf(-1.5)).unwrap(), b).bilaplacian();
    let x = [0.9, 0.6, -0.4, 0.5];
    let (a, s) = (exact.packed_at(&x).unwrap(), sampled.packed_at(&x).unwrap());
    let err: f64 = a.iter().zip(&s).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    assert!(err < 1e-5 * frobenius(&a), "{err}");
}

#[test]
fn oracle_converges_at_second_order() {
    let s = S::vertical(mono(1.0, 0.0), one());
    // coarser grids are still pre-asymptotic for this mode (slope ~1.6 at n = 16..24)
    let rep = compare_oracle("vertical", &s, &[32, 40, 48], 1.0, 2.0, 2).unwrap();
    let slope = rep.slope.expect(&format!("{rep:?}"));
    assert!((slope - 2.0).abs() < 0.2, "{rep:?}");
    let rep = compare_oracle("flat", &S::flat_metric(), &[16, 20, 24], 1.0, 2.0, 2).unwrap();
    assert!(rep.degenerate && rep.slope.is_none());
    assert!(rep.rows.iter().all(|r| r.max_rel_error < 1e-9));
}

#[test]
fn fourth_order_stencil() {
    let s = S::vertical(mono(1.0, -1.0), one());
    let rep = compare_oracle("vertical", &s, &[24, 28, 32], 1.0, 2.0, 4).unwrap();
    assert!((rep.slope.unwrap() - 4.0).abs() < 0.4, "{rep:?}");
}

fn link_field(bundle: Bundle, picks: &[(usize, i8)]) -> F {
    let basis = monomial_basis::<f64>(bundle, 2, false);
    picks.iter().fold(F::zero(bundle), |acc, &(i, c)| acc.add(&basis[i % basis.len()].scale(&(c as f64))))
}

fn term_strategy() -> impl Strategy<Value = Term<RadialProfile<f64>, F>> {
    (0..3usize, -8..8i32, proptest::collection::vec((0..200usize, -3..4i8), 1..4)).prop_map(|(kind, e, picks)| {
        let p = mono(1.0, e as f64 / 2.0);
        match kind {
            0 => Term::Horizontal(p, link_field(Bundle::SymTwoTensor, &picks)),
            1 => Term::Cross(p, link_field(Bundle::OneForm, &picks)),
            _ => Term::Vertical(p, link_field(Bundle::Scalar, &picks)),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn bilaplacian_is_laplacian_squared(terms in proptest::collection::vec(term_strategy(), 1..4)) {
        let s = Separated::new(terms);
        let comp = s.laplacian().laplacian();
        let diff = s.bilaplacian().minus(&comp);
        let scale = comp.max_abs_coefficient().max(s.max_abs_coefficient());
        prop_assert!(diff.max_abs_coefficient() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn operators_are_linear(a in term_strategy(), b in term_strategy(), c in -3..4i64) {
        let (sa, sb) = (Separated::new(vec![a]), Separated::new(vec![b]));
        let lhs = sa.plus(&sb.times_int(c)).bilaplacian();
        let rhs = sa.bilaplacian().plus(&sb.bilaplacian().times_int(c));
        prop_assert!(lhs.minus(&rhs).max_abs_coefficient() <= 1e-10 * rhs.max_abs_coefficient().max(1.0));
    }
}
