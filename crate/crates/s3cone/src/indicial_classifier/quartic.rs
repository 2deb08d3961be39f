use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::indicial_classifier::modes::{BundleMode, ModeKind};
use crate::numerics::{Poly1, RootSet};

/// P(b) = Σ c_m b^m, coefficients ascending, c₄ = 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicialQuartic {
    pub coefficients: [f64; 5],
}

impl IndicialQuartic {
    /// From the Euler operator y⁗ + e₁y‴/r + e₂y''/r² + e₃y'/r³ + e₄y/r⁴.
    pub fn from_euler(e: [f64; 4]) -> Self {
        let b = |a: f64| Poly1::shifted_identity(-a);
        let falling = |n: usize| (0..n).fold(Poly1::constant(1.0), |p, i| p.mul(&b(i as f64)));
        let p = falling(4)
            .add(&falling(3).scale(&e[0]))
            .add(&falling(2).scale(&e[1]))
            .add(&falling(1).scale(&e[2]))
            .add(&Poly1::constant(e[3]));
        let mut coefficients = [0.0; 5];
        for (i, c) in p.coeffs().iter().enumerate() {
            coefficients[i] = *c;
        }
        Self { coefficients }
    }

    pub fn poly(&self) -> Poly1<f64> {
        Poly1::new(self.coefficients.to_vec())
    }

    pub fn eval(&self, b: Complex<f64>) -> Complex<f64> {
        self.poly().eval_complex(b)
    }

    pub fn roots(&self) -> RootSet {
        self.poly().roots()
    }
}

/// The mode's radial operator on the leading profile: f for TT, k for
/// 1-forms (with l = 0), l for functions.
pub fn indicial_quartic(mode: &BundleMode) -> IndicialQuartic {
    let a = mode.eigenvalue;
    match mode.kind {
        ModeKind::TransverseTraceless => IndicialQuartic::from_euler([6.0, -(1.0 + 2.0 * a), -(2.0 * a + 7.0), (a + 2.0).powi(2)]),
        ModeKind::OneForm => IndicialQuartic::from_euler([10.0, 19.0 - 2.0 * a, -(6.0 * a + 3.0), a * a - 4.0]),
        ModeKind::Function => IndicialQuartic::from_euler([14.0, 51.0 - 2.0 * a, 45.0 - 10.0 * a, a * a - 8.0 * a]),
    }
}

/// Roots in radicals, descending: ±1±√(A+3), −2±√(A+2) and ±√(A+2),
/// −2±1±√(A+1).
pub fn closed_form_roots(mode: &BundleMode) -> [f64; 4] {
    let a = mode.eigenvalue;
    let mut r = match mode.kind {
        ModeKind::TransverseTraceless => {
            let s = (a + 3.0).sqrt();
            [1.0 + s, -1.0 + s, 1.0 - s, -1.0 - s]
        }
        ModeKind::OneForm => {
            let s = (a + 2.0).sqrt();
            [s, -s, -2.0 + s, -2.0 - s]
        }
        ModeKind::Function => {
            let s = (a + 1.0).sqrt();
            [-1.0 + s, -1.0 - s, -3.0 + s, -3.0 - s]
        }
    };
    r.sort_by(|x, y| y.partial_cmp(x).unwrap());
    r
}

/// The Lie-gauge pair of a function mode, −3±√(A+1).
pub fn lie_gauge_exponents(a: f64) -> [f64; 2] {
    let s = (a + 1.0).sqrt();
    [-3.0 + s, -3.0 - s]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(mode: BundleMode) {
        let q = indicial_quartic(&mode);
        assert_eq!(q.coefficients[4], 1.0);
        let mut got = q.roots().real_expanded();
        got.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let want = closed_form_roots(&mode);
        assert_eq!(got.len(), 4, "{}: {got:?}", mode.label());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "{}: {got:?} vs {want:?}", mode.label());
            assert!(q.eval(Complex::new(w, 0.0)).norm() < 1e-9 * (1.0 + w.abs()).powi(4));
        }
    }

    #[test]
    fn quartics_match_radicals() {
        for j in 0..=8 {
            check(BundleMode::function(j));
            check(BundleMode::one_form(j));
        }
        for l in [6.0, 11.0, 18.5, 30.0] {
            check(BundleMode::tt(l).unwrap());
        }
    }

    #[test]
    fn tt_six_and_function_zero() {
        assert_eq!(closed_form_roots(&BundleMode::tt(6.0).unwrap()), [4.0, 2.0, -2.0, -4.0]);
        assert_eq!(closed_form_roots(&BundleMode::function(0)), [0.0, -2.0, -2.0, -4.0]);
        let rs = indicial_quartic(&BundleMode::function(0)).roots();
        assert!(rs.multiplicity.contains(&2));
    }

    #[test]
    fn function_quartic_expanded_form() {
        // b(b−1)(b−2)(b−3) + 14b(b−1)(b−2) + (51−2A)b(b−1) + (45−10A)b + A²−8A
        let a = 8.0;
        let q = indicial_quartic(&BundleMode::function(2));
        for b in [-1.5, 0.3, 2.0] {
            let direct = b * (b - 1.0) * (b - 2.0) * (b - 3.0)
                + 14.0 * b * (b - 1.0) * (b - 2.0)
                + (51.0 - 2.0 * a) * b * (b - 1.0)
                + (45.0 - 10.0 * a) * b
                + a * a
                - 8.0 * a;
            assert!((q.eval(Complex::new(b, 0.0)).re - direct).abs() < 1e-10);
        }
    }
}
