//! Product rule in Hopf coordinates q = (cosθ e^{iφ₁}, sinθ e^{iφ₂}).
//! With u = sin²θ the volume form is ½ du dφ₁ dφ₂; Gauss–Legendre in u,
//! uniform in the angles.

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

use super::poly::Polynomial;
use super::UnitQuaternion;

#[derive(Clone, Debug)]
pub struct QuadratureRule<T: Real> {
    pub nodes: Vec<(UnitQuaternion<T>, T)>,
    pub exactness: usize,
}

/// Gauss–Legendre nodes and weights on [0, 1].
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(n);
    let two = T::lit(2.0);
    for k in 0..n {
        let mut x = T::lit((std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos());
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != T::zero() {
            dp = d;
        }
        let w = two / ((T::one() - x * x) * dp * dp);
        out.push(((T::one() - x) / two, w / two));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = T::lit(k as f64);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::lit(n as f64);
    (p1, nf * (x * p1 - p0) / (x * x - T::one()))
}

impl<T: Real> QuadratureRule<T> {
    /// A rule exact for ambient polynomials of degree ≤ `exactness`.
    pub fn new(exactness: usize) -> Self {
        let n_ang = exactness + 1;
        let n_u = (exactness / 2 + 2) / 2;
        let gl = gauss_legendre::<T>(n_u.max(1));
        let two_pi = T::lit(2.0 * std::f64::consts::PI);
        let dphi = two_pi / T::lit(n_ang as f64);
        let mut nodes = Vec::with_capacity(gl.len() * n_ang * n_ang);
        for (u, wu) in &gl {
            let (c, s) = ((T::one() - *u).sqrt(), u.sqrt());
            for a in 0..n_ang {
                let p1 = dphi * T::lit(a as f64);
                for b in 0..n_ang {
                    let p2 = dphi * T::lit(b as f64);
                    let q = UnitQuaternion { w: c * p1.cos(), x: c * p1.sin(), y: s * p2.cos(), z: s * p2.sin() };
                    nodes.push((q, *wu * dphi * dphi / T::lit(2.0)));
                }
            }
        }
        Self { nodes, exactness }
    }

    pub fn total_weight(&self) -> T {
        self.nodes.iter().fold(T::zero(), |acc, (_, w)| acc + *w)
    }

    pub fn integrate<S: Scalar>(&self, f: &Polynomial<S>) -> Result<T> {
        let d = f.degree();
        if d > self.exactness {
            return Err(Error::DegreeOverflow { degree: d, exactness: self.exactness });
        }
        let coeffs: Vec<([u8; 4], T)> = f.terms().map(|(e, v)| (*e, T::lit(v.to_f64_lossy()))).collect();
        let mut acc = T::zero();
        for (q, w) in &self.nodes {
            let c = q.coords();
            let mut v = T::zero();
            for (e, k) in &coeffs {
                let mut m = *k;
                for a in 0..4 {
                    m = m * c[a].powi(e[a] as i32);
                }
                v = v + m;
            }
            acc = acc + v * *w;
        }
        Ok(acc)
    }

    /// Sum of w·g(q) in node order for any pointwise integrand.
    pub fn sum<F: FnMut(&UnitQuaternion<T>) -> T>(&self, mut g: F) -> T {
        self.nodes.iter().fold(T::zero(), |acc, (q, w)| acc + g(q) * *w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // ∫_{S³} w^a x^b y^c z^d = 2 ΠΓ((a_i+1)/2) / Γ((Σa_i+4)/2), zero if any a_i odd.
    fn monomial_oracle(e: [u8; 4]) -> f64 {
        if e.iter().any(|k| k % 2 == 1) {
            return 0.0;
        }
        fn half_gamma(n2: u32) -> f64 {
            // Γ(n2/2) for positive integer n2
            if n2 == 1 {
                PI.sqrt()
            } else if n2 == 2 {
                1.0
            } else {
                (n2 as f64 / 2.0 - 1.0) * half_gamma(n2 - 2)
            }
        }
        let num: f64 = e.iter().map(|&k| half_gamma(k as u32 + 1)).product();
        let s: u32 = e.iter().map(|&k| k as u32).sum();
        2.0 * num / half_gamma(s + 4)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre::<f64>(5);
        for k in 0..10 {
            let v: f64 = gl.iter().map(|(x, w)| w * x.powi(k)).sum();
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn volume_and_examples() {
        let rule = QuadratureRule::<f64>::new(16);
        assert!((rule.total_weight() - 2.0 * PI * PI).abs() < 1e-12);
        let w = Polynomial::<f64>::coordinate(0);
        assert!(rule.integrate(&w).unwrap().abs() < 1e-14);
        let w2 = &w * &w;
        assert!((rule.integrate(&w2).unwrap() - PI * PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn exact_on_all_monomials_up_to_degree() {
        for d in [4usize, 8, 16] {
            let rule = QuadratureRule::<f64>::new(d);
            for deg in 0..=d {
                for e in Polynomial::<f64>::exponents_of_degree(deg) {
                    let v = rule.integrate(&Polynomial::monomial(e, 1.0)).unwrap();
                    let o = monomial_oracle(e);
                    assert!((v - o).abs() <= 1e-10 * o.abs().max(1e-3), "{e:?}: {v} vs {o}");
                }
            }
        }
    }

    #[test]
    fn degree_overflow_is_an_error() {
        let rule = QuadratureRule::<f64>::new(4);
        let f = Polynomial::<f64>::monomial([5, 0, 0, 0], 1.0);
        assert!(matches!(rule.integrate(&f), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn single_precision_rule() {
        let rule = QuadratureRule::<f32>::new(8);
        assert!((rule.total_weight() - 2.0 * std::f32::consts::PI.powi(2)).abs() < 1e-4);
    }
}
