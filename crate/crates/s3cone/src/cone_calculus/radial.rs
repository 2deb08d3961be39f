//! Radial profiles: finite sums of powers c·r^e, or samples on a
//! log-uniform grid differentiated with sixth-order stencils in log r.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::numerics::fornberg_weights;
use crate::scalar::{Real, Scalar};

pub trait Radial: Clone + Debug {
    type S: Scalar;

    fn deriv(&self) -> Self;
    /// Multiplication by r^k.
    fn shift(&self, k: i32) -> Self;
    fn times(&self, c: &Self::S) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn vanishes(&self) -> bool;

    fn times_int(&self, c: i64) -> Self {
        self.times(&Self::S::int(c))
    }

    fn nth_deriv(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.deriv())
    }
}

/// Two exponents closer than this are the same power.
pub const EXPONENT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SampledProfile<T: Real> {
    pub r: Vec<T>,
    pub v: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RadialProfile<T: Real> {
    /// Σ c·r^e
    Powers(Vec<(T, f64)>),
    Sampled(SampledProfile<T>),
}

impl<T: Real> RadialProfile<T> {
    pub fn monomial(c: T, b: f64) -> Self {
        Self::Powers(vec![(c, b)]).normalized()
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0.0)
    }

    pub fn zero() -> Self {
        Self::Powers(Vec::new())
    }

    /// Samples on a log-uniform grid of `per_octave` points per doubling
    /// over [a, b]; at least 8 points per octave are required.
    pub fn sampled(a: f64, b: f64, per_octave: usize, f: impl Fn(T) -> T) -> Result<Self> {
        if per_octave < 8 || !(a > 0.0 && b > a) {
            return Err(Error::Invalid(format!("log grid needs 0 < a < b and >= 8 points per octave (got {per_octave})")));
        }
        let n = ((b / a).log2() * per_octave as f64).ceil() as usize + 1;
        let n = n.max(8);
        let ds = (b / a).ln() / (n - 1) as f64;
        let r: Vec<T> = (0..n).map(|i| T::lit(a * (ds * i as f64).exp())).collect();
        let v = r.iter().map(|x| f(*x)).collect();
        Ok(Self::Sampled(SampledProfile { r, v }))
    }

    fn normalized(self) -> Self {
        match self {
            Self::Powers(mut p) => {
                p.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
                let mut out: Vec<(T, f64)> = Vec::new();
                for (c, e) in p {
                    match out.last_mut() {
                        Some(last) if (last.1 - e).abs() < EXPONENT_TOL => last.0 = last.0 + c,
                        _ => out.push((c, e)),
                    }
                }
                out.retain(|(c, _)| *c != T::zero());
                Self::Powers(out)
            }
            s => s,
        }
    }

    pub fn powers(&self) -> Option<&[(T, f64)]> {
        match self {
            Self::Powers(p) => Some(p),
            Self::Sampled(_) => None,
        }
    }

    pub fn eval(&self, r: T) -> T {
        match self {
            Self::Powers(p) => p.iter().fold(T::zero(), |acc, (c, e)| acc + *c * r.powf(T::lit(*e))),
            Self::Sampled(s) => s.interpolate(r),
        }
    }

    /// r ↦ f(a r).
    pub fn dilated(&self, a: T) -> Self {
        match self {
            Self::Powers(p) => Self::Powers(p.iter().map(|(c, e)| (*c * a.powf(T::lit(*e)), *e)).collect()).normalized(),
            Self::Sampled(s) => Self::Sampled(SampledProfile { r: s.r.iter().map(|r| *r / a).collect(), v: s.v.clone() }),
        }
    }

    fn sample_on(&self, grid: &[T]) -> Vec<T> {
        grid.iter().map(|r| self.eval(*r)).collect()
    }
}

impl<T: Real> SampledProfile<T> {
    fn ds(&self) -> T {
        (self.r[1] / self.r[0]).ln()
    }

    /// Sixth-order Lagrange interpolation in s = ln r.
    pub fn interpolate(&self, r: T) -> T {
        let n = self.r.len();
        let s = ((r / self.r[0]).ln() / self.ds()).to_f64_lossy();
        let width = 7.min(n);
        let start = ((s.round() as i64) - (width as i64) / 2).clamp(0, (n - width) as i64) as usize;
        let nodes: Vec<f64> = (start..start + width).map(|i| i as f64).collect();
        let w = fornberg_weights(s, &nodes, 0);
        (0..width).fold(T::zero(), |acc, k| acc + T::lit(w[0][k]) * self.v[start + k])
    }

    /// d/dr = r⁻¹ d/ds with seven-point stencils (one-sided at the ends).
    fn deriv(&self) -> Self {
        let n = self.r.len();
        let ds = self.ds();
        let width = 7.min(n);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let start = (i as i64 - 3).clamp(0, (n - width) as i64) as usize;
            let nodes: Vec<f64> = (start..start + width).map(|k| k as f64).collect();
            let w = fornberg_weights(i as f64, &nodes, 1);
            let d = (0..width).fold(T::zero(), |acc, k| acc + T::lit(w[1][k]) * self.v[start + k]);
            out.push(d / ds / self.r[i]);
        }
        Self { r: self.r.clone(), v: out }
    }
}

impl<T: Real> Radial for RadialProfile<T> {
    type S = T;

    fn deriv(&self) -> Self {
        match self {
            Self::Powers(p) => Self::Powers(p.iter().map(|(c, e)| (*c * T::lit(*e), e - 1.0)).collect()).normalized(),
            Self::Sampled(s) => Self::Sampled(s.deriv()),
        }
    }

    fn shift(&self, k: i32) -> Self {
        match self {
            Self::Powers(p) => Self::Powers(p.iter().map(|(c, e)| (*c, e + k as f64)).collect()),
            Self::Sampled(s) => {
                Self::Sampled(SampledProfile { r: s.r.clone(), v: s.r.iter().zip(&s.v).map(|(r, v)| *v * r.powi(k)).collect() })
            }
        }
    }

    fn times(&self, c: &T) -> Self {
        match self {
            Self::Powers(p) => Self::Powers(p.iter().map(|(a, e)| (*a * *c, *e)).collect()).normalized(),
            Self::Sampled(s) => Self::Sampled(SampledProfile { r: s.r.clone(), v: s.v.iter().map(|v| *v * *c).collect() }),
        }
    }

    fn plus(&self, o: &Self) -> Self {
        match (self, o) {
            (Self::Powers(a), Self::Powers(b)) => Self::Powers(a.iter().chain(b).cloned().collect()).normalized(),
            (Self::Sampled(s), other) | (other, Self::Sampled(s)) => {
                let ov = other.sample_on(&s.r);
                if let Self::Sampled(t) = other {
                    assert!(t.r == s.r, "sampled profiles on different grids");
                }
                Self::Sampled(SampledProfile { r: s.r.clone(), v: s.v.iter().zip(ov).map(|(a, b)| *a + b).collect() })
            }
        }
    }

    fn vanishes(&self) -> bool {
        match self {
            Self::Powers(p) => p.is_empty(),
            Self::Sampled(s) => s.v.iter().all(|v| *v == T::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_derivative_is_exact() {
        let f = RadialProfile::monomial(3.0, 2.5);
        assert_eq!(f.deriv(), RadialProfile::Powers(vec![(7.5, 1.5)]));
        assert!(RadialProfile::constant(2.0).deriv().vanishes());
    }

    #[test]
    fn like_powers_merge() {
        let f = RadialProfile::monomial(1.0, 2.0).plus(&RadialProfile::monomial(-1.0, 2.0));
        assert!(f.vanishes());
    }

    #[test]
    fn sampled_derivative_is_sixth_order_accurate() {
        let f = RadialProfile::<f64>::sampled(1.0, 4.0, 32, |r| r.powf(-1.5)).unwrap();
        let d = f.deriv();
        for r in [1.0, 1.3, 2.0, 3.9] {
            let exact = -1.5 * f64::powf(r, -2.5);
            assert!((d.eval(r) - exact).abs() < 1e-7, "{r}");
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(RadialProfile::<f64>::sampled(1.0, 2.0, 4, |r| r).is_err());
    }

    #[test]
    fn sampled_plus_powers() {
        let f = RadialProfile::<f64>::sampled(1.0, 2.0, 16, |r| r * r).unwrap();
        let g = f.plus(&RadialProfile::monomial(-1.0, 2.0));
        assert!(g.eval(1.5).abs() < 1e-10);
    }
}
