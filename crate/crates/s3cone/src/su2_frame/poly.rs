//! Polynomials in the ambient coordinates (w, x, y, z) of ℝ⁴, read as
//! functions on S³.  Exponents are stored densely per monomial in a
//! `BTreeMap` so iteration order (and hence every sum) is fixed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

pub type Exponent = [u8; 4];

#[derive(Clone, PartialEq)]
pub struct Polynomial<T: Scalar> {
    terms: BTreeMap<Exponent, T>,
}

/// Components of q·x_i as (source coordinate, sign) for each target coordinate.
/// Row i-1, entry a: (q·x_i)_a = sign * q[source].
pub(crate) const FRAME_TABLE: [[(usize, i8); 4]; 3] = [
    [(1, -1), (0, 1), (3, 1), (2, -1)],
    [(2, -1), (3, -1), (0, 1), (1, 1)],
    [(3, -1), (2, 1), (1, -1), (0, 1)],
];

impl<T: Scalar> Polynomial<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// The ambient coordinate w, x, y or z for `a` = 0..3.
    pub fn coordinate(a: usize) -> Self {
        let mut e = [0; 4];
        e[a] = 1;
        Self::monomial(e, T::one())
    }

    pub fn monomial(e: Exponent, c: T) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// All exponents of total degree exactly `d`, in lexicographic order.
    pub fn exponents_of_degree(d: usize) -> Vec<Exponent> {
        let mut out = Vec::new();
        for a in 0..=d {
            for b in 0..=d - a {
                for c in 0..=d - a - b {
                    let e = d - a - b - c;
                    out.push([a as u8, b as u8, c as u8, e as u8]);
                }
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&k| k as usize).sum()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&k| k as usize).sum::<usize>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    fn accumulate(&mut self, e: Exponent, c: T) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.accumulate(*e, v.clone() * c.clone());
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Self, c: &T) {
        for (e, v) in &other.terms {
            self.accumulate(*e, v.clone() * c.clone());
        }
    }

    /// Ambient partial derivative ∂/∂q_a.
    pub fn partial(&self, a: usize) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            if e[a] == 0 {
                continue;
            }
            let mut f = *e;
            f[a] -= 1;
            out.accumulate(f, v.clone() * T::int(e[a] as i64));
        }
        out
    }

    /// X^i f, the derivative along the left-invariant field q ↦ q·x_i.
    /// `i` is 1-based.  The result has the same homogeneous degrees.
    pub fn frame_derivative(&self, i: usize) -> Self {
        let row = &FRAME_TABLE[i - 1];
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            for (a, &(src, sign)) in row.iter().enumerate() {
                if e[a] == 0 {
                    continue;
                }
                let mut f = *e;
                f[a] -= 1;
                f[src] += 1;
                out.accumulate(f, v.clone() * T::int(sign as i64 * e[a] as i64));
            }
        }
        out
    }

    pub fn eval<U>(&self, q: &[U; 4]) -> U
    where
        U: Scalar,
        T: Into<U>,
    {
        let mut acc = U::zero();
        for (e, v) in &self.terms {
            let mut m: U = v.clone().into();
            for a in 0..4 {
                for _ in 0..e[a] {
                    m = m * q[a].clone();
                }
            }
            acc = acc + m;
        }
        acc
    }

    /// Evaluation at an f64 point through the lossy scalar conversion.
    pub fn eval_f64(&self, q: &[f64; 4]) -> f64 {
        let mut acc = 0.0;
        for (e, v) in &self.terms {
            let mut m = v.to_f64_lossy();
            for a in 0..4 {
                m *= q[a].powi(e[a] as i32);
            }
            acc += m;
        }
        acc
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|v| v.to_f64_lossy().abs()).fold(0.0, f64::max)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        let mut out = Polynomial::zero();
        for (e, v) in &self.terms {
            out.accumulate(*e, f(v));
        }
        out
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, &T::one());
        out
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-T::one());
        out
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.scale(&-T::one())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        let mut out = Polynomial::zero();
        for (e, v) in &self.terms {
            for (f, w) in &rhs.terms {
                let g = [e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]];
                out.accumulate(g, v.clone() * w.clone());
            }
        }
        out
    }
}

impl<T: Scalar> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["w", "x", "y", "z"];
        let mut first = true;
        for (e, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}", v)?;
            for a in 0..4 {
                match e[a] {
                    0 => {}
                    1 => write!(f, "{}", names[a])?,
                    k => write!(f, "{}^{}", names[a], k)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type P = Polynomial<Rational64>;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn x1_on_w_is_minus_x() {
        let w = P::coordinate(0);
        assert_eq!(w.frame_derivative(1), P::coordinate(1).scale(&r(-1)));
    }

    #[test]
    fn constants_are_killed() {
        for i in 1..=3 {
            assert!(P::one().frame_derivative(i).is_zero());
        }
    }

    #[test]
    fn degree_one_sum_rule() {
        // Σ X^i X^i f = -3 f on linear functions
        for a in 0..4 {
            let f = P::coordinate(a);
            let mut s = P::zero();
            for i in 1..=3 {
                s = &s + &f.frame_derivative(i).frame_derivative(i);
            }
            assert_eq!(s, f.scale(&r(-3)));
        }
    }

    #[test]
    fn frame_derivative_is_a_derivation() {
        let f = &P::coordinate(0) * &P::coordinate(2);
        let g = &(&P::coordinate(1) * &P::coordinate(1)) + &P::coordinate(3);
        for i in 1..=3 {
            let lhs = (&f * &g).frame_derivative(i);
            let rhs = &(&f.frame_derivative(i) * &g) + &(&f * &g.frame_derivative(i));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn radius_is_invariant() {
        let mut r2 = P::zero();
        for a in 0..4 {
            r2 = &r2 + &(&P::coordinate(a) * &P::coordinate(a));
        }
        for i in 1..=3 {
            assert!(r2.frame_derivative(i).is_zero());
        }
    }

    #[test]
    fn exponent_count() {
        assert_eq!(P::exponents_of_degree(4).len(), 35);
        assert_eq!(P::exponents_of_degree(0).len(), 1);
    }
}
