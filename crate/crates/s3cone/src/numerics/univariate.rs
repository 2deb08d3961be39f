use nalgebra::{Complex, DMatrix};

use crate::scalar::Scalar;

/// Dense univariate polynomial, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1<T: Scalar> {
    c: Vec<T>,
}

impl<T: Scalar> Poly1<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn constant(v: T) -> Self {
        Self::new(vec![v])
    }

    /// The polynomial b ↦ b + a.
    pub fn shifted_identity(a: T) -> Self {
        Self::new(vec![a, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = T::zero();
        Self::new((0..n).map(|i| self.c.get(i).unwrap_or(&z).clone() + o.c.get(i).unwrap_or(&z).clone()).collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.c.iter().map(|v| v.clone() * s.clone()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-T::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn deriv(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, v)| v.clone() * T::int(i as i64)).collect())
    }

    pub fn eval(&self, x: &T) -> T {
        self.c.iter().rev().fold(T::zero(), |acc, v| acc * x.clone() + v.clone())
    }
}

impl Poly1<f64> {
    pub fn eval_complex(&self, x: Complex<f64>) -> Complex<f64> {
        self.c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, v| acc * x + *v)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.c.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Coefficients below `tol` times the largest are dropped.
    pub fn cleaned(&self, tol: f64) -> Self {
        let m = self.max_abs_coeff();
        Self::new(self.c.iter().map(|v| if v.abs() <= tol * m { 0.0 } else { *v }).collect())
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            Some(l) => self.scale(&(1.0 / l)),
            None => Self::zero(),
        }
    }

    /// All complex roots with multiplicity, companion-matrix eigenvalues
    /// polished by Newton iteration; clusters are polished on the
    /// derivative that has a simple root there.
    pub fn roots(&self) -> RootSet {
        let n = match self.degree() {
            None | Some(0) => return RootSet { roots: Vec::new(), multiplicity: Vec::new() },
            Some(n) => n,
        };
        let m = self.monic();
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            comp[(i, n - 1)] = -m.c[i];
        }
        let mut raw: Vec<Complex<f64>> = comp.complex_eigenvalues().iter().cloned().collect();
        raw.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap().then(b.im.partial_cmp(&a.im).unwrap()));

        let mut roots = Vec::new();
        let mut mult = Vec::new();
        let mut used = vec![false; n];
        for i in 0..n {
            if used[i] {
                continue;
            }
            let scale = raw[i].norm().max(1.0);
            let members: Vec<usize> = (i..n).filter(|&j| !used[j] && (raw[j] - raw[i]).norm() < 1e-5 * scale).collect();
            let k = members.len();
            let mut center = members.iter().fold(Complex::new(0.0, 0.0), |a, &j| a + raw[j]) / k as f64;
            let mut target = m.clone();
            for _ in 1..k {
                target = target.deriv();
            }
            let dt = target.deriv();
            for _ in 0..60 {
                let f = target.eval_complex(center);
                let d = dt.eval_complex(center);
                if d.norm() == 0.0 {
                    break;
                }
                let step = f / d;
                center -= step;
                if step.norm() < 1e-16 * scale {
                    break;
                }
            }
            // a cluster is only kept if the polished point is a root of m
            let genuine = k == 1 || m.eval_complex(center).norm() <= 1e-10 * m.max_abs_coeff().max(1.0) * scale.powi(n as i32);
            if genuine {
                for &j in &members {
                    used[j] = true;
                }
                if center.im.abs() < 1e-9 * scale {
                    center.im = 0.0;
                }
                roots.push(center);
                mult.push(k);
            } else {
                used[i] = true;
                roots.push(raw[i]);
                mult.push(1);
            }
        }
        RootSet { roots, multiplicity: mult }
    }
}

/// Distinct roots with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex<f64>>,
    pub multiplicity: Vec<usize>,
}

impl RootSet {
    /// Roots listed with repetition, in descending real part.
    pub fn expanded(&self) -> Vec<Complex<f64>> {
        let mut out = Vec::new();
        for (r, &m) in self.roots.iter().zip(&self.multiplicity) {
            for _ in 0..m {
                out.push(*r);
            }
        }
        out
    }

    pub fn real_expanded(&self) -> Vec<f64> {
        self.expanded().iter().filter(|c| c.im == 0.0).map(|c| c.re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(r: &[f64]) -> Poly1<f64> {
        r.iter().fold(Poly1::constant(1.0), |p, x| p.mul(&Poly1::new(vec![-x, 1.0])))
    }

    #[test]
    fn simple_and_double_roots() {
        let p = from_roots(&[0.0, -2.0, -2.0, -4.0]);
        let rs = p.roots();
        let got = rs.real_expanded();
        let expect = [0.0, -2.0, -2.0, -4.0];
        assert_eq!(got.len(), 4);
        for (g, e) in got.iter().zip(expect) {
            assert!((g - e).abs() < 1e-12, "{got:?}");
        }
        assert_eq!(rs.multiplicity, vec![1, 2, 1]);
    }

    #[test]
    fn irrational_roots() {
        let s5 = 5f64.sqrt();
        let p = from_roots(&[s5, -s5, -2.0 + s5, -2.0 - s5]);
        for r in p.roots().real_expanded() {
            assert!(p.eval(&r).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_pair() {
        let p = Poly1::new(vec![1.0, 0.0, 1.0]);
        let rs = p.roots();
        assert_eq!(rs.roots.len(), 2);
        assert!(rs.roots.iter().all(|r| (r.im.abs() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn algebra() {
        let a = Poly1::new(vec![1.0, 2.0]);
        let b = Poly1::new(vec![-1.0, 0.0, 3.0]);
        let x: f64 = 0.7;
        assert!((a.mul(&b).eval(&x) - a.eval(&x) * b.eval(&x)).abs() < 1e-14);
        assert_eq!(b.deriv(), Poly1::new(vec![0.0, 6.0]));
        assert!(a.sub(&a).is_zero());
    }
}
