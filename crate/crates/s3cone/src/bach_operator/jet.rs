//! Truncated Taylor polynomials in four variables (degree ≤ 4) around a
//! base point.  Coefficients are stored in graded order, so truncation to
//! a lower degree is a prefix.

use std::sync::OnceLock;

pub const MAX_DEGREE: usize = 4;

struct Tables {
    exps: Vec<[u8; 4]>,
    /// (i, j, k): monomial i times monomial j is monomial k; sorted by k.
    mul: Vec<(u16, u16, u16)>,
    /// (src, dst, factor) for ∂_a.
    partial: [Vec<(u16, u16, f64)>; 4],
    /// α! per monomial.
    factorial: Vec<f64>,
}

fn count(d: usize) -> usize {
    // C(d + 4, 4)
    (d + 1) * (d + 2) * (d + 3) * (d + 4) / 24
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut exps = Vec::new();
        for d in 0..=MAX_DEGREE as u8 {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    for c in (0..=d - a - b).rev() {
                        exps.push([a, b, c, d - a - b - c]);
                    }
                }
            }
        }
        let index = |e: [u8; 4]| exps.iter().position(|x| *x == e);
        let mut mul = Vec::new();
        for (i, a) in exps.iter().enumerate() {
            for (j, b) in exps.iter().enumerate() {
                let s = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                if let Some(k) = index(s) {
                    mul.push((i as u16, j as u16, k as u16));
                }
            }
        }
        mul.sort_by_key(|m| m.2);
        let partial = std::array::from_fn(|a| {
            let mut v = Vec::new();
            for (src, e) in exps.iter().enumerate() {
                if e[a] > 0 {
                    let mut f = *e;
                    f[a] -= 1;
                    v.push((src as u16, index(f).unwrap() as u16, e[a] as f64));
                }
            }
            v
        });
        let fact = |n: u8| (1..=n as u64).product::<u64>() as f64;
        let factorial = exps.iter().map(|e| e.iter().map(|&n| fact(n)).product()).collect();
        Tables { exps, mul, partial, factorial }
    })
}

/// Exponent of the i-th coefficient.
pub fn exponent(i: usize) -> [u8; 4] {
    tables().exps[i]
}

pub fn index_of(e: [u8; 4]) -> Option<usize> {
    tables().exps.iter().position(|x| *x == e)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    c: Vec<f64>,
}

impl Jet {
    pub fn zero(deg: usize) -> Self {
        Self { c: vec![0.0; count(deg)] }
    }

    pub fn constant(v: f64, deg: usize) -> Self {
        let mut j = Self::zero(deg);
        j.c[0] = v;
        j
    }

    /// v + y_a
    pub fn variable(v: f64, a: usize, deg: usize) -> Self {
        let mut j = Self::constant(v, deg);
        if deg > 0 {
            j.c[1 + a] = 1.0;
        }
        j
    }

    /// Taylor coefficients from partial derivatives (∂^α f, graded order).
    pub fn from_derivatives(d: &[f64]) -> Self {
        let t = tables();
        Self { c: d.iter().zip(&t.factorial).map(|(v, f)| v / f).collect() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        (0..=MAX_DEGREE).find(|&d| count(d) == self.c.len()).expect("graded length")
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// ∂^α at the base point.
    pub fn derivative(&self, e: [u8; 4]) -> f64 {
        let i = index_of(e).expect("exponent within degree 4");
        self.c.get(i).map_or(0.0, |v| v * tables().factorial[i])
    }

    pub fn truncate(&self, deg: usize) -> Self {
        Self { c: self.c[..count(deg.min(self.degree()))].to_vec() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().min(o.c.len());
        Self { c: (0..n).map(|i| self.c[i] + o.c[i]).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().min(o.c.len());
        Self { c: (0..n).map(|i| self.c[i] - o.c[i]).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { c: self.c.iter().map(|v| v * s).collect() }
    }

    pub fn add_assign_scaled(&mut self, o: &Self, s: f64) {
        let n = self.c.len().min(o.c.len());
        self.c.truncate(n);
        for i in 0..n {
            self.c[i] += s * o.c[i];
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.c.len().min(o.c.len());
        let mut c = vec![0.0; n];
        for &(i, j, k) in &tables().mul {
            if k as usize >= n {
                break;
            }
            c[k as usize] += self.c[i as usize] * o.c[j as usize];
        }
        Self { c }
    }

    /// ∂/∂y_a; the result is one degree lower.
    pub fn partial(&self, a: usize) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        let n = count(d - 1);
        let mut c = vec![0.0; n];
        for &(src, dst, f) in &tables().partial[a] {
            if (src as usize) < self.c.len() && (dst as usize) < n {
                c[dst as usize] += f * self.c[src as usize];
            }
        }
        Self { c }
    }

    /// self^β for a positive constant term.
    pub fn powf(&self, beta: f64) -> Self {
        let c0 = self.c[0];
        assert!(c0 > 0.0, "powf of a jet needs a positive base value");
        let u = self.scale(1.0 / c0).sub(&Self::constant(1.0, self.degree()));
        let mut out = Self::constant(1.0, self.degree());
        let mut term = Self::constant(1.0, self.degree());
        let mut binom = 1.0;
        for k in 1..=self.degree() {
            term = term.mul(&u);
            binom *= (beta - (k - 1) as f64) / k as f64;
            out.add_assign_scaled(&term, binom);
        }
        out.scale(c0.powf(beta))
    }
}

/// Inverse of a symmetric 4×4 matrix of jets.
pub fn invert(m: &[[Jet; 4]; 4]) -> Option<[[Jet; 4]; 4]> {
    let deg = m[0][0].degree();
    let m0 = nalgebra::Matrix4::from_fn(|i, j| m[i][j].value());
    let inv0 = m0.try_inverse()?;
    let inv0j: [[Jet; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| Jet::constant(inv0[(i, j)], deg)));
    // N = m - m0; m⁻¹ = Σ_k (-inv0 N)^k inv0
    let n: [[Jet; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| m[i][j].sub(&Jet::constant(m0[(i, j)], deg)))
    });
    let k = matmul(&inv0j, &n).map(|row| row.map(|x| x.scale(-1.0)));
    let mut out = inv0j.clone();
    let mut pow = inv0j;
    for _ in 0..deg {
        pow = matmul(&k, &pow);
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = out[i][j].add(&pow[i][j]);
            }
        }
    }
    Some(out)
}

fn matmul(a: &[[Jet; 4]; 4], b: &[[Jet; 4]; 4]) -> [[Jet; 4]; 4] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = a[i][0].mul(&b[0][j]);
            for k in 1..4 {
                s = s.add(&a[i][k].mul(&b[k][j]));
            }
            s
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_layout() {
        assert_eq!(count(4), 70);
        assert_eq!(exponent(0), [0; 4]);
        assert_eq!(exponent(1), [1, 0, 0, 0]);
        assert_eq!(exponent(4), [0, 0, 0, 1]);
        assert!((5..15).all(|i| exponent(i).iter().sum::<u8>() == 2));
    }

    #[test]
    fn product_and_derivative() {
        // (1 + y0)(2 + y1) at degree 2
        let a = Jet::variable(1.0, 0, 2);
        let b = Jet::variable(2.0, 1, 2);
        let p = a.mul(&b);
        assert_eq!(p.derivative([1, 1, 0, 0]), 1.0);
        assert_eq!(p.derivative([1, 0, 0, 0]), 2.0);
        assert_eq!(p.partial(0).value(), 2.0);
        assert_eq!(p.partial(0).degree(), 1);
    }

    #[test]
    fn power_series_matches_closed_form() {
        // r^β with r² = (1 + y0)² + y1², derivatives at the base point
        let x = Jet::variable(1.0, 0, 4);
        let y = Jet::variable(0.0, 1, 4);
        let r2 = x.mul(&x).add(&y.mul(&y));
        let f = r2.powf(-0.75); // r^{-3/2}
        // ∂⁴/∂y0⁴ of (1 + y0)^{-3/2} at 0
        let expect = (-1.5f64) * (-2.5) * (-3.5) * (-4.5);
        assert!((f.derivative([4, 0, 0, 0]) - expect).abs() < 1e-12);
        // ∂²/∂y1² of (1 + y1²)^{-3/4} at 0 is -3/2
        assert!((f.derivative([0, 2, 0, 0]) + 1.5).abs() < 1e-12);
    }

    #[test]
    fn matrix_inverse() {
        let m: [[Jet; 4]; 4] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let base = if i == j { 2.0 } else { 0.1 };
                Jet::variable(base, (i + j) % 4, 3).scale(if i == j { 1.0 } else { 0.5 })
            })
        });
        let inv = invert(&m).unwrap();
        let id = matmul(&m, &inv);
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((id[i][j].value() - e).abs() < 1e-13);
                assert!(id[i][j].coeffs()[1..].iter().all(|v| v.abs() < 1e-12));
            }
        }
    }
}
