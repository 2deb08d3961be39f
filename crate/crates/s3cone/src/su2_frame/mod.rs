//! S³ as the unit quaternions, the left-invariant frame X^i(q) = q·x_i,
//! polynomial test fields and Hopf-coordinate quadrature.

mod poly;
mod quadrature;

pub use poly::{Exponent, Polynomial};
pub use quadrature::{gauss_legendre, QuadratureRule};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

const UNIT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion<T: Real> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> UnitQuaternion<T> {
    /// Accepts inputs within 1e-6 of the unit sphere and renormalizes.
    pub fn new(w: T, x: T, y: T, z: T) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        let nf = n.to_f64_lossy();
        if !nf.is_finite() || (nf - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm: nf });
        }
        Ok(Self { w: w / n, x: x / n, y: y / n, z: z / n })
    }

    /// Projects any nonzero 4-vector to the sphere.
    pub fn from_direction(v: [T; 4]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]).sqrt();
        if !(n.to_f64_lossy() > 0.0) {
            return Err(Error::NotUnit { norm: 0.0 });
        }
        Ok(Self { w: v[0] / n, x: v[1] / n, y: v[2] / n, z: v[3] / n })
    }

    pub fn identity() -> Self {
        Self { w: T::one(), x: T::zero(), y: T::zero(), z: T::zero() }
    }

    pub fn coords(&self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Hamilton product with x₁x₂ = x₃.
    pub fn mul(&self, o: &Self) -> [T; 4] {
        quat_mul(&self.coords(), &o.coords())
    }
}

pub fn quat_mul<T: Real>(a: &[T; 4], b: &[T; 4]) -> [T; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

/// The imaginary unit x_i as a 4-vector, `i` 1-based.
pub fn imaginary_unit<T: Real>(i: usize) -> [T; 4] {
    let mut u = [T::zero(); 4];
    u[i] = T::one();
    u
}

#[derive(Clone, Debug, PartialEq)]
pub struct MilnorFrame<T: Real> {
    pub base: UnitQuaternion<T>,
    /// vectors[i-1] = X^i(q) = q·x_i.
    pub vectors: [[T; 4]; 3],
    /// constants[k][i][j] = C^{k+1}_{i+1 j+1}.
    pub constants: [[[i8; 3]; 3]; 3],
}

/// C^k_ij = de^k(X^i, X^j) = -e^k([X^i, X^j]): C¹₂₃ = C²₃₁ = C³₁₂ = -2.
/// As operators, [X^i, X^j] = -C^k_ij X^k.
pub fn structure_constants() -> [[[i8; 3]; 3]; 3] {
    let mut c = [[[0i8; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                c[k][i][j] = -2 * levi_civita(i, j, k);
            }
        }
    }
    c
}

/// ε_ijk for 0-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i8 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

pub fn frame_at<T: Real>(q: &UnitQuaternion<T>) -> Result<MilnorFrame<T>> {
    let c = q.coords();
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]).sqrt().to_f64_lossy();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm: n });
    }
    let vectors = [1, 2, 3].map(|i| quat_mul(&c, &imaginary_unit(i)));
    Ok(MilnorFrame { base: *q, vectors, constants: structure_constants() })
}

/// X^i f for `i` in 1..=3.
pub fn lie_derivative_scalar<T: Scalar>(f: &Polynomial<T>, i: usize) -> Result<Polynomial<T>> {
    if !(1..=3).contains(&i) {
        return Err(Error::FrameIndex(i));
    }
    Ok(f.frame_derivative(i))
}

pub fn integrate<T: Real, S: Scalar>(f: &Polynomial<S>, rule: &QuadratureRule<T>) -> Result<T> {
    rule.integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use proptest::prelude::*;

    fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn identity_frame_is_imaginary_units() {
        let f = frame_at(&UnitQuaternion::<f64>::identity()).unwrap();
        for i in 1..=3 {
            assert_eq!(f.vectors[i - 1], imaginary_unit::<f64>(i));
        }
    }

    #[test]
    fn non_unit_rejected() {
        assert!(UnitQuaternion::new(1.1, 0.0, 0.0, 0.0).is_err());
        let bad = UnitQuaternion { w: 2.0, x: 0.0, y: 0.0, z: 0.0 };
        assert!(frame_at(&bad).is_err());
    }

    #[test]
    fn constants_match_convention() {
        let c = structure_constants();
        assert_eq!(c[0][1][2], -2);
        assert_eq!(c[1][2][0], -2);
        assert_eq!(c[2][0][1], -2);
        assert_eq!(c[2][1][0], 2);
        let nonzero = c.iter().flatten().flatten().filter(|v| **v != 0).count();
        assert_eq!(nonzero, 6);
    }

    #[test]
    fn frame_table_matches_quaternion_product() {
        let q = UnitQuaternion::from_direction([0.3, -0.5, 0.7, 0.2]).unwrap();
        let f = frame_at(&q).unwrap();
        for i in 1..=3 {
            for a in 0..4 {
                let v = Polynomial::<f64>::coordinate(a).frame_derivative(i).eval_f64(&q.coords());
                assert!((v - f.vectors[i - 1][a]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn commutators_on_degree_le_4_basis() {
        let c = structure_constants();
        for d in 0..=4 {
            for e in Polynomial::<Rational64>::exponents_of_degree(d) {
                let f = Polynomial::monomial(e, Rational64::from_integer(1));
                for i in 1..=3 {
                    for j in 1..=3 {
                        let lhs = &f.frame_derivative(j).frame_derivative(i)
                            - &f.frame_derivative(i).frame_derivative(j);
                        let mut rhs = Polynomial::zero();
                        for k in 1..=3 {
                            let ck = Rational64::from_integer(-(c[k - 1][i - 1][j - 1] as i64));
                            rhs.add_scaled(&f.frame_derivative(k), &ck);
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn x1_x2_commutator_on_coordinates() {
        // [X¹,X²] acts as +2X³ on functions, i.e. -C³₁₂ X³.
        for a in 0..4 {
            let f = Polynomial::<f64>::coordinate(a);
            let lhs = &f.frame_derivative(2).frame_derivative(1) - &f.frame_derivative(1).frame_derivative(2);
            let rhs = f.frame_derivative(3).scale(&2.0);
            assert!((&lhs - &rhs).max_abs_coefficient() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn frame_orthonormal(w in -1.0f64..1.0, x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
            prop_assume!(w*w + x*x + y*y + z*z > 1e-3);
            let q = UnitQuaternion::from_direction([w, x, y, z]).unwrap();
            let f = frame_at(&q).unwrap();
            let c = q.coords();
            for i in 0..3 {
                prop_assert!(dot(&f.vectors[i], &c).abs() < 1e-12);
                for j in 0..3 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((dot(&f.vectors[i], &f.vectors[j]) - expect).abs() < 1e-12);
                }
            }
        }
    }
}
