use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::su2_frame::{levi_civita, Polynomial, QuadratureRule, UnitQuaternion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bundle {
    Scalar,
    OneForm,
    SymTwoTensor,
}

impl Bundle {
    pub fn rank(self) -> usize {
        match self {
            Bundle::Scalar => 1,
            Bundle::OneForm => 3,
            Bundle::SymTwoTensor => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Bundle::Scalar => "scalar",
            Bundle::OneForm => "one-form",
            Bundle::SymTwoTensor => "symmetric two-tensor",
        }
    }
}

/// Storage order of the six independent components B_kl, k ≤ l.
pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

/// Position of B_kl (either order) in the six-component storage.
pub fn sym_index(k: usize, l: usize) -> usize {
    let (a, b) = if k <= l { (k, l) } else { (l, k) };
    match (a, b) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        _ => 5,
    }
}

/// A scalar, 1-form or symmetric 2-tensor on S³ written in the coframe
/// e₁, e₂, e₃ dual to X¹, X², X³.  Symmetric tensors mean Σ_kl B_kl e_k⊗e_l.
#[derive(Clone, PartialEq)]
pub struct TensorFieldS3<T: Scalar> {
    bundle: Bundle,
    comps: Vec<Polynomial<T>>,
}

impl<T: Scalar> fmt::Debug for TensorFieldS3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorFieldS3").field("bundle", &self.bundle).field("comps", &self.comps).finish()
    }
}

fn mismatch(op: &'static str, expected: Bundle, got: Bundle) -> Error {
    Error::Bundle { op, expected: expected.name(), got: got.name() }
}

impl<T: Scalar> TensorFieldS3<T> {
    pub fn zero(bundle: Bundle) -> Self {
        Self { bundle, comps: vec![Polynomial::zero(); bundle.rank()] }
    }

    pub fn from_components(bundle: Bundle, comps: Vec<Polynomial<T>>) -> Result<Self> {
        if comps.len() != bundle.rank() {
            return Err(Error::Invalid(format!("{} needs {} components, got {}", bundle.name(), bundle.rank(), comps.len())));
        }
        Ok(Self { bundle, comps })
    }

    pub fn scalar(f: Polynomial<T>) -> Self {
        Self { bundle: Bundle::Scalar, comps: vec![f] }
    }

    pub fn one_form(c: [Polynomial<T>; 3]) -> Self {
        Self { bundle: Bundle::OneForm, comps: c.to_vec() }
    }

    /// Symmetric tensor from a full 3×3 coefficient array; the lower
    /// triangle is ignored.
    pub fn sym_from_matrix(m: [[Polynomial<T>; 3]; 3]) -> Self {
        let comps = SYM_PAIRS.iter().map(|&(k, l)| m[k][l].clone()).collect();
        Self { bundle: Bundle::SymTwoTensor, comps }
    }

    /// The coframe element e_k, `k` 1-based.
    pub fn coframe(k: usize) -> Self {
        let mut c = vec![Polynomial::zero(); 3];
        c[k - 1] = Polynomial::one();
        Self { bundle: Bundle::OneForm, comps: c }
    }

    /// The round metric ḡ.
    pub fn metric() -> Self {
        let mut t = Self::zero(Bundle::SymTwoTensor);
        for k in 0..3 {
            t.comps[k] = Polynomial::one();
        }
        t
    }

    pub fn bundle(&self) -> Bundle {
        self.bundle
    }

    pub fn components(&self) -> &[Polynomial<T>] {
        &self.comps
    }

    pub fn component(&self, k: usize, l: usize) -> &Polynomial<T> {
        &self.comps[sym_index(k, l)]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        self.comps.iter().map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.comps.iter().map(|c| c.max_abs_coefficient()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { bundle: self.bundle, comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&T::int(c))
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if self.bundle != o.bundle {
            return Err(mismatch("add", self.bundle, o.bundle));
        }
        Ok(self.add(o))
    }

    pub(crate) fn add(&self, o: &Self) -> Self {
        assert_eq!(self.bundle, o.bundle, "internal bundle mismatch in add");
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect();
        Self { bundle: self.bundle, comps }
    }

    pub(crate) fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale_int(-1))
    }

    /// Linear combination Σ c_i T_i of same-bundle fields.
    pub(crate) fn combo(terms: &[(i64, &Self)]) -> Self {
        let mut out = Self::zero(terms[0].1.bundle);
        for (c, t) in terms {
            out = out.add(&t.scale_int(*c));
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> TensorFieldS3<U> {
        TensorFieldS3 { bundle: self.bundle, comps: self.comps.iter().map(|p| p.map(f)).collect() }
    }

    /// ∇_{X^i} T with ∇_{X^i} e_j = Σ_k ε_ijk e_k, `i` 1-based.
    pub fn covariant_derivative(&self, i: usize) -> Result<Self> {
        if !(1..=3).contains(&i) {
            return Err(Error::FrameIndex(i));
        }
        Ok(self.nabla(i - 1))
    }

    pub(crate) fn nabla(&self, i: usize) -> Self {
        let d: Vec<Polynomial<T>> = self.comps.iter().map(|c| c.frame_derivative(i + 1)).collect();
        match self.bundle {
            Bundle::Scalar => Self { bundle: Bundle::Scalar, comps: d },
            Bundle::OneForm => {
                let mut out = d;
                for k in 0..3 {
                    for j in 0..3 {
                        let e = levi_civita(i, j, k);
                        if e != 0 {
                            out[k].add_scaled(&self.comps[j], &T::int(e as i64));
                        }
                    }
                }
                Self { bundle: Bundle::OneForm, comps: out }
            }
            Bundle::SymTwoTensor => {
                let mut out = d;
                for (s, &(k, l)) in SYM_PAIRS.iter().enumerate() {
                    for j in 0..3 {
                        let e1 = levi_civita(i, j, k);
                        if e1 != 0 {
                            out[s].add_scaled(self.component(j, l), &T::int(e1 as i64));
                        }
                        let e2 = levi_civita(i, j, l);
                        if e2 != 0 {
                            out[s].add_scaled(self.component(k, j), &T::int(e2 as i64));
                        }
                    }
                }
                Self { bundle: Bundle::SymTwoTensor, comps: out }
            }
        }
    }

    /// ∇*∇T = -Σ_i ∇_{X^i}∇_{X^i} T.
    pub fn rough_laplacian(&self) -> Self {
        let mut out = Self::zero(self.bundle);
        for i in 0..3 {
            out = out.sub(&self.nabla(i).nabla(i));
        }
        out
    }

    /// δ = +Σ_i (∇_i T)(X^i, ·); scalars are rejected.
    pub fn divergence(&self) -> Result<Self> {
        match self.bundle {
            Bundle::Scalar => Err(mismatch("divergence", Bundle::OneForm, Bundle::Scalar)),
            _ => Ok(self.div_unchecked()),
        }
    }

    pub(crate) fn div_unchecked(&self) -> Self {
        match self.bundle {
            Bundle::OneForm => {
                let mut f = Polynomial::zero();
                for i in 0..3 {
                    f = &f + &self.nabla(i).comps[i];
                }
                Self::scalar(f)
            }
            Bundle::SymTwoTensor => {
                let mut c = vec![Polynomial::zero(); 3];
                for i in 0..3 {
                    let n = self.nabla(i);
                    for (l, cl) in c.iter_mut().enumerate() {
                        *cl = &*cl + n.component(i, l);
                    }
                }
                Self { bundle: Bundle::OneForm, comps: c }
            }
            Bundle::Scalar => panic!("internal: divergence of a scalar"),
        }
    }

    pub fn exterior_d(&self) -> Result<Self> {
        if self.bundle != Bundle::Scalar {
            return Err(mismatch("exterior_d", Bundle::Scalar, self.bundle));
        }
        Ok(self.d_unchecked())
    }

    pub(crate) fn d_unchecked(&self) -> Self {
        assert_eq!(self.bundle, Bundle::Scalar);
        let f = &self.comps[0];
        Self { bundle: Bundle::OneForm, comps: (1..=3).map(|i| f.frame_derivative(i)).collect() }
    }

    pub fn trace(&self) -> Result<Self> {
        if self.bundle != Bundle::SymTwoTensor {
            return Err(mismatch("trace", Bundle::SymTwoTensor, self.bundle));
        }
        Ok(self.tr_unchecked())
    }

    pub(crate) fn tr_unchecked(&self) -> Self {
        assert_eq!(self.bundle, Bundle::SymTwoTensor);
        Self::scalar(&(&self.comps[0] + &self.comps[1]) + &self.comps[2])
    }

    pub fn trace_free(&self) -> Result<Self> {
        let tr = self.trace()?;
        let third = T::one() / T::int(3);
        Ok(self.sub(&Self::times_metric_unchecked(&tr).scale(&third)))
    }

    /// ∇̄^sym τ = Σ_i ∇_{X^i}τ ⊠ e_i, i.e. (∇_kτ)_l + (∇_lτ)_k.
    pub fn nabla_sym(&self) -> Result<Self> {
        if self.bundle != Bundle::OneForm {
            return Err(mismatch("nabla_sym", Bundle::OneForm, self.bundle));
        }
        Ok(self.nabla_sym_unchecked())
    }

    pub(crate) fn nabla_sym_unchecked(&self) -> Self {
        assert_eq!(self.bundle, Bundle::OneForm);
        let n: Vec<Self> = (0..3).map(|i| self.nabla(i)).collect();
        let comps = SYM_PAIRS.iter().map(|&(k, l)| &n[k].comps[l] + &n[l].comps[k]).collect();
        Self { bundle: Bundle::SymTwoTensor, comps }
    }

    /// L_{τ*}ḡ = ∇τ + (∇τ)ᵀ; the same tensor as `nabla_sym`.
    pub fn lie_metric(&self) -> Result<Self> {
        if self.bundle != Bundle::OneForm {
            return Err(mismatch("lie_metric", Bundle::OneForm, self.bundle));
        }
        Ok(self.nabla_sym_unchecked())
    }

    pub fn times_metric(&self) -> Result<Self> {
        if self.bundle != Bundle::Scalar {
            return Err(mismatch("times_metric", Bundle::Scalar, self.bundle));
        }
        Ok(Self::times_metric_unchecked(self))
    }

    pub(crate) fn times_metric_unchecked(phi: &Self) -> Self {
        assert_eq!(phi.bundle, Bundle::Scalar);
        let mut t = Self::zero(Bundle::SymTwoTensor);
        for k in 0..3 {
            t.comps[k] = phi.comps[0].clone();
        }
        t
    }

    /// Frame coefficients at q in storage order.
    pub fn eval(&self, q: &[f64; 4]) -> Vec<f64> {
        self.comps.iter().map(|c| c.eval_f64(q)).collect()
    }

    /// Full-contraction weights so that Σ w_s a_s b_s is the metric product.
    pub fn weights(bundle: Bundle) -> &'static [f64] {
        match bundle {
            Bundle::Scalar => &[1.0],
            Bundle::OneForm => &[1.0, 1.0, 1.0],
            Bundle::SymTwoTensor => &[1.0, 1.0, 1.0, 2.0, 2.0, 2.0],
        }
    }

    /// Pointwise metric norm at q.
    pub fn norm_at(&self, q: &[f64; 4]) -> f64 {
        let v = self.eval(q);
        v.iter().zip(Self::weights(self.bundle)).map(|(a, w)| w * a * a).sum::<f64>().sqrt()
    }

    /// L² product by quadrature.
    pub fn inner<R: Real>(&self, o: &Self, rule: &QuadratureRule<R>) -> Result<f64> {
        if self.bundle != o.bundle {
            return Err(mismatch("inner", self.bundle, o.bundle));
        }
        let d = self.degree() + o.degree();
        if d > rule.exactness {
            return Err(Error::DegreeOverflow { degree: d, exactness: rule.exactness });
        }
        let w = Self::weights(self.bundle);
        let mut acc = 0.0;
        for (q, wq) in &rule.nodes {
            let c = q.coords().map(|v| v.to_f64_lossy());
            let a = self.eval(&c);
            let b = o.eval(&c);
            let s: f64 = a.iter().zip(&b).zip(w).map(|((x, y), ww)| ww * x * y).sum();
            acc += s * wq.to_f64_lossy();
        }
        Ok(acc)
    }

    /// Sup over the nodes of a rule of the pointwise norm.
    pub fn sup_norm<R: Real>(&self, rule: &QuadratureRule<R>) -> f64 {
        rule.nodes
            .iter()
            .map(|(q, _)| self.norm_at(&q.coords().map(|v| v.to_f64_lossy())))
            .fold(0.0, f64::max)
    }
}

impl<T: Real> TensorFieldS3<T> {
    pub fn eval_at(&self, q: &UnitQuaternion<T>) -> Vec<T> {
        let c = q.coords();
        self.comps.iter().map(|p| p.eval(&c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type F = TensorFieldS3<Rational>;

    fn coord(a: usize) -> Polynomial<Rational> {
        Polynomial::coordinate(a)
    }

    #[test]
    fn metric_is_parallel() {
        for i in 1..=3 {
            assert!(F::metric().covariant_derivative(i).unwrap().is_zero());
        }
    }

    #[test]
    fn coframe_rotation() {
        // ∇_{X²} e₁ = -e₃, ∇_{X¹} e₁ = 0
        assert_eq!(F::coframe(1).covariant_derivative(2).unwrap(), F::coframe(3).scale_int(-1));
        assert!(F::coframe(1).covariant_derivative(1).unwrap().is_zero());
        // ∇_{X^i}∇_{X^i} e_k summed is -2 e_k
        for k in 1..=3 {
            assert_eq!(F::coframe(k).rough_laplacian(), F::coframe(k).scale_int(2));
        }
    }

    #[test]
    fn first_order_examples() {
        let g = F::metric();
        assert_eq!(g.trace().unwrap(), F::scalar(Polynomial::constant(Rational::from_integer(3))));
        assert!(g.divergence().unwrap().is_zero());
        let tau = F::one_form([&coord(0) * &coord(1), coord(2), &coord(3) * &coord(3)]);
        let lhs = tau.nabla_sym().unwrap().trace().unwrap();
        let rhs = tau.divergence().unwrap().scale_int(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_traceless_tensor_has_eigenvalue_six() {
        let one = Polynomial::one();
        let z = Polynomial::zero();
        let b = F::sym_from_matrix([
            [one.clone(), z.clone(), z.clone()],
            [z.clone(), one.scale(&Rational::from_integer(-1)), z.clone()],
            [z.clone(), z.clone(), z.clone()],
        ]);
        assert_eq!(b.rough_laplacian(), b.scale_int(6));
        assert!(b.divergence().unwrap().is_zero());
    }

    #[test]
    fn linear_function_eigenvalue_three() {
        let f = F::scalar(coord(2));
        assert_eq!(f.rough_laplacian(), f.scale_int(3));
        assert!(F::scalar(Polynomial::one()).rough_laplacian().is_zero());
    }

    #[test]
    fn bundle_mismatch_rejected() {
        let f = F::scalar(coord(0));
        assert!(f.divergence().is_err());
        assert!(f.trace().is_err());
        assert!(f.nabla_sym().is_err());
        assert!(F::metric().exterior_d().is_err());
        assert!(F::coframe(1).times_metric().is_err());
        assert!(F::coframe(1).covariant_derivative(4).is_err());
    }

    #[test]
    fn trace_free_part_is_trace_free() {
        let b = F::sym_from_matrix([
            [coord(0), coord(1), coord(2)],
            [coord(1), coord(3), coord(0)],
            [coord(2), coord(0), &coord(1) * &coord(1)],
        ]);
        assert!(b.trace_free().unwrap().trace().unwrap().is_zero());
    }
}
