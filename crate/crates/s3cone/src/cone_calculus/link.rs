//! What the separated formulas need from the link S³: a module of fields
//! with the first- and second-order operators.  Implemented by polynomial
//! fields and by the finite mode algebras of the indicial classifier.

use std::fmt::Debug;

use crate::s3_tensor_calculus::{Bundle, TensorFieldS3};
use crate::scalar::Scalar;

pub trait Link: Clone + Debug {
    type S: Scalar;

    fn bundle(&self) -> Bundle;
    fn zero_of(&self, bundle: Bundle) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, c: &Self::S) -> Self;
    /// ∇̄*∇̄
    fn lap(&self) -> Self;
    /// δ̄ on 1-forms and symmetric tensors
    fn div(&self) -> Self;
    /// d̄ on scalars
    fn d(&self) -> Self;
    /// tr̄ on symmetric tensors
    fn tr(&self) -> Self;
    /// ∇̄^sym on 1-forms
    fn nsym(&self) -> Self;
    /// φ ↦ φḡ on scalars
    fn gmul(&self) -> Self;
    fn vanishes(&self) -> bool;

    fn times_int(&self, c: i64) -> Self {
        self.times(&Self::S::int(c))
    }

    /// Σ c_i (∇̄*∇̄)^i applied to self.
    fn lap_poly(&self, c: &[i64]) -> Self {
        let mut out = self.zero_of(self.bundle());
        let mut p = self.clone();
        for (i, &ci) in c.iter().enumerate() {
            if i > 0 {
                p = p.lap();
            }
            if ci != 0 {
                out = out.plus(&p.times_int(ci));
            }
        }
        out
    }
}

impl<T: Scalar> Link for TensorFieldS3<T> {
    type S = T;

    fn bundle(&self) -> Bundle {
        TensorFieldS3::bundle(self)
    }
    fn zero_of(&self, bundle: Bundle) -> Self {
        TensorFieldS3::zero(bundle)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, c: &T) -> Self {
        self.scale(c)
    }
    fn lap(&self) -> Self {
        self.rough_laplacian()
    }
    fn div(&self) -> Self {
        self.div_unchecked()
    }
    fn d(&self) -> Self {
        self.d_unchecked()
    }
    fn tr(&self) -> Self {
        self.tr_unchecked()
    }
    fn nsym(&self) -> Self {
        self.nabla_sym_unchecked()
    }
    fn gmul(&self) -> Self {
        TensorFieldS3::times_metric_unchecked(self)
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}
