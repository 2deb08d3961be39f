//! One eigenmode of the link, seen as a finite algebra.
//!
//! Function mode φ (∇̄*∇̄φ = aφ): scalars [φ], 1-forms [dφ], symmetric
//! tensors [H, G] with H = ∇̄^sym dφ and G = φḡ.  On the unit sphere
//!
//!   ∇̄*∇̄ dφ = (a − 2)dφ,  ∇̄*∇̄ H = (a − 6)H − 4aG,
//!   δ̄dφ = −aφ,  δ̄H = (4 − 2a)dφ,  δ̄G = dφ,  tr H = −2aφ,  tr G = 3φ.
//!
//! 1-form mode τ (δ̄τ = 0, ∇̄*∇̄τ = Aτ): 1-forms [τ], symmetric tensors
//! [H_τ = ∇̄^sym τ] with ∇̄*∇̄H_τ = (A − 4)H_τ, δ̄H_τ = (2 − A)τ, tr H_τ = 0.
//!
//! TT mode: symmetric tensors [B] with ∇̄*∇̄B = λB.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cone_calculus::Link;
use crate::error::{Error, Result};
use crate::s3_tensor_calculus::Bundle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeKind {
    Function,
    OneForm,
    TransverseTraceless,
}

/// A link eigenmode: kind, index j where the eigenvalue comes from a
/// closed-form list, and the eigenvalue A of ∇̄*∇̄.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleMode {
    pub kind: ModeKind,
    pub j: Option<usize>,
    pub eigenvalue: f64,
}

impl BundleMode {
    /// A = j(j + 2).
    pub fn function(j: usize) -> Self {
        Self { kind: ModeKind::Function, j: Some(j), eigenvalue: (j * (j + 2)) as f64 }
    }

    /// A = (j + 1)(j + 3).
    pub fn one_form(j: usize) -> Self {
        Self { kind: ModeKind::OneForm, j: Some(j), eigenvalue: ((j + 1) * (j + 3)) as f64 }
    }

    /// A divergence-free 1-form mode with an explicit rough eigenvalue.
    pub fn one_form_eigenvalue(a: f64) -> Result<Self> {
        Self::checked(ModeKind::OneForm, a)
    }

    pub fn tt(lambda: f64) -> Result<Self> {
        Self::checked(ModeKind::TransverseTraceless, lambda)
    }

    fn checked(kind: ModeKind, a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::Invalid(format!("mode eigenvalue {a} must be finite and >= 0")));
        }
        Ok(Self { kind, j: None, eigenvalue: a })
    }

    pub fn label(&self) -> String {
        let kind = match self.kind {
            ModeKind::Function => "function",
            ModeKind::OneForm => "one-form",
            ModeKind::TransverseTraceless => "tt",
        };
        match self.j {
            Some(j) => format!("{kind} j={j} A={}", self.eigenvalue),
            None => format!("{kind} A={}", self.eigenvalue),
        }
    }
}

pub(crate) fn dim(kind: ModeKind, bundle: Bundle) -> usize {
    match (kind, bundle) {
        (ModeKind::Function, Bundle::SymTwoTensor) => 2,
        (ModeKind::Function, _) => 1,
        (ModeKind::OneForm, Bundle::Scalar) => 0,
        (ModeKind::OneForm, _) => 1,
        (ModeKind::TransverseTraceless, Bundle::SymTwoTensor) => 1,
        (ModeKind::TransverseTraceless, _) => 0,
    }
}

/// L² Gram matrix of the basis of `bundle` for ∫φ² = ∫|τ|² = ∫|B|² = 1.
pub(crate) fn gram(mode: &BundleMode, bundle: Bundle) -> DMatrix<f64> {
    let a = mode.eigenvalue;
    match (mode.kind, bundle) {
        (ModeKind::Function, Bundle::Scalar) => DMatrix::from_element(1, 1, 1.0),
        (ModeKind::Function, Bundle::OneForm) => DMatrix::from_element(1, 1, a),
        (ModeKind::Function, Bundle::SymTwoTensor) => {
            DMatrix::from_row_slice(2, 2, &[4.0 * (a * a - 2.0 * a), -2.0 * a, -2.0 * a, 3.0])
        }
        (ModeKind::OneForm, Bundle::OneForm) => DMatrix::from_element(1, 1, 1.0),
        (ModeKind::OneForm, Bundle::SymTwoTensor) => DMatrix::from_element(1, 1, 2.0 * (a - 2.0)),
        (ModeKind::TransverseTraceless, Bundle::SymTwoTensor) => DMatrix::from_element(1, 1, 1.0),
        _ => DMatrix::zeros(0, 0),
    }
}

/// Coefficients of a field of the mode algebra in the basis above.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeField {
    pub mode: BundleMode,
    pub bundle: Bundle,
    pub c: Vec<f64>,
}

impl ModeField {
    pub fn new(mode: BundleMode, bundle: Bundle, c: Vec<f64>) -> Result<Self> {
        if c.len() != dim(mode.kind, bundle) {
            return Err(Error::Invalid(format!("{} {} has dimension {}", mode.label(), bundle.name(), dim(mode.kind, bundle))));
        }
        Ok(Self { mode, bundle, c })
    }

    fn with(&self, bundle: Bundle, c: Vec<f64>) -> Self {
        debug_assert_eq!(c.len(), dim(self.mode.kind, bundle));
        Self { mode: self.mode, bundle, c }
    }

    fn zero(&self, bundle: Bundle) -> Self {
        self.with(bundle, vec![0.0; dim(self.mode.kind, bundle)])
    }
}

impl Link for ModeField {
    type S = f64;

    fn bundle(&self) -> Bundle {
        self.bundle
    }

    fn zero_of(&self, bundle: Bundle) -> Self {
        self.zero(bundle)
    }

    fn plus(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bundle, o.bundle);
        self.with(self.bundle, self.c.iter().zip(&o.c).map(|(x, y)| x + y).collect())
    }

    fn times(&self, s: &f64) -> Self {
        self.with(self.bundle, self.c.iter().map(|x| x * s).collect())
    }

    fn lap(&self) -> Self {
        let a = self.mode.eigenvalue;
        let c = &self.c;
        let out = match (self.mode.kind, self.bundle) {
            (ModeKind::Function, Bundle::Scalar) => vec![a * c[0]],
            (ModeKind::Function, Bundle::OneForm) => vec![(a - 2.0) * c[0]],
            (ModeKind::Function, Bundle::SymTwoTensor) => vec![(a - 6.0) * c[0], -4.0 * a * c[0] + a * c[1]],
            (ModeKind::OneForm, Bundle::OneForm) => vec![a * c[0]],
            (ModeKind::OneForm, Bundle::SymTwoTensor) => vec![(a - 4.0) * c[0]],
            (ModeKind::TransverseTraceless, Bundle::SymTwoTensor) => vec![a * c[0]],
            _ => c.clone(),
        };
        self.with(self.bundle, out)
    }

    fn div(&self) -> Self {
        let a = self.mode.eigenvalue;
        let c = &self.c;
        match (self.mode.kind, self.bundle) {
            (ModeKind::Function, Bundle::OneForm) => self.with(Bundle::Scalar, vec![-a * c[0]]),
            (ModeKind::Function, Bundle::SymTwoTensor) => self.with(Bundle::OneForm, vec![(4.0 - 2.0 * a) * c[0] + c[1]]),
            (ModeKind::OneForm, Bundle::SymTwoTensor) => self.with(Bundle::OneForm, vec![(2.0 - a) * c[0]]),
            (_, Bundle::SymTwoTensor) => self.zero(Bundle::OneForm),
            _ => self.zero(Bundle::Scalar),
        }
    }

    fn d(&self) -> Self {
        match self.mode.kind {
            ModeKind::Function => self.with(Bundle::OneForm, self.c.clone()),
            _ => self.zero(Bundle::OneForm),
        }
    }

    fn tr(&self) -> Self {
        let a = self.mode.eigenvalue;
        match self.mode.kind {
            ModeKind::Function => self.with(Bundle::Scalar, vec![-2.0 * a * self.c[0] + 3.0 * self.c[1]]),
            _ => self.zero(Bundle::Scalar),
        }
    }

    fn nsym(&self) -> Self {
        match self.mode.kind {
            ModeKind::Function => self.with(Bundle::SymTwoTensor, vec![self.c[0], 0.0]),
            ModeKind::OneForm => self.with(Bundle::SymTwoTensor, self.c.clone()),
            ModeKind::TransverseTraceless => self.zero(Bundle::SymTwoTensor),
        }
    }

    fn gmul(&self) -> Self {
        match self.mode.kind {
            ModeKind::Function => self.with(Bundle::SymTwoTensor, vec![0.0, self.c[0]]),
            _ => self.zero(Bundle::SymTwoTensor),
        }
    }

    fn vanishes(&self) -> bool {
        self.c.iter().all(|x| *x == 0.0)
    }
}
