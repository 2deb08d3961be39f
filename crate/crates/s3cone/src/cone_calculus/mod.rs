//! Separated symmetric tensors on the flat cone C(S³) = ℝ⁴∖{0}, their
//! closed-form Laplacian, bilaplacian and divergence, and a Cartesian
//! finite-difference oracle for the closed forms.

mod cartesian;
mod link;
mod oracle;
mod radial;
mod separated;

pub use cartesian::{
    biharmonic_stencil, cartesian_bilaplacian_fd, cone_frame, frobenius, pack, to_cartesian, unpack, CartesianField4,
    GridSpec, Mat4, SYM4,
};
pub use link::Link;
pub use oracle::{compare_oracle, ConvergenceReport, ConvergenceRow};
pub use radial::{Radial, RadialProfile, SampledProfile, EXPONENT_TOL};
pub use separated::{OneFormTerm, Separated, SeparatedOneForm, SeparatedScalar, Term};

use crate::s3_tensor_calculus::TensorFieldS3;
use crate::scalar::Real;

pub type SeparatedTensor<T> = Separated<RadialProfile<T>, TensorFieldS3<T>>;

impl<T: Real> SeparatedTensor<T> {
    /// Merges monomial terms of the same kind and exponent and drops
    /// vanishing ones; sampled terms are kept as they are.
    pub fn canonical(&self) -> Self {
        let mut merged: Vec<(u8, f64, TensorFieldS3<T>)> = Vec::new();
        let mut rest = Vec::new();
        for t in &self.terms {
            let (kind, prof, field) = match t {
                Term::Horizontal(a, b) => (0u8, a, b),
                Term::Cross(a, b) => (1, a, b),
                Term::Vertical(a, b) => (2, a, b),
            };
            let Some(powers) = prof.powers() else {
                rest.push(t.clone());
                continue;
            };
            for (c, e) in powers {
                let piece = field.scale(c);
                match merged.iter_mut().find(|(k, x, _)| *k == kind && (x - e).abs() < EXPONENT_TOL) {
                    Some(slot) => slot.2 = slot.2.add(&piece),
                    None => merged.push((kind, *e, piece)),
                }
            }
        }
        merged.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap()));
        let mut terms: Vec<_> = merged
            .into_iter()
            .filter(|(_, _, f)| !f.is_zero())
            .map(|(k, e, f)| {
                let p = RadialProfile::monomial(T::one(), e);
                match k {
                    0 => Term::Horizontal(p, f),
                    1 => Term::Cross(p, f),
                    _ => Term::Vertical(p, f),
                }
            })
            .collect();
        terms.extend(rest);
        Separated::new(terms)
    }

    /// Largest link coefficient after merging; a sampled term counts as
    /// its largest sample times its link coefficient.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.canonical()
            .terms
            .iter()
            .map(|t| {
                let (p, f) = match t {
                    Term::Horizontal(a, b) | Term::Cross(a, b) | Term::Vertical(a, b) => (a, b),
                };
                let c = match p {
                    RadialProfile::Powers(v) => v.iter().fold(0.0f64, |m, (c, _)| m.max(c.to_f64_lossy().abs())),
                    RadialProfile::Sampled(s) => s.v.iter().fold(0.0f64, |m, c| m.max(c.to_f64_lossy().abs())),
                };
                c * f.max_abs_coefficient()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests;
