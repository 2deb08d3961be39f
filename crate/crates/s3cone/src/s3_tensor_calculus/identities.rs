//! The eight commutation identities for ∇*∇ on the round S³, checked on
//! every monomial-coefficient field of degree ≤ cap.

use serde::Serialize;

use crate::scalar::Scalar;
use crate::su2_frame::{Polynomial, QuadratureRule};

use super::field::{Bundle, TensorFieldS3};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IdentityResidual {
    pub id: usize,
    pub statement: &'static str,
    pub basis_size: usize,
    /// Sup over basis fields and sample nodes of |LHS - RHS|.
    pub sup_residual: f64,
    /// Largest |LHS| seen, for scale.
    pub sup_lhs: f64,
    /// Number of basis fields with a nonzero residual polynomial.
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IdentityReport {
    pub degree_cap: usize,
    pub tolerance: f64,
    pub entries: Vec<IdentityResidual>,
    /// Identity 6 with -4δτ·g in place of -2δτ·g.
    pub lie_laplacian_corrected: IdentityResidual,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.sup_residual < self.tolerance)
    }
}

pub const STATEMENTS: [&str; 8] = [
    "d L phi = L d phi + 2 d phi",
    "delta L d phi = -L^2 phi + 2 L phi",
    "delta L alpha = L delta alpha - 2 delta alpha",
    "delta L^2 alpha = L^2 delta alpha - 4 L delta alpha + 4 delta alpha",
    "delta Lie_alpha g = -L alpha + d delta alpha + 2 alpha",
    "Lie_{L tau} g = L Lie_tau g + 4 Lie_tau g - 2 (delta tau) g",
    "delta L B = L delta B - 4 delta B + 2 d tr B",
    "delta L^2 B = L^2 delta B - 8 L delta B + 16 delta B",
];

/// Every field whose single coefficient slot holds a monomial of degree ≤ cap.
/// Symmetric tensors use the five trace-free constant frames when
/// `trace_free` is set, otherwise the six unit slots.
pub fn monomial_basis<T: Scalar>(bundle: Bundle, cap: usize, trace_free: bool) -> Vec<TensorFieldS3<T>> {
    let mut monos = Vec::new();
    for d in 0..=cap {
        for e in Polynomial::<T>::exponents_of_degree(d) {
            monos.push(Polynomial::monomial(e, T::one()));
        }
    }
    let mut out = Vec::new();
    for m in &monos {
        match bundle {
            Bundle::Scalar => out.push(TensorFieldS3::scalar(m.clone())),
            Bundle::OneForm => {
                for k in 0..3 {
                    let mut c = vec![Polynomial::zero(); 3];
                    c[k] = m.clone();
                    out.push(TensorFieldS3::from_components(Bundle::OneForm, c).unwrap());
                }
            }
            Bundle::SymTwoTensor => {
                for s in 0..6 {
                    let mut c = vec![Polynomial::zero(); 6];
                    if trace_free && s < 3 {
                        if s == 2 {
                            continue;
                        }
                        // diag(1,-1,0) and diag(0,1,-1)
                        c[s] = m.clone();
                        c[s + 1] = m.scale(&-T::one());
                    } else {
                        c[s] = m.clone();
                    }
                    out.push(TensorFieldS3::from_components(Bundle::SymTwoTensor, c).unwrap());
                }
            }
        }
    }
    out
}

type Side<T> = (TensorFieldS3<T>, TensorFieldS3<T>);

fn lap2<T: Scalar>(t: &TensorFieldS3<T>) -> TensorFieldS3<T> {
    t.rough_laplacian().rough_laplacian()
}

/// LHS and RHS of identity `id` (1-based) on the input field.
pub fn identity_sides<T: Scalar>(id: usize, f: &TensorFieldS3<T>) -> Side<T> {
    type F<T> = TensorFieldS3<T>;
    match id {
        1 => {
            let d = f.d_unchecked();
            (f.rough_laplacian().d_unchecked(), F::combo(&[(1, &d.rough_laplacian()), (2, &d)]))
        }
        2 => {
            let l = f.rough_laplacian();
            (f.d_unchecked().rough_laplacian().div_unchecked(), F::combo(&[(-1, &lap2(f)), (2, &l)]))
        }
        3 => {
            let dv = f.div_unchecked();
            (f.rough_laplacian().div_unchecked(), F::combo(&[(1, &dv.rough_laplacian()), (-2, &dv)]))
        }
        4 => {
            let dv = f.div_unchecked();
            (
                lap2(f).div_unchecked(),
                F::combo(&[(1, &lap2(&dv)), (-4, &dv.rough_laplacian()), (4, &dv)]),
            )
        }
        5 => {
            let rhs = F::combo(&[(-1, &f.rough_laplacian()), (1, &f.div_unchecked().d_unchecked()), (2, f)]);
            (f.nabla_sym_unchecked().div_unchecked(), rhs)
        }
        6 => lie_laplacian_sides(f, 2),
        7 => {
            let dv = f.div_unchecked();
            let dtr = f.tr_unchecked().d_unchecked();
            (f.rough_laplacian().div_unchecked(), F::combo(&[(1, &dv.rough_laplacian()), (-4, &dv), (2, &dtr)]))
        }
        8 => {
            let dv = f.div_unchecked();
            (
                lap2(f).div_unchecked(),
                F::combo(&[(1, &lap2(&dv)), (-8, &dv.rough_laplacian()), (16, &dv)]),
            )
        }
        _ => panic!("identity index {id} out of range"),
    }
}

/// L_{∇*∇τ}g against ∇*∇L_τg + 4L_τg - c·δτ·g.
pub fn lie_laplacian_sides<T: Scalar>(tau: &TensorFieldS3<T>, c: i64) -> Side<T> {
    let lt = tau.nabla_sym_unchecked();
    let dg = TensorFieldS3::times_metric_unchecked(&tau.div_unchecked());
    (
        tau.rough_laplacian().nabla_sym_unchecked(),
        TensorFieldS3::combo(&[(1, &lt.rough_laplacian()), (4, &lt), (-c, &dg)]),
    )
}

pub fn identity_bundle(id: usize) -> Bundle {
    match id {
        1 | 2 => Bundle::Scalar,
        3..=6 => Bundle::OneForm,
        _ => Bundle::SymTwoTensor,
    }
}

fn residual_entry<T: Scalar>(
    id: usize,
    statement: &'static str,
    basis: &[TensorFieldS3<T>],
    sides: impl Fn(&TensorFieldS3<T>) -> Side<T>,
    nodes: &QuadratureRule<f64>,
) -> IdentityResidual {
    let mut sup_residual: f64 = 0.0;
    let mut sup_lhs: f64 = 0.0;
    let mut failures = 0;
    for f in basis {
        let (l, r) = sides(f);
        let res = l.sub(&r);
        if !l.is_zero() {
            sup_lhs = sup_lhs.max(l.sup_norm(nodes));
        }
        if !res.is_zero() {
            failures += 1;
            sup_residual = sup_residual.max(res.sup_norm(nodes));
        }
    }
    IdentityResidual { id, statement, basis_size: basis.len(), sup_residual, sup_lhs, failures }
}

/// Runs all eight identities over the monomial basis of degree ≤ `cap`.
/// Identities 7 and 8 are stated for trace-free B and use that basis.
pub fn verify_appendix_identities<T: Scalar>(cap: usize) -> IdentityReport {
    let nodes = QuadratureRule::<f64>::new(2 * cap.max(2) + 2);
    let mut entries = Vec::new();
    for id in 1..=8 {
        let basis = monomial_basis::<T>(identity_bundle(id), cap, id >= 7);
        entries.push(residual_entry(id, STATEMENTS[id - 1], &basis, |f| identity_sides(id, f), &nodes));
    }
    let basis = monomial_basis::<T>(Bundle::OneForm, cap, false);
    let corrected = residual_entry(
        6,
        "Lie_{L tau} g = L Lie_tau g + 4 Lie_tau g - 4 (delta tau) g",
        &basis,
        |f| lie_laplacian_sides(f, 4),
        &nodes,
    );
    IdentityReport { degree_cap: cap, tolerance: 1e-8, entries, lie_laplacian_corrected: corrected }
}
