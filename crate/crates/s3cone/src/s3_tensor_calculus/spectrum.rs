//! Rough-Laplacian spectra on polynomial-coefficient subspaces.

use nalgebra::{DMatrix, SymmetricEigen};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su2_frame::{Polynomial, QuadratureRule};

use super::field::{Bundle, TensorFieldS3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    None,
    DivergenceFree,
    TraceFreeDivergenceFree,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SpectrumReport {
    pub bundle: Bundle,
    pub constraint: Constraint,
    pub degree_cap: usize,
    /// (eigenvalue, multiplicity), ascending.
    pub pairs: Vec<(f64, usize)>,
    pub space_dimension: usize,
    pub constrained_dimension: usize,
    /// ‖P² - P‖ for the constraint projector in orthonormal coordinates.
    pub projector_defect: f64,
}

impl SpectrumReport {
    pub fn smallest(&self) -> Option<f64> {
        self.pairs.first().map(|p| p.0)
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.pairs.iter().any(|p| (p.0 - value).abs() < tol)
    }
}

pub const SVD_THRESHOLD: f64 = 1e-9;
pub const CLUSTER_TOL: f64 = 1e-6;

/// Monomials of degree J and J-1 in every coefficient slot; their
/// restrictions span all polynomial coefficients of degree ≤ J on S³.
pub fn coefficient_basis(bundle: Bundle, cap: usize) -> Vec<TensorFieldS3<f64>> {
    let degrees = if cap == 0 { vec![0] } else { vec![cap - 1, cap] };
    let mut monos = Vec::new();
    for d in degrees {
        for e in Polynomial::<f64>::exponents_of_degree(d) {
            monos.push(Polynomial::monomial(e, 1.0));
        }
    }
    let mut out = Vec::new();
    for m in &monos {
        for s in 0..bundle.rank() {
            let mut c = vec![Polynomial::zero(); bundle.rank()];
            c[s] = m.clone();
            out.push(TensorFieldS3::from_components(bundle, c).expect("rank matches"));
        }
    }
    out
}

/// Rows: (node, component) weighted so that ΦᵀΨ is the L² product.
fn sample_matrix(fields: &[TensorFieldS3<f64>], bundle: Bundle, rule: &QuadratureRule<f64>) -> DMatrix<f64> {
    let rank = bundle.rank();
    let w = TensorFieldS3::<f64>::weights(bundle);
    let mut m = DMatrix::zeros(rule.nodes.len() * rank, fields.len());
    for (j, f) in fields.iter().enumerate() {
        for (n, (q, wq)) in rule.nodes.iter().enumerate() {
            let v = f.eval(&q.coords());
            for s in 0..rank {
                m[(n * rank + s, j)] = v[s] * (wq * w[s]).sqrt();
            }
        }
    }
    m
}

/// Orthonormal null space of `m` by SVD thresholding.
pub fn null_space(m: &DMatrix<f64>, threshold: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let mut a = DMatrix::zeros(m.nrows().max(n), n);
    a.rows_mut(0, m.nrows()).copy_from(m);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let cols: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] < threshold).collect();
    let mut k = DMatrix::zeros(n, cols.len());
    for (c, &i) in cols.iter().enumerate() {
        k.set_column(c, &vt.row(i).transpose());
    }
    k
}

pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((_, n, sum)) if (v - *sum / *n as f64).abs() < tol => {
                *n += 1;
                *sum += v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter().map(|(_, n, sum)| (sum / n as f64, n)).collect()
}

pub fn spectrum(bundle: Bundle, constraint: Constraint, cap: usize, rule: &QuadratureRule<f64>) -> Result<SpectrumReport> {
    if cap == 0 {
        return Err(Error::Invalid("degree cap must be at least 1".into()));
    }
    if rule.exactness < 2 * cap {
        return Err(Error::DegreeOverflow { degree: 2 * cap, exactness: rule.exactness });
    }
    match (bundle, constraint) {
        (Bundle::Scalar, Constraint::None) | (Bundle::OneForm, Constraint::None | Constraint::DivergenceFree) => {}
        (Bundle::SymTwoTensor, _) => {}
        _ => return Err(Error::Invalid(format!("constraint {constraint:?} does not apply to {}", bundle.name()))),
    }
    let basis = coefficient_basis(bundle, cap);
    let lap: Vec<_> = basis.iter().map(|f| f.rough_laplacian()).collect();
    let phi = sample_matrix(&basis, bundle, rule);
    let lphi = sample_matrix(&lap, bundle, rule);

    let gram = phi.transpose() * &phi;
    let eig = SymmetricEigen::new(gram);
    let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..basis.len()).filter(|&i| eig.eigenvalues[i] > 1e-10 * lmax).collect();
    let mut c = DMatrix::zeros(basis.len(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        c.set_column(j, &(eig.eigenvectors.column(i) / eig.eigenvalues[i].sqrt()));
    }
    let a = c.transpose() * (phi.transpose() * &lphi) * &c;
    let a = (&a + a.transpose()) * 0.5;

    let constraint_rows = |fields: Vec<TensorFieldS3<f64>>, b: Bundle| sample_matrix(&fields, b, rule) * &c;
    let k = match constraint {
        Constraint::None => DMatrix::identity(keep.len(), keep.len()),
        Constraint::DivergenceFree => {
            let target = if bundle == Bundle::OneForm { Bundle::Scalar } else { Bundle::OneForm };
            let d = constraint_rows(basis.iter().map(|f| f.div_unchecked()).collect(), target);
            null_space(&d, SVD_THRESHOLD)
        }
        Constraint::TraceFreeDivergenceFree => {
            let d = constraint_rows(basis.iter().map(|f| f.div_unchecked()).collect(), Bundle::OneForm);
            let t = constraint_rows(basis.iter().map(|f| f.tr_unchecked()).collect(), Bundle::Scalar);
            let mut stacked = DMatrix::zeros(d.nrows() + t.nrows(), d.ncols());
            stacked.rows_mut(0, d.nrows()).copy_from(&d);
            stacked.rows_mut(d.nrows(), t.nrows()).copy_from(&t);
            null_space(&stacked, SVD_THRESHOLD)
        }
    };
    let p = &k * k.transpose();
    let projector_defect = (&p * &p - &p).abs().max();
    let reduced = k.transpose() * &a * &k;
    let mut values: Vec<f64> = SymmetricEigen::new(reduced).eigenvalues.iter().cloned().collect();
    values.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(SpectrumReport {
        bundle,
        constraint,
        degree_cap: cap,
        pairs: cluster(&values, CLUSTER_TOL),
        space_dimension: keep.len(),
        constrained_dimension: k.ncols(),
        projector_defect,
    })
}

/// The listed 1-form values (j+1)(j+3) next to the computed spectrum.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OneFormComparison {
    pub computed: Vec<(f64, usize)>,
    pub listed: Vec<(f64, bool)>,
    pub two_is_eigenvalue: bool,
}

pub fn compare_one_form_list(report: &SpectrumReport, jmax: usize) -> OneFormComparison {
    let listed = (0..=jmax)
        .map(|j| {
            let a = ((j + 1) * (j + 3)) as f64;
            (a, report.contains(a, CLUSTER_TOL))
        })
        .collect();
    OneFormComparison { computed: report.pairs.clone(), listed, two_is_eigenvalue: report.contains(2.0, CLUSTER_TOL) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_spectrum_j2() {
        let rule = QuadratureRule::new(8);
        let rep = spectrum(Bundle::Scalar, Constraint::None, 2, &rule).unwrap();
        let vals: Vec<_> = rep.pairs.iter().map(|p| (p.0.round() as i64, p.1)).collect();
        assert_eq!(vals, vec![(0, 1), (3, 4), (8, 9)]);
    }

    #[test]
    fn rule_too_coarse() {
        let rule = QuadratureRule::new(3);
        assert!(spectrum(Bundle::Scalar, Constraint::None, 2, &rule).is_err());
    }

    #[test]
    fn bad_constraint_rejected() {
        let rule = QuadratureRule::new(8);
        assert!(spectrum(Bundle::Scalar, Constraint::DivergenceFree, 2, &rule).is_err());
    }

    #[test]
    fn cluster_groups() {
        let c = cluster(&[1.0, 1.0 + 1e-9, 2.0], 1e-6);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 2);
    }
}
