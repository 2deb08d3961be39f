//! The full radial system of one mode for h = r^b(f-part + k-part + l-part):
//! rows are the components of P_t h, δ_t h and tr h, columns the unknown
//! amplitudes in Gram-orthonormal coordinates, entries polynomials in b.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::bach_operator::{delta_t, modified_operator_with};
use crate::cone_calculus::{OneFormTerm, Separated, Term};
use crate::error::{Error, Result};
use crate::indicial_classifier::modes::{dim, gram, BundleMode, ModeField};
use crate::indicial_classifier::symbolic::SymbolicPower;
use crate::numerics::Poly1;
use crate::s3_tensor_calculus::Bundle;

/// σ_min below this makes the system rank deficient at b, with every
/// column scaled by its cancellation-free size Σ|c_m||b|^m.
pub const RANK_THRESHOLD: f64 = 1e-9;

type ModeTensor = Separated<SymbolicPower, ModeField>;

/// Orthonormal coordinates for the span of a mode basis: `coords` maps
/// basis coefficients to coordinates, `frame` has the orthonormal
/// elements as columns.
struct Orthonormal {
    coords: DMatrix<f64>,
    frame: DMatrix<f64>,
}

fn orthonormal(mode: &BundleMode, bundle: Bundle) -> Orthonormal {
    let g = gram(mode, bundle);
    let n = g.nrows();
    if n == 0 {
        return Orthonormal { coords: DMatrix::zeros(0, 0), frame: DMatrix::zeros(0, 0) };
    }
    let eig = SymmetricEigen::new(g);
    let top = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 1e-10 * top).collect();
    let mut coords = DMatrix::zeros(keep.len(), n);
    let mut frame = DMatrix::zeros(n, keep.len());
    for (r, &i) in keep.iter().enumerate() {
        let s = eig.eigenvalues[i].sqrt();
        let v = eig.eigenvectors.column(i);
        coords.set_row(r, &(v.transpose() * s));
        frame.set_column(r, &(v / s));
    }
    Orthonormal { coords, frame }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Unknown {
    /// 'f', 'k' or 'l'
    pub profile: char,
    pub field: ModeField,
}

pub struct ModeSystem {
    pub mode: BundleMode,
    pub t: f64,
    pub unknowns: Vec<Unknown>,
    pub rows: Vec<Vec<Poly1<f64>>>,
    /// Rows from this index on come from δ_t h and tr h.
    pub constraint_start: usize,
}

struct Slot {
    bundle: Bundle,
    offset: usize,
}

impl ModeSystem {
    pub fn build(mode: BundleMode, t: f64) -> Result<Self> {
        let on = |b: Bundle| orthonormal(&mode, b);
        let (sym, one, sca) = (on(Bundle::SymTwoTensor), on(Bundle::OneForm), on(Bundle::Scalar));
        let mut unknowns = Vec::new();
        for (profile, bundle, o) in [('f', Bundle::SymTwoTensor, &sym), ('k', Bundle::OneForm, &one), ('l', Bundle::Scalar, &sca)] {
            for c in 0..o.frame.ncols() {
                let field = ModeField::new(mode, bundle, o.frame.column(c).iter().cloned().collect())?;
                unknowns.push(Unknown { profile, field });
            }
        }
        if unknowns.is_empty() {
            return Err(Error::Invalid(format!("{} has no fields", mode.label())));
        }
        let sizes = [sym.coords.nrows(), one.coords.nrows(), sca.coords.nrows()];
        let mut offset = 0;
        let mut slot = |bundle: Bundle, size: usize| {
            let s = Slot { bundle, offset };
            offset += size;
            s
        };
        let p_h = slot(Bundle::SymTwoTensor, sizes[0]);
        let p_c = slot(Bundle::OneForm, sizes[1]);
        let p_v = slot(Bundle::Scalar, sizes[2]);
        let constraint_start = p_v.offset + sizes[2];
        let d_t = slot(Bundle::OneForm, sizes[1]);
        let d_r = slot(Bundle::Scalar, sizes[2]);
        let tr = slot(Bundle::Scalar, sizes[2]);
        let nrows = tr.offset + sizes[2];
        let coords = |b: Bundle| match b {
            Bundle::SymTwoTensor => &sym.coords,
            Bundle::OneForm => &one.coords,
            Bundle::Scalar => &sca.coords,
        };

        let mut rows = vec![vec![Poly1::zero(); unknowns.len()]; nrows];
        let mut add = |col: usize, s: &Slot, prof: &SymbolicPower, field: &ModeField| {
            debug_assert_eq!(field.bundle, s.bundle);
            let w = coords(s.bundle);
            let y = w * nalgebra::DVector::from_column_slice(&field.c);
            for (p, _) in &prof.terms {
                for r in 0..w.nrows() {
                    let e = &mut rows[s.offset + r][col];
                    *e = e.add(&p.scale(&y[r]));
                }
            }
        };
        for (col, u) in unknowns.iter().enumerate() {
            let base = SymbolicPower::base();
            let h: ModeTensor = Separated::new(vec![match u.profile {
                'f' => Term::Horizontal(base, u.field.clone()),
                'k' => Term::Cross(base, u.field.clone()),
                _ => Term::Vertical(base, u.field.clone()),
            }]);
            for term in &modified_operator_with(&h, &t).terms {
                match term {
                    Term::Horizontal(p, x) => add(col, &p_h, p, x),
                    Term::Cross(p, x) => add(col, &p_c, p, x),
                    Term::Vertical(p, x) => add(col, &p_v, p, x),
                }
            }
            for term in &delta_t(&h, &t).terms {
                match term {
                    OneFormTerm::Tangential(p, x) => add(col, &d_t, p, x),
                    OneFormTerm::Radial(p, x) => add(col, &d_r, p, x),
                }
            }
            for (p, x) in &h.trace().terms {
                add(col, &tr, p, x);
            }
        }
        debug_assert!(unknowns.iter().all(|u| u.field.c.len() == dim(mode.kind, u.field.bundle)));
        Ok(Self { mode, t, unknowns, rows, constraint_start })
    }

    pub fn eval(&self, b: Complex<f64>) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.rows.len(), self.unknowns.len(), |i, j| self.rows[i][j].eval_complex(b))
    }

    fn magnitudes(&self, b: Complex<f64>, rows: usize) -> Vec<f64> {
        let x = b.norm();
        (0..self.unknowns.len())
            .map(|j| {
                (0..rows)
                    .map(|i| self.rows[i][j].coeffs().iter().rev().fold(0.0, |acc, c| acc * x + c.abs()).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    /// σ_min of the scaled system at b and the raw amplitudes of the
    /// corresponding right singular vector.
    pub fn rank_test(&self, b: Complex<f64>) -> (f64, Vec<Complex<f64>>) {
        rank_test(self.eval(b), &self.magnitudes(b, self.rows.len()))
    }

    /// The same test on the rows of P_t h alone.
    pub fn operator_rank_test(&self, b: Complex<f64>) -> (f64, Vec<Complex<f64>>) {
        let n = self.constraint_start;
        rank_test(self.eval(b).rows(0, n).into_owned(), &self.magnitudes(b, n))
    }

    /// Largest δ_t/trace row of M(b)x relative to |M(b)| |x|.
    pub fn constraint_residual(&self, b: Complex<f64>, x: &[Complex<f64>]) -> f64 {
        let m = self.eval(b);
        let xv = nalgebra::DVector::from_column_slice(x);
        let scale = (m.norm() * xv.norm()).max(1e-300);
        let y = &m * &xv;
        (self.constraint_start..m.nrows()).map(|i| y[i].norm()).fold(0.0, f64::max) / scale
    }

    /// A nonzero maximal minor of least degree; every b where the system
    /// drops rank is one of its roots.
    pub fn candidate_polynomial(&self) -> Result<Poly1<f64>> {
        let n = self.unknowns.len();
        let m = self.rows.len();
        if m < n {
            return Err(Error::Invalid(format!("{}: fewer equations than unknowns", self.mode.label())));
        }
        let mut minors = Vec::new();
        for subset in combinations(m, n) {
            let sub: Vec<Vec<Poly1<f64>>> = subset.iter().map(|&i| self.rows[i].clone()).collect();
            minors.push(det(&sub));
        }
        let scale = minors.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max);
        minors
            .into_iter()
            .filter(|p| p.max_abs_coeff() > 1e-9 * scale)
            .map(|p| p.cleaned(1e-13))
            .min_by_key(|p| p.degree().unwrap_or(0))
            .ok_or_else(|| Error::Invalid(format!("{}: the system is rank deficient for every b", self.mode.label())))
    }
}

fn rank_test(mut m: DMatrix<Complex<f64>>, mags: &[f64]) -> (f64, Vec<Complex<f64>>) {
    let n = m.ncols();
    for (j, &s) in mags.iter().enumerate() {
        if s < 1e-300 {
            let mut v = vec![Complex::new(0.0, 0.0); n];
            v[j] = Complex::new(1.0, 0.0);
            return (0.0, v);
        }
        m.column_mut(j).unscale_mut(s);
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.unwrap();
    if svd.singular_values.len() < n {
        // more unknowns than equations: complete the row space
        let full = DMatrix::<Complex<f64>>::identity(n, n) - vt.adjoint() * &vt;
        let (j, _) = (0..n).map(|j| (j, full.column(j).norm())).fold((0, -1.0), |a, c| if c.1 > a.1 { c } else { a });
        let v = full.column(j).normalize();
        return (0.0, (0..n).map(|i| v[i] / mags[i]).collect());
    }
    let (imin, smin) =
        svd.singular_values.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, v)| if *v < acc.1 { (i, *v) } else { acc });
    (smin, (0..n).map(|j| vt[(imin, j)].conj() / mags[j]).collect())
}

fn combinations(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, n, cur, out);
            cur.pop();
        }
    }
    rec(0, m, n, &mut cur, &mut out);
    out
}

/// Laplace expansion along the first row.
fn det(a: &[Vec<Poly1<f64>>]) -> Poly1<f64> {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut out = Poly1::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly1<f64>>> =
            a[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = a[0][j].mul(&det(&minor));
        out = if j % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}
