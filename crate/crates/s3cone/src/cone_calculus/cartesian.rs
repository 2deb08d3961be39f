//! Cartesian samples of separated tensors on ℝ⁴ and the brute-force
//! biharmonic oracle.  On flat ℝ⁴ the rough Laplacian is the
//! componentwise coordinate Laplacian, so (∇*∇)² = Δ_h² componentwise.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cone_calculus::radial::RadialProfile;
use crate::cone_calculus::separated::{Separated, Term};
use crate::error::{Error, Result};
use crate::numerics::central_stencil;
use crate::s3_tensor_calculus::{Bundle, TensorFieldS3, SYM_PAIRS};
use crate::scalar::Real;
use crate::su2_frame::{imaginary_unit, quat_mul};

/// Upper-triangular storage order of a symmetric 4×4 matrix.
pub const SYM4: [(usize, usize); 10] =
    [(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub type Mat4 = [[f64; 4]; 4];

pub fn pack(m: &Mat4) -> [f64; 10] {
    SYM4.map(|(i, j)| 0.5 * (m[i][j] + m[j][i]))
}

pub fn unpack(v: &[f64; 10]) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (s, &(i, j)) in SYM4.iter().enumerate() {
        m[i][j] = v[s];
        m[j][i] = v[s];
    }
    m
}

/// Frobenius norm of the packed matrix.
pub fn frobenius(v: &[f64; 10]) -> f64 {
    v.iter().enumerate().map(|(s, a)| if s < 4 { a * a } else { 2.0 * a * a }).sum::<f64>().sqrt()
}

/// Unit normal and the frame E_k = q·x_k at q = x/|x|.
pub fn cone_frame(x: &[f64; 4]) -> Result<(f64, [f64; 4], [[f64; 4]; 3])> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(r > 1e-12) {
        return Err(Error::ConePoint { point: *x });
    }
    let q = x.map(|v| v / r);
    let e = [1, 2, 3].map(|k| quat_mul(&q, &imaginary_unit::<f64>(k)));
    Ok((r, q, e))
}

fn add_outer(m: &mut Mat4, c: f64, a: &[f64; 4], b: &[f64; 4]) {
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] += c * a[i] * b[j];
        }
    }
}

impl<T: Real> Separated<RadialProfile<T>, TensorFieldS3<T>> {
    /// Cartesian components at x ≠ 0.
    pub fn matrix_at(&self, x: &[f64; 4]) -> Result<Mat4> {
        let (r, q, e) = cone_frame(x)?;
        let rt = T::lit(r);
        let mut m = [[0.0; 4]; 4];
        for t in &self.terms {
            match t {
                Term::Horizontal(f, b) => {
                    let fv = f.eval(rt).to_f64_lossy();
                    let c = b.eval(&q);
                    for (s, &(k, l)) in SYM_PAIRS.iter().enumerate() {
                        add_outer(&mut m, fv * c[s], &e[k], &e[l]);
                        if k != l {
                            add_outer(&mut m, fv * c[s], &e[l], &e[k]);
                        }
                    }
                }
                Term::Cross(k, tau) => {
                    let kv = k.eval(rt).to_f64_lossy();
                    let c = tau.eval(&q);
                    for a in 0..3 {
                        add_outer(&mut m, kv * c[a], &e[a], &q);
                        add_outer(&mut m, kv * c[a], &q, &e[a]);
                    }
                }
                Term::Vertical(l, phi) => {
                    let lv = l.eval(rt).to_f64_lossy();
                    add_outer(&mut m, lv * phi.eval(&q)[0], &q, &q);
                }
            }
        }
        Ok(m)
    }

    pub fn packed_at(&self, x: &[f64; 4]) -> Result<[f64; 10]> {
        Ok(pack(&self.matrix_at(x)?))
    }

    /// g₀ = dr⊗dr + ḡ.
    pub fn flat_metric() -> Self {
        let one = TensorFieldS3::scalar(crate::su2_frame::Polynomial::one());
        Separated::new(vec![
            Term::Vertical(RadialProfile::constant(T::one()), one),
            Term::Horizontal(RadialProfile::constant(T::one()), TensorFieldS3::metric()),
        ])
    }
}

/// Uniform grid x = -outer + i·h, h = 2·outer/n, restricted to the shell
/// inner - pad·h ≤ |x| ≤ outer + pad·h.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub inner: f64,
    pub outer: f64,
}

impl GridSpec {
    pub fn new(n: usize, inner: f64, outer: f64) -> Result<Self> {
        if n < 8 || !(inner > 0.0 && outer > inner) {
            return Err(Error::Grid(format!("need n >= 8 and 0 < inner < outer (n = {n}, [{inner}, {outer}])")));
        }
        Ok(Self { n, inner, outer })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.outer / self.n as f64
    }
}

#[derive(Clone, Copy, Debug)]
struct Row {
    start: usize,
    l0: i32,
    len: usize,
}

/// Packed symmetric (0,2) samples on a shell of grid nodes.  Nodes
/// inside the inner boundary of the stored shell hold NaN.
#[derive(Clone, Debug)]
pub struct CartesianField4 {
    pub spec: GridSpec,
    pub pad: usize,
    lo: i32,
    m: usize,
    rows: Vec<Option<Row>>,
    data: Vec<[f64; 10]>,
}

impl CartesianField4 {
    pub fn spacing(&self) -> f64 {
        self.spec.spacing()
    }

    pub fn coord(&self, i: i32) -> f64 {
        -self.spec.outer + i as f64 * self.spacing()
    }

    pub fn point(&self, idx: [i32; 4]) -> [f64; 4] {
        idx.map(|i| self.coord(i))
    }

    fn layout(spec: GridSpec, pad: usize) -> Result<Self> {
        let h = spec.spacing();
        if spec.inner - pad as f64 * h <= 0.0 {
            return Err(Error::Grid(format!(
                "pad {pad} at spacing {h} reaches the cone point from inner radius {}",
                spec.inner
            )));
        }
        let lo = -(pad as i32);
        let m = spec.n + 1 + 2 * pad;
        let rmax = spec.outer + (pad as f64 + 1e-6) * h;
        let mut rows = vec![None; m * m * m];
        let mut start = 0;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let p = [a, b, c].map(|v| -spec.outer + (v as i32 + lo) as f64 * h);
                    let rest = rmax * rmax - p.iter().map(|v| v * v).sum::<f64>();
                    if rest < 0.0 {
                        continue;
                    }
                    let w = rest.sqrt();
                    let l_min = ((-w + spec.outer) / h - 1e-9).ceil() as i32;
                    let l_max = ((w + spec.outer) / h + 1e-9).floor() as i32;
                    if l_max < l_min {
                        continue;
                    }
                    let len = (l_max - l_min + 1) as usize;
                    rows[(a * m + b) * m + c] = Some(Row { start, l0: l_min, len });
                    start += len;
                }
            }
        }
        Ok(Self { spec, pad, lo, m, rows, data: vec![[f64::NAN; 10]; start] })
    }

    fn row(&self, i: i32, j: i32, k: i32) -> Option<&Row> {
        let m = self.m as i32;
        let (a, b, c) = (i - self.lo, j - self.lo, k - self.lo);
        if a < 0 || b < 0 || c < 0 || a >= m || b >= m || c >= m {
            return None;
        }
        self.rows[((a * m + b) * m + c) as usize].as_ref()
    }

    /// Sample at an integer node, if stored.
    pub fn get(&self, idx: [i32; 4]) -> Option<&[f64; 10]> {
        let row = self.row(idx[0], idx[1], idx[2])?;
        let off = idx[3] - row.l0;
        if off < 0 || off as usize >= row.len {
            return None;
        }
        Some(&self.data[row.start + off as usize])
    }

    /// All stored nodes with a ≤ |x| ≤ b (the annulus proper).
    pub fn annulus_nodes(&self) -> Vec<[i32; 4]> {
        let (a2, b2) = (self.spec.inner.powi(2) * (1.0 - 1e-12), self.spec.outer.powi(2) * (1.0 + 1e-12));
        let mut out = Vec::new();
        for (n, row) in self.rows.iter().enumerate() {
            let Some(row) = row else { continue };
            let c = n % self.m;
            let b = (n / self.m) % self.m;
            let a = n / (self.m * self.m);
            let ijk = [a, b, c].map(|v| v as i32 + self.lo);
            for l in row.l0..row.l0 + row.len as i32 {
                let idx = [ijk[0], ijk[1], ijk[2], l];
                let r2: f64 = self.point(idx).iter().map(|v| v * v).sum();
                if r2 >= a2 && r2 <= b2 {
                    out.push(idx);
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Fills every shell node from `f`; hole nodes stay NaN.
    fn fill(&mut self, f: impl Fn(&[f64; 4]) -> Result<[f64; 10]>) -> Result<()> {
        let h = self.spacing();
        let rmin2 = (self.spec.inner - (self.pad as f64 + 1e-6) * h).max(0.0).powi(2);
        for n in 0..self.rows.len() {
            let Some(row) = self.rows[n] else { continue };
            let c = n % self.m;
            let b = (n / self.m) % self.m;
            let a = n / (self.m * self.m);
            let ijk = [a, b, c].map(|v| v as i32 + self.lo);
            for (o, l) in (row.l0..row.l0 + row.len as i32).enumerate() {
                let x = self.point([ijk[0], ijk[1], ijk[2], l]);
                if x.iter().map(|v| v * v).sum::<f64>() >= rmin2 {
                    self.data[row.start + o] = f(&x)?;
                }
            }
        }
        Ok(())
    }

    /// Samples an explicit tensor field on the shell.
    pub fn sample(spec: GridSpec, pad: usize, f: impl Fn(&[f64; 4]) -> Result<[f64; 10]>) -> Result<Self> {
        let mut out = Self::layout(spec, pad)?;
        out.fill(f)?;
        Ok(out)
    }
}

/// Samples S on the grid with `pad` extra node layers on both sides of the annulus.
pub fn to_cartesian<T: Real>(
    s: &Separated<RadialProfile<T>, TensorFieldS3<T>>,
    spec: GridSpec,
    pad: usize,
) -> Result<CartesianField4> {
    for t in &s.terms {
        let bundle = match t {
            Term::Horizontal(_, b) => (b.bundle(), Bundle::SymTwoTensor),
            Term::Cross(_, b) => (b.bundle(), Bundle::OneForm),
            Term::Vertical(_, b) => (b.bundle(), Bundle::Scalar),
        };
        if bundle.0 != bundle.1 {
            return Err(Error::Bundle { op: "to_cartesian", expected: bundle.1.name(), got: bundle.0.name() });
        }
    }
    CartesianField4::sample(spec, pad, |x| s.packed_at(x))
}

/// Δ_h² = (Σ_a D_a)² with D_a the centered second difference of the
/// given accuracy, as merged (offset, weight) pairs at unit spacing.
pub fn biharmonic_stencil(order: usize) -> Result<(usize, Vec<([i32; 4], f64)>)> {
    if order != 2 && order != 4 {
        return Err(Error::Invalid(format!("stencil order {order} not in {{2, 4}}")));
    }
    let (s, w) = central_stencil(2, order);
    let s = s as i32;
    let mut acc: BTreeMap<[i32; 4], f64> = BTreeMap::new();
    for a in 0..4 {
        for i in -s..=s {
            for j in -s..=s {
                let mut o = [0; 4];
                o[a] = i + j;
                *acc.entry(o).or_default() += w[(i + s) as usize] * w[(j + s) as usize];
            }
        }
        for b in a + 1..4 {
            for i in -s..=s {
                for j in -s..=s {
                    let mut o = [0; 4];
                    o[a] = i;
                    o[b] = j;
                    *acc.entry(o).or_default() += 2.0 * w[(i + s) as usize] * w[(j + s) as usize];
                }
            }
        }
    }
    Ok((2 * s as usize, acc.into_iter().filter(|(_, v)| *v != 0.0).collect()))
}

fn apply_at(t: &CartesianField4, stencil: &[([i32; 4], f64)], idx: [i32; 4], scale: f64) -> Result<[f64; 10]> {
    let mut out = [0.0; 10];
    for (o, w) in stencil {
        let j = [idx[0] + o[0], idx[1] + o[1], idx[2] + o[2], idx[3] + o[3]];
        let v = t.get(j).ok_or_else(|| Error::Grid(format!("stencil leaves the stored shell at {j:?}")))?;
        for c in 0..10 {
            out[c] += w * v[c];
        }
    }
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

/// Checks padding and returns the stencil with its 1/h⁴ scale.
pub(crate) fn prepared_stencil(t: &CartesianField4, order: usize) -> Result<(Vec<([i32; 4], f64)>, f64)> {
    let (radius, st) = biharmonic_stencil(order)?;
    if t.pad < radius {
        return Err(Error::Grid(format!("pad {} below stencil radius {radius}", t.pad)));
    }
    Ok((st, t.spacing().powi(-4)))
}

pub(crate) fn bilaplacian_at(t: &CartesianField4, st: &[([i32; 4], f64)], scale: f64, idx: [i32; 4]) -> Result<[f64; 10]> {
    apply_at(t, st, idx, scale)
}

/// Componentwise discrete biharmonic on the annulus nodes.
pub fn cartesian_bilaplacian_fd(t: &CartesianField4, order: usize) -> Result<CartesianField4> {
    let (st, scale) = prepared_stencil(t, order)?;
    let mut out = CartesianField4::layout(t.spec, 0)?;
    for idx in out.annulus_nodes() {
        let v = apply_at(t, &st, idx, scale)?;
        let row = *out.row(idx[0], idx[1], idx[2]).expect("annulus node has a row");
        out.data[row.start + (idx[3] - row.l0) as usize] = v;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2_frame::Polynomial;

    type S = Separated<RadialProfile<f64>, TensorFieldS3<f64>>;

    fn one() -> TensorFieldS3<f64> {
        TensorFieldS3::scalar(Polynomial::one())
    }

    #[test]
    fn flat_metric_is_identity() {
        let g = S::flat_metric();
        let m = g.matrix_at(&[0.3, -1.1, 0.7, 0.2]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((m[i][j] - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn radial_projector_and_complement() {
        let x = [0.5, 1.0, -0.25, 2.0];
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let drdr = S::vertical(RadialProfile::constant(1.0), one()).matrix_at(&x).unwrap();
        let gbar = S::horizontal(RadialProfile::constant(1.0), TensorFieldS3::metric()).matrix_at(&x).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let p = x[i] * x[j] / r2;
                assert!((drdr[i][j] - p).abs() < 1e-14);
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((gbar[i][j] - (d - p)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn quadratic_components_have_zero_biharmonic() {
        let spec = GridSpec::new(16, 1.0, 2.0).unwrap();
        let f = CartesianField4::sample(spec, 2, |x| Ok([x[0] * x[1], x[2] * x[2], 1.0, 0.0, x[3], 0.0, 0.0, 0.0, 0.0, x[0] * x[0]]))
            .unwrap();
        let b = cartesian_bilaplacian_fd(&f, 2).unwrap();
        for idx in b.annulus_nodes() {
            assert!(frobenius(b.get(idx).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn thin_pad_rejected() {
        let spec = GridSpec::new(16, 1.0, 2.0).unwrap();
        let f = to_cartesian(&S::flat_metric(), spec, 1).unwrap();
        assert!(matches!(cartesian_bilaplacian_fd(&f, 2), Err(Error::Grid(_))));
        assert!(matches!(to_cartesian(&S::flat_metric(), spec, 5), Err(Error::Grid(_))));
        assert!(GridSpec::new(4, 1.0, 2.0).is_err());
    }

    #[test]
    fn stencils() {
        let (r, st) = biharmonic_stencil(2).unwrap();
        assert_eq!(r, 2);
        assert_eq!(st.len(), 41);
        let centre = st.iter().find(|(o, _)| *o == [0; 4]).unwrap().1;
        assert!((centre - (4.0 * 6.0 + 12.0 * 4.0)).abs() < 1e-12);
        assert_eq!(biharmonic_stencil(4).unwrap().0, 4);
        assert!(biharmonic_stencil(3).is_err());
    }
}
