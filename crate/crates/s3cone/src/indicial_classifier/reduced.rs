//! The reduced radial system for h = f B + k τ⊠dr + l φ dr⊗dr with
//! eigenfields B, τ, φ, evaluated pointwise, and the assembly of explicit
//! mode solutions as separated tensors.

use nalgebra::Complex;
use serde::Serialize;

use crate::bach_operator::{delta_t, linearized_operator};
use crate::cone_calculus::{Link, OneFormTerm, Radial, RadialProfile, SeparatedOneForm, SeparatedScalar, SeparatedTensor, Term};
use crate::error::{Error, Result};
use crate::indicial_classifier::modes::{BundleMode, ModeKind};
use crate::indicial_classifier::system::{ModeSystem, RANK_THRESHOLD};
use crate::s3_tensor_calculus::{Bundle, TensorFieldS3};
use crate::su2_frame::QuadratureRule;

type Field = TensorFieldS3<f64>;

/// Relative tolerance of the eigenfield check.
pub const EIGEN_TOL: f64 = 1e-9;

/// λ with ∇̄*∇̄F = λF, or NotEigen.  The zero field passes with λ = 0.
pub fn link_eigenvalue(f: &Field, rule: &QuadratureRule<f64>) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let lf = f.rough_laplacian();
    let lambda = lf.inner(f, rule)? / f.inner(f, rule)?;
    let res = lf.add(&f.scale(&-lambda)).sup_norm(rule);
    let scale = lf.sup_norm(rule).max(f.sup_norm(rule));
    if res > EIGEN_TOL * scale {
        return Err(Error::NotEigen(format!("{} field: |LF - {lambda:.6}F| = {res:.3e}", f.bundle().name())));
    }
    Ok(lambda)
}

fn expect(op: &'static str, f: &Field, b: Bundle) -> Result<()> {
    if f.bundle() != b {
        return Err(Error::Bundle { op, expected: b.name(), got: f.bundle().name() });
    }
    Ok(())
}

/// Sup over the radii of the sup over the rule nodes, per equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedResiduals {
    pub radii: Vec<f64>,
    /// f-equation with the (L+2) cross coefficient and (L+5) vertical one
    pub horizontal: Vec<f64>,
    pub cross: Vec<f64>,
    pub vertical: Vec<f64>,
    pub divergence_tangential: Vec<f64>,
    pub divergence_radial: Vec<f64>,
    pub trace: Vec<f64>,
    /// f-equation with the (L+1) cross coefficient and (−L+3) vertical one
    pub horizontal_as_printed: Vec<f64>,
}

impl ReducedResiduals {
    /// Sup of the five equations in order horizontal, cross, vertical,
    /// tangential divergence, radial divergence.
    pub fn sup(&self) -> [f64; 5] {
        let m = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
        [m(&self.horizontal), m(&self.cross), m(&self.vertical), m(&self.divergence_tangential), m(&self.divergence_radial)]
    }
}

struct Derivs([RadialProfile<f64>; 5]);

impl Derivs {
    fn new(p: &RadialProfile<f64>) -> Self {
        Derivs(std::array::from_fn(|n| p.nth_deriv(n)))
    }
    fn at(&self, r: f64) -> [f64; 5] {
        std::array::from_fn(|n| self.0[n].eval(r))
    }
}

fn combo(parts: &[(f64, &Field)]) -> Field {
    let mut out = Field::zero(parts[0].1.bundle());
    for (c, f) in parts {
        if *c != 0.0 {
            out = out.add(&f.scale(c));
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
pub fn reduced_system_residual(
    f: &RadialProfile<f64>,
    k: &RadialProfile<f64>,
    l: &RadialProfile<f64>,
    b: &Field,
    tau: &Field,
    phi: &Field,
    radii: &[f64],
    rule: &QuadratureRule<f64>,
) -> Result<ReducedResiduals> {
    reduced_system_residual_sum(&[(f.clone(), b.clone())], k, l, tau, phi, radii, rule)
}

/// The same with Σ f_i B_i in place of f B, each B_i an eigenfield.
pub fn reduced_system_residual_sum(
    horizontal: &[(RadialProfile<f64>, Field)],
    k: &RadialProfile<f64>,
    l: &RadialProfile<f64>,
    tau: &Field,
    phi: &Field,
    radii: &[f64],
    rule: &QuadratureRule<f64>,
) -> Result<ReducedResiduals> {
    for (_, b) in horizontal {
        expect("reduced_system_residual", b, Bundle::SymTwoTensor)?;
    }
    expect("reduced_system_residual", tau, Bundle::OneForm)?;
    expect("reduced_system_residual", phi, Bundle::Scalar)?;
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::Invalid("radii must be positive and finite".into()));
    }
    for x in horizontal.iter().map(|h| &h.1).chain([tau, phi]) {
        link_eigenvalue(x, rule)?;
    }
    let lap = |x: &Field| x.rough_laplacian();
    struct Horiz {
        d: Derivs,
        b: Field,
        lb: Field,
        llb: Field,
        divb: Field,
        trb: Field,
    }
    let hs: Vec<Horiz> = horizontal
        .iter()
        .map(|(f, b)| {
            let lb = lap(b);
            Horiz { d: Derivs::new(f), llb: lap(&lb), lb, divb: b.div(), trb: b.tr(), b: b.clone() }
        })
        .collect();
    let (ntau, phig, dphi) = (tau.nsym(), phi.gmul(), phi.d());
    let (lntau, lphig) = (lap(&ntau), lap(&phig));
    let ndphi = dphi.nsym();
    let (ltau, ldphi) = (lap(tau), lap(&dphi));
    let lltau = lap(&ltau);
    let (lphi, divtau) = (lap(phi), tau.div());
    let llphi = lap(&lphi);
    let (dk, dl) = (Derivs::new(k), Derivs::new(l));

    let mut out = ReducedResiduals {
        radii: radii.to_vec(),
        horizontal: vec![],
        cross: vec![],
        vertical: vec![],
        divergence_tangential: vec![],
        divergence_radial: vec![],
        trace: vec![],
        horizontal_as_printed: vec![],
    };
    for &r in radii {
        let (kv, lv) = (dk.at(r), dl.at(r));
        let (r1, r2, r3, r4) = (1.0 / r, r.powi(-2), r.powi(-3), r.powi(-4));
        let mut f_part = Vec::new();
        let mut dt = Vec::new();
        let mut tr = Vec::new();
        for h in &hs {
            let fv = h.d.at(r);
            f_part.extend([
                (fv[4] + 6.0 * r1 * fv[3] - r2 * fv[2] - 7.0 * r3 * fv[1] + 4.0 * r4 * fv[0], &h.b),
                (-2.0 * r2 * fv[2] - 2.0 * r3 * fv[1] + 4.0 * r4 * fv[0], &h.lb),
                (r4 * fv[0], &h.llb),
            ]);
            dt.push((r1 * fv[0], &h.divb));
            tr.push((fv[0], &h.trb));
        }
        let k_growth = 4.0 * (r2 * kv[2] + 2.0 * r3 * kv[1]);
        let mut h = f_part.clone();
        h.extend([
            (k_growth - 8.0 * r4 * kv[0], &ntau),
            (-4.0 * r4 * kv[0], &lntau),
            (4.0 * (r2 * lv[2] + r3 * lv[1]) - 20.0 * r4 * lv[0], &phig),
            (-4.0 * r4 * lv[0], &lphig),
            (4.0 * r4 * lv[0], &ndphi),
        ]);
        let mut hp = f_part;
        hp.extend([
            (k_growth - 4.0 * r4 * kv[0], &ntau),
            (-4.0 * r4 * kv[0], &lntau),
            (4.0 * (r2 * lv[2] + 3.0 * r3 * lv[1]) + 12.0 * r4 * lv[0], &phig),
            (-4.0 * r4 * lv[0], &lphig),
            (4.0 * r4 * lv[0], &ndphi),
        ]);
        let cross = [
            (kv[4] + 10.0 * r1 * kv[3] + 19.0 * r2 * kv[2] - 3.0 * r3 * kv[1] - 4.0 * r4 * kv[0], tau),
            (-2.0 * r2 * kv[2] - 6.0 * r3 * kv[1], &ltau),
            (r4 * kv[0], &lltau),
            (4.0 * (r2 * lv[2] + 4.0 * r3 * lv[1] + 2.0 * r4 * lv[0]), &dphi),
            (-4.0 * r4 * lv[0], &ldphi),
        ];
        let vertical = [
            (lv[4] + 14.0 * r1 * lv[3] + 51.0 * r2 * lv[2] + 45.0 * r3 * lv[1], phi),
            (-2.0 * r2 * lv[2] - 10.0 * r3 * lv[1] - 8.0 * r4 * lv[0], &lphi),
            (r4 * lv[0], &llphi),
        ];
        dt.push((kv[1] + 4.0 * r1 * kv[0], tau));
        let dr = [(lv[1] + 4.0 * r1 * lv[0], phi), (r1 * kv[0], &divtau)];
        tr.push((lv[0], phi));
        out.horizontal.push(combo_or_zero(&h, Bundle::SymTwoTensor).sup_norm(rule));
        out.horizontal_as_printed.push(combo_or_zero(&hp, Bundle::SymTwoTensor).sup_norm(rule));
        out.cross.push(combo(&cross).sup_norm(rule));
        out.vertical.push(combo(&vertical).sup_norm(rule));
        out.divergence_tangential.push(combo(&dt).sup_norm(rule));
        out.divergence_radial.push(combo(&dr).sup_norm(rule));
        out.trace.push(combo(&tr).sup_norm(rule));
    }
    Ok(out)
}

fn combo_or_zero(parts: &[(f64, &Field)], bundle: Bundle) -> Field {
    if parts.is_empty() {
        Field::zero(bundle)
    } else {
        combo(parts)
    }
}

/// The link fields B, τ, φ a mode solution is built from, from one seed
/// eigenfield: φ for function modes, τ for 1-form modes, B for TT.
pub fn basis_fields(mode: &BundleMode, seed: &Field, bundle: Bundle) -> Vec<Field> {
    match (mode.kind, bundle) {
        (ModeKind::Function, Bundle::Scalar) => vec![seed.clone()],
        (ModeKind::Function, Bundle::OneForm) => vec![seed.d()],
        (ModeKind::Function, Bundle::SymTwoTensor) => vec![seed.d().nsym(), seed.gmul()],
        (ModeKind::OneForm, Bundle::OneForm) => vec![seed.clone()],
        (ModeKind::OneForm, Bundle::SymTwoTensor) => vec![seed.nsym()],
        (ModeKind::TransverseTraceless, Bundle::SymTwoTensor) => vec![seed.clone()],
        _ => vec![],
    }
}

fn check_seed(mode: &BundleMode, seed: &Field, rule: &QuadratureRule<f64>) -> Result<()> {
    let want = match mode.kind {
        ModeKind::Function => Bundle::Scalar,
        ModeKind::OneForm => Bundle::OneForm,
        ModeKind::TransverseTraceless => Bundle::SymTwoTensor,
    };
    expect("genuine_solution", seed, want)?;
    if seed.is_zero() {
        return Err(Error::Invalid("seed field is zero".into()));
    }
    let lambda = link_eigenvalue(seed, rule)?;
    if (lambda - mode.eigenvalue).abs() > 1e-8 * (1.0 + mode.eigenvalue) {
        return Err(Error::NotEigen(format!("seed eigenvalue {lambda} but mode has {}", mode.eigenvalue)));
    }
    if mode.kind != ModeKind::Function && seed.div().sup_norm(rule) > EIGEN_TOL * seed.sup_norm(rule).max(1.0) {
        return Err(Error::NotEigen("seed is not divergence-free".into()));
    }
    if mode.kind == ModeKind::TransverseTraceless && seed.tr().sup_norm(rule) > EIGEN_TOL * seed.sup_norm(rule).max(1.0) {
        return Err(Error::NotEigen("seed is not trace-free".into()));
    }
    Ok(())
}

/// r^b (f-part + k-part + l-part) solving P h = 0, δh = 0, tr h = 0 at a
/// realizable exponent b, assembled on the given seed eigenfield.
pub fn genuine_solution(mode: &BundleMode, b: f64, seed: &Field) -> Result<SeparatedTensor<f64>> {
    let rule = QuadratureRule::<f64>::new(2 * seed.degree() + 4);
    check_seed(mode, seed, &rule)?;
    let sys = ModeSystem::build(*mode, 0.0)?;
    let bc = Complex::new(b, 0.0);
    let (ratio, x) = sys.rank_test(bc);
    if ratio >= RANK_THRESHOLD {
        return Err(Error::Invalid(format!("{}: b = {b} is not realizable (ratio {ratio:.3e})", mode.label())));
    }
    let pivot = x.iter().fold(Complex::new(0.0, 0.0), |m, v| if v.norm() > m.norm() { *v } else { m });
    let mut terms = Vec::new();
    for (u, v) in sys.unknowns.iter().zip(&x) {
        let amp = (v / pivot).re;
        let fields = basis_fields(mode, seed, u.field.bundle);
        let parts: Vec<(f64, &Field)> = u.field.c.iter().zip(&fields).map(|(c, f)| (c * amp, f)).collect();
        let field = combo(&parts);
        let p = RadialProfile::monomial(1.0, b);
        terms.push(match u.profile {
            'f' => Term::Horizontal(p, field),
            'k' => Term::Cross(p, field),
            _ => Term::Vertical(p, field),
        });
    }
    Ok(SeparatedTensor::new(terms).canonical())
}

pub fn tensor_sup(h: &SeparatedTensor<f64>, radii: &[f64], rule: &QuadratureRule<f64>) -> Result<f64> {
    let mut m = 0.0f64;
    for &r in radii {
        for (q, _) in &rule.nodes {
            let c = q.coords();
            let mat = h.matrix_at(&c.map(|v| v * r))?;
            m = m.max(mat.iter().flatten().map(|v| v * v).sum::<f64>().sqrt());
        }
    }
    Ok(m)
}

pub fn one_form_sup(w: &SeparatedOneForm<RadialProfile<f64>, Field>, radii: &[f64], rule: &QuadratureRule<f64>) -> f64 {
    let mut m = 0.0f64;
    for &r in radii {
        for (q, _) in &rule.nodes {
            let c = q.coords();
            let mut v = [0.0; 4];
            for t in &w.terms {
                match t {
                    OneFormTerm::Tangential(p, s) => {
                        let pv = p.eval(r);
                        for (a, x) in s.eval(&c).iter().enumerate() {
                            v[a] += pv * x;
                        }
                    }
                    OneFormTerm::Radial(p, s) => v[3] += p.eval(r) * s.eval(&c)[0],
                }
            }
            m = m.max(v.iter().map(|x| x * x).sum::<f64>().sqrt());
        }
    }
    m
}

pub fn scalar_sup(s: &SeparatedScalar<RadialProfile<f64>, Field>, radii: &[f64], rule: &QuadratureRule<f64>) -> f64 {
    let mut m = 0.0f64;
    for &r in radii {
        for (q, _) in &rule.nodes {
            let c = q.coords();
            let v: f64 = s.terms.iter().map(|(p, f)| p.eval(r) * f.eval(&c)[0]).sum();
            m = m.max(v.abs());
        }
    }
    m
}

/// Residuals of P h, δh and tr h relative to sup |h| over the radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionResidual {
    pub operator: f64,
    pub divergence: f64,
    pub trace: f64,
}

impl SolutionResidual {
    pub fn max(&self) -> f64 {
        self.operator.max(self.divergence).max(self.trace)
    }
}

pub fn solution_residual(h: &SeparatedTensor<f64>, radii: &[f64]) -> Result<SolutionResidual> {
    let deg = h
        .terms
        .iter()
        .map(|t| match t {
            Term::Horizontal(_, f) | Term::Cross(_, f) | Term::Vertical(_, f) => f.degree(),
        })
        .max()
        .unwrap_or(0);
    let rule = QuadratureRule::<f64>::new(2 * deg + 4);
    let scale = tensor_sup(h, radii, &rule)?.max(1e-300);
    Ok(SolutionResidual {
        operator: tensor_sup(&linearized_operator(h), radii, &rule)? / scale,
        divergence: one_form_sup(&delta_t(h, &0.0), radii, &rule) / scale,
        trace: scalar_sup(&h.trace(), radii, &rule) / scale,
    })
}
