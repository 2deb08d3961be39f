//! Separated tensors f(r)B + k(r)τ⊠dr + l(r)φ dr⊗dr on the flat cone
//! dr² + r²ḡ and the closed-form action of the flat operators on them.
//!
//! Link fields are written in the r-parallel unit coframe: B stands for
//! Σ B_kl (r e_k)⊗(r e_l), so |f B| = |f| |B|_ḡ pointwise.  Conventions:
//! ∇*∇ ≥ 0, Δ = -∇*∇, δ = +div, L = ∇̄*∇̄, ∇̄^sym τ = ∇̄τ + (∇̄τ)ᵀ,
//! ω⊠η = ω⊗η + η⊗ω.

use crate::cone_calculus::link::Link;
use crate::cone_calculus::radial::Radial;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Term<R, F> {
    /// f(r) B
    Horizontal(R, F),
    /// k(r) τ⊠dr
    Cross(R, F),
    /// l(r) φ dr⊗dr
    Vertical(R, F),
}

#[derive(Clone, Debug, PartialEq)]
pub enum OneFormTerm<R, F> {
    /// p(r) σ
    Tangential(R, F),
    /// q(r) ψ dr
    Radial(R, F),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Separated<R, F> {
    pub terms: Vec<Term<R, F>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparatedOneForm<R, F> {
    pub terms: Vec<OneFormTerm<R, F>>,
}

/// Σ s(r) ψ
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatedScalar<R, F> {
    pub terms: Vec<(R, F)>,
}

/// Σ_i c_i r^{k_i} ∂^{n_i} applied to a profile.
fn rop<R: Radial>(f: &R, parts: &[(i64, i32, usize)]) -> R {
    let mut out: Option<R> = None;
    for &(c, k, n) in parts {
        if c == 0 {
            continue;
        }
        let p = f.nth_deriv(n).shift(k).times_int(c);
        out = Some(match out {
            Some(o) => o.plus(&p),
            None => p,
        });
    }
    out.unwrap_or_else(|| f.times_int(0))
}

fn half<F: Link>(x: &F) -> F {
    x.times(&(F::S::int(1) / F::S::int(2)))
}

impl<R, F> Separated<R, F>
where
    R: Radial<S = F::S>,
    F: Link,
{
    pub fn new(terms: Vec<Term<R, F>>) -> Self {
        Self { terms }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn horizontal(f: R, b: F) -> Self {
        Self::new(vec![Term::Horizontal(f, b)])
    }

    pub fn cross(k: R, tau: F) -> Self {
        Self::new(vec![Term::Cross(k, tau)])
    }

    pub fn vertical(l: R, phi: F) -> Self {
        Self::new(vec![Term::Vertical(l, phi)])
    }

    pub fn plus(&self, o: &Self) -> Self {
        Self::new(self.terms.iter().chain(&o.terms).cloned().collect())
    }

    pub fn times(&self, c: &F::S) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| match t {
                    Term::Horizontal(f, b) => Term::Horizontal(f.times(c), b.clone()),
                    Term::Cross(k, x) => Term::Cross(k.times(c), x.clone()),
                    Term::Vertical(l, p) => Term::Vertical(l.times(c), p.clone()),
                })
                .collect(),
        )
    }

    pub fn times_int(&self, c: i64) -> Self {
        self.times(&F::S::int(c))
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.times_int(-1))
    }

    fn push(&mut self, t: Term<R, F>) {
        let keep = match &t {
            Term::Horizontal(a, b) | Term::Cross(a, b) | Term::Vertical(a, b) => !a.vanishes() && !b.vanishes(),
        };
        if keep {
            self.terms.push(t);
        }
    }

    /// Rough Laplacian ∇*∇.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero();
        for t in &self.terms {
            match t {
                Term::Horizontal(f, b) => {
                    out.push(Term::Horizontal(rop(f, &[(-1, 0, 2), (-3, -1, 1)]), b.clone()));
                    out.push(Term::Horizontal(f.shift(-2), b.lap_poly(&[2, 1])));
                    out.push(Term::Cross(f.shift(-2).times_int(2), b.div()));
                    out.push(Term::Vertical(f.shift(-2).times_int(-2), b.tr()));
                }
                Term::Cross(k, tau) => {
                    out.push(Term::Horizontal(k.shift(-2).times_int(-2), tau.nsym()));
                    out.push(Term::Cross(rop(k, &[(-1, 0, 2), (-3, -1, 1)]), tau.clone()));
                    out.push(Term::Cross(k.shift(-2), tau.lap_poly(&[6, 1])));
                    out.push(Term::Vertical(k.shift(-2).times_int(4), tau.div()));
                }
                Term::Vertical(l, phi) => {
                    out.push(Term::Horizontal(l.shift(-2).times_int(-2), phi.gmul()));
                    out.push(Term::Cross(l.shift(-2).times_int(-2), phi.d()));
                    out.push(Term::Vertical(rop(l, &[(-1, 0, 2), (-3, -1, 1)]), phi.clone()));
                    out.push(Term::Vertical(l.shift(-2), phi.lap_poly(&[6, 1])));
                }
            }
        }
        out
    }

    /// (∇*∇)² in closed form.
    pub fn bilaplacian(&self) -> Self {
        self.bilaplacian_with(6, false)
    }

    /// The closed form with the cross-term horizontal part written as
    /// 4(r⁻²k'' + r⁻³k' − r⁻⁴k(L+5))∇̄^sym τ − 8r⁻⁴k δ̄τ ḡ.  This variant is
    /// not the square of the Laplacian; it is kept to quantify the defect.
    pub fn bilaplacian_cross_variant(&self) -> Self {
        self.bilaplacian_with(5, true)
    }

    fn bilaplacian_with(&self, cross_shift: i64, cross_trace_term: bool) -> Self {
        let mut out = Self::zero();
        for t in &self.terms {
            match t {
                Term::Horizontal(f, b) => {
                    let lb = b.lap();
                    out.push(Term::Horizontal(rop(f, &[(1, 0, 4), (6, -1, 3)]), b.clone()));
                    out.push(Term::Horizontal(rop(f, &[(-1, -2, 2)]), b.plus(&lb.times_int(2))));
                    out.push(Term::Horizontal(rop(f, &[(-1, -3, 1)]), lb.times_int(2).plus(&b.times_int(7))));
                    out.push(Term::Horizontal(f.shift(-4), b.lap_poly(&[4, 4, 1])));
                    out.push(Term::Horizontal(f.shift(-4).times_int(-4), b.div().nsym()));
                    out.push(Term::Horizontal(f.shift(-4).times_int(4), b.tr().gmul()));
                    let db = b.div();
                    out.push(Term::Cross(rop(f, &[(-4, -2, 2), (-4, -3, 1)]), db.clone()));
                    out.push(Term::Cross(f.shift(-4).times_int(4), db.lap_poly(&[2, 1])));
                    out.push(Term::Cross(f.shift(-4).times_int(8), b.tr().d()));
                    let tb = b.tr();
                    out.push(Term::Vertical(rop(f, &[(4, -2, 2), (4, -3, 1)]), tb.clone()));
                    out.push(Term::Vertical(f.shift(-4).times_int(-4), tb.lap_poly(&[4, 1])));
                    out.push(Term::Vertical(f.shift(-4).times_int(8), db.div()));
                }
                Term::Cross(k, tau) => {
                    let ns = tau.nsym();
                    out.push(Term::Horizontal(rop(k, &[(4, -2, 2), (4, -3, 1)]), ns.clone()));
                    out.push(Term::Horizontal(k.shift(-4).times_int(-4), ns.lap_poly(&[cross_shift, 1])));
                    if cross_trace_term {
                        out.push(Term::Horizontal(k.shift(-4).times_int(-8), tau.div().gmul()));
                    }
                    let lt = tau.lap();
                    out.push(Term::Cross(rop(k, &[(1, 0, 4), (6, -1, 3)]), tau.clone()));
                    out.push(Term::Cross(rop(k, &[(-1, -2, 2)]), lt.times_int(2).plus(&tau.times_int(9))));
                    out.push(Term::Cross(rop(k, &[(-1, -3, 1)]), lt.times_int(2).plus(&tau.times_int(15))));
                    out.push(Term::Cross(k.shift(-4), tau.lap_poly(&[28, 16, 1])));
                    out.push(Term::Cross(k.shift(-4).times_int(-12), tau.div().d()));
                    let dt = tau.div();
                    out.push(Term::Vertical(rop(k, &[(-8, -2, 2), (-8, -3, 1)]), dt.clone()));
                    out.push(Term::Vertical(k.shift(-4).times_int(8), dt.lap_poly(&[6, 1])));
                }
                Term::Vertical(l, phi) => {
                    let pg = phi.gmul();
                    out.push(Term::Horizontal(rop(l, &[(4, -2, 2), (4, -3, 1)]), pg.clone()));
                    out.push(Term::Horizontal(l.shift(-4).times_int(-4), pg.lap_poly(&[4, 1])));
                    out.push(Term::Horizontal(l.shift(-4).times_int(4), phi.d().nsym()));
                    let dp = phi.d();
                    out.push(Term::Cross(rop(l, &[(4, -2, 2), (4, -3, 1)]), dp.clone()));
                    out.push(Term::Cross(l.shift(-4).times_int(-4), dp.lap_poly(&[8, 1])));
                    let lp = phi.lap();
                    out.push(Term::Vertical(rop(l, &[(1, 0, 4), (6, -1, 3)]), phi.clone()));
                    out.push(Term::Vertical(rop(l, &[(-1, -2, 2)]), lp.times_int(2).plus(&phi.times_int(9))));
                    out.push(Term::Vertical(rop(l, &[(-1, -3, 1)]), lp.times_int(2).plus(&phi.times_int(15))));
                    out.push(Term::Vertical(l.shift(-4), phi.lap_poly(&[48, 20, 1])));
                }
            }
        }
        out
    }

    /// Flat Laplacian Δ = -∇*∇ (the sign used by the linearized operator).
    pub fn delta_laplacian(&self) -> Self {
        self.laplacian().times_int(-1)
    }

    pub fn divergence(&self) -> SeparatedOneForm<R, F> {
        let mut out = SeparatedOneForm::zero();
        for t in &self.terms {
            match t {
                Term::Horizontal(f, b) => {
                    out.push(OneFormTerm::Tangential(f.shift(-1), b.div()));
                    out.push(OneFormTerm::Radial(f.shift(-1).times_int(-1), b.tr()));
                }
                Term::Cross(k, tau) => {
                    out.push(OneFormTerm::Tangential(rop(k, &[(1, 0, 1), (4, -1, 0)]), tau.clone()));
                    out.push(OneFormTerm::Radial(k.shift(-1), tau.div()));
                }
                Term::Vertical(l, phi) => {
                    out.push(OneFormTerm::Radial(rop(l, &[(1, 0, 1), (3, -1, 0)]), phi.clone()));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> SeparatedScalar<R, F> {
        let mut out = SeparatedScalar::zero();
        for t in &self.terms {
            match t {
                Term::Horizontal(f, b) => out.push(f.clone(), b.tr()),
                Term::Vertical(l, phi) => out.push(l.clone(), phi.clone()),
                Term::Cross(..) => {}
            }
        }
        out
    }

    /// Interior product with r⁻¹∂/∂r.
    pub fn radial_contraction(&self) -> SeparatedOneForm<R, F> {
        let mut out = SeparatedOneForm::zero();
        for t in &self.terms {
            match t {
                Term::Cross(k, tau) => out.push(OneFormTerm::Tangential(k.shift(-1), tau.clone())),
                Term::Vertical(l, phi) => out.push(OneFormTerm::Radial(l.shift(-1), phi.clone())),
                Term::Horizontal(..) => {}
            }
        }
        out
    }
}

impl<R, F> SeparatedOneForm<R, F>
where
    R: Radial<S = F::S>,
    F: Link,
{
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn plus(&self, o: &Self) -> Self {
        Self { terms: self.terms.iter().chain(&o.terms).cloned().collect() }
    }

    pub fn times_int(&self, c: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                OneFormTerm::Tangential(p, s) => OneFormTerm::Tangential(p.times_int(c), s.clone()),
                OneFormTerm::Radial(q, s) => OneFormTerm::Radial(q.times_int(c), s.clone()),
            })
            .collect();
        Self { terms }
    }

    fn push(&mut self, t: OneFormTerm<R, F>) {
        let keep = match &t {
            OneFormTerm::Tangential(a, b) | OneFormTerm::Radial(a, b) => !a.vanishes() && !b.vanishes(),
        };
        if keep {
            self.terms.push(t);
        }
    }

    pub fn divergence(&self) -> SeparatedScalar<R, F> {
        let mut out = SeparatedScalar::zero();
        for t in &self.terms {
            match t {
                OneFormTerm::Tangential(p, s) => out.push(p.shift(-1), s.div()),
                OneFormTerm::Radial(q, psi) => out.push(rop(q, &[(1, 0, 1), (3, -1, 0)]), psi.clone()),
            }
        }
        out
    }

    /// L_X g₀ for the dual vector field X.
    pub fn lie_metric(&self) -> Separated<R, F> {
        let mut out = Separated::zero();
        for t in &self.terms {
            match t {
                OneFormTerm::Tangential(p, s) => {
                    out.push(Term::Cross(rop(p, &[(1, 0, 1), (-1, -1, 0)]), s.clone()));
                    out.push(Term::Horizontal(p.shift(-1), s.nsym()));
                }
                OneFormTerm::Radial(q, psi) => {
                    out.push(Term::Vertical(q.deriv().times_int(2), psi.clone()));
                    out.push(Term::Cross(q.shift(-1), psi.d()));
                    out.push(Term::Horizontal(q.shift(-1).times_int(2), psi.gmul()));
                }
            }
        }
        out
    }

    /// δ* = ½ L_X g₀.
    pub fn sym_derivative(&self) -> Separated<R, F> {
        let l = self.lie_metric();
        Separated::new(
            l.terms
                .into_iter()
                .map(|t| match t {
                    Term::Horizontal(a, b) => Term::Horizontal(a, half(&b)),
                    Term::Cross(a, b) => Term::Cross(a, half(&b)),
                    Term::Vertical(a, b) => Term::Vertical(a, half(&b)),
                })
                .collect(),
        )
    }
}

impl<R, F> SeparatedScalar<R, F>
where
    R: Radial<S = F::S>,
    F: Link,
{
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn single(s: R, psi: F) -> Self {
        let mut out = Self::zero();
        out.push(s, psi);
        out
    }

    fn push(&mut self, s: R, psi: F) {
        if !s.vanishes() && !psi.vanishes() {
            self.terms.push((s, psi));
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        Self { terms: self.terms.iter().chain(&o.terms).cloned().collect() }
    }

    pub fn times_int(&self, c: i64) -> Self {
        Self { terms: self.terms.iter().map(|(s, p)| (s.times_int(c), p.clone())).collect() }
    }

    /// Flat Laplacian Δ = Σ ∂²_i.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero();
        for (s, psi) in &self.terms {
            out.push(rop(s, &[(1, 0, 2), (3, -1, 1)]), psi.clone());
            out.push(s.shift(-2).times_int(-1), psi.lap());
        }
        out
    }

    pub fn gradient(&self) -> SeparatedOneForm<R, F> {
        let mut out = SeparatedOneForm::zero();
        for (s, psi) in &self.terms {
            out.push(OneFormTerm::Radial(s.deriv(), psi.clone()));
            out.push(OneFormTerm::Tangential(s.shift(-1), psi.d()));
        }
        out
    }

    /// Flat Hessian ∇².
    pub fn hessian(&self) -> Separated<R, F> {
        let mut out = Separated::zero();
        for (s, psi) in &self.terms {
            let dpsi = psi.d();
            out.push(Term::Vertical(s.nth_deriv(2), psi.clone()));
            out.push(Term::Cross(rop(s, &[(1, -1, 1), (-1, -2, 0)]), dpsi.clone()));
            out.push(Term::Horizontal(s.deriv().shift(-1), psi.gmul()));
            out.push(Term::Horizontal(s.shift(-2), half(&dpsi.nsym())));
        }
        out
    }

    /// u ↦ u g₀.
    pub fn times_metric(&self) -> Separated<R, F> {
        let mut out = Separated::zero();
        for (s, psi) in &self.terms {
            out.push(Term::Vertical(s.clone(), psi.clone()));
            out.push(Term::Horizontal(s.clone(), psi.gmul()));
        }
        out
    }
}
