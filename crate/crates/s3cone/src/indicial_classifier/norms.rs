//! Annulus norms ⟨⟨h,h⟩⟩(r) = ∫_{S³} |h(r,·)|² and
//! |||h|||_{a,b} = ∫_a^b ⟨⟨h,h⟩⟩ r⁻¹ dr, the dilation w = a⁻²ψ_a*h and the
//! three-annulus growth/decay flags.

use serde::Serialize;

use crate::cone_calculus::{SeparatedTensor, Term};
use crate::error::{Error, Result};
use crate::su2_frame::{gauss_legendre, QuadratureRule};

/// Gauss-Legendre nodes in ln r per annulus.
pub const RADIAL_NODES: usize = 48;

pub fn sphere_norm_sq(h: &SeparatedTensor<f64>, r: f64, rule: &QuadratureRule<f64>) -> Result<f64> {
    let mut acc = 0.0;
    for (q, w) in &rule.nodes {
        let m = h.matrix_at(&q.coords().map(|v| v * r))?;
        acc += w * m.iter().flatten().map(|v| v * v).sum::<f64>();
    }
    Ok(acc)
}

pub fn annulus_norm(h: &SeparatedTensor<f64>, a: f64, b: f64, rule: &QuadratureRule<f64>) -> Result<f64> {
    let (la, span) = (a.ln(), b.ln() - a.ln());
    let mut acc = 0.0;
    for (x, w) in gauss_legendre::<f64>(RADIAL_NODES) {
        acc += w * span * sphere_norm_sq(h, (la + span * x).exp(), rule)?;
    }
    Ok(acc)
}

/// a⁻²ψ_a*h: every radial profile composed with r ↦ ar.
pub fn dilate(h: &SeparatedTensor<f64>, a: f64) -> SeparatedTensor<f64> {
    SeparatedTensor::new(
        h.terms
            .iter()
            .map(|t| match t {
                Term::Horizontal(p, f) => Term::Horizontal(p.dilated(a), f.clone()),
                Term::Cross(p, f) => Term::Cross(p.dilated(a), f.clone()),
                Term::Vertical(p, f) => Term::Vertical(p.dilated(a), f.clone()),
            })
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeNorms {
    pub a: f64,
    pub l: f64,
    pub beta_prime: f64,
    /// |||h||| on (a,La), (La,L²a), (L²a,L³a)
    pub annuli: [f64; 3],
    /// |||w|||_{1,L}
    pub dilated: f64,
    pub scaling_rel_error: f64,
    pub growth_hypothesis: bool,
    pub growth_conclusion: bool,
    pub decay_hypothesis: bool,
    pub decay_conclusion: bool,
}

impl ModeNorms {
    /// Both three-annulus implications hold.
    pub fn three_annulus_holds(&self) -> bool {
        (!self.growth_hypothesis || self.growth_conclusion) && (!self.decay_hypothesis || self.decay_conclusion)
    }
}

pub fn mode_norms(h: &SeparatedTensor<f64>, a: f64, l: f64, beta_prime: f64) -> Result<ModeNorms> {
    if !(a > 0.0 && a.is_finite()) || !(l > 1.0 && l.is_finite()) {
        return Err(Error::Invalid(format!("need a > 0 and L > 1 (a = {a}, L = {l})")));
    }
    if !(beta_prime > 0.0) {
        return Err(Error::Invalid(format!("beta' = {beta_prime} must be positive")));
    }
    let deg = h
        .terms
        .iter()
        .map(|t| match t {
            Term::Horizontal(_, f) | Term::Cross(_, f) | Term::Vertical(_, f) => f.degree(),
        })
        .max()
        .unwrap_or(0);
    let rule = QuadratureRule::<f64>::new(2 * deg + 2);
    let n = |x: f64, y: f64| annulus_norm(h, x, y, &rule);
    let annuli = [n(a, l * a)?, n(l * a, l * l * a)?, n(l * l * a, l * l * l * a)?];
    let dilated = annulus_norm(&dilate(h, a), 1.0, l, &rule)?;
    let lb = l.powf(beta_prime);
    Ok(ModeNorms {
        a,
        l,
        beta_prime,
        annuli,
        dilated,
        scaling_rel_error: (annuli[0] - dilated).abs() / annuli[0].abs().max(1e-300),
        growth_hypothesis: annuli[1] >= lb * annuli[0],
        growth_conclusion: annuli[2] >= lb * annuli[1],
        decay_hypothesis: annuli[2] <= annuli[1] / lb,
        decay_conclusion: annuli[1] <= annuli[0] / lb,
    })
}
