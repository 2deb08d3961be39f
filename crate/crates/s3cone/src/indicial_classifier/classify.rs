use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicial_classifier::modes::{BundleMode, ModeKind};
use crate::indicial_classifier::quartic::{indicial_quartic, lie_gauge_exponents, IndicialQuartic};
use crate::indicial_classifier::system::{ModeSystem, RANK_THRESHOLD};
use crate::numerics::loglog_slope;
use crate::s3_tensor_calculus::{spectrum, Bundle, Constraint};
use crate::su2_frame::QuadratureRule;

/// Genuine roots must satisfy b > −GAP_TOL or b ≤ −2 + GAP_TOL.
pub const GAP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Genuine,
    LieGauge,
    ConstraintExcluded,
}

/// Exponents of f, k, l in a realizing solution; None where the profile
/// vanishes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partners {
    pub f: Option<f64>,
    pub k: Option<f64>,
    pub l: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub branch: Branch,
    /// |P(b)| / max |c_m|
    pub quartic_residual: f64,
    /// σ_min of the scaled full system at b
    pub rank_ratio: f64,
    /// δ_t and trace rows on the kernel of the operator rows
    pub constraint_residual: f64,
    pub partners: Option<Partners>,
    /// repeated root: a log solution exists and is not constructed
    pub resonant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeClassification {
    pub mode: BundleMode,
    pub quartic: IndicialQuartic,
    pub roots: Vec<RootRecord>,
}

impl ModeClassification {
    pub fn with_branch(&self, branch: Branch) -> Vec<f64> {
        self.roots.iter().filter(|r| r.branch == branch).map(|r| r.re).collect()
    }

    pub fn gap_violations(&self) -> Vec<f64> {
        self.roots.iter().filter(|r| r.branch == Branch::Genuine && !gap_holds(r.re)).map(|r| r.re).collect()
    }

    pub fn gap_ok(&self) -> bool {
        self.gap_violations().is_empty()
    }
}

pub fn gap_holds(b: f64) -> bool {
    b > GAP_TOL || b <= -2.0 + GAP_TOL
}

fn partners(sys: &ModeSystem, b: f64, x: &[Complex<f64>]) -> Partners {
    let top = x.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let present = |p: char| {
        sys.unknowns.iter().zip(x).any(|(u, v)| u.profile == p && v.norm() > 1e-8 * top).then_some(b)
    };
    Partners { f: present('f'), k: present('k'), l: present('l') }
}

pub fn classify(mode: &BundleMode) -> Result<ModeClassification> {
    let quartic = indicial_quartic(mode);
    let sys = ModeSystem::build(*mode, 0.0)?;
    let scale = quartic.coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let rs = quartic.roots();
    let mut roots = Vec::new();
    for (b, &mult) in rs.roots.iter().zip(&rs.multiplicity) {
        let (ratio, x) = sys.rank_test(*b);
        let realizable = ratio < RANK_THRESHOLD;
        let (_, y) = sys.operator_rank_test(*b);
        let constraint_residual = if realizable { sys.constraint_residual(*b, &x) } else { sys.constraint_residual(*b, &y) };
        let lie = mode.kind == ModeKind::Function
            && b.im == 0.0
            && lie_gauge_exponents(mode.eigenvalue).iter().any(|e| (e - b.re).abs() < 1e-9 * (1.0 + e.abs()));
        let branch = match (realizable, lie) {
            (false, _) => Branch::ConstraintExcluded,
            (true, true) => Branch::LieGauge,
            (true, false) => Branch::Genuine,
        };
        roots.push(RootRecord {
            re: b.re,
            im: b.im,
            multiplicity: mult,
            branch,
            quartic_residual: quartic.eval(*b).norm() / scale,
            rank_ratio: ratio,
            constraint_residual,
            partners: realizable.then(|| partners(&sys, b.re, &x)),
            resonant: mult > 1,
        });
    }
    Ok(ModeClassification { mode: *mode, quartic, roots })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapViolation {
    pub mode: String,
    pub root: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayGapReport {
    pub max_j: usize,
    pub tt_degree_cap: usize,
    pub tt_eigenvalues: Vec<f64>,
    pub modes: Vec<ModeClassification>,
    pub violations: Vec<GapViolation>,
    pub gap_ok: bool,
    /// Divergence-free 1-form modes at the rough eigenvalues (k+1)² − 2;
    /// reported, not part of the verdict.
    pub coexact_informational: Vec<ModeClassification>,
    pub largest_decaying_one_form_root: Option<f64>,
}

/// Function and 1-form modes j ≤ max_j, and TT modes at every distinct
/// eigenvalue of the computed spectrum up to the degree cap.
pub fn decay_gap_report(max_j: usize, tt_degree_cap: usize) -> Result<DecayGapReport> {
    let rule = QuadratureRule::<f64>::new(2 * tt_degree_cap + 2);
    let tt = spectrum(Bundle::SymTwoTensor, Constraint::TraceFreeDivergenceFree, tt_degree_cap, &rule)?;
    let tt_eigenvalues: Vec<f64> = tt.pairs.iter().map(|p| p.0).collect();
    let mut modes = Vec::new();
    for j in 0..=max_j {
        modes.push(classify(&BundleMode::function(j))?);
    }
    for j in 0..=max_j {
        modes.push(classify(&BundleMode::one_form(j))?);
    }
    for &l in &tt_eigenvalues {
        modes.push(classify(&BundleMode::tt(l.max(0.0))?)?);
    }
    let violations: Vec<GapViolation> = modes
        .iter()
        .flat_map(|m| m.gap_violations().into_iter().map(|b| GapViolation { mode: m.mode.label(), root: b }))
        .collect();
    let coexact_informational =
        (1..=max_j + 1).map(|k| classify(&BundleMode::one_form_eigenvalue(((k + 1) * (k + 1)) as f64 - 2.0)?)).collect::<Result<Vec<_>>>()?;
    let largest_decaying_one_form_root = modes
        .iter()
        .filter(|m| m.mode.kind == ModeKind::OneForm)
        .flat_map(|m| m.with_branch(Branch::Genuine))
        .filter(|b| *b < 0.0)
        .fold(None, |acc: Option<f64>, b| Some(acc.map_or(b, |a| a.max(b))));
    Ok(DecayGapReport {
        max_j,
        tt_degree_cap,
        tt_eigenvalues,
        gap_ok: violations.is_empty(),
        violations,
        modes,
        coexact_informational,
        largest_decaying_one_form_root,
    })
}

/// Roots where the full system at t drops rank: the candidates are the
/// roots of one nonzero maximal minor, each confirmed by the rank test.
pub fn realizable_roots(mode: &BundleMode, t: f64) -> Result<Vec<(Complex<f64>, usize)>> {
    let sys = ModeSystem::build(*mode, t)?;
    let cand = sys.candidate_polynomial()?.roots();
    let mut out: Vec<(Complex<f64>, usize)> = cand
        .roots
        .iter()
        .zip(&cand.multiplicity)
        .filter(|(b, _)| b.norm() < 1e3 && sys.rank_test(**b).0 < RANK_THRESHOLD)
        .map(|(b, m)| (*b, *m))
        .collect();
    out.sort_by(|a, b| b.0.re.partial_cmp(&a.0.re).unwrap().then(b.0.im.partial_cmp(&a.0.im).unwrap()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackPoint {
    pub t: f64,
    /// (re, im) of each realizable root, matched to `base` by index
    pub roots: Vec<(f64, f64)>,
    pub drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbedRoots {
    pub mode: BundleMode,
    pub base: Vec<(f64, f64)>,
    pub track: Vec<TrackPoint>,
    /// lost, gained or merged roots somewhere along the track
    pub collision: bool,
    /// min |b| over all t ≠ 0
    pub min_abs_root: f64,
    /// fitted exponent of max drift against |t|; None when nothing moves
    pub drift_slope: Option<f64>,
}

pub fn perturbed_roots(mode: &BundleMode, ts: &[f64]) -> Result<PerturbedRoots> {
    for t in ts {
        crate::bach_operator::GaugeParameter::new(*t)?;
    }
    let expand = |v: Vec<(Complex<f64>, usize)>| -> Vec<Complex<f64>> {
        v.into_iter().flat_map(|(b, m)| std::iter::repeat(b).take(m)).collect()
    };
    let base = expand(realizable_roots(mode, 0.0)?);
    let mut track = Vec::new();
    let mut collision = false;
    let mut min_abs_root = f64::INFINITY;
    let (mut abs_t, mut drifts) = (Vec::new(), Vec::new());
    for &t in ts {
        let now = expand(realizable_roots(mode, t)?);
        if now.len() != base.len() {
            collision = true;
        }
        let mut used = vec![false; now.len()];
        let mut matched = Vec::new();
        let mut drift = 0.0f64;
        for b0 in &base {
            let best = (0..now.len()).filter(|&i| !used[i]).min_by(|&i, &j| (now[i] - b0).norm().partial_cmp(&(now[j] - b0).norm()).unwrap());
            match best {
                Some(i) => {
                    used[i] = true;
                    drift = drift.max((now[i] - b0).norm());
                    matched.push((now[i].re, now[i].im));
                }
                None => collision = true,
            }
        }
        if t != 0.0 {
            min_abs_root = now.iter().fold(min_abs_root, |m, b| m.min(b.norm()));
            if drift > 1e-13 {
                abs_t.push(t.abs());
                drifts.push(drift);
            }
        }
        track.push(TrackPoint { t, roots: matched, drift });
    }
    let distinct_t = {
        let mut v = abs_t.clone();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        v.len()
    };
    let drift_slope = if distinct_t >= 2 { loglog_slope(&abs_t, &drifts) } else { None };
    if base.is_empty() {
        return Err(Error::Invalid(format!("{} has no realizable root at t = 0", mode.label())));
    }
    Ok(PerturbedRoots {
        mode: *mode,
        base: base.iter().map(|b| (b.re, b.im)).collect(),
        track,
        collision,
        min_abs_root,
        drift_slope,
    })
}

/// β = min |β_i| over the perturbed exponents of the given modes at t.
pub fn beta(modes: &[BundleMode], t: f64) -> Result<f64> {
    let mut m = f64::INFINITY;
    for mode in modes {
        for (b, _) in realizable_roots(mode, t)? {
            m = m.min(b.norm());
        }
    }
    Ok(m)
}
