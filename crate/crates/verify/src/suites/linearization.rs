use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use s3cone::bach_operator::{bach_at, fd_jet_at, linearized_from_jet, linearized_operator, remainder_slopes, JetConfig};
use s3cone::cone_calculus::{frobenius, OneFormTerm, RadialProfile, SeparatedOneForm, SYM4};
use s3cone::s3_tensor_calculus::Bundle;
use s3cone::su2_frame::Polynomial;
use s3cone::{SeparatedTensor, TensorField};

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{cell, Check, SuiteReport, Table};

pub fn flat_metric(_: &[f64; 4]) -> s3cone::Result<[f64; 10]> {
    Ok(SYM4.map(|(i, j)| if i == j { 1.0 } else { 0.0 }))
}

/// Uniform directions, radii in [1.2, 1.9].
fn sample_points(n: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(0.2..=1.0).contains(&norm) {
            continue;
        }
        let radius = rng.gen_range(1.2..1.9);
        out.push(v.map(|x| x * radius / norm));
    }
    out
}

fn p(a: usize) -> Polynomial<f64> {
    Polynomial::coordinate(a)
}

fn c(v: f64) -> Polynomial<f64> {
    Polynomial::constant(v)
}

fn r(b: f64) -> RadialProfile<f64> {
    RadialProfile::monomial(1.0, b)
}

fn directions() -> Vec<(&'static str, SeparatedTensor)> {
    let z = Polynomial::zero;
    let tt = TensorField::from_components(Bundle::SymTwoTensor, vec![c(1.0), c(-1.0), z(), c(0.5), z(), z()]).unwrap();
    let sym = TensorField::from_components(Bundle::SymTwoTensor, vec![p(0), p(1), c(0.5), p(2), z(), p(3)]).unwrap();
    vec![
        ("tt r^-1", SeparatedTensor::horizontal(r(-1.0), tt.clone())),
        ("horizontal r^2", SeparatedTensor::horizontal(r(2.0), sym)),
        ("cross r^-1", SeparatedTensor::cross(r(-1.0), TensorField::one_form([c(1.0), p(0), z()]))),
        ("vertical r x0", SeparatedTensor::vertical(r(1.0), TensorField::scalar(p(0)))),
        (
            "mixed",
            SeparatedTensor::horizontal(r(1.0), tt)
                .plus(&SeparatedTensor::cross(r(0.0), TensorField::one_form([p(2), z(), p(1)])))
                .plus(&SeparatedTensor::vertical(r(-1.0), TensorField::scalar(&p(1) * &p(3)))),
        ),
    ]
}

fn lie_directions() -> Vec<(&'static str, SeparatedTensor)> {
    let z = Polynomial::zero;
    let w = |terms| SeparatedOneForm { terms }.lie_metric();
    vec![
        ("radial r^3 x0", w(vec![OneFormTerm::Radial(r(3.0), TensorField::scalar(p(0)))])),
        ("tangential r^-1", w(vec![OneFormTerm::Tangential(r(-1.0), TensorField::one_form([p(1), p(0), &p(2) + &p(3)]))])),
        (
            "mixed r^3",
            w(vec![
                OneFormTerm::Tangential(r(3.0), TensorField::scalar(&p(1) * &p(2)).exterior_d().unwrap()),
                OneFormTerm::Radial(r(1.0), TensorField::scalar(c(1.0))),
                OneFormTerm::Tangential(r(0.0), TensorField::one_form([c(1.0), z(), z()])),
            ]),
        ),
    ]
}

/// Flat Bach tensor, O(ε²) remainders of the Bach tensor and scalar
/// curvature, and the gauge kernel of the linearized operator.
pub fn linearization(config: &RunConfig) -> Result<SuiteReport> {
    let cfg = JetConfig { spacing: config.jet_spacing, order: config.jet_order };
    let pts = sample_points(config.sample_points, config.seed);
    let mut checks = Vec::new();

    let mut flat = 0.0f64;
    for x in &pts {
        let b = bach_at(flat_metric, x, cfg)?;
        flat = flat.max(frobenius(&b.divergence_form)).max(frobenius(&b.schouten_form));
    }
    checks.push(Check::below("flat-bach", flat, config.tol_flat));

    let mut table = Table::new("linearization", &["direction", "eps", "bach_residual", "scalar_residual"]);
    let mut remainders = Vec::new();
    for (label, h) in directions() {
        // unit size at the sample points, so ε is the relative perturbation
        let size = pts.iter().try_fold(0.0f64, |m, x| h.packed_at(x).map(|v| m.max(frobenius(&v))))?;
        let h = h.times(&(1.0 / size));
        let rep = remainder_slopes(label, &h, &config.eps, &pts, cfg)?;
        let slope_check = |kind: &str, s: Option<f64>| {
            let v = s.unwrap_or(f64::NAN);
            let mut ch = Check::failing(
                format!("{kind}-remainder {label}"),
                v >= config.min_remainder_slope,
                format!("slope {v:.4} >= {}", config.min_remainder_slope),
            );
            ch.value = Some(v);
            ch.threshold = Some(config.min_remainder_slope);
            ch
        };
        checks.push(slope_check("bach", rep.bach_slope));
        checks.push(slope_check("scalar", rep.scalar_slope));
        checks.push(
            Check::info(format!("formula-agreement {label}"), true, format!("lattice vs closed-form P: {:e}", rep.formula_discrepancy))
                .with_value(rep.formula_discrepancy),
        );
        for (i, e) in rep.eps.iter().enumerate() {
            table.push(vec![label.into(), cell(*e), cell(rep.bach_residuals[i]), cell(rep.scalar_residuals[i])]);
        }
        remainders.push(rep);
    }

    let mut lie = Vec::new();
    for (label, h) in lie_directions() {
        let size = h.max_abs_coefficient();
        let formula = linearized_operator(&h).max_abs_coefficient() / size.max(1e-300);
        checks.push(Check::below(format!("lie-formula {label}"), formula, config.tol_lie));
        // the lattice value is truncation error only: it must fall like s^order
        let at = |s: f64| -> s3cone::Result<f64> {
            pts.iter().try_fold(0.0f64, |m, x| {
                Ok(m.max(frobenius(&linearized_from_jet(&fd_jet_at(|y| h.packed_at(y), x, s, cfg.order, 4)?))))
            })
        };
        let (coarse, fine) = (at(2.0 * cfg.spacing)?, at(cfg.spacing)?);
        let ratio = coarse / fine.max(1e-300);
        let need = 0.75 * 2f64.powi(cfg.order as i32);
        let sup = pts.iter().try_fold(0.0f64, |m, x| h.packed_at(x).map(|v| m.max(frobenius(&v))))?;
        let floor = 1e3 * f64::EPSILON * (1.0 + sup) * cfg.spacing.powi(-4);
        let mut ch = Check::failing(
            format!("lie-lattice {label}"),
            ratio > need || fine < floor,
            format!(
                "|P h| on the lattice: {coarse:e} at s = {}, {fine:e} at s = {}; ratio {ratio:.2} > {need} or below rounding {floor:e}",
                2.0 * cfg.spacing,
                cfg.spacing
            ),
        );
        ch.value = Some(ratio);
        ch.threshold = Some(need);
        checks.push(ch);
        lie.push(json!({"direction": label, "size": size, "rounding_floor": floor, "formula_relative": formula, "lattice_coarse": coarse, "lattice_fine": fine}));
    }
    let payload = json!({
        "points": pts,
        "jet": cfg,
        "flat_bach": flat,
        "remainders": remainders,
        "lie_directions": lie,
    });
    Ok(SuiteReport::new("linearization", checks, payload, vec![table]))
}
