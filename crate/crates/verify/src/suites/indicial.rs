use serde_json::json;

use s3cone::indicial_classifier::{
    classify, closed_form_roots, decay_gap_report, perturbed_roots, Branch, BundleMode, IndicialQuartic, ModeClassification,
    ModeKind,
};

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{cell, Check, SuiteReport, Table};

/// Quartic roots expanded by multiplicity, real parts descending.
fn expanded(q: &IndicialQuartic) -> Vec<f64> {
    let rs = q.roots();
    let mut v: Vec<f64> =
        rs.roots.iter().zip(&rs.multiplicity).flat_map(|(b, m)| std::iter::repeat(b.re).take(*m)).collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Genuine => "genuine",
        Branch::LieGauge => "lie-gauge",
        Branch::ConstraintExcluded => "constraint-excluded",
    }
}

fn root_rows(table: &mut Table, c: &ModeClassification) {
    for r in &c.roots {
        table.push(vec![
            c.mode.label(),
            cell(c.mode.eigenvalue),
            cell(r.re),
            cell(r.im),
            r.multiplicity.to_string(),
            branch_name(r.branch).into(),
            cell(r.quartic_residual),
            cell(r.rank_ratio),
            cell(r.constraint_residual),
            r.resonant.to_string(),
        ]);
    }
}

/// Closed-form indicial roots, the decay gap over the mode sweep, and
/// continuity of the realizable roots in the gauge parameter.
pub fn indicial(config: &RunConfig) -> Result<SuiteReport> {
    let tol = config.tol_root;
    let mut checks = Vec::new();

    let s5 = 5f64.sqrt();
    let named = [
        ("tt-6", BundleMode::tt(6.0)?, Some(vec![4.0, 2.0, -2.0, -4.0])),
        ("function-0", BundleMode::function(0), Some(vec![0.0, -2.0, -2.0, -4.0])),
        ("one-form-3", BundleMode::one_form(0), None),
    ];
    let mut named_payload = Vec::new();
    for (label, mode, exact) in &named {
        let c = classify(mode)?;
        let roots = expanded(&c.quartic);
        let closed = closed_form_roots(mode).to_vec();
        checks.push(Check::below(format!("closed-form {label}"), max_gap(&roots, &closed), tol));
        let resid = c.roots.iter().map(|r| r.quartic_residual).fold(0.0, f64::max);
        checks.push(Check::below(format!("quartic-residual {label}"), resid, tol));
        if let Some(e) = exact {
            checks.push(Check::below(format!("exact-roots {label}"), max_gap(&roots, e), tol));
        }
        named_payload.push(json!({"label": label, "roots": roots, "closed_form": closed, "classification": c}));
        match *label {
            "function-0" => {
                let zero = c.roots.iter().find(|r| r.re.abs() < 1e-9 && r.im.abs() < 1e-9);
                let excluded = zero.map(|r| r.branch == Branch::ConstraintExcluded).unwrap_or(false);
                checks.push(Check::failing("function-0 excludes b = 0", excluded, format!("{:?}", zero.map(|r| r.branch))));
            }
            "one-form-3" => {
                let want = [-2.0 + s5, -2.0 - s5];
                let err = want.iter().map(|w| roots.iter().map(|x| (x - w).abs()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
                checks.push(Check::below("one-form-3 has -2 +- sqrt 5", err, tol));
            }
            _ => {}
        }
    }

    let gap = decay_gap_report(config.max_j, config.tt_degree)?;
    let mut gc = Check::failing(
        "decay-gap",
        gap.gap_ok,
        format!("{} modes, violations {:?}", gap.modes.len(), gap.violations.iter().map(|v| (&v.mode, v.root)).collect::<Vec<_>>()),
    );
    gc.value = Some(gap.violations.len() as f64);
    checks.push(gc);
    let coexact_ok = gap.coexact_informational.iter().all(|m| m.gap_ok());
    checks.push(Check::info("decay-gap-coexact-one-forms", coexact_ok, "divergence-free 1-forms at (k+1)^2 - 2"));
    if let Some(b) = gap.largest_decaying_one_form_root {
        checks.push(Check::info("largest-decaying-one-form-root", b <= -2.0, format!("{b}")).with_value(b));
    }
    let mut roots_table =
        Table::new("indicial_roots", &["mode", "eigenvalue", "re", "im", "multiplicity", "branch", "quartic_residual", "rank_ratio", "constraint_residual", "resonant"]);
    for m in gap.modes.iter().chain(&gap.coexact_informational) {
        root_rows(&mut roots_table, m);
    }

    let mut modes: Vec<BundleMode> = (0..=config.max_j).map(BundleMode::function).collect();
    modes.extend((0..=config.max_j).map(BundleMode::one_form));
    for &l in &gap.tt_eigenvalues {
        modes.push(BundleMode::tt(l)?);
    }
    let mut tracks = Vec::new();
    let mut pert_table = Table::new("perturbation", &["mode", "t", "drift", "slope"]);
    let (mut min_abs, mut collisions, mut bad_slopes) = (f64::INFINITY, Vec::new(), Vec::new());
    let mut slopes = Vec::new();
    for m in &modes {
        let p = perturbed_roots(m, &config.t_values)?;
        min_abs = min_abs.min(p.min_abs_root);
        if p.collision {
            collisions.push(m.label());
        }
        match (p.drift_slope, m.kind) {
            (Some(s), _) => {
                slopes.push(s);
                if (s - 1.0).abs() > config.tol_slope {
                    bad_slopes.push((m.label(), s));
                }
            }
            (None, ModeKind::TransverseTraceless) => {}
            (None, _) => bad_slopes.push((m.label(), f64::NAN)),
        }
        for tp in &p.track {
            pert_table.push(vec![m.label(), cell(tp.t), cell(tp.drift), p.drift_slope.map(cell).unwrap_or_default()]);
        }
        tracks.push(p);
    }
    let mut mc = Check::failing("no-root-at-zero", min_abs > tol, format!("min |root| over t != 0: {min_abs:e}"));
    mc.value = Some(min_abs);
    mc.threshold = Some(tol);
    checks.push(mc);
    checks.push(Check::failing("no-collisions", collisions.is_empty(), format!("{collisions:?}")));
    let (lo, hi) = slopes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(*s), b.max(*s)));
    checks.push(Check::failing(
        "drift-slope",
        bad_slopes.is_empty() && !slopes.is_empty(),
        format!("slopes in [{lo:.4}, {hi:.4}], outside 1 +- {}: {bad_slopes:?}", config.tol_slope),
    ));

    let payload = json!({
        "named": named_payload,
        "decay_gap": {
            "max_j": gap.max_j,
            "tt_degree_cap": gap.tt_degree_cap,
            "tt_eigenvalues": gap.tt_eigenvalues,
            "gap_ok": gap.gap_ok,
            "violations": gap.violations,
            "largest_decaying_one_form_root": gap.largest_decaying_one_form_root,
            "modes": gap.modes,
            "coexact_informational": gap.coexact_informational,
        },
        "perturbation": {"t": config.t_values, "min_abs_root": min_abs, "tracks": tracks},
    });
    Ok(SuiteReport::new("indicial", checks, payload, vec![roots_table, pert_table]))
}
