use serde_json::{json, Map, Value};

use s3cone::s3_tensor_calculus::{compare_one_form_list, spectrum, Bundle, Constraint, SpectrumReport};
use s3cone::Quadrature;

use crate::config::{RunConfig, SpectrumTarget};
use crate::error::Result;
use crate::report::{cell, Check, SuiteReport, Table};

fn target_parts(t: SpectrumTarget) -> (Bundle, Constraint) {
    match t {
        SpectrumTarget::Function => (Bundle::Scalar, Constraint::None),
        SpectrumTarget::OneForm => (Bundle::OneForm, Constraint::None),
        SpectrumTarget::DivergenceFreeOneForm => (Bundle::OneForm, Constraint::DivergenceFree),
        SpectrumTarget::Sym => (Bundle::SymTwoTensor, Constraint::None),
        SpectrumTarget::Tt => (Bundle::SymTwoTensor, Constraint::TraceFreeDivergenceFree),
    }
}

fn key(t: SpectrumTarget) -> &'static str {
    match t {
        SpectrumTarget::Function => "function",
        SpectrumTarget::OneForm => "one-form",
        SpectrumTarget::DivergenceFreeOneForm => "divergence-free-one-form",
        SpectrumTarget::Sym => "sym",
        SpectrumTarget::Tt => "tt",
    }
}

/// {j(j+2)} with multiplicity (j+1)², j ≤ cap, matched pair by pair.
fn function_check(rep: &SpectrumReport, cap: usize, tol: f64) -> Check {
    let expected: Vec<(f64, usize)> = (0..=cap).map(|j| ((j * (j + 2)) as f64, (j + 1) * (j + 1))).collect();
    let err = if rep.pairs.len() == expected.len() && rep.pairs.iter().zip(&expected).all(|(a, b)| a.1 == b.1) {
        rep.pairs.iter().zip(&expected).map(|(a, b)| (a.0 - b.0).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let mut c = Check::below("function-eigenvalues", err, tol);
    c.detail = format!("computed {:?}, expected {:?}", rep.pairs, expected);
    c
}

fn tt_check(rep: &SpectrumReport, tol: f64) -> Check {
    let s = rep.smallest().unwrap_or(f64::NAN);
    let mut c = Check::below("tt-smallest-is-6", (s - 6.0).abs(), tol);
    c.detail = format!("smallest trace-free divergence-free eigenvalue {s}");
    c
}

pub fn spectra(config: &RunConfig) -> Result<SuiteReport> {
    let cap = config.spectrum_degree;
    let rule = Quadrature::new(2 * cap + 2);
    let targets = match config.spectrum_target {
        Some(t) => vec![t],
        None => vec![SpectrumTarget::Function, SpectrumTarget::Tt, SpectrumTarget::DivergenceFreeOneForm],
    };
    let mut checks = Vec::new();
    let mut payload = Map::new();
    let mut table = Table::new("spectra", &["spectrum", "eigenvalue", "multiplicity"]);
    for t in targets {
        let (b, c) = target_parts(t);
        let rep = spectrum(b, c, cap, &rule)?;
        for (v, m) in &rep.pairs {
            table.push(vec![key(t).into(), cell(*v), m.to_string()]);
        }
        match t {
            SpectrumTarget::Function => checks.push(function_check(&rep, cap, config.tol_spectrum)),
            SpectrumTarget::Tt => checks.push(tt_check(&rep, config.tol_spectrum)),
            SpectrumTarget::DivergenceFreeOneForm => {
                let cmp = compare_one_form_list(&rep, cap);
                let found = cmp.listed.iter().filter(|x| x.1).count();
                checks.push(Check::info(
                    "one-form-listed-values",
                    found == cmp.listed.len(),
                    format!("{found} of {} listed values (j+1)(j+3) in the computed spectrum; 2 present: {}", cmp.listed.len(), cmp.two_is_eigenvalue),
                ));
                payload.insert("one_form_comparison".into(), serde_json::to_value(&cmp)?);
            }
            _ => {}
        }
        checks.push(Check::info(format!("{}-projector-defect", key(t)), true, format!("{:e}", rep.projector_defect)).with_value(rep.projector_defect));
        payload.insert(key(t).into(), json!({
            "pairs": rep.pairs,
            "space_dimension": rep.space_dimension,
            "constrained_dimension": rep.constrained_dimension,
            "smallest": rep.smallest(),
        }));
    }
    payload.insert("degree_cap".into(), Value::from(cap));
    Ok(SuiteReport::new("spectra", checks, Value::Object(payload), vec![table]))
}
