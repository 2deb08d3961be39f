use serde_json::json;

use s3cone::cone_calculus::RadialProfile;
use s3cone::indicial_classifier::mode_norms;
use s3cone::s3_tensor_calculus::Bundle;
use s3cone::su2_frame::Polynomial;
use s3cone::{SeparatedTensor, TensorField};

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{cell, Check, SuiteReport, Table};

/// r^b times the constant TT field diag(1, -1, 0) (eigenvalue 6).
fn pure_mode(b: f64) -> SeparatedTensor {
    let z = Polynomial::zero;
    let c = |v: f64| Polynomial::constant(v);
    let tt = TensorField::from_components(Bundle::SymTwoTensor, vec![c(1.0), c(-1.0), z(), z(), z(), z()]).unwrap();
    SeparatedTensor::horizontal(RadialProfile::monomial(1.0, b), tt)
}

/// Annulus norms of pure modes: scaling identity and the three-annulus
/// growth/decay inequalities.
pub fn norms(config: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut out = Vec::new();
    let mut table = Table::new("norms", &["b", "annulus", "inner", "outer", "norm"]);
    for &b in &config.norm_exponents {
        let n = mode_norms(&pure_mode(b), config.norm_a, config.norm_l, config.beta_prime)?;
        checks.push(Check::below(format!("scaling b={b}"), n.scaling_rel_error, config.tol_scaling));
        let lb = config.norm_l.powf(config.beta_prime);
        if b > 0.0 {
            let ok = n.growth_hypothesis && n.growth_conclusion;
            checks.push(Check::failing(
                format!("growth b={b}"),
                ok,
                format!("ratios {:.6e}, {:.6e} >= L^beta' = {lb}", n.annuli[1] / n.annuli[0], n.annuli[2] / n.annuli[1]),
            ));
        } else if b < 0.0 {
            let ok = n.decay_hypothesis && n.decay_conclusion;
            checks.push(Check::failing(
                format!("decay b={b}"),
                ok,
                format!("ratios {:.6e}, {:.6e} <= L^-beta' = {}", n.annuli[1] / n.annuli[0], n.annuli[2] / n.annuli[1], 1.0 / lb),
            ));
        }
        checks.push(Check::failing(format!("three-annulus b={b}"), n.three_annulus_holds(), "both implications hold"));
        let mut lo = config.norm_a;
        for (k, v) in n.annuli.iter().enumerate() {
            table.push(vec![cell(b), k.to_string(), cell(lo), cell(lo * config.norm_l), cell(*v)]);
            lo *= config.norm_l;
        }
        out.push(json!({"b": b, "norms": n}));
    }
    Ok(SuiteReport::new("norms", checks, json!({"modes": out}), vec![table]))
}
