use serde_json::json;

use s3cone::cone_calculus::{compare_oracle, RadialProfile};
use s3cone::s3_tensor_calculus::Bundle;
use s3cone::su2_frame::Polynomial;
use s3cone::{SeparatedTensor, TensorField};

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{cell, Check, SuiteReport, Table};

fn p(a: usize) -> Polynomial<f64> {
    Polynomial::coordinate(a)
}

fn c(v: f64) -> Polynomial<f64> {
    Polynomial::constant(v)
}

fn r(b: f64) -> RadialProfile<f64> {
    RadialProfile::monomial(1.0, b)
}

/// Three tensors of each component type: constant and polynomial link
/// fields, growing and decaying profiles.
pub fn oracle_tensors() -> Vec<(String, SeparatedTensor)> {
    let z = Polynomial::zero;
    let tt = TensorField::from_components(Bundle::SymTwoTensor, vec![c(1.0), c(-1.0), z(), c(0.5), z(), z()]).unwrap();
    let sym1 = TensorField::from_components(Bundle::SymTwoTensor, vec![p(0), p(1), c(0.5), p(2), z(), p(3)]).unwrap();
    let sym2 = TensorField::from_components(Bundle::SymTwoTensor, vec![&p(1) * &p(2), z(), p(0), z(), &p(0) * &p(3), z()]).unwrap();
    let e1 = TensorField::one_form([c(1.0), z(), z()]);
    let tau = TensorField::one_form([p(0).scale(&2.0), p(3), p(2).scale(&-1.0)]);
    let tau2 = TensorField::one_form([&p(1) * &p(2), p(0), c(0.5)]);
    vec![
        ("H(r^-1, tt)".into(), SeparatedTensor::horizontal(r(-1.0), tt)),
        ("H(r^2, linear)".into(), SeparatedTensor::horizontal(r(2.0), sym1)),
        ("H(r^-2, quadratic)".into(), SeparatedTensor::horizontal(r(-2.0), sym2)),
        ("C(r^-1, e1)".into(), SeparatedTensor::cross(r(-1.0), e1)),
        ("C(r, tau)".into(), SeparatedTensor::cross(r(1.0), tau)),
        ("C(r^-1.5, quadratic)".into(), SeparatedTensor::cross(r(-1.5), tau2)),
        ("V(1, 1)".into(), SeparatedTensor::vertical(r(0.0), TensorField::scalar(c(1.0)))),
        ("V(r^-1, x0)".into(), SeparatedTensor::vertical(r(-1.0), TensorField::scalar(p(0)))),
        ("V(r^2, x1 x2)".into(), SeparatedTensor::vertical(r(2.0), TensorField::scalar(&p(1) * &p(2)))),
    ]
}

/// Separated bilaplacian against the Cartesian finite-difference
/// biharmonic, plus the composition identity on the formulas.
pub fn cone_oracle(config: &RunConfig) -> Result<SuiteReport> {
    let expect = config.oracle_order as f64;
    let mut checks = Vec::new();
    let mut reports = Vec::new();
    let mut compositions = Vec::new();
    let mut table = Table::new("cone_oracle", &["tensor", "grid_n", "h", "max_rel_error", "slope"]);
    for (label, s) in oracle_tensors() {
        let bl = s.bilaplacian();
        let comp = bl.minus(&s.laplacian().laplacian()).max_abs_coefficient() / bl.max_abs_coefficient().max(1.0);
        let mut cc = Check::below(format!("composition {label}"), comp, config.tol_composition);
        cc.detail = format!("|bilaplacian - laplacian o laplacian| / |bilaplacian| = {comp:e}");
        checks.push(cc);
        compositions.push(json!({"tensor": label, "relative_defect": comp}));

        let rep = compare_oracle(&label, &s, &config.oracle_grids, config.oracle_inner, config.oracle_outer, config.oracle_order)?;
        let slope = rep.slope.unwrap_or(f64::NAN);
        let mut sc = Check::failing(
            format!("slope {label}"),
            (slope - expect).abs() <= config.tol_slope,
            format!(
                "slope {slope:.4} (expected {expect} +- {}), errors {:?}",
                config.tol_slope,
                rep.rows.iter().map(|r| r.max_rel_error).collect::<Vec<_>>()
            ),
        );
        sc.value = Some(slope);
        checks.push(sc);
        // the coarsest grid can be pre-asymptotic; the last pair shows the rate
        let n = rep.rows.len();
        let (a, b) = (&rep.rows[n - 2], &rep.rows[n - 1]);
        let pair = (a.max_rel_error / b.max_rel_error).ln() / (a.h_grid / b.h_grid).ln();
        checks.push(
            Check::info(format!("finest-pair slope {label}"), (pair - expect).abs() <= config.tol_slope, format!("{pair:.4} between n = {} and {}", a.grid_n, b.grid_n))
                .with_value(pair),
        );
        for row in &rep.rows {
            table.push(vec![label.clone(), row.grid_n.to_string(), cell(row.h_grid), cell(row.max_rel_error), cell(slope)]);
        }
        reports.push(rep);
    }
    let payload = json!({
        "grids": config.oracle_grids,
        "order": config.oracle_order,
        "annulus": [config.oracle_inner, config.oracle_outer],
        "convergence": reports,
        "composition": compositions,
    });
    Ok(SuiteReport::new("cone-oracle", checks, payload, vec![table]))
}
