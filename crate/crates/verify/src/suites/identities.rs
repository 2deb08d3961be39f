use serde_json::json;

use s3cone::s3_tensor_calculus::verify_appendix_identities;
use s3cone::Rational;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{cell, Check, SuiteReport, Table};

/// The eight Laplacian commutation identities, evaluated in exact
/// arithmetic on the monomial basis.
pub fn identities(config: &RunConfig) -> Result<SuiteReport> {
    let rep = verify_appendix_identities::<Rational>(config.identity_degree);
    let mut checks = Vec::new();
    let mut table = Table::new("identities", &["id", "statement", "basis_size", "sup_residual", "sup_lhs", "failures"]);
    for e in &rep.entries {
        let mut c = Check::below(format!("identity-{}", e.id), e.sup_residual, config.tol_identity);
        c.detail = format!("{}: sup residual {:e} over {} fields, {} nonzero", e.statement, e.sup_residual, e.basis_size, e.failures);
        checks.push(c);
        table.push(vec![
            e.id.to_string(),
            e.statement.into(),
            e.basis_size.to_string(),
            cell(e.sup_residual),
            cell(e.sup_lhs),
            e.failures.to_string(),
        ]);
    }
    let c = &rep.lie_laplacian_corrected;
    let mut corrected = Check::below("identity-6-with-coefficient-4", c.sup_residual, config.tol_identity).informational();
    corrected.detail = format!("{}: sup residual {:e}", c.statement, c.sup_residual);
    checks.push(corrected);
    let payload = json!({
        "degree_cap": rep.degree_cap,
        "entries": rep.entries,
        "lie_laplacian_corrected": rep.lie_laplacian_corrected,
    });
    Ok(SuiteReport::new("identities", checks, payload, vec![table]))
}
