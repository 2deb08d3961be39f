mod identities;
mod indicial;
mod linearization;
mod norms;
mod oracle;
mod spectra;

pub use identities::identities;
pub use indicial::indicial;
pub use linearization::{flat_metric, linearization};
pub use norms::norms;
pub use oracle::{cone_oracle, oracle_tensors};
pub use spectra::spectra;

use crate::config::{RunConfig, Suite};
use crate::error::Result;
use crate::report::{SuiteReport, VerificationReport};

pub fn run_suite(suite: Suite, config: &RunConfig) -> SuiteReport {
    let out = match suite {
        Suite::Identities => identities(config),
        Suite::Spectra => spectra(config),
        Suite::ConeOracle => cone_oracle(config),
        Suite::Linearization => linearization(config),
        Suite::Indicial => indicial(config),
        Suite::Norms => norms(config),
    };
    out.unwrap_or_else(|e| SuiteReport::errored(suite.name(), &e))
}

/// Runs the selected suites in the fixed order; `progress` sees each
/// finished suite.
pub fn run(config: &RunConfig, mut progress: impl FnMut(&SuiteReport, std::time::Duration)) -> Result<VerificationReport> {
    config.validate()?;
    let mut out = Vec::new();
    for s in config.ordered_suites() {
        let t0 = std::time::Instant::now();
        let r = run_suite(s, config);
        progress(&r, t0.elapsed());
        out.push(r);
    }
    VerificationReport::new(config, out)
}
