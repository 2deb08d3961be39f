//! Verification suites over the s3cone library, with reproducible
//! configuration and machine-readable reports.

pub mod config;
pub mod diff;
pub mod error;
pub mod report;
pub mod suites;

pub use config::{RunConfig, Suite, CONFIG_ENV};
pub use diff::{diff_files, diff_values, Tolerances};
pub use error::{Result, VerifyError};
pub use report::{Check, Class, Status, SuiteReport, VerificationReport, SCHEMA};
pub use suites::run;
